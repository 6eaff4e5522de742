# Sum-capacity bounds for the two-user Gaussian interference channel
