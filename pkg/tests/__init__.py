# Library Tests Package
