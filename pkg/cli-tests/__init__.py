# CLI Tests Package
