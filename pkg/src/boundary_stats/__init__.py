"""Monte Carlo statistics of SLE traces near boundaries."""
