"""Loewner evolutions: driving functions, slit maps and SLE traces."""
