"""Dyadic-square sieves, good sets, Holder checks and triangle-punctured disks."""
