"""Logging, settings, formatting, seeding and thread-pool helpers."""
