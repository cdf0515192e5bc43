"""Integral means spectra, the universal bound and dimension bounds."""
