"""Numerical services: t-product algebra, t-SVD, sampling, selection, factor recovery and experiments."""
