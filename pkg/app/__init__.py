"""Coseparable nonnegative tensor factorization under the t-product."""
