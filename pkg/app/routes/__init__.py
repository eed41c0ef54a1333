"""Routers mounted by the API: factorization and tensor analysis."""
