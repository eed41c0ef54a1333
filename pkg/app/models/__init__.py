"""Pydantic models used for results and API responses."""
