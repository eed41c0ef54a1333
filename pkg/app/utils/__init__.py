"""File formats and image ingestion."""
