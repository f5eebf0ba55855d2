"""HTTP service front end (FastAPI)."""
