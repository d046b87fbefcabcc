"""Sweep execution: local process pool and Celery workers."""
