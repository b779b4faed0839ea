"""Corpus ingestion, statistics and inter-annotator agreement."""
