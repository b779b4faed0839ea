"""Graph similarity scoring."""
