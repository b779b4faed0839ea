"""AMR graph model and PENMAN notation."""
