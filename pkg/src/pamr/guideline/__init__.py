"""Annotation guideline support: the valency lexicon and the rule validator."""
