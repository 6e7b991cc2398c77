"""Core modules for meshflow."""
