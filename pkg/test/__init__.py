"""Unit tests for meshflow."""
