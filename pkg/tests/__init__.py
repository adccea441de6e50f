"""Test suite for moead_ps."""
