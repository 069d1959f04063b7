"""
Tests for the numerical library (src/).
"""
