"""
Tests for the varbvp application (app/).
"""





