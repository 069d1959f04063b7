"""
Test suite for FX Open-Range Lab project.
"""





