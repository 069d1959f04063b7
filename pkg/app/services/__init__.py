"""
Service layer modules for the varbvp application.
"""
