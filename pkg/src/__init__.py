"""
varbvp: Variational solver and verifier for discrete 2n-order Dirichlet boundary value problems.
"""

__version__ = "0.1.0"
