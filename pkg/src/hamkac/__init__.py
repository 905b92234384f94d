"""Kac modules for the Hamiltonian Lie superalgebra H(2,1;t) over F_p."""

__version__ = "0.1.0"
