"""Numerical checks of off-diagonal kernel profiles at periodic points of a
quantized Hamiltonian flow, with a brute-force projective-line model."""

__version__ = "0.1.0"
