"""nama: the reduced non-archimedean Monge-Ampere ODE and its generalized Calabi ansatz."""

__version__ = "0.3.0"
