"""Support varieties, complexity and Carlson modules for finite-dimensional Hopf algebras."""

__version__ = "0.1.0"
