"""Symplectic linear algebra and one-mode Gaussian channels."""
