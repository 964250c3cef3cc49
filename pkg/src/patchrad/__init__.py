"""patchrad: near-field radiation operators for MIMO arrays.

Point-source (centroid) and patch-averaged Gauss-Legendre radiation
operators over meshed transmit surfaces, a continuous-feeding model,
and self-contained fine-quadrature field oracles for validation.
"""

__version__ = "0.1.0"
