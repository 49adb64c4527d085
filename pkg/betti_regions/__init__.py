"""betti_regions"""

__version__ = "2026.10.18"
