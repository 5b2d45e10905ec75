"""Cell-zeta values: polygon and cell-form calculus on M0,n."""
__version__ = "0.1.0"
