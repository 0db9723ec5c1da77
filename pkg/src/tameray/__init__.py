"""Ray class groups of imaginary quadratic fields and tame p-extension structure."""

__version__ = "0.1.0"
