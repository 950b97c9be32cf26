"""Static CK metrics and entropy-based design degradation scoring."""

__version__ = "0.1.0"
