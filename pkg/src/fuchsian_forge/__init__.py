"""Exact construction of genus-2 hyperbolic surfaces with prescribed trace
field and quaternion algebra, with verifiable certificates."""

__version__ = "0.1.0"
