"""Exact certificates and numerical checks for Clifford-Wolf homogeneous
left-invariant Randers metrics on compact simple Lie groups."""

__version__ = "0.1.0"
