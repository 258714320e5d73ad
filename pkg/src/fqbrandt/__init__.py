"""Exact Brandt matrices for definite quaternion algebras over F_q(t)."""

__version__ = "0.1.0"
