"""Spin geometry kernel: Clifford algebras, spinor-valued forms, Killing
equations on framed charts, and the metric cone correspondence."""

__version__ = "0.1.0"
