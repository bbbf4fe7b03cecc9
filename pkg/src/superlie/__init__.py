"""Exact construction and mechanical verification of the simple linearly
compact Lie superalgebra families, their quadratic-form twists, and the
associated finite Lie conformal superalgebras."""

__version__ = "0.1.0"
