"""Rational point sets on expanding horocycles in (products of) the torus and
the modular surface: exact generators, observables with known Haar
expectations, and the numerical experiments tying them together."""

__version__ = "0.1.0"

from . import arith, harness, observables, points, sl2, stats  # noqa: F401
