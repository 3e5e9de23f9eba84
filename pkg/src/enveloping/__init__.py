"""Exact-arithmetic universal enveloping of finite-dimensional L-infinity
algebras via homological perturbation over the cobar construction."""

__version__ = "0.1.0"
