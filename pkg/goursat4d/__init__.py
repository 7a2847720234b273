"""Goursat problem solver for the sixth-order hyperbolic equation D1 D2 D3^2 D4^2 u + lower terms = f with rough coefficients"""
__version__ = "1.0.0"
