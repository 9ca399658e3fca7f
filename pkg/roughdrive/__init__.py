"""
roughdrive - weak solutions of dY = g(Y) dX driven by a very rough fBm,
built from the fractional stochastic heat equation.
"""
__version__ = "1.0.0"
