"""Arithmetic contexts so the core formulas run in double or multi precision.

Every solver-facing function in this package does its complex arithmetic
through one of these contexts.  ``FLOAT`` uses the builtin ``complex`` type;
``mp_context(dps)`` returns an mpmath-backed context used by the residual
checker, where stencil differencing would otherwise be limited by double
roundoff.
"""

import cmath

import mpmath


class MathContext:
    def __init__(self, convert, exp, log, arg, name, real=float):
        self.convert = convert  # python complex -> context scalar
        self.exp = exp
        self.log = log
        self.arg = arg
        self.name = name
        self.real = real  # python float -> context real scalar
        self.i = convert(1j)

    def __repr__(self):
        return f"MathContext({self.name})"


FLOAT = MathContext(complex, cmath.exp, cmath.log, cmath.phase, "float64")


def mp_context(dps=40):
    ctx = mpmath.mp.clone()
    ctx.dps = dps
    return MathContext(ctx.mpc, ctx.exp, ctx.log, ctx.arg,
                       f"mpmath-dps{dps}", real=ctx.mpf)


def real_of(x):
    """Real part as a python float, for either scalar flavor."""
    return float(x.real)
