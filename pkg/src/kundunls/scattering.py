"""Trace formulae and analytic-identity audits for the scattering data.

These checks never touch the field reconstruction: they work purely on the
orbit table, so they can catch a corrupted table independently of whether
the solvers happen to produce something plausible.
"""

import cmath
import math

from .errors import Diagnostic, EvaluationAtPole
from .spectrum import SIGN_CONVENTIONS, OrbitTable, PoleOrder

_POLE_TOL = 1e-13


def _trace_factors(orbit: OrbitTable, z: complex):
    """(numerator root, denominator root) pairs of the reflectionless product."""
    q0sq = orbit.Q0 ** 2
    pairs = []
    for zn in orbit.canonical_z:
        pairs.append((z - zn, z - zn.conjugate()))
        pairs.append((z + q0sq / zn.conjugate(), z + q0sq / zn))
    return pairs


def _order_exponent(orbit: OrbitTable) -> int:
    return 1 if orbit.cfg.pole_order is PoleOrder.SIMPLE else 2


def trace_s11(orbit: OrbitTable, z: complex, order: PoleOrder | None = None) -> complex:
    """s11(z) as the finite product over the discrete spectrum (rho = 0)."""
    m = _order_exponent(orbit) if order is None else (1 if order is PoleOrder.SIMPLE else 2)
    out = 1 + 0j
    for num, den in _trace_factors(orbit, z):
        if abs(den) < _POLE_TOL * (1 + abs(z)):
            raise EvaluationAtPole(f"z = {z} is a pole of s11")
        out *= (num / den) ** m
    return out


def trace_s22(orbit: OrbitTable, z: complex, order: PoleOrder | None = None) -> complex:
    """s22(z) = 1/s11(z), evaluated as its own product so the poles swap."""
    m = _order_exponent(orbit) if order is None else (1 if order is PoleOrder.SIMPLE else 2)
    out = 1 + 0j
    for num, den in _trace_factors(orbit, z):
        if abs(num) < _POLE_TOL * (1 + abs(z)):
            raise EvaluationAtPole(f"z = {z} is a pole of s22")
        out *= (den / num) ** m
    return out


def zero_order_estimate(orbit: OrbitTable, zn: complex,
                        h1: float = 1e-4, h2: float = 1e-5) -> float:
    """Order of the zero of s11 at zn from the two-scale log-log slope.

    (log|s11(zn(1+h1))| - log|s11(zn(1+h2))|) / (log h1 - log h2) cancels the
    constant prefactor that a single-scale ratio would leave behind.
    """
    f1 = abs(trace_s11(orbit, zn * (1 + h1)))
    f2 = abs(trace_s11(orbit, zn * (1 + h2)))
    return (math.log(f1) - math.log(f2)) / (math.log(h1) - math.log(h2))


def check_theta_condition(orbit: OrbitTable, tol: float = 1e-12) -> Diagnostic:
    """arg(q_plus/q_minus) must equal -m * sum(arg z_n) mod 2 pi (m = 4 or 8)."""
    m = 4 if orbit.cfg.pole_order is PoleOrder.SIMPLE else 8
    expected = -m * sum(cmath.phase(zn) for zn in orbit.canonical_z)
    actual = cmath.phase(orbit.q_plus / orbit.cfg.q_minus)
    resid = (actual - expected + math.pi) % (2 * math.pi) - math.pi
    # |q_plus| must also carry over unchanged
    mod_err = abs(abs(orbit.q_plus) - abs(orbit.cfg.q_minus))
    ok = abs(resid) <= tol and mod_err <= tol
    return Diagnostic(
        "ThetaCondition",
        f"phase residual {resid:.3e}, modulus mismatch {mod_err:.3e}",
        ok=ok,
        value=abs(resid) + mod_err,
    )


def _rel_err(lhs, rhs) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def check_symmetries(orbit: OrbitTable, order: PoleOrder | None = None,
                     tol: float = 1e-12):
    """Re-derive every chained norming-constant equality and compare.

    Each relation is evaluated from the canonical eigenvalues and A_plus
    alone, so a corrupted entry anywhere else in the table shows up as an
    O(1) relative error in exactly the relation it violates.
    """
    if order is None:
        order = orbit.cfg.pole_order
    sym_sign, _ = SIGN_CONVENTIONS[orbit.sign_convention]
    qm = orbit.cfg.q_minus
    q0sq = orbit.Q0 ** 2
    n_eigs = orbit.N
    out = []

    def add(code, err):
        out.append(Diagnostic(code, f"max relative error {err:.3e}",
                              ok=err <= tol, value=err))

    err = max(
        (_rel_err(orbit.xi_hat[j], -q0sq / orbit.xi[j]) for j in range(2 * n_eigs)),
        default=0.0,
    )
    add("MirrorPoints", err)

    e1 = e2 = e3 = 0.0
    for n in range(n_eigs):
        z = orbit.canonical_z[n]
        a = orbit.A_plus_xi[n]
        if order is PoleOrder.SIMPLE:
            ratio = qm * qm / (z * z)
        else:
            ratio = q0sq * q0sq * qm / (z ** 4 * qm.conjugate())
        e1 = max(e1, _rel_err(orbit.A_minus_xihat[n], sym_sign * ratio * a))
        e2 = max(e2, _rel_err(orbit.A_minus_xihat[n_eigs + n], -a.conjugate()))
        e3 = max(e3, _rel_err(orbit.A_plus_xi[n_eigs + n],
                              -sym_sign * (ratio * a).conjugate()))
    add("NormingChainFirst", e1)
    add("NormingChainConjugate", e2)
    add("NormingChainExtended", e3)

    if order is PoleOrder.DOUBLE:
        b1 = b2 = b3 = 0.0
        for n in range(n_eigs):
            z = orbit.canonical_z[n]
            b = orbit.B_plus_xi[n]
            bshift = (z * z / q0sq) * (b - 2 / z)
            b1 = max(b1, _rel_err(orbit.B_minus_xihat[n], bshift))
            b2 = max(b2, _rel_err(orbit.B_minus_xihat[n_eigs + n], b.conjugate()))
            b3 = max(b3, _rel_err(orbit.B_plus_xi[n_eigs + n], bshift.conjugate()))
        add("DerivativeChainShift", b1)
        add("DerivativeChainConjugate", b2)
        add("DerivativeChainExtended", b3)

    return out
