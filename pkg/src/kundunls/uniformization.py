"""Spectral-plane geometry for the scattering problem with nonzero background.

The single complex coordinate z replaces the two-sheeted surface of the
spectral parameter k.  All maps here are rational in z, so they evaluate
unchanged for builtin complex or mpmath scalars.
"""

import enum
from dataclasses import dataclass


class Region(enum.Enum):
    DPLUS = "D+"
    DMINUS = "D-"
    CONTOUR = "contour"


@dataclass(frozen=True)
class SpectralPoint:
    """A point z in the spectral plane together with the background amplitude Q0."""

    z: complex
    Q0: float

    def __post_init__(self):
        if self.z == 0:
            raise ValueError("z = 0 is a pole of the spectral map")
        if not self.Q0 > 0:
            raise ValueError("Q0 must be positive")


def k_of_z(p: SpectralPoint):
    """k(z) = (z - Q0^2/z)/2."""
    return (p.z - p.Q0 ** 2 / p.z) / 2


def lambda_of_z(p: SpectralPoint):
    """lambda(z) = (z + Q0^2/z)/2, the branch-free square root of k^2 + Q0^2."""
    return (p.z + p.Q0 ** 2 / p.z) / 2


def theta(x, t, p: SpectralPoint):
    """Phase theta(x, t, z) = lambda(z) * (x - 2 k(z) t)."""
    return lambda_of_z(p) * (x - 2 * k_of_z(p) * t)


def theta_prime(x, t, p: SpectralPoint):
    """Analytic d(theta)/dz at fixed (x, t).

    lambda'(z) = (1 - Q0^2/z^2)/2 and k'(z) = (1 + Q0^2/z^2)/2.
    """
    z = p.z
    q0sq = p.Q0 ** 2
    lam_p = (1 - q0sq / z ** 2) / 2
    k_p = (1 + q0sq / z ** 2) / 2
    return lam_p * (x - 2 * k_of_z(p) * t) - 2 * lambda_of_z(p) * k_p * t


def region_of(p: SpectralPoint) -> Region:
    """Classify z by the exact sign of (|z|^2 - Q0^2) * Im z."""
    s = (abs(p.z) ** 2 - p.Q0 ** 2) * float(p.z.imag)
    if s > 0:
        return Region.DPLUS
    if s < 0:
        return Region.DMINUS
    return Region.CONTOUR
