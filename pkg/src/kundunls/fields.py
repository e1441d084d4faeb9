"""Sampled field surfaces and the (optionally parallel) grid evaluator.

The grid is stored t-major (row i = time ts[i]) with separate q and u
matrices plus a per-point flag; evaluation order and output are independent
of the worker count, so downstream golden files stay byte-stable.
"""

import cmath
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy

from . import double_pole, simple_pole
from .spectrum import OrbitTable, PoleOrder, SpectralConfig


def config_digest(cfg: SpectralConfig) -> str:
    """Stable sha256 over the canonical JSON form of the spectral data."""
    payload = {
        "q_minus": [cfg.q_minus.real, cfg.q_minus.imag],
        "epsilon": cfg.epsilon,
        "gamma0": cfg.gamma0,
        "pole_order": cfg.pole_order.value,
        "eigenvalues": [
            {
                "z": [e.z.real, e.z.imag],
                "A_plus": [e.A_plus.real, e.A_plus.imag],
                "B_plus": [e.B_plus.real, e.B_plus.imag],
            }
            for e in cfg.eigenvalues
        ],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class FieldGrid:
    """Field values on the cartesian product ts x xs (t-major)."""

    xs: list
    ts: list
    q_values: list  # nested lists, len(ts) rows of len(xs) complex values
    u_values: list
    flags: list  # same shape, strings: ok | near_singular | singular
    config_digest: str = ""

    def __post_init__(self):
        nt, nx = len(self.ts), len(self.xs)
        for mat in (self.q_values, self.u_values, self.flags):
            if len(mat) != nt or any(len(row) != nx for row in mat):
                raise ValueError("grid matrix shape does not match axes")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("xs must be strictly increasing")
        if any(b <= a for a, b in zip(self.ts, self.ts[1:])):
            raise ValueError("ts must be strictly increasing")

    def to_dict(self) -> dict:
        return {
            "xs": list(self.xs),
            "ts": list(self.ts),
            "q_values": [[[v.real, v.imag] for v in row] for row in self.q_values],
            "u_values": [[[v.real, v.imag] for v in row] for row in self.u_values],
            "flags": [list(row) for row in self.flags],
            "config_digest": self.config_digest,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FieldGrid":
        return cls(
            xs=list(d["xs"]),
            ts=list(d["ts"]),
            q_values=[[complex(re, im) for re, im in row] for row in d["q_values"]],
            u_values=[[complex(re, im) for re, im in row] for row in d["u_values"]],
            flags=[list(row) for row in d["flags"]],
            config_digest=d.get("config_digest", ""),
        )


def _sampler_for(orbit: OrbitTable):
    if orbit.cfg.pole_order is PoleOrder.SIMPLE:
        return simple_pole.point_sample
    return double_pole.point_sample


def _eval_row(args):
    orbit, t, xs = args
    sample = _sampler_for(orbit)
    return [sample(orbit, x, t) for x in xs]


def evaluate_grid(cfg: SpectralConfig, orbit: OrbitTable, xs, ts,
                  threads: int = 1) -> FieldGrid:
    """Sample u and q over ts x xs; per-point failures become flags, not raises."""
    xs = [float(x) for x in xs]
    ts = [float(t) for t in ts]
    jobs = [(orbit, t, xs) for t in ts]
    if threads > 1 and len(ts) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_eval_row, jobs, chunksize=4))
    else:
        rows = [_eval_row(j) for j in jobs]

    phase = cmath.exp(-1j * cfg.gamma0) / cfg.epsilon
    q_values, u_values, flags = [], [], []
    for row in rows:
        q_values.append([q for q, _, _ in row])
        u_values.append([q * phase for q, _, _ in row])
        flags.append([flag for _, flag, _ in row])
    return FieldGrid(xs, ts, q_values, u_values, flags, config_digest(cfg))


def linspace(a: float, b: float, n: int):
    return [float(v) for v in numpy.linspace(a, b, n)]
