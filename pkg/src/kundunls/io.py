"""Config ingestion, grid serialization, and figure emission.

The CSV and PGM writers are deliberately boring and bit-deterministic:
numbers go out in shortest round-trip decimal form and images as binary
NetPBM, so golden-file tests can compare raw bytes.
"""

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigParseError, ConfigValidationError, Diagnostic
from .fields import FieldGrid
from .spectrum import (EigenEntry, PoleOrder, SpectralConfig, validate)

SCHEMA_VERSION = 1

CSV_HEADER = "x,t,re_u,im_u,abs_u,re_q,im_q,flag"


@dataclass
class RunConfig:
    """One deserialized run: spectral data plus grid and verification plan."""

    cfg: SpectralConfig
    grid: dict
    name: str = ""
    verification: dict = field(default_factory=dict)
    uncertain: bool = False
    note: str = ""


def _as_complex(value, where: str) -> complex:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) for v in value)):
        raise ConfigValidationError([Diagnostic(
            "BadComplex", f"{where} must be a [re, im] pair, got {value!r}")])
    return complex(value[0], value[1])


def preset_dir():
    return resources.files("kundunls").joinpath("presets")


def preset_names():
    return sorted(p.name[:-5] for p in preset_dir().iterdir()
                  if p.name.endswith(".json"))


def resolve_config_path(spec: str):
    """A filesystem path, or a bundled preset name like 'fig2a'."""
    p = Path(spec)
    if p.exists():
        return p
    candidate = preset_dir().joinpath(spec if spec.endswith(".json")
                                      else spec + ".json")
    if candidate.is_file():
        return candidate
    raise FileNotFoundError(f"no such config file or preset: {spec}")


def load_config(path) -> RunConfig:
    path = resolve_config_path(str(path))
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(str(exc), line=exc.lineno, column=exc.colno) from exc

    problems = []
    if raw.get("schema") != SCHEMA_VERSION:
        problems.append(Diagnostic(
            "SchemaVersion",
            f"expected \"schema\": {SCHEMA_VERSION}, got {raw.get('schema')!r}"))
    order_name = raw.get("pole_order")
    try:
        order = PoleOrder(order_name)
    except ValueError:
        problems.append(Diagnostic(
            "PoleOrder", f"pole_order must be simple or double, got {order_name!r}"))
        order = PoleOrder.SIMPLE
    if problems:
        raise ConfigValidationError(problems)

    eigenvalues = []
    for i, entry in enumerate(raw.get("eigenvalues", [])):
        eigenvalues.append(EigenEntry(
            z=_as_complex(entry["z"], f"eigenvalues[{i}].z"),
            A_plus=_as_complex(entry["A_plus"], f"eigenvalues[{i}].A_plus"),
            B_plus=_as_complex(entry.get("B_plus", [0, 0]),
                               f"eigenvalues[{i}].B_plus"),
        ))
    cfg = SpectralConfig(
        q_minus=_as_complex(raw["q_minus"], "q_minus"),
        epsilon=float(raw["epsilon"]),
        gamma0=float(raw.get("gamma0", 0.0)),
        pole_order=order,
        eigenvalues=tuple(eigenvalues),
    )
    diags = [d for d in validate(cfg) if not d.ok]
    if diags:
        raise ConfigValidationError(diags)

    grid = raw.get("grid", {})
    for key in ("x_min", "x_max", "nx", "t_min", "t_max", "nt"):
        if key not in grid:
            raise ConfigValidationError([Diagnostic(
                "GridSpec", f"grid is missing {key!r}")])
    return RunConfig(
        cfg=cfg,
        grid=grid,
        name=raw.get("name", path.stem),
        verification=raw.get("verification", {}),
        uncertain=bool(raw.get("uncertain", False)),
        note=raw.get("note", ""),
    )


def _fmt(v: float) -> str:
    """Shortest round-trip decimal; integral values lose the trailing .0."""
    if v != v:
        return "nan"
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def write_grid_csv(grid: FieldGrid, path):
    lines = [CSV_HEADER]
    for i, t in enumerate(grid.ts):
        for j, x in enumerate(grid.xs):
            u = grid.u_values[i][j]
            q = grid.q_values[i][j]
            lines.append(",".join((
                _fmt(x), _fmt(t),
                _fmt(u.real), _fmt(u.imag), _fmt(abs(u)),
                _fmt(q.real), _fmt(q.imag),
                grid.flags[i][j],
            )))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_grid_json(grid: FieldGrid, path):
    Path(path).write_text(json.dumps(grid.to_dict()) + "\n", encoding="utf-8")


def read_grid_json(path) -> FieldGrid:
    return FieldGrid.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def render_pgm(grid: FieldGrid, path, channel: str = "abs_u", clamp=None):
    """Binary 8-bit NetPBM heatmap of one channel; top row is t_max."""
    if channel == "abs_u":
        pick = abs
    elif channel == "re_u":
        pick = lambda v: v.real
    else:
        raise ValueError(f"unknown channel {channel!r}")
    rows = [[pick(v) for v in row] for row in grid.u_values]
    finite = [v for row in rows for v in row if math.isfinite(v)]
    if clamp is not None:
        lo, hi = clamp
    elif finite:
        lo, hi = min(finite), max(finite)
    else:
        lo = hi = 0.0
    nx, nt = len(grid.xs), len(grid.ts)
    out = bytearray(f"P5\n{nx} {nt}\n255\n".encode("ascii"))
    for row in reversed(rows):  # last t first, so the image reads top-down in t
        for v in row:
            if hi == lo or not math.isfinite(v):
                pix = 128
            else:
                pix = round(255 * (v - lo) / (hi - lo))
            out.append(min(255, max(0, pix)))
    Path(path).write_bytes(bytes(out))


GNUPLOT_TEMPLATE = """\
# Heatmap of |u| from {csv}
set datafile separator ','
set view map
set xlabel 'x'
set ylabel 't'
set title '{title}'
splot '{csv}' using 1:2:5 every ::1 with points pt 5 ps 0.4 palette notitle
pause -1
"""


def emit_gnuplot(csv_path, path, title: str = "|u|"):
    Path(path).write_text(
        GNUPLOT_TEMPLATE.format(csv=csv_path, title=title), encoding="utf-8")
