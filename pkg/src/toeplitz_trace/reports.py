"""Report rows, CSV/JSON writers and config validation for the command line."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1

CSV_FIELDS = [
    "experiment",
    "inputs",
    "measured_re",
    "measured_im",
    "reference_re",
    "reference_im",
    "deviation",
    "tolerance",
    "passed",
]


def fmt(x) -> str:
    """Float at 17 significant digits; other values via ``str``."""
    if isinstance(x, bool) or x is None or isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


@dataclass
class ReportRow:
    """One self-describing check.

    ``passed`` is derived: ``deviation <= tolerance``, or ``<`` when
    ``strict``.  A non-finite deviation never passes.
    """

    experiment: str
    inputs: dict
    measured: complex
    reference: complex | None
    deviation: float
    tolerance: float
    wall_time: float = 0.0
    strict: bool = False
    passed: bool = field(init=False)

    def __post_init__(self):
        d, t = float(self.deviation), float(self.tolerance)
        ok = d < t if self.strict else d <= t
        self.passed = bool(math.isfinite(d) and ok)

    def as_csv(self) -> dict:
        m = complex(self.measured)
        r = complex(self.reference) if self.reference is not None else complex("nan")
        return {
            "experiment": self.experiment,
            "inputs": json.dumps(self.inputs, sort_keys=True, default=fmt),
            "measured_re": fmt(m.real),
            "measured_im": fmt(m.imag),
            "reference_re": fmt(r.real),
            "reference_im": fmt(r.imag),
            "deviation": fmt(self.deviation),
            "tolerance": fmt(self.tolerance),
            "passed": str(self.passed).lower(),
        }


def write_csv(rows, path: Path) -> None:
    """Rows sorted by experiment id; wall times are left to the summary."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = sorted(rows, key=lambda r: r.experiment)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r.as_csv())


def summary(command: str, rows, extra: dict | None = None) -> dict:
    rows = sorted(rows, key=lambda r: r.experiment)
    out = {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "passed": all(r.passed for r in rows),
        "n_rows": len(rows),
        "n_failed": sum(not r.passed for r in rows),
        "failed": [r.experiment for r in rows if not r.passed],
        "wall_time": {r.experiment: r.wall_time for r in rows},
    }
    if extra:
        out.update(extra)
    return out


def write_json(obj, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=fmt) + "\n")


def merge_summaries(paths) -> dict:
    """Merge ``*.summary.json`` files into one acceptance document."""
    commands = {}
    for p in sorted(Path(x) for x in paths):
        data = json.loads(p.read_text())
        commands[data["command"]] = data
    return {
        "schema_version": SCHEMA_VERSION,
        "passed": bool(commands) and all(c["passed"] for c in commands.values()),
        "commands": commands,
    }


class ConfigError(ValueError):
    pass


def load_config(path, defaults: dict, command: str) -> dict:
    """Read a JSON config and overlay it on ``defaults``.

    The file may hold the keys of one command directly or a mapping
    ``{command: {...}}``; ``version`` must equal :data:`SCHEMA_VERSION`.
    Unknown keys are errors.
    """
    cfg = dict(defaults)
    if path is None:
        return cfg
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    version = data.pop("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{path}: field 'version': expected {SCHEMA_VERSION}, got {version!r}")
    if command in data and isinstance(data[command], dict):
        data = data[command]
    for key, value in data.items():
        if key not in defaults:
            raise ConfigError(f"{path}: field {key!r}: unknown key for '{command}'")
        cfg[key] = value
    return cfg


def validate_config(cfg: dict) -> None:
    """Tolerances positive, lambda grids strictly increasing."""
    for key, value in cfg.items():
        if key.startswith("tol") and not (isinstance(value, (int, float)) and value > 0):
            raise ConfigError(f"field {key!r}: tolerance must be a positive number")
        if key.startswith("lambda") and isinstance(value, list):
            if any(not (b > a) for a, b in zip(value, value[1:])):
                raise ConfigError(f"field {key!r}: grid must be strictly increasing")
            if any(not x > 0 for x in value):
                raise ConfigError(f"field {key!r}: values must be positive")


def parse_lambda_grid(spec: str):
    """``a:b:n`` -> ``n`` geometrically spaced values from ``a`` to ``b``."""
    try:
        a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError as exc:
        raise ConfigError(f"lambda grid {spec!r} is not of the form a:b:n") from exc
    if n < 1 or a <= 0 or (n > 1 and not b > a):
        raise ConfigError(f"lambda grid {spec!r} must satisfy 0 < a < b and n >= 1")
    if n == 1:
        return [a]
    r = (b / a) ** (1.0 / (n - 1))
    grid = [a * r**i for i in range(n)]
    grid[-1] = b
    # snap values that are integers up to rounding
    return [float(round(x)) if abs(x - round(x)) < 1e-9 * x else x for x in grid]
