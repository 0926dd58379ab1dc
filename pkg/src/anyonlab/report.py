"""Deterministic JSON reports and run manifests.

Reports are byte-identical across reruns of the same (config, seed):
floats are rounded to 12 significant digits before serialization, keys
are sorted, and nothing time-dependent goes into a report.  Timestamps,
tool versions, and output paths live in a sidecar manifest instead.
"""

from __future__ import annotations

import datetime
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__

SIGNIFICANT_DIGITS = 12

OUT_DIR_ENV = "ANYONLAB_OUT_DIR"


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    return float(f"{x:.{digits}g}")


def canonical(obj):
    """Recursively normalize floats/ndarrays/complex for stable JSON."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": round_sig(obj.real), "im": round_sig(obj.imag)}
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    return obj


def dumps_report(obj) -> str:
    return json.dumps(canonical(obj), indent=2, sort_keys=True) + "\n"


def resolve_out_path(path: str | os.PathLike) -> Path:
    """Relative outputs land in $ANYONLAB_OUT_DIR when it is set."""
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def write_report(path: str | os.PathLike, obj) -> Path:
    p = resolve_out_path(path)
    p.write_text(dumps_report(obj), encoding="utf-8")
    return p


def write_text(path: str | os.PathLike, text: str) -> Path:
    p = resolve_out_path(path)
    p.write_text(text, encoding="utf-8")
    return p


def write_manifest(report_path: Path, command: str, config: dict,
                   seed: int | None, outputs: list[Path]) -> Path:
    manifest = {
        "command": command,
        "argv": sys.argv,
        "config": canonical(config),
        "seed": seed,
        "outputs": [str(p) for p in outputs],
        "versions": {
            "anyonlab": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    mpath = report_path.with_name(report_path.name + ".manifest.json")
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                     encoding="utf-8")
    return mpath
