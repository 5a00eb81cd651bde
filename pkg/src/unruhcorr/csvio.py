"""CSV schema for sweep records."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import ConfigError

CSV_HEADER = (
    "x",
    "beta",
    "beta_prime_re",
    "beta_prime_im",
    "n_U",
    "nu_tilde_minus",
    "E_N",
    "D_AB",
    "D_BA",
    "separability_residual",
)


def _fmt(value: float) -> str:
    # 12 significant digits; locale-independent; no negative zero.
    return format(float(value) + 0.0, ".12g")


def record_row(rec):
    ov, m = rec.overlaps, rec.measures
    bp = complex(ov.beta_prime)
    return [
        rec.x,
        abs(ov.beta),
        bp.real,
        bp.imag,
        ov.n_U,
        m.nu_tilde_minus,
        m.E_N,
        m.D_AB,
        m.D_BA,
        rec.separability_residual,
    ]


def format_csv(records) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    for rec in records:
        buf.write(",".join(_fmt(v) for v in record_row(rec)) + "\n")
    return buf.getvalue()


def read_csv(path) -> dict:
    """Load a sweep CSV as a dict of float columns, validating the schema."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("csv", f"{path} does not exist")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ConfigError("csv", f"{path} does not have the sweep header")
    if len(rows) < 2:
        raise ConfigError("csv", f"{path} has no data rows")
    try:
        data = np.array([[float(v) for v in row] for row in rows[1:]])
    except ValueError as exc:
        raise ConfigError("csv", f"{path} has a non-numeric entry ({exc})") from None
    if data.shape[1] != len(CSV_HEADER):
        raise ConfigError("csv", f"{path} has ragged rows")
    return {name: data[:, i] for i, name in enumerate(CSV_HEADER)}
