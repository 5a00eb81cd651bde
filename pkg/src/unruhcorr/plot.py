"""Gnuplot scripts that redraw a sweep CSV without recomputation."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .csvio import CSV_HEADER, read_csv

_X_LABELS = {
    "acceleration": "aL",
    "unruh-z": "z = exp(-2 pi Omega)",
}

# (column, title, dash type, colour): solid E_N, dashed D(A:B), dotted D(B:A).
_CURVES = (
    ("E_N", "E_N", 1, "#1f4e9c"),
    ("D_AB", "D(A:B)", 2, "#2a8a3b"),
    ("D_BA", "D(B:A)", 3, "#c0392b"),
)


def _guess_kind(data) -> str:
    x = data["x"]
    unruh_like = np.all(data["beta_prime_re"] == 0) and np.all(data["beta_prime_im"] == 0)
    if unruh_like and np.all((x > 0) & (x < 1)):
        return "unruh-z"
    return "acceleration"


def emit_plot_script(csv_path, script_path=None, kind=None) -> Path:
    """Write a gnuplot script drawing E_N, D(A:B) and D(B:A) against ``x``.

    Parameters
    ----------
    csv_path : path-like
        Sweep CSV; its schema is validated.
    script_path : path-like, optional
        Defaults to the CSV path with suffix ``.gp``.
    kind : {"acceleration", "unruh-z"}, optional
        Chooses the x-axis label; inferred from the data when omitted.

    Raises
    ------
    ConfigError
        If the CSV is missing, empty or has the wrong schema.
    """
    csv_path = Path(csv_path)
    data = read_csv(csv_path)
    kind = kind or _guess_kind(data)
    script_path = Path(script_path) if script_path else csv_path.with_suffix(".gp")
    rel_csv = os.path.relpath(csv_path.resolve(), script_path.resolve().parent)
    png = script_path.with_suffix(".png").name
    col = {name: i + 1 for i, name in enumerate(CSV_HEADER)}

    lines = [
        f"# E_N, D(A:B), D(B:A) against {_X_LABELS[kind]}; data from {rel_csv}",
        "set datafile separator ','",
        "set terminal pngcairo size 800,560 enhanced",
        f"set output '{png}'",
        f"set xlabel '{_X_LABELS[kind]}'",
        "set ylabel 'E_N (nats), D (bits)'",
        "set key top right",
        "set yrange [0:*]",
    ]
    plots = []
    for i, (name, title, dash, colour) in enumerate(_CURVES):
        src = f"'{rel_csv}'" if i == 0 else "''"
        plots.append(
            f"{src} skip 1 using 1:{col[name]} with lines lw 2 dt {dash} lc rgb '{colour}' title '{title}'"
        )
    lines.append("plot " + ", \\\n     ".join(plots))
    script_path.write_text("\n".join(lines) + "\n")
    return script_path
