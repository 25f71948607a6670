"""Ordered sweep records and the shared parallel-map helper.

Sweep points are independent pure-function evaluations, so they may run on
a thread pool; results are always collected in input order.  The pool size
is capped by the EVANESCE_THREADS environment variable (0 or unset = auto).
"""

from __future__ import annotations

import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence


def worker_count(n_points: int) -> int:
    raw = os.environ.get("EVANESCE_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"EVANESCE_THREADS must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise ValueError(f"EVANESCE_THREADS must be >= 0, got {cap}")
    if cap == 0:
        cap = min(4, os.cpu_count() or 1)
    return max(1, min(cap, n_points))


def map_ordered(fn: Callable, xs: Sequence) -> list:
    """Apply fn to each x, preserving order; threads when allowed."""
    workers = worker_count(len(xs))
    if workers <= 1 or len(xs) <= 1:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, xs))


@dataclass(frozen=True)
class SweepTable:
    """Ordered (parameter, observables...) records with stable columns."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} does not match {len(self.columns)} columns"
                )

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self, fmt: str = "%r", header_lines: Iterable[str] = ()) -> str:
        """Render as CSV (comma, dot decimal, one header row).

        ``fmt`` is the per-value printf format; the default repr keeps the
        shortest round-trip representation.
        """
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(fmt % v for v in row) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {"columns": list(self.columns), "rows": [list(r) for r in self.rows]},
            indent=2,
        )

    @staticmethod
    def from_csv(text: str) -> "SweepTable":
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        cols = tuple(lines[0].split(","))
        rows = tuple(tuple(float(v) for v in ln.split(",")) for ln in lines[1:])
        return SweepTable(columns=cols, rows=rows)
