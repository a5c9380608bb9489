"""Class census: enumerate classes, bound each representative, aggregate.

Bounds are class invariants, so one classical search and one exact LP per
class representative cover the whole function space.
"""

from __future__ import annotations

import csv
import io
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .classical import optimal_classical
from .game import GameFunction, Scenario
from .nosignaling import is_decomposable, optimal_ns
from .symmetry import EquivalenceClass, enumerate_classes

__all__ = [
    "ClassRecord",
    "CensusReport",
    "run_census",
    "bound_class",
    "fraction_doc",
    "MAX_CENSUS_FUNCTIONS",
    "verify_paper",
]

MAX_CENSUS_FUNCTIONS = 1 << 26


def fraction_doc(v: Fraction) -> dict:
    v = Fraction(v)
    return {"num": v.numerator, "den": v.denominator, "decimal": f"{float(v):.9g}"}


@dataclass(frozen=True)
class ClassRecord:
    code: int
    orbit_size: int
    omega_cl: Fraction
    omega_ns: Fraction
    decomposable: bool | None  # only decided for nontrivial 3-player classes

    @property
    def nontrivial(self) -> bool:
        return self.omega_ns > self.omega_cl


def bound_class(s: Scenario, code: int, orbit_size: int) -> ClassRecord:
    f = GameFunction.from_int(s, code)
    cl = optimal_classical(f).value
    res = optimal_ns(f)
    dec = None
    if s.n_players == 3 and res.value > cl:
        dec = is_decomposable(res.witness)[0]
    return ClassRecord(code, orbit_size, cl, res.value, dec)


def _bound_chunk(args):
    s, items = args
    return [bound_class(s, code, size) for code, size in items]


def _sorted_hist(counter: Counter) -> dict[Fraction, int]:
    return dict(sorted(counter.items()))


@dataclass
class CensusReport:
    scenario: Scenario
    total_functions: int
    class_count: int
    records: list[ClassRecord] = field(repr=False)

    @property
    def nontrivial(self) -> list[ClassRecord]:
        return [r for r in self.records if r.nontrivial]

    @property
    def nontrivial_class_count(self) -> int:
        return len(self.nontrivial)

    @property
    def nontrivial_function_count(self) -> int:
        return sum(r.orbit_size for r in self.nontrivial)

    @property
    def histogram_cl(self) -> dict[Fraction, int]:
        return _sorted_hist(Counter(r.omega_cl for r in self.nontrivial))

    @property
    def histogram_ns(self) -> dict[Fraction, int]:
        return _sorted_hist(Counter(r.omega_ns for r in self.nontrivial))

    @property
    def histogram_abs_gap(self) -> dict[Fraction, int]:
        return _sorted_hist(Counter(r.omega_ns - r.omega_cl for r in self.nontrivial))

    @property
    def histogram_rel_gap(self) -> dict[Fraction, int]:
        return _sorted_hist(Counter(r.omega_ns / r.omega_cl - 1 for r in self.nontrivial))

    @property
    def decomposable_count(self) -> int | None:
        if self.scenario.n_players != 3:
            return None
        return sum(1 for r in self.nontrivial if r.decomposable)

    def tables(self) -> dict[str, dict[Fraction, int]]:
        return {
            "omega_cl": self.histogram_cl,
            "omega_ns": self.histogram_ns,
            "abs_gap": self.histogram_abs_gap,
            "rel_gap": self.histogram_rel_gap,
        }

    def to_document(self) -> dict:
        return {
            "scenario": str(self.scenario),
            "total_functions": self.total_functions,
            "class_count": self.class_count,
            "nontrivial_class_count": self.nontrivial_class_count,
            "nontrivial_function_count": self.nontrivial_function_count,
            "decomposable_count": self.decomposable_count,
            "histograms": {
                name: [{"value": fraction_doc(k), "count": v} for k, v in h.items()]
                for name, h in self.tables().items()
            },
            "nontrivial_classes": [
                {
                    "code": r.code,
                    "orbit_size": r.orbit_size,
                    "omega_cl": fraction_doc(r.omega_cl),
                    "omega_ns": fraction_doc(r.omega_ns),
                    "decomposable": r.decomposable,
                }
                for r in self.nontrivial
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """One block per statistics table with columns ``table, value, fraction, count``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "value", "fraction", "count"])
        for name, h in self.tables().items():
            for k, v in h.items():
                w.writerow([name, f"{float(k):.9g}", str(k), v])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            f"scenario {self.scenario}",
            f"functions {self.total_functions}",
            f"classes {self.class_count}",
            f"nontrivial classes {self.nontrivial_class_count}",
            f"functions in nontrivial classes {self.nontrivial_function_count}",
        ]
        if self.decomposable_count is not None:
            lines.append(f"decomposable optimal boxes {self.decomposable_count}")
        for name, h in self.tables().items():
            lines.append("")
            lines.append(f"{name:>12}  count")
            lines.extend(f"{float(k):12.9g}  {v}" for k, v in h.items())
        return "\n".join(lines) + "\n"


def _chunks(items, n):
    size = max(1, -(-len(items) // n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def run_census(s: Scenario, workers: int | None = 1,
               classes: list[EquivalenceClass] | None = None) -> CensusReport:
    """Exact census of ``s``.

    ``workers`` > 1 bounds classes in a process pool.  Work is split into
    contiguous chunks and reassembled in class order, so the report does not
    depend on the worker count.
    """
    if s.n_functions > MAX_CENSUS_FUNCTIONS:
        raise ValueError(f"{s} has {s.n_functions} functions, too many for a census")
    if classes is None:
        classes = enumerate_classes(s)
    items = [(c.code, c.orbit_size) for c in classes]
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(items) < 2:
        records = _bound_chunk((s, items))
    else:
        # several chunks per worker keeps the pool busy when chunks differ in cost
        jobs = [(s, chunk) for chunk in _chunks(items, 4 * workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_bound_chunk, jobs) for r in part]
    return CensusReport(s, s.n_functions, len(classes), records)


def verify_paper(seed: int = 0, restarts: int | None = None, workers: int = 1,
                 only=None, echo=print) -> bool:
    """Run every reproduction criterion, report each one, return overall success."""
    from .acceptance import Options, run_all

    results = run_all(Options(seed=seed, restarts=restarts, workers=workers), only=only, echo=echo)
    return all(r.passed for r in results)
