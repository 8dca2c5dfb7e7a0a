"""
Parameter sweeps over g or j with a thread pool and deterministic output order.
"""

import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from typing import Callable, List, Optional, Tuple, Union

from .errors import InvalidInputError, SpectralAlgebraError
from .models import (
    Family, HalfInteger, ModelParams, OracleConfig, SweepRow,
)
from .oracle import verify
from .representation import classify, one_dim_special_root, spectrum

# Levels listed per point for the unbounded flat/spherical spectra
SWEEP_LEVELS = 3

SweepPoint = Tuple[int, Fraction, Optional[Fraction]]


def parse_range(text: str) -> List[Fraction]:
    """
    "start:stop:count" -> count evenly spaced exact values, both ends included.

    count 0 yields an empty list and count 1 yields [start].
    """
    parts = text.split(':')
    if len(parts) != 3:
        raise InvalidInputError(f"range must look like start:stop:count (got {text!r})")
    try:
        start, stop = Fraction(parts[0].strip()), Fraction(parts[1].strip())
        count = int(parts[2])
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"range has a non-numeric part: {text!r}")
    if count < 0:
        raise InvalidInputError(f"range count must be >= 0 (got {count})")
    if count == 0:
        return []
    if count == 1:
        return [start]
    return [start + (stop - start) * i / (count - 1) for i in range(count)]


class SweepState:
    """Progress counters shared between worker threads."""

    def __init__(self):
        self.stats = {
            'total_points': 0,
            'completed': 0,
            'failed': 0,
            'workers': 0,
            'duration': 0.0,
        }
        self._lock = threading.Lock()

    def begin(self, points: int, workers: int):
        with self._lock:
            self.stats['total_points'] = points
            self.stats['workers'] = workers

    def increment_completed(self, failed: bool = False):
        with self._lock:
            self.stats['completed'] += 1
            if failed:
                self.stats['failed'] += 1

    def finish(self, duration: float):
        with self._lock:
            self.stats['duration'] = duration

    def get_stats(self) -> dict:
        with self._lock:
            return self.stats.copy()


def _default_output(message: str):
    print(message, file=sys.stderr)


class Sweeper:
    """
    Evaluate classification, spectrum and optional verification per point.

    Errors at one point are recorded in that row's `error` column; they
    never abort the sweep.
    """

    def __init__(self, config: OracleConfig, family: Family,
                 run_verification: bool = False,
                 output_callback: Callable[[str], None] = None):
        self.config = config
        self.family = family
        self.run_verification = run_verification
        self.output = output_callback or _default_output
        self.state = SweepState()

    def _canonical_j(self, g: Fraction) -> Optional[Union[HalfInteger, float]]:
        """j used when only g varies: the special root or 1/2 for hyperbolic, 1/2 for flat/spherical."""
        if self.family in (Family.FLAT, Family.SPHERICAL):
            return HalfInteger(1)
        if self.family is Family.ROSEN_MORSE:
            return None
        roots = one_dim_special_root(float(g))
        if roots is not None:
            return roots[0]
        return HalfInteger(1) if g > Fraction(1, 4) else None

    def _evaluate_point(self, point: SweepPoint) -> SweepRow:
        index, g, j = point
        special = one_dim_special_root(float(g)) if self.family.shares_hyperbolic_algebra else None
        row = SweepRow(index=index, family=self.family.value, g=float(g),
                       j=None if j is None else float(j),
                       special_j=special[0] if special else None)

        if j is not None:
            j_value = HalfInteger.from_number(j) or float(j)
        else:
            j_value = self._canonical_j(g)
            row.j = None if j_value is None else float(j_value)
        if j_value is None:
            row.rep_kind = "none"
            row.error = "no canonical j for this family; pass --j"
            return row

        try:
            params = ModelParams.create(self.family, j_value, g).validate()
            rep = classify(params, j_value)
            row.rep_kind = rep.kind.value
            row.nu = rep.nu
            row.dim = "infinite" if rep.dim is None else rep.dim
            row.rep_energy = rep.energy
            if not rep.is_bound_state_representation:
                row.n_levels = 0
                return row

            n_max = SWEEP_LEVELS - 1 if self.family in (Family.FLAT, Family.SPHERICAL) else None
            report = spectrum(params, n_max=n_max, mode=self.config.mode)
            row.n_levels = len(report.lines)
            row.ground_energy = report.lines[0].energy

            if self.run_verification:
                result = verify(params, len(report.lines), self.config)
                row.verified = result.passed
                row.max_rel_delta = result.max_rel_delta
        except SpectralAlgebraError as e:
            row.error = str(e)
        return row

    def run(self, points: List[SweepPoint], workers: int = None,
            verbose: bool = False) -> List[SweepRow]:
        """Evaluate every point; rows come back ordered by point index."""
        if not points:
            return []
        if workers is None:
            workers = self.config.calculate_workers(len(points))
        self.state.begin(len(points), workers)
        start = time.time()
        if verbose:
            self.output(f"Sweeping {len(points)} {self.family.value} points with {workers} workers...")

        rows: List[SweepRow] = []
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_point = {executor.submit(self._evaluate_point, p): p for p in points}
            for future in as_completed(future_to_point):
                row = future.result()
                rows.append(row)
                self.state.increment_completed(failed=bool(row.error))
                if verbose:
                    done = self.state.get_stats()['completed']
                    self.output(f"  [{done}/{len(points)}] g={row.g:.6g} j={row.j} {row.rep_kind}")

        duration = time.time() - start
        self.state.finish(duration)
        if verbose:
            stats = self.state.get_stats()
            self.output(f"Done: {stats['completed']} points, {stats['failed']} with errors, "
                        f"in {duration:.1f}s")
        return sorted(rows, key=lambda r: r.index)


def build_points(g_values: List[Fraction], j_values: List[Optional[Fraction]]) -> List[SweepPoint]:
    """Cartesian product in (g, j) order, indexed from 0."""
    points = []
    for g in g_values:
        for j in j_values:
            points.append((len(points), g, j))
    return points
