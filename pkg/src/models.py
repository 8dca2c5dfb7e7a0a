"""
Data models for potential-algebra spectra and their numerical verification.
"""

import math
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from .errors import GridError, InvalidInputError


Number = Union[int, float, Fraction]


@dataclass(frozen=True, order=True)
class HalfInteger:
    """Exact element of Z/2, stored as its double."""
    twice_value: int

    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def is_half_odd(self) -> bool:
        return self.twice_value % 2 != 0

    def shifted(self, steps: int) -> 'HalfInteger':
        """Return self + steps (steps is an integer number of ladder moves)."""
        return HalfInteger(self.twice_value + 2 * steps)

    def __float__(self) -> float:
        return self.twice_value / 2

    def __str__(self) -> str:
        if self.twice_value % 2 == 0:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    @classmethod
    def from_number(cls, value: Number) -> Optional['HalfInteger']:
        """Exact conversion; None when value is not a multiple of 1/2."""
        if isinstance(value, HalfInteger):
            return value
        if isinstance(value, float) and not math.isfinite(value):
            return None
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            return None
        return cls(int(twice))

    @classmethod
    def parse(cls, text: str) -> 'HalfInteger':
        """
        Parse "p/2", an integer, or a decimal such as "1.5".

        Decimals are checked for exact half-integrality, so "1.50" is fine
        and "1.49999" is rejected.
        """
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"not a number: {text!r}")
        half = cls.from_number(value)
        if half is None:
            raise InvalidInputError(f"{text!r} is not an exact half-integer")
        return half


class Family(Enum):
    """The four Hamiltonians; closed enumeration."""
    FLAT = "flat"
    SPHERICAL = "spherical"
    HYPERBOLIC = "hyperbolic"
    ROSEN_MORSE = "rosen-morse"

    @property
    def domain(self) -> Tuple[float, float]:
        """Open natural domain of x."""
        if self is Family.SPHERICAL:
            return (0.0, math.pi)
        if self is Family.ROSEN_MORSE:
            return (-math.inf, math.inf)
        return (0.0, math.inf)

    @property
    def domain_text(self) -> str:
        return {
            Family.FLAT: "x > 0",
            Family.SPHERICAL: "0 < x < pi",
            Family.HYPERBOLIC: "x > 0",
            Family.ROSEN_MORSE: "any real x",
        }[self]

    @property
    def has_singular_endpoint(self) -> bool:
        return self is not Family.ROSEN_MORSE

    @property
    def shares_hyperbolic_algebra(self) -> bool:
        return self in (Family.HYPERBOLIC, Family.ROSEN_MORSE)

    @classmethod
    def parse(cls, text: str) -> 'Family':
        key = text.strip().lower().replace('_', '-')
        aliases = {'kepler': 'flat', 'rm': 'rosen-morse', 'rosenmorse': 'rosen-morse'}
        key = aliases.get(key, key)
        for family in cls:
            if family.value == key:
                return family
        raise InvalidInputError(
            f"unknown family {text!r}; expected one of "
            f"{', '.join(f.value for f in cls)}")


class Mode(Enum):
    STRICT = "strict"
    EXTENDED = "extended"


class Direction(Enum):
    UP = "up"
    DOWN = "down"


class Sign(Enum):
    PLUS = 1
    MINUS = -1


class Scheme(Enum):
    """Oracle discretisation. AUTO picks FROBENIUS for singular families."""
    AUTO = "auto"
    DIRICHLET = "dirichlet"
    FROBENIUS = "frobenius"


@dataclass(frozen=True)
class ModelParams:
    """Family tag, coupling g and angular parameter j (optionally exact)."""
    family: Family
    g: float
    j: float
    j_exact: Optional[HalfInteger] = None
    g_exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.j_exact is not None and float(self.j_exact) != self.j:
            raise InvalidInputError(
                f"j={self.j} disagrees with exact backing {self.j_exact}")
        if not math.isfinite(self.g) or not math.isfinite(self.j):
            raise InvalidInputError("j and g must be finite")

    @classmethod
    def create(cls, family: Union[Family, str], j: Union[Number, str, HalfInteger],
               g: Union[Number, str]) -> 'ModelParams':
        """
        Build params from loose inputs.

        Strings and HalfIntegers that are exact multiples of 1/2 get an
        exact backing; plain floats never do, so strict-mode operations
        refuse them.
        """
        if isinstance(family, str):
            family = Family.parse(family)

        j_exact = None
        if isinstance(j, HalfInteger):
            j_exact = j
            j_value = float(j)
        elif isinstance(j, str):
            try:
                frac = Fraction(j.strip())
            except (ValueError, ZeroDivisionError):
                raise InvalidInputError(f"j is not a number: {j!r}")
            j_exact = HalfInteger.from_number(frac)
            j_value = float(frac)
        elif isinstance(j, Fraction):
            j_exact = HalfInteger.from_number(j)
            j_value = float(j)
        else:
            j_value = float(j)

        g_exact = None
        if isinstance(g, str):
            try:
                g_exact = Fraction(g.strip())
            except (ValueError, ZeroDivisionError):
                raise InvalidInputError(f"g is not a number: {g!r}")
            g_value = float(g_exact)
        elif isinstance(g, Fraction):
            g_exact = g
            g_value = float(g)
        else:
            g_value = float(g)

        return cls(family=family, g=g_value, j=j_value, j_exact=j_exact, g_exact=g_exact)

    @property
    def g_fraction(self) -> Fraction:
        """Exact rational value of g (every finite float is a rational)."""
        return self.g_exact if self.g_exact is not None else Fraction(self.g)

    def validate(self, require_bound_state: bool = True) -> 'ModelParams':
        if require_bound_state and not self.g > 0:
            raise InvalidInputError(
                f"g must be > 0 for bound-state computations (got g={self.g})")
        if self.g < 0:
            raise InvalidInputError(f"negative coupling g={self.g} is not supported")
        return self

    def with_j(self, j: Union[float, HalfInteger]) -> 'ModelParams':
        if isinstance(j, HalfInteger):
            return replace(self, j=float(j), j_exact=j)
        return replace(self, j=float(j), j_exact=None)

    def shifted(self, steps: int) -> 'ModelParams':
        """j -> j + steps, keeping the exact backing when present."""
        if self.j_exact is not None:
            return self.with_j(self.j_exact.shifted(steps))
        return self.with_j(self.j + steps)

    def echo(self) -> Dict[str, Any]:
        return {
            'family': self.family.value,
            'j': str(self.j_exact) if self.j_exact is not None else self.j,
            'g': str(self.g_exact) if self.g_exact is not None else self.g,
        }


@dataclass(frozen=True)
class CommutatorConstant:
    """Scalar c(j, g) with [J+, J-] = c(j, g) on a J3 = j eigenspace."""
    value: float

    def __float__(self) -> float:
        return self.value


class RepKind(Enum):
    FINITE_DIM = "finite"
    INFINITE_LOWERING = "infinite-lowering"
    INFINITE_RAISING = "infinite-raising"
    ONE_DIM_SPECIAL = "one-dim-special"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class RepClass:
    """
    Classification of one representation label nu.

    For infinite kinds `orbit` holds only the first few J3 values and
    `orbit_unbounded` says which way the ladder continues.
    """
    kind: RepKind
    nu: float
    dim: Optional[int]
    orbit: Tuple[float, ...] = ()
    energy: Optional[float] = None
    orbit_unbounded: Optional[str] = None
    reason: str = ""

    @property
    def is_bound_state_representation(self) -> bool:
        return self.kind is not RepKind.EXCLUDED

    def to_dict(self) -> Dict[str, Any]:
        if self.kind in (RepKind.INFINITE_LOWERING, RepKind.INFINITE_RAISING):
            dim = "infinite"
        else:
            dim = self.dim
        return {
            'kind': self.kind.value,
            'nu': self.nu,
            'dim': dim,
            'energy': self.energy,
            'orbit': list(self.orbit),
            'orbit_unbounded': self.orbit_unbounded,
            'reason': self.reason,
        }


@dataclass(frozen=True)
class SpectrumLine:
    n: int
    energy: float
    j_end: float  # J3 value of the annihilated end of the chain

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'energy': self.energy, 'j_end': self.j_end}


class Truncation(Enum):
    FINITE = "finite"
    CAPPED = "capped"


@dataclass(frozen=True)
class SpectrumReport:
    params: ModelParams
    lines: Tuple[SpectrumLine, ...]
    truncation: Truncation
    n_top: int
    mode: Mode
    extension: bool = False
    warnings: Tuple[str, ...] = ()

    @property
    def energies(self) -> Tuple[float, ...]:
        return tuple(line.energy for line in self.lines)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode.value,
            'extension': self.extension,
            'truncation': {'kind': self.truncation.value, 'n_top': self.n_top},
            'lines': [line.to_dict() for line in self.lines],
        }


@dataclass(frozen=True)
class Window:
    """Open interval of j values; endpoints may be infinite."""
    lower: float
    upper: float
    note: str = ""

    def contains(self, j: float) -> bool:
        return self.lower < j < self.upper

    def to_dict(self) -> Dict[str, Any]:
        return {'lower': self.lower, 'upper': self.upper, 'note': self.note}

    def __str__(self) -> str:
        return f"({self.lower:.6g}, {self.upper:.6g})"


@dataclass(frozen=True)
class Grid:
    """Uniform grid with n interior points and Dirichlet walls at a and b."""
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise GridError(f"grid needs finite a < b (got a={self.a}, b={self.b})")
        if self.n < 16:
            raise GridError(f"grid needs at least 16 interior points (got {self.n})")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    def points(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.n + 1)

    def refined(self) -> 'Grid':
        """Same interval with half the spacing."""
        return Grid(self.a, self.b, 2 * self.n + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {'a': self.a, 'b': self.b, 'n': self.n, 'h': self.h}


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal matrix."""
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if self.offdiag.shape[0] != self.diag.shape[0] - 1:
            raise GridError("offdiag must have exactly one entry fewer than diag")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.offdiag))):
            raise GridError("tridiagonal matrix has non-finite entries")

    @property
    def size(self) -> int:
        return int(self.diag.shape[0])

    def gershgorin_bounds(self) -> Tuple[float, float]:
        radius = np.zeros_like(self.diag)
        radius[:-1] += np.abs(self.offdiag)
        radius[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


@dataclass(frozen=True)
class LevelCheck:
    n: int
    e_algebraic: float
    e_numeric: Optional[float]
    abs_delta: Optional[float]
    rel_delta: Optional[float]
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'e_algebraic': self.e_algebraic,
            'e_numeric': self.e_numeric,
            'abs_delta': self.abs_delta,
            'rel_delta': self.rel_delta,
            'pass': self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    params: ModelParams
    mode: Mode
    scheme: Scheme
    grid: Grid
    threshold: float
    tol_rel: float
    levels: Tuple[LevelCheck, ...]
    algebraic_count: Optional[int]
    numeric_count: int
    count_checked: bool
    count_passed: bool
    convergence_ratio: Optional[float]
    convergence_checked: bool
    convergence_passed: bool
    probe: bool
    passed: bool

    @property
    def max_rel_delta(self) -> Optional[float]:
        deltas = [lvl.rel_delta for lvl in self.levels if lvl.rel_delta is not None]
        return max(deltas) if deltas else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pass': self.passed,
            'probe_excluded': self.probe,
            'mode': self.mode.value,
            'scheme': self.scheme.value,
            'tol_rel': self.tol_rel,
            'threshold': self.threshold,
            'grid': self.grid.to_dict(),
            'levels': [lvl.to_dict() for lvl in self.levels],
            'counts': {
                'algebraic': self.algebraic_count,
                'numeric': self.numeric_count,
                'checked': self.count_checked,
                'pass': self.count_passed,
            },
            'convergence': {
                'ratio': self.convergence_ratio,
                'checked': self.convergence_checked,
                'pass': self.convergence_passed,
            },
        }


def _default_tolerance() -> float:
    raw = os.environ.get('SPECALG_DEFAULT_TOL')
    if raw is None or raw.strip() == '':
        return 1e-3
    try:
        value = float(raw)
    except ValueError:
        raise InvalidInputError(f"SPECALG_DEFAULT_TOL is not a number: {raw!r}")
    if not (value > 0 and math.isfinite(value)):
        raise InvalidInputError(f"SPECALG_DEFAULT_TOL must be positive (got {raw!r})")
    return value


@dataclass
class OracleConfig:
    """Configuration for the numerical oracle and sweeps."""
    grid_points: int = 4000
    tol_rel: float = field(default_factory=_default_tolerance)
    bisection_tol: float = 1e-10
    scheme: Scheme = Scheme.AUTO
    mode: Mode = Mode.STRICT

    # Richardson check: rerun at h/2, expect the gap to shrink ~4x
    richardson: bool = True
    ratio_band: Tuple[float, float] = (3.5, 4.5)
    # gaps below this (relative) are roundoff, not discretisation error
    convergence_floor: float = 1e-9

    grid: Optional[Grid] = None

    # Sweep fan-out
    parallel_workers: int = 4
    max_workers: int = 32
    auto_scale_workers: bool = True
    points_per_worker: int = 8

    def calculate_workers(self, point_count: int) -> int:
        """Worker count for a sweep of point_count points."""
        if not self.auto_scale_workers:
            return max(1, self.parallel_workers)
        optimal = max(1, point_count // self.points_per_worker)
        return min(optimal, self.max_workers)

    def __post_init__(self):
        if self.grid_points < 16:
            raise InvalidInputError(f"grid_points must be >= 16 (got {self.grid_points})")
        if not self.tol_rel > 0:
            raise InvalidInputError(f"tol_rel must be positive (got {self.tol_rel})")
        lo, hi = self.ratio_band
        if not 0 < lo < hi:
            raise InvalidInputError(f"ratio_band must satisfy 0 < lo < hi (got {self.ratio_band})")
        self.max_workers = max(1, self.max_workers)
        self.parallel_workers = min(max(1, self.parallel_workers), self.max_workers)


SWEEP_COLUMNS = (
    'index', 'family', 'g', 'j', 'rep_kind', 'nu', 'dim', 'rep_energy',
    'n_levels', 'ground_energy', 'special_j', 'verified', 'max_rel_delta', 'error',
)


@dataclass
class SweepRow:
    """One parameter point of a sweep; column order is SWEEP_COLUMNS."""
    index: int
    family: str
    g: float
    j: Optional[float]
    rep_kind: str = ""
    nu: Optional[float] = None
    dim: Optional[Union[int, str]] = None
    rep_energy: Optional[float] = None
    n_levels: Optional[int] = None
    ground_energy: Optional[float] = None
    special_j: Optional[float] = None
    verified: Optional[bool] = None
    max_rel_delta: Optional[float] = None
    error: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in SWEEP_COLUMNS}
