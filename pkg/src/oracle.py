"""
Numerical eigenvalue oracle.

Discretizes H = -d^2/dx^2 + V on a truncated interval, counts eigenvalues
with Sturm sequences and bisects them. Two schemes:

- dirichlet: central differences on the interior points, walls at a and b.
- frobenius: for families with a singular endpoint, psi = s(x)^kappa phi(x)
  turns H into the weighted problem -(w phi')' + q w phi = E w phi with
  w = s^(2 kappa). A vertex-centred finite-volume scheme with exact cell
  integrals keeps phi smooth at the singular end, so the algebraically
  selected branch psi ~ x^j is resolved at second order for every j > 0.
"""

import math
import sys
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .errors import GridError, InvalidInputError
from .models import (
    Family, Grid, LevelCheck, ModelParams, OracleConfig, Scheme,
    Tridiagonal, VerificationReport,
)
from .potentials import continuum_threshold, potential
from .representation import spectrum

# Cells this close (in cells) to a singular endpoint are integrated adaptively
ADAPTIVE_CELLS = 4
MIN_CELL_MASS = 1e-250
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)

LEVELS_FOR_INFINITE_FAMILIES = 3


# Grids

def default_grid(params: ModelParams, n_levels: int, points: int = 4000) -> Grid:
    """Truncated interval sized from the decay rate of the highest requested level."""
    n_levels = max(1, n_levels)
    family, j, g = params.family, params.j, params.g
    if family is Family.SPHERICAL:
        return Grid(0.0, math.pi, points)
    if family is Family.FLAT:
        k_top = j + n_levels - 1
        length = 40.0 if g <= 0 else max(40.0, 12.0 * k_top * k_top / g)
        return Grid(0.0, length, points)
    if family is Family.HYPERBOLIC:
        k_top = j + n_levels - 1
        decay = g / k_top - k_top if k_top > 0 else 0.0
        length = 40.0 if decay <= 0 else min(200.0, max(40.0, 12.0 * k_top / decay))
        return Grid(0.0, length, points)
    k_top = j - (n_levels - 1) - 1
    gap = k_top - math.sqrt(g)
    length = 30.0 if gap <= 0 else min(200.0, max(30.0, 12.0 / gap))
    return Grid(-length, length, points)


def resolve_scheme(scheme: Scheme, family: Family) -> Scheme:
    if scheme is Scheme.AUTO:
        return Scheme.FROBENIUS if family.has_singular_endpoint else Scheme.DIRICHLET
    if scheme is Scheme.FROBENIUS and not family.has_singular_endpoint:
        raise InvalidInputError(f"the frobenius scheme needs a singular endpoint; "
                                f"{family.value} has none")
    return scheme


def frobenius_exponent(j: float) -> float:
    """kappa with kappa (kappa - 1) = j (j - 1) and kappa > 0."""
    return j if j > 0 else 1.0 - j


# Discretization

def discretize_potential(values: np.ndarray, grid: Grid) -> Tridiagonal:
    """Central-difference -d^2/dx^2 + V from V sampled at grid.points()."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n,):
        raise GridError(f"expected {grid.n} potential samples, got {values.shape}")
    if not np.all(np.isfinite(values)):
        raise GridError("potential is not finite at every grid point")
    inv_h2 = 1.0 / (grid.h * grid.h)
    return Tridiagonal(diag=2.0 * inv_h2 + values,
                       offdiag=np.full(grid.n - 1, -inv_h2))


def discretize(params: ModelParams, grid: Grid) -> Tridiagonal:
    """Dirichlet central differences for the family Hamiltonian."""
    try:
        values = potential(params, grid.points())
    except InvalidInputError as e:
        raise GridError(f"grid ({grid.a}, {grid.b}) leaves the domain: {e}")
    return discretize_potential(np.asarray(values), grid)


def _weight_and_q(family: Family, kappa: float, g: float
                  ) -> Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """
    w(x) = s(x)^(2 kappa) and the reduced potential q(x).

    q = V - kappa u' - kappa^2 u^2 with u = (ln s)'; the 1/s^2 terms cancel
    because kappa (kappa - 1) = j (j - 1), and the forms below are already
    simplified.
    """
    k2 = kappa * kappa
    if family is Family.FLAT:
        def w(x):
            return (x / (1.0 + x)) ** (2.0 * kappa)

        def q(x):
            return k2 * (2.0 + x) / (x * (1.0 + x) ** 2) - kappa / (1.0 + x) ** 2 - 2.0 * g / x
    elif family is Family.SPHERICAL:
        def w(x):
            return np.sin(x) ** (2.0 * kappa)

        def q(x):
            return k2 - 2.0 * g * np.cos(x) / np.sin(x)
    else:
        def w(x):
            return np.tanh(x) ** (2.0 * kappa)

        def q(x):
            return (k2 + kappa) / np.cosh(x) ** 2 - 2.0 * g / np.tanh(x)
    return w, q


def _cell_integrals(fn: Callable, left: np.ndarray, right: np.ndarray,
                    adaptive: np.ndarray) -> np.ndarray:
    """Integral of fn over each [left_i, right_i]; adaptive cells go through quad."""
    mid = 0.5 * (left + right)
    half = 0.5 * (right - left)
    nodes = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    out = half * (fn(nodes) @ _GAUSS_WEIGHTS)
    for i in np.flatnonzero(adaptive):
        out[i] = quad(lambda t: float(fn(t)), left[i], right[i],
                      limit=200, epsabs=0.0, epsrel=1e-13)[0]
    return out


def discretize_weighted(params: ModelParams, grid: Grid) -> Tridiagonal:
    """
    Finite-volume discretization of the weighted problem for phi.

    A grid end that coincides with a finite edge of the natural domain is a
    natural (zero-flux) end and keeps its node; other ends are Dirichlet
    walls. The result is the symmetric form M^-1/2 (K + Q) M^-1/2.
    """
    family = params.family
    if not family.has_singular_endpoint:
        raise InvalidInputError(f"{family.value} has no singular endpoint to factor out")
    lo, hi = family.domain
    if grid.a < lo or grid.b > hi:
        raise GridError(f"grid ({grid.a}, {grid.b}) leaves the {family.value} domain "
                        f"({family.domain_text})")
    natural_left = grid.a == lo
    natural_right = grid.b == hi

    kappa = frobenius_exponent(params.j)
    w, q = _weight_and_q(family, kappa, params.g)
    h = grid.h

    first = 0 if natural_left else 1
    last = grid.n + 1 if natural_right else grid.n
    idx = np.arange(first, last + 1)
    nodes = grid.a + h * idx

    left = np.maximum(nodes - 0.5 * h, grid.a)
    right = np.minimum(nodes + 0.5 * h, grid.b)
    adaptive = np.zeros(idx.shape, dtype=bool)
    if natural_left:
        adaptive |= idx < ADAPTIVE_CELLS
    if natural_right:
        adaptive |= idx > grid.n + 1 - ADAPTIVE_CELLS

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        mass = _cell_integrals(w, left, right, adaptive)
        reaction = _cell_integrals(lambda x: q(x) * w(x), left, right, adaptive)
        # fluxes at the half points between consecutive nodes, plus the outer ones
        half_points = grid.a + h * (np.arange(first - 1, last + 1) + 0.5)
        flux = w(np.clip(half_points, grid.a, grid.b))
    if natural_left:
        flux[0] = 0.0
    if natural_right:
        flux[-1] = 0.0

    stiffness = (flux[:-1] + flux[1:]) / h
    coupling = -flux[1:-1] / h

    # s^(2 kappa) underflows next to the singular end for large kappa; those
    # nodes carry no weight and are pinned to zero like a wall
    kept = np.flatnonzero(mass > MIN_CELL_MASS)
    if kept.size < 2 or kept[-1] - kept[0] + 1 != kept.size:
        raise GridError("cell masses are not positive on a contiguous range of nodes")
    start, stop = kept[0], kept[-1] + 1
    mass, reaction, stiffness = mass[start:stop], reaction[start:stop], stiffness[start:stop]
    coupling = coupling[start:stop - 1]
    if not (np.all(np.isfinite(mass)) and np.all(np.isfinite(reaction))):
        raise GridError("non-finite cell integrals; grid too coarse or degenerate")
    scale = 1.0 / np.sqrt(mass)
    return Tridiagonal(diag=(stiffness + reaction) * scale * scale,
                       offdiag=coupling * scale[:-1] * scale[1:])


def build_operator(params: ModelParams, grid: Grid, scheme: Scheme) -> Tridiagonal:
    if resolve_scheme(scheme, params.family) is Scheme.FROBENIUS:
        return discretize_weighted(params, grid)
    return discretize(params, grid)


# Eigenvalues

def sturm_count(T: Tridiagonal, lam: float) -> int:
    """Number of eigenvalues of T strictly below lam (LDL^T pivot signs)."""
    diag = T.diag.tolist()
    off_sq = (T.offdiag * T.offdiag).tolist()
    pivmin = sys.float_info.min * max(1.0, max(off_sq, default=1.0))
    count = 0
    d = diag[0] - lam
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0:
        count += 1
    for a, b2 in zip(diag[1:], off_sq):
        d = a - lam - b2 / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0:
            count += 1
    return count


def eigenvalues_below(T: Tridiagonal, threshold: float, k_max: int,
                      tol: float = 1e-10) -> List[float]:
    """Lowest min(k_max, count below threshold) eigenvalues, ascending."""
    if k_max < 1:
        raise InvalidInputError(f"k_max must be >= 1 (got {k_max})")
    g_lo, g_hi = T.gershgorin_bounds()
    upper = min(threshold, g_hi + 1.0)
    wanted = min(k_max, sturm_count(T, upper))

    found: List[float] = []
    lower = g_lo - 1.0
    for k in range(wanted):
        lo, hi = lower, upper
        # invariant: count(lo) <= k < count(hi)
        while hi - lo > tol * max(1.0, abs(0.5 * (lo + hi))):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if sturm_count(T, mid) > k:
                hi = mid
            else:
                lo = mid
        value = 0.5 * (lo + hi)
        found.append(value)
        lower = lo
    return found


# Verification

def _relative_delta(algebraic: float, numeric: float) -> float:
    delta = abs(numeric - algebraic)
    return delta / abs(algebraic) if algebraic != 0 else delta


def _second_order_expected(params: ModelParams, scheme: Scheme) -> bool:
    if scheme is Scheme.DIRICHLET:
        return not params.family.has_singular_endpoint
    return frobenius_exponent(params.j) >= 0.5


def verify(params: ModelParams, n_levels: Optional[int] = None,
           config: Optional[OracleConfig] = None, probe: bool = False) -> VerificationReport:
    """
    Compare algebraic energies with the oracle.

    Mismatches are reported in the returned VerificationReport, never
    raised. With probe=True no algebraic spectrum is consulted and the
    check is that nothing lies below the continuum threshold.
    """
    config = config or OracleConfig()
    params.validate()
    family = params.family
    scheme = resolve_scheme(config.scheme, family)
    threshold = continuum_threshold(params)

    if probe:
        if math.isinf(threshold) or family is Family.FLAT:
            raise InvalidInputError(
                f"excluded-region probes need a finite spectrum; {family.value} has none")
        grid = config.grid or default_grid(params, 1, config.grid_points)
        numeric_count = sturm_count(build_operator(params, grid, scheme), threshold)
        return VerificationReport(
            params=params, mode=config.mode, scheme=scheme, grid=grid,
            threshold=threshold, tol_rel=config.tol_rel, levels=(),
            algebraic_count=0, numeric_count=numeric_count,
            count_checked=True, count_passed=numeric_count == 0,
            convergence_ratio=None, convergence_checked=False, convergence_passed=True,
            probe=True, passed=numeric_count == 0)

    finite = family in (Family.HYPERBOLIC, Family.ROSEN_MORSE)
    if n_levels is None:
        full = spectrum(params, None if finite else LEVELS_FOR_INFINITE_FAMILIES - 1, config.mode)
        lines = full.lines
    else:
        if n_levels < 1:
            raise InvalidInputError(f"levels must be >= 1 (got {n_levels})")
        full = spectrum(params, None if finite else n_levels - 1, config.mode)
        lines = full.lines[:n_levels]

    grid = config.grid or default_grid(params, len(lines), config.grid_points)
    T = build_operator(params, grid, scheme)
    numeric = eigenvalues_below(T, threshold, len(lines), config.bisection_tol)

    checks = []
    for line in lines:
        if line.n < len(numeric):
            e_num = numeric[line.n]
            rel = _relative_delta(line.energy, e_num)
            checks.append(LevelCheck(line.n, line.energy, e_num, abs(e_num - line.energy),
                                     rel, rel <= config.tol_rel))
        else:
            checks.append(LevelCheck(line.n, line.energy, None, None, None, False))

    if finite and not math.isinf(threshold):
        algebraic_count = len(full.lines)
        numeric_count = sturm_count(T, threshold)
        count_checked = True
    else:
        algebraic_count = None
        numeric_count = len(numeric)
        count_checked = False
    count_passed = (not count_checked) or algebraic_count == numeric_count

    ratio, conv_checked, conv_passed = None, False, True
    if config.richardson and checks and checks[0].e_numeric is not None:
        ratio, conv_checked, conv_passed = _richardson(params, grid, scheme, threshold,
                                                       checks[0], config)

    passed = all(c.passed for c in checks) and count_passed and conv_passed
    return VerificationReport(
        params=params, mode=config.mode, scheme=scheme, grid=grid, threshold=threshold,
        tol_rel=config.tol_rel, levels=tuple(checks), algebraic_count=algebraic_count,
        numeric_count=numeric_count, count_checked=count_checked, count_passed=count_passed,
        convergence_ratio=ratio, convergence_checked=conv_checked,
        convergence_passed=conv_passed, probe=False, passed=passed)


def _richardson(params: ModelParams, grid: Grid, scheme: Scheme, threshold: float,
                ground: LevelCheck, config: OracleConfig) -> Tuple[Optional[float], bool, bool]:
    """Ground-state gap on grid and on grid.refined(); ~4 for a second-order scheme."""
    refined = eigenvalues_below(build_operator(params, grid.refined(), scheme),
                                threshold, 1, config.bisection_tol)
    if not refined:
        return None, False, True
    coarse_gap = abs(ground.e_numeric - ground.e_algebraic)
    fine_gap = abs(refined[0] - ground.e_algebraic)
    ratio = coarse_gap / fine_gap if fine_gap > 0 else None
    floor = config.convergence_floor * max(1.0, abs(ground.e_algebraic))
    checked = _second_order_expected(params, scheme) and coarse_gap > floor and ratio is not None
    if not checked:
        return ratio, False, True
    lo, hi = config.ratio_band
    return ratio, True, lo <= ratio <= hi
