"""
Function-level realization of the ladder operators and eigenfunctions.

States are (psi, j) pairs: the auxiliary angle of the potential algebra is
never materialized, and e^{+-i theta} becomes a shift of the j label.
Derivatives come from Taylor jets so n-fold operator chains stay exact to
rounding.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson

from . import jets
from .errors import (
    DegenerateFunctionError, InvalidInputError, NoBoundStateError,
    NonNormalizableError, OrderExhaustedError, SingularParameterError,
)
from .jets import Jet
from .models import Direction, Family, Mode, ModelParams, Sign
from .potentials import commutator_constant, factorization_energy
from .representation import is_special_root, spectrum

Evaluator = Callable[[np.ndarray, int], Jet]


@dataclass(frozen=True)
class WaveFunction:
    """
    A function known through its jets.

    evaluator(x, K) returns the order-K jet at every x. max_order is the
    highest K the evaluator can honour (None means unlimited); each first
    order operator applied on top lowers it by one.
    """
    evaluator: Evaluator
    domain: Tuple[float, float]
    label: Dict[str, Any] = field(default_factory=dict)
    max_order: Optional[int] = None

    def evaluate(self, x, order: int = 0) -> Jet:
        if self.max_order is not None and order > self.max_order:
            raise OrderExhaustedError(
                f"wavefunction supports jets up to order {self.max_order}, "
                f"{order} requested")
        xs = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if not (np.all(xs > lo) and np.all(xs < hi)):
            raise InvalidInputError(f"x outside the open domain ({lo}, {hi})")
        return self.evaluator(xs, order)

    def __call__(self, x) -> np.ndarray:
        return self.evaluate(x, 0).value

    def scaled(self, factor: float) -> 'WaveFunction':
        inner = self.evaluator
        return replace(self, evaluator=lambda x, k: inner(x, k) * factor)


@dataclass(frozen=True)
class LadderState:
    """psi(x) e^{i j theta}, carried as the pair (psi, j)."""
    psi: WaveFunction
    j: float


def _lowered(order: Optional[int], steps: int) -> Optional[int]:
    return None if order is None else order - steps


def profile_jet(family: Family, xj: Jet) -> Jet:
    """Jet of f(x) = 1/x, cot x, coth x or tanh x."""
    if family is Family.FLAT:
        return 1.0 / xj
    if family is Family.SPHERICAL:
        return jets.cot(xj)
    if family is Family.HYPERBOLIC:
        return jets.coth(xj)
    return jets.tanh(xj)


def potential_jet(family: Family, j: float, g: float, xj: Jet) -> Jet:
    """Jet of V expressed through the profile f."""
    f = profile_jet(family, xj)
    jj = j * (j - 1.0)
    if family is Family.FLAT:
        centrifugal = f * f
    elif family is Family.SPHERICAL:
        centrifugal = f * f + 1.0
    elif family is Family.HYPERBOLIC:
        centrifugal = f * f - 1.0
    else:
        centrifugal = -(1.0 - f * f)
    return centrifugal * jj - f * (2.0 * g)


def apply_A(family: Family, sign: Sign, j: float, g: float,
            psi: WaveFunction) -> WaveFunction:
    """x -> +-psi'(x) - j f(x) psi(x) + (g/j) psi(x)."""
    if j == 0:
        raise SingularParameterError("A+-(j) needs 1/j; j = 0 is singular")
    s = float(sign.value)

    def evaluator(x: np.ndarray, order: int) -> Jet:
        p = psi.evaluator(x, order + 1)
        f = profile_jet(family, Jet.variable(x, order))
        return p.derivative() * s + p.truncate(order) * (f * (-j) + g / j)

    return WaveFunction(evaluator, psi.domain, dict(psi.label), _lowered(psi.max_order, 1))


def _base_profile(family: Family, xj: Jet) -> Jet:
    if family is Family.FLAT:
        return xj
    if family is Family.SPHERICAL:
        return jets.sin(xj)
    return jets.sinh(xj)


def base_state(family: Family, j_end: float, g: float) -> WaveFunction:
    """
    Closed-form annihilated end of a ladder chain, unnormalized.

    Flat, spherical and hyperbolic: s(x)^k e^{-g x / k} with k = j_end,
    killed by A+(k). Rosen-Morse: cosh(x)^{-k} e^{g x / k} with
    k = j_end - 1, killed by A-(k).
    """
    if not g > 0:
        raise InvalidInputError(f"base states need g > 0 (got g={g})")
    root_g = math.sqrt(g)

    if family is Family.ROSEN_MORSE:
        k = j_end - 1.0
        if not k > root_g:
            raise NonNormalizableError(
                f"Rosen-Morse base needs j_end - 1 > sqrt(g) (got j_end={j_end}, g={g})")

        def evaluator(x: np.ndarray, order: int) -> Jet:
            xj = Jet.variable(x, order)
            return jets.power(jets.cosh(xj), -k) * jets.exp(xj * (g / k))
    else:
        k = j_end
        if family is Family.HYPERBOLIC:
            admissible = (0.5 <= k < root_g) or is_special_root(k, g)
            window = f"[1/2, {root_g:.6g})"
        else:
            admissible = k >= 0.5
            window = "[1/2, inf)"
        if not admissible:
            raise NonNormalizableError(
                f"{family.value} base state is not normalizable at j_end={j_end} "
                f"(window {window})")

        def evaluator(x: np.ndarray, order: int) -> Jet:
            xj = Jet.variable(x, order)
            return jets.power(_base_profile(family, xj), k) * jets.exp(xj * (-g / k))

    label = {'family': family.value, 'j_end': j_end, 'g': g}
    return WaveFunction(evaluator, family.domain, label)


def rodrigues_chain(params: ModelParams, n: int, mode: Mode = Mode.STRICT) -> WaveFunction:
    """
    Level-n eigenfunction, unnormalized.

    Rosen-Morse raises from the base: A+(j-1) ... A+(j-n) psi_base.
    The other families lower: A-(j) ... A-(j+n-1) psi_base(j+n).
    """
    if n < 0:
        raise InvalidInputError(f"level must be >= 0 (got {n})")
    report = spectrum(params, n_max=n, mode=mode)
    if len(report.lines) <= n:
        raise NoBoundStateError(
            f"level n={n} is above the top level N={report.n_top}")
    family, j, g = params.family, params.j, params.g

    if family is Family.ROSEN_MORSE:
        psi = base_state(family, j - n, g)
        for m in range(n, 0, -1):
            psi = apply_A(family, Sign.PLUS, j - m, g, psi)
    else:
        psi = base_state(family, j + n, g)
        for m in range(n - 1, -1, -1):
            psi = apply_A(family, Sign.MINUS, j + m, g, psi)

    label = {'family': family.value, 'j': j, 'g': g, 'n': n,
             'energy': report.lines[n].energy}
    return replace(psi, label=label)


def j_plus(state: LadderState, family: Family, g: float) -> LadderState:
    """(psi, j) -> (A+(j) psi, j + 1)."""
    return LadderState(apply_A(family, Sign.PLUS, state.j, g, state.psi), state.j + 1.0)


def j_minus(state: LadderState, family: Family, g: float) -> LadderState:
    """(psi, j) -> (A-(j-1) psi, j - 1)."""
    if state.j == 1:
        raise SingularParameterError("J- at j = 1 needs 1/(J3 - 1)")
    return LadderState(apply_A(family, Sign.MINUS, state.j - 1.0, g, state.psi), state.j - 1.0)


def invariant_H(params: ModelParams, psi: WaveFunction) -> WaveFunction:
    """x -> -psi''(x) + V(x) psi(x) with V at params.j."""
    family, j, g = params.family, params.j, params.g

    def evaluator(x: np.ndarray, order: int) -> Jet:
        p = psi.evaluator(x, order + 2)
        v = potential_jet(family, j, g, Jet.variable(x, order))
        return -p.derivative().derivative() + v * p.truncate(order)

    return WaveFunction(evaluator, psi.domain, dict(psi.label), _lowered(psi.max_order, 2))


def _relative(deviation: np.ndarray, scale: np.ndarray) -> float:
    top = float(np.max(np.abs(scale)))
    if not top > 0:
        raise DegenerateFunctionError("reference function vanishes on every sample")
    return float(np.max(np.abs(deviation))) / top


def commutator_check(family: Family, g: float, state: LadderState,
                     sample_xs: Sequence[float]) -> float:
    """max |[J+, J-] psi - c(j, g) psi| / max |psi| over the samples."""
    xs = np.asarray(sample_xs, dtype=float)
    raised_lowered = j_plus(j_minus(state, family, g), family, g)
    lowered_raised = j_minus(j_plus(state, family, g), family, g)
    c = commutator_constant(ModelParams(family=family, g=g, j=state.j)).value
    psi = state.psi(xs)
    deviation = raised_lowered.psi(xs) - lowered_raised.psi(xs) - c * psi
    return _relative(deviation, psi)


def hamiltonian_commutator_check(family: Family, g: float, state: LadderState,
                                 sample_xs: Sequence[float],
                                 direction: Direction = Direction.UP) -> float:
    """
    max |H J psi - J H psi| relative to the larger of |J H psi| and |psi|.

    H acts with V at the J3 label of whatever state it meets.
    """
    xs = np.asarray(sample_xs, dtype=float)
    ladder = j_plus if direction is Direction.UP else j_minus
    at_j = ModelParams(family=family, g=g, j=state.j)

    moved = ladder(state, family, g)
    h_after = invariant_H(at_j.with_j(moved.j), moved.psi)(xs)
    h_first = ladder(LadderState(invariant_H(at_j, state.psi), state.j), family, g).psi(xs)
    scale = np.maximum(np.abs(h_first), np.abs(state.psi(xs)))
    return _relative(h_after - h_first, scale)


def factorization_check(params: ModelParams, psi: WaveFunction,
                        sample_xs: Sequence[float]) -> float:
    """A-(j) A+(j) psi + eps(j) psi against -psi'' + V psi, relative to max |psi|."""
    xs = np.asarray(sample_xs, dtype=float)
    family, j, g = params.family, params.j, params.g
    factored = apply_A(family, Sign.MINUS, j, g, apply_A(family, Sign.PLUS, j, g, psi))
    values = psi(xs)
    lhs = factored(xs) + factorization_energy(params) * values
    rhs = invariant_H(params, psi)(xs)
    return _relative(lhs - rhs, values)


def eigen_residual(params: ModelParams, psi: WaveFunction, energy: float,
                   sample_xs: Sequence[float]) -> float:
    """max |(H - E) psi| / max |psi|."""
    xs = np.asarray(sample_xs, dtype=float)
    values = psi(xs)
    return _relative(invariant_H(params, psi)(xs) - energy * values, values)


def quadrature_grid(psi: WaveFunction, bounds: Optional[Tuple[float, float]],
                    points: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sample psi on linspace(bounds, points).

    Endpoints that sit on a finite edge of the natural domain are singular
    points where every admitted state vanishes; they are set to zero
    instead of evaluated.
    """
    if points < 3:
        raise InvalidInputError(f"quadrature needs at least 3 points (got {points})")
    lo, hi = psi.domain
    a, b = bounds if bounds is not None else (lo, hi)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise InvalidInputError(
            f"quadrature needs finite bounds a < b (got {a}, {b}); "
            f"pass bounds for unbounded domains")
    xs = np.linspace(a, b, points)
    inside = (xs > lo) & (xs < hi)
    values = np.zeros_like(xs)
    values[inside] = psi(xs[inside])
    return xs, values


def _sign_fixed_scale(values: np.ndarray, norm: float) -> float:
    nonzero = np.flatnonzero(values)
    sign = 1.0 if nonzero.size == 0 or values[nonzero[0]] > 0 else -1.0
    return sign / norm


def normalize(psi: WaveFunction, bounds: Optional[Tuple[float, float]] = None,
              points: int = 4001,
              samples: Optional[np.ndarray] = None) -> Tuple[WaveFunction, float]:
    """
    Scale psi to unit Simpson L2 norm; the first interior sample is positive.

    With `samples` the norm is taken over exactly those abscissae.
    Returns the scaled function and the original norm.
    """
    if samples is not None:
        xs = np.asarray(samples, dtype=float)
        values = psi(xs)
    else:
        xs, values = quadrature_grid(psi, bounds, points)
    norm = math.sqrt(float(simpson(values * values, x=xs)))
    if not math.isfinite(norm) or norm < 1e-300:
        raise DegenerateFunctionError(f"cannot normalize: norm is {norm}")
    return psi.scaled(_sign_fixed_scale(values, norm)), norm


def inner_product(left: WaveFunction, right: WaveFunction,
                  bounds: Optional[Tuple[float, float]] = None,
                  points: int = 4001) -> float:
    xs, u = quadrature_grid(left, bounds, points)
    _, v = quadrature_grid(right, bounds, points)
    return float(simpson(u * v, x=xs))


def ladder_norm_quadrature(params: ModelParams, psi: WaveFunction, direction: Direction,
                           bounds: Optional[Tuple[float, float]] = None,
                           points: int = 4001) -> float:
    """||J+ psi||^2 or ||J- psi||^2 by Simpson quadrature; psi should be normalized."""
    state = LadderState(psi, params.j)
    moved = j_plus(state, params.family, params.g) if direction is Direction.UP \
        else j_minus(state, params.family, params.g)
    xs, values = quadrature_grid(moved.psi, bounds, points)
    return float(simpson(values * values, x=xs))
