"""
Potentials, superpotential profiles and the scalar constants of the four
factorized Hamiltonians H = -d^2/dx^2 + V(x).

Each family is factorized as H = A-(j) A+(j) + eps(j) with
A+-(j) = +-d/dx - j f(x) + g/j. All functions accept a float or a numpy
array for x and return the same shape.
"""

import math
from typing import Union

import numpy as np

from .errors import InvalidInputError, SingularParameterError
from .models import CommutatorConstant, Family, ModelParams

ArrayLike = Union[float, np.ndarray]


def check_domain(family: Family, x: ArrayLike) -> np.ndarray:
    """Raise InvalidInputError unless every x lies in the open natural domain."""
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise InvalidInputError(f"x must be finite for {family.value} ({family.domain_text})")
    if family is Family.ROSEN_MORSE:
        return xs
    lo, hi = family.domain
    if not (np.all(xs > lo) and np.all(xs < hi)):
        raise InvalidInputError(
            f"x outside the {family.value} domain: {family.domain_text}")
    return xs


def _shape(xs: np.ndarray, values: np.ndarray) -> ArrayLike:
    return float(values) if xs.ndim == 0 else values


def superpotential_profile(family: Family, x: ArrayLike) -> ArrayLike:
    """f(x) = 1/x, cot x, coth x or tanh x."""
    xs = check_domain(family, x)
    if family is Family.FLAT:
        f = 1.0 / xs
    elif family is Family.SPHERICAL:
        f = np.cos(xs) / np.sin(xs)
    elif family is Family.HYPERBOLIC:
        f = 1.0 / np.tanh(xs)
    else:
        f = np.tanh(xs)
    return _shape(xs, f)


def potential(params: ModelParams, x: ArrayLike) -> ArrayLike:
    """V(x) for the family, evaluated at the state's j."""
    family = params.family
    xs = check_domain(family, x)
    jj = params.j * (params.j - 1.0)
    g = params.g
    if family is Family.FLAT:
        v = jj / xs**2 - 2.0 * g / xs
    elif family is Family.SPHERICAL:
        v = jj / np.sin(xs)**2 - 2.0 * g * np.cos(xs) / np.sin(xs)
    elif family is Family.HYPERBOLIC:
        v = jj / np.sinh(xs)**2 - 2.0 * g / np.tanh(xs)
    else:
        v = -jj / np.cosh(xs)**2 - 2.0 * g * np.tanh(xs)
    return _shape(xs, v)


def _require_nonzero(j: float, what: str) -> None:
    if j == 0:
        raise SingularParameterError(f"{what} is singular at J3 = 0 (1/J3 undefined)")


def factorization_energy(params: ModelParams) -> float:
    """The constant eps(j) in H = A-(j) A+(j) + eps(j)."""
    j, g = params.j, params.g
    _require_nonzero(j, "factorization energy")
    tail = -g * g / (j * j)
    if params.family is Family.FLAT:
        return tail
    if params.family is Family.SPHERICAL:
        return j * j + tail
    return -j * j + tail


def commutator_constant(params: ModelParams) -> CommutatorConstant:
    """c(j, g) = eps(j) - eps(j - 1): [J+, J-] on a J3 = j eigenspace."""
    j = params.j
    if j == 0 or j == 1:
        raise SingularParameterError(
            f"commutator constant undefined at j={j} (1/J3 or 1/(J3 - 1) singular)")
    below = params.with_j(j - 1.0)
    return CommutatorConstant(factorization_energy(params) - factorization_energy(below))


def continuum_threshold(params: ModelParams) -> float:
    """Asymptotic value of V below which bound states live."""
    if params.family is Family.FLAT:
        return 0.0
    if params.family is Family.SPHERICAL:
        return math.inf
    return -2.0 * params.g

