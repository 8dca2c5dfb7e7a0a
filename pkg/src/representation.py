"""
Representation theory of the potential algebras.

Ladder norms, classification of representations by their label nu, and
bound-state spectra read off from ladder termination. Comparisons against
sqrt(g) are done exactly on Fractions (every finite float is a rational),
so boundary cases such as nu^2 == g are decided without rounding.
"""

import math
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .errors import (InvalidInputError, NoBoundStateError, QuantizationError)
from .models import (
    Direction, Family, HalfInteger, Mode, ModelParams, RepClass, RepKind,
    SpectrumLine, SpectrumReport, Truncation, Window,
)
from .potentials import factorization_energy

# One-dimensional special root is irrational in general; float j is matched to it
SPECIAL_ROOT_RTOL = 1e-12

# Leading orbit entries reported for infinite representations
ORBIT_PREVIEW = 4


def _frac(value: Union[float, Fraction, HalfInteger]) -> Fraction:
    if isinstance(value, HalfInteger):
        return value.value()
    return Fraction(value)


def _below_sqrt(t: Fraction, g: Fraction) -> bool:
    """t < sqrt(g), exactly."""
    return t < 0 or t * t < g


def _above_sqrt(t: Fraction, g: Fraction) -> bool:
    """t > sqrt(g), exactly."""
    return t > 0 and t * t > g


def _j_fraction(params: ModelParams) -> Fraction:
    return params.j_exact.value() if params.j_exact is not None else Fraction(params.j)


def ladder_norm_sq(params: ModelParams, energy: float, direction: Direction) -> float:
    """
    Squared norm of J+|E,j> (up) or J-|E,j> (down).

    Both reduce to E - eps(j) and E - eps(j - 1). Negative values mean no
    unitary representation contains (E, j).
    """
    if direction is Direction.UP:
        return energy - factorization_energy(params)
    return energy - factorization_energy(params.with_j(params.j - 1.0))


def nu_max(g: Union[float, Fraction]) -> Optional[HalfInteger]:
    """Largest half-odd-integer nu with nu < sqrt(g), or None when g <= 1/4."""
    four_g = 4 * _frac(g)
    if four_g <= 1:
        return None
    t = math.isqrt(math.floor(four_g))
    while (t + 1) ** 2 < four_g:
        t += 1
    while t * t >= four_g:
        t -= 1
    if t % 2 == 0:
        t -= 1
    return HalfInteger(t) if t >= 1 else None


def one_dim_special_root(g: float) -> Optional[Tuple[float, float]]:
    """
    Root 1/2 - sqrt(1/4 - g) and its j -> 1 - j mirror, for 0 < g < 1/4.

    Only the first root is a representation; the mirror is reported as its
    partner.
    """
    if not 0 < g < 0.25:
        return None
    root = 0.5 - math.sqrt(0.25 - g)
    return (root, 1.0 - root)


def is_special_root(j: float, g: float) -> bool:
    roots = one_dim_special_root(g)
    if roots is None:
        return False
    return abs(j - roots[0]) <= SPECIAL_ROOT_RTOL * max(1.0, abs(roots[0]))


def excluded_bands(g: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Closed bands [-sqrt g, 1 - sqrt g] and [sqrt g, 1 + sqrt g] with no bound state."""
    s = math.sqrt(g)
    return ((-s, 1.0 - s), (s, 1.0 + s))


def _finite_orbit(nu: HalfInteger) -> Tuple[float, ...]:
    return tuple(float(nu) - k for k in range(nu.twice_value))


def classify(params: ModelParams, nu: Union[float, Fraction, HalfInteger]) -> RepClass:
    """Classify the representation with label nu for params.family at params.g."""
    params.validate()
    exact = nu if isinstance(nu, HalfInteger) else HalfInteger.from_number(_frac(nu))
    nu_value = float(nu)
    at = params.with_j(nu_value)

    if params.family in (Family.FLAT, Family.SPHERICAL):
        if exact is None:
            return RepClass(RepKind.EXCLUDED, nu_value, 0,
                            reason="nu is not a half-integer; the ladder never terminates")
        if not exact.is_half_odd():
            return RepClass(RepKind.EXCLUDED, nu_value, 0,
                            reason="the spectrum of J3 contains j=0 which makes 1/J3 ill-defined")
        if exact.twice_value < 1:
            return RepClass(RepKind.EXCLUDED, nu_value, 0,
                            reason="highest weight must be >= 1/2 (mirror of 1 - nu)")
        return RepClass(RepKind.FINITE_DIM, nu_value, exact.twice_value,
                        orbit=_finite_orbit(exact),
                        energy=factorization_energy(at))

    g = params.g_fraction
    s = math.sqrt(params.g)
    nu_frac = _frac(nu)

    if is_special_root(nu_value, params.g):
        return RepClass(RepKind.ONE_DIM_SPECIAL, nu_value, 1, orbit=(nu_value,),
                        energy=factorization_energy(at),
                        reason="both ladder norms vanish at a single j")

    if nu_frac < 0 and _above_sqrt(-nu_frac, g):
        return RepClass(RepKind.INFINITE_LOWERING, nu_value, None,
                        orbit=tuple(nu_value - k for k in range(ORBIT_PREVIEW)),
                        orbit_unbounded="below",
                        energy=factorization_energy(at))

    if _above_sqrt(nu_frac - 1, g):
        return RepClass(RepKind.INFINITE_RAISING, nu_value, None,
                        orbit=tuple(nu_value + k for k in range(ORBIT_PREVIEW)),
                        orbit_unbounded="above",
                        energy=factorization_energy(params.with_j(nu_value - 1.0)))

    # open window (1 - sqrt g, sqrt g)
    if _below_sqrt(nu_frac, g) and _below_sqrt(1 - nu_frac, g):
        if exact is None or not exact.is_half_odd():
            return RepClass(RepKind.EXCLUDED, nu_value, 0,
                            reason="nu in (1 - sqrt g, sqrt g) but not a half-odd-integer")
        if exact.twice_value < 1:
            return RepClass(RepKind.EXCLUDED, nu_value, 0,
                            reason="highest weight must be >= 1/2 (mirror of 1 - nu)")
        return RepClass(RepKind.FINITE_DIM, nu_value, exact.twice_value,
                        orbit=_finite_orbit(exact),
                        energy=factorization_energy(at))

    bands = excluded_bands(params.g)
    return RepClass(RepKind.EXCLUDED, nu_value, 0,
                    reason=(f"no bound state in this region "
                            f"[{bands[0][0]:.6g}, {bands[0][1]:.6g}] U "
                            f"[{s:.6g}, {bands[1][1]:.6g}]"))


def canonical_representations(family: Family, g: float, count: int = 3) -> List[RepClass]:
    """
    Default listing: every finite representation up to nu_max plus the
    one-dimensional special one (hyperbolic/Rosen-Morse), or the first
    `count` finite ones (flat/spherical).
    """
    params = ModelParams.create(family, 0.5, g).validate()
    if family in (Family.FLAT, Family.SPHERICAL):
        return [classify(params, HalfInteger(2 * k + 1)) for k in range(max(0, count))]

    reps = []
    roots = one_dim_special_root(g)
    if roots is not None:
        reps.append(classify(params, roots[0]))
    top = nu_max(params.g_fraction)
    if top is not None:
        reps.extend(classify(params, HalfInteger(t))
                    for t in range(1, top.twice_value + 1, 2))
    return reps


def bound_state_window(params: ModelParams) -> Window:
    """Open j interval on which the potential has an interior minimum."""
    params.validate()
    r = math.sqrt(params.g + 0.25)
    if params.family is Family.HYPERBOLIC:
        return Window(0.5 - r, 0.5 + r, "potential has an interior minimum")
    if params.family is Family.ROSEN_MORSE:
        return Window(0.5 + r, math.inf, "potential has an interior minimum")
    if params.family is Family.FLAT:
        return Window(-math.inf, math.inf,
                      "normalizability, not a potential minimum, is the binding constraint")
    return Window(-math.inf, math.inf, "compact domain; spectrum always discrete")


def _line(params: ModelParams, n: int, label: float, eps_at: float) -> SpectrumLine:
    return SpectrumLine(n=n, energy=factorization_energy(params.with_j(eps_at)), j_end=label)


def _require_half_odd(params: ModelParams) -> HalfInteger:
    j = params.j_exact
    if j is None or not j.is_half_odd():
        raise QuantizationError(
            f"strict mode needs an exact half-odd-integer j (got j={params.j}); "
            f"pass it as 'p/2' or use --mode extended")
    if j.twice_value < 1:
        raise QuantizationError(f"strict mode needs j >= 1/2 (got j={j})")
    return j


def spectrum(params: ModelParams, n_max: Optional[int] = None,
             mode: Mode = Mode.STRICT) -> SpectrumReport:
    """Bound-state energies from ladder termination."""
    params.validate()
    if n_max is not None and n_max < 0:
        raise InvalidInputError(f"n_max must be >= 0 (got {n_max})")
    family = params.family
    quantized = params.j_exact is not None and params.j_exact.is_half_odd()

    if family in (Family.FLAT, Family.SPHERICAL):
        if n_max is None:
            raise InvalidInputError(f"{family.value} spectrum is infinite; n_max is required")
        if mode is Mode.STRICT:
            _require_half_odd(params)
        elif params.j < 0.5:
            raise NoBoundStateError(f"{family.value} extended mode needs j >= 1/2",
                                    window="[1/2, inf)")
        lines = tuple(_line(params, n, params.j + n, params.j + n) for n in range(n_max + 1))
        return _report(params, lines, Truncation.CAPPED, n_max, mode, quantized)

    if family is Family.HYPERBOLIC:
        return _hyperbolic_spectrum(params, n_max, mode, quantized)
    return _rosen_morse_spectrum(params, n_max, mode)


def _report(params: ModelParams, lines, truncation: Truncation, n_top: int,
            mode: Mode, quantized: bool, warnings: Tuple[str, ...] = ()) -> SpectrumReport:
    extension = mode is Mode.EXTENDED and not quantized
    if extension:
        warnings = warnings + (
            "extension: closed-form energies applied beyond half-integer quantization",)
    return SpectrumReport(params=params, lines=lines, truncation=truncation, n_top=n_top,
                          mode=mode, extension=extension, warnings=warnings)


def _cap(lines: Tuple[SpectrumLine, ...], n_top: int, n_max: Optional[int]):
    if n_max is not None and n_max < n_top:
        return lines[:n_max + 1], Truncation.CAPPED, n_max
    return lines, Truncation.FINITE, n_top


def _hyperbolic_spectrum(params: ModelParams, n_max: Optional[int], mode: Mode,
                         quantized: bool) -> SpectrumReport:
    g = params.g_fraction
    window = f"[1/2, {math.sqrt(params.g):.6g})"

    if is_special_root(params.j, params.g):
        line = _line(params, 0, params.j, params.j)
        return _report(params, (line,), Truncation.FINITE, 0, mode, True,
                       ("one-dimensional special representation (g < 1/4)",))

    if mode is Mode.STRICT:
        j = _require_half_odd(params)
        if g <= Fraction(1, 4):
            raise NoBoundStateError(
                "no finite-dimensional representation for g <= 1/4 unless j is the "
                "one-dimensional special root", window=_special_window(params.g))
        if not _below_sqrt(j.value(), g):
            raise NoBoundStateError("hyperbolic bound states need j < sqrt(g)", window=window)
        top = nu_max(g)
        n_top = (top.twice_value - j.twice_value) // 2
    else:
        j_frac = _j_fraction(params)
        if params.j < 0.5 or not _below_sqrt(j_frac, g):
            raise NoBoundStateError("hyperbolic extended mode needs 1/2 <= j < sqrt(g)",
                                    window=window)
        n_top = 0
        while _below_sqrt(j_frac + n_top + 1, g):
            n_top += 1

    lines = tuple(_line(params, n, params.j + n, params.j + n) for n in range(n_top + 1))
    lines, truncation, n_top = _cap(lines, n_top, n_max)
    return _report(params, lines, truncation, n_top, mode, quantized)


def _special_window(g: float) -> str:
    roots = one_dim_special_root(g)
    if roots is None:
        return "none"
    return f"j = {roots[0]:.12g}"


def _rosen_morse_spectrum(params: ModelParams, n_max: Optional[int],
                          mode: Mode) -> SpectrumReport:
    g = params.g_fraction
    j_frac = _j_fraction(params)
    if not _above_sqrt(j_frac - 1, g):
        raise NoBoundStateError("Rosen-Morse bound states need j > 1 + sqrt(g)",
                                window=f"({1 + math.sqrt(params.g):.6g}, inf)")
    n_top = 0
    while _above_sqrt(j_frac - n_top - 2, g):
        n_top += 1
    lines = tuple(_line(params, n, params.j - n, params.j - n - 1.0) for n in range(n_top + 1))
    lines, truncation, n_top = _cap(lines, n_top, n_max)
    # Rosen-Morse j is never quantized; the extension marker does not apply
    return _report(params, lines, truncation, n_top, mode, True)
