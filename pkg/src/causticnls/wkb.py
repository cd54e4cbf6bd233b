"""Closed-form geometric-optics references and caustic criticality theory.

Covers the quadratic-phase focusing example (exact eikonal/transport
solution, valid through the focus via the principal branch, which carries
the Maslov factor), the small-eps asymptotic profile used to validate free
runs, the criticality exponent for focal and cusp geometries, regime
classification, cusp caustic-set membership, and the error-scaling
exponents for the weakly nonlinear comparison of free vs nonlinear flows.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from causticnls.spectral import DomainTooSmallWarning, GridSpec, WaveField

__all__ = [
    "CausticGeometry",
    "InitialProfile",
    "RegimeClass",
    "AtCausticError",
    "TooCloseToFocusError",
    "UnsupportedDimensionError",
    "HypothesisViolatedError",
    "sample_initial",
    "quadratic_wkb",
    "focal_asymptotic",
    "boundary_layer_exponents",
    "criticality_index",
    "classify_regime",
    "cusp_caustic_contains",
    "lemma3_error_prediction",
]


class AtCausticError(ValueError):
    """The requested time sits on the caustic where the profile is singular."""


class TooCloseToFocusError(ValueError):
    """Inside the excluded window around the focus time t=1."""


class UnsupportedDimensionError(ValueError):
    """Geometry/dimension combination outside the supported table."""


class HypothesisViolatedError(ValueError):
    """Parameters violate the hypothesis of the error-scaling estimate."""


class CausticGeometry(Enum):
    # Boundary-layer exponents: amplitude eps^(-ell) over a layer of size
    # eps^k around the caustic.
    FOCAL_POINT = "focal_point"
    CUSP_1D = "cusp_1d"


class RegimeClass(Enum):
    LINEAR_CAUSTIC_LINEAR_PROPAGATION = "linear caustic, linear propagation"
    LINEAR_CAUSTIC_NONLINEAR_PROPAGATION = "linear caustic, nonlinear propagation"
    NONLINEAR_CAUSTIC_LINEAR_PROPAGATION = "nonlinear caustic, linear propagation"
    NONLINEAR_CAUSTIC_NONLINEAR_PROPAGATION = "nonlinear caustic, nonlinear propagation"
    SUPERCRITICAL = "supercritical caustic"


@dataclass(frozen=True)
class InitialProfile:
    """Slow envelope and initial phase, both functions of x - center.

    The envelope must decay rapidly (Schwartz-class surrogate): negligible
    at the domain ends of any grid it is sampled on.
    """

    envelope: Callable[[np.ndarray], np.ndarray]
    phase: Callable[[np.ndarray], np.ndarray]
    center: float = 0.0


def sample_initial(grid: GridSpec, profile: InitialProfile, epsilon: float) -> WaveField:
    """u(0,x) = envelope(x-c) * exp(i*phase(x-c)/eps) on the grid."""
    xc = grid.nodes() - profile.center
    values = np.asarray(profile.envelope(xc), dtype=np.complex128) * np.exp(
        (1j / epsilon) * np.asarray(profile.phase(xc), dtype=float)
    )
    return WaveField(grid, values)


def quadratic_wkb(
    t: float, x: np.ndarray, profile: InitialProfile, n: int = 1
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact eikonal/transport solution for the quadratic initial phase.

    For phase(x) = -|x-c|^2/2 the rays focus at t=1 and

        phase(t, x) = |x-c|^2 / (2*(t-1)),
        amplitude(t, x) = (1-t)^(-n/2) * envelope((x-c)/(1-t)).

    The amplitude uses the principal branch of (1-t)^(-n/2), which for t>1
    equals exp(-i*n*pi/2) * (t-1)^(-n/2): the Maslov phase shift across the
    focus comes out automatically.
    """
    if abs(t - 1.0) < 1e-12:
        raise AtCausticError(f"t={t} is on the focus; profile is singular there")
    xc = np.asarray(x, dtype=float) - profile.center
    phase = xc * xc / (2.0 * (t - 1.0))
    scale = np.complex128(1.0 - t) ** (-0.5 * n)
    amplitude = scale * np.asarray(profile.envelope(xc / (1.0 - t)), dtype=np.complex128)
    return phase, amplitude


def focal_asymptotic(
    grid: GridSpec,
    t: float,
    epsilon: float,
    profile: InitialProfile,
    n: int = 1,
    window: float = 0.05,
) -> WaveField:
    """Small-eps profile amplitude(t,x) * exp(i*phase(t,x)/eps) on the grid.

    Valid away from the focus; the excluded window |t-1| <= window is
    configurable (the profile scale (1-t)^(-n/2) is meaningless at the
    focus itself).  Warns when the transported envelope no longer decays
    at the domain ends.
    """
    if abs(t - 1.0) <= window:
        raise TooCloseToFocusError(
            f"t={t} is within the excluded window {window} around the focus"
        )
    phase, amplitude = quadratic_wkb(t, grid.nodes(), profile, n)
    values = amplitude * np.exp((1j / epsilon) * phase)
    peak = float(np.max(np.abs(amplitude)))
    edge = float(max(np.max(np.abs(amplitude[:2])), np.max(np.abs(amplitude[-2:]))))
    if peak > 0 and edge > 1e-9 * peak:
        warnings.warn(
            f"transported envelope reaches the domain boundary "
            f"(edge/peak = {edge / peak:.2e}); asymptotic profile unreliable",
            DomainTooSmallWarning,
            stacklevel=2,
        )
    return WaveField(grid, values)


def boundary_layer_exponents(geom: CausticGeometry, n: int = 1) -> Tuple[float, float]:
    """(k, ell): caustic layer size eps^k, amplitude eps^(-ell)."""
    if geom is CausticGeometry.FOCAL_POINT:
        return 1.0, 0.5 * n
    if geom is CausticGeometry.CUSP_1D:
        if n != 1:
            raise UnsupportedDimensionError("cusp exponents are tabulated for n=1 only")
        return 2.0 / 3.0, 1.0 / 3.0
    raise ValueError(f"unknown geometry {geom}")


def criticality_index(geom: CausticGeometry, n: int, sigma: float) -> float:
    """alpha_c = 1 + 2*ell*sigma - k: n*sigma for a focal point,
    (2*sigma+1)/3 for the 1-D cusp."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if n < 1:
        raise UnsupportedDimensionError(f"n must be >= 1, got {n}")
    k, ell = boundary_layer_exponents(geom, n)
    return 1.0 + 2.0 * ell * sigma - k


def classify_regime(
    alpha: float, geom: CausticGeometry, n: int, sigma: float
) -> RegimeClass:
    """Compare alpha against the propagation threshold 1 and against alpha_c.

    alpha > 1: the nonlinearity does not enter the transport equation
    (linear propagation); alpha = 1 makes propagation nonlinear.  Above
    alpha_c caustic effects are linear, at alpha_c nonlinear, and
    1 <= alpha < alpha_c is the supercritical range where the weak-coupling
    heuristics break down.
    """
    if alpha < 1.0:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    alpha_c = criticality_index(geom, n, sigma)
    nonlinear_propagation = math.isclose(alpha, 1.0, rel_tol=1e-12, abs_tol=1e-12)
    if math.isclose(alpha, alpha_c, rel_tol=1e-12, abs_tol=1e-12):
        if nonlinear_propagation:
            return RegimeClass.NONLINEAR_CAUSTIC_NONLINEAR_PROPAGATION
        return RegimeClass.NONLINEAR_CAUSTIC_LINEAR_PROPAGATION
    if alpha > alpha_c:
        if nonlinear_propagation:
            return RegimeClass.LINEAR_CAUSTIC_NONLINEAR_PROPAGATION
        return RegimeClass.LINEAR_CAUSTIC_LINEAR_PROPAGATION
    return RegimeClass.SUPERCRITICAL


def cusp_caustic_contains(
    t: float, x: float, tol: float = 1e-9, y_max: float = 4.0 * math.pi
) -> bool:
    """Membership test for the cusp caustic of the cosine initial phase.

    (t, x) is on the caustic iff some y solves (y-x)/t = sin(y) and
    1/t = cos(y).  All branches y = +-arccos(1/t) + 2*pi*m with |y| <= y_max
    are scanned (the initial phase is 2*pi-periodic).  No caustic exists
    before t=1.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if t < 1.0:
        return False
    y0 = math.acos(1.0 / t)
    m_range = int(math.ceil(y_max / (2.0 * math.pi))) + 1
    for m in range(-m_range, m_range + 1):
        for y in (y0 + 2.0 * math.pi * m, -y0 + 2.0 * math.pi * m):
            if abs(y) > y_max:
                continue
            if abs(y - t * math.sin(y) - x) <= tol:
                return True
    return False


def lemma3_error_prediction(alpha: float, sigma: float) -> Tuple[float, float]:
    """Predicted eps-exponents of ||u - v||_L2: (sup over [0,2], at t=2).

    Requires alpha > max(1, sigma); returns (alpha - sigma,
    min(1, alpha - sigma)).
    """
    if not alpha > max(1.0, sigma):
        raise HypothesisViolatedError(
            f"need alpha > max(1, sigma); got alpha={alpha}, sigma={sigma}"
        )
    return alpha - sigma, min(1.0, alpha - sigma)
