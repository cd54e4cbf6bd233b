"""Periodic grid management and Fourier machinery.

Conventions used throughout the package:

* Grids are uniform and periodic on [x_min, x_max); the right endpoint is
  excluded.  N must be even.
* The discrete transform is normalized with 1/N on the forward side, so a
  pure mode exp(i*m*theta) has coefficient 1 at index m.  Coefficients are
  stored in centered order k = -N/2 .. N/2-1.
* The line (continuous) Fourier transform carries the complex prefactor
  (2*i*pi)^(-1/2) = (2*pi)^(-1/2) * exp(-i*pi/4); its inverse uses the
  conjugate kernel and prefactor so that the round trip is the identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "WaveField",
    "SpectrumField",
    "forward_dft",
    "inverse_dft",
    "physical_wavenumbers",
    "fft_order_wavenumbers",
    "l2_norm",
    "sup_norm",
    "boundary_mass_fraction",
    "continuous_fourier",
    "continuous_inverse_fourier",
    "DomainTooSmallWarning",
]

# Principal branch of (2*i*pi)^(+-1/2) divided by sqrt(2*pi): a pure phase.
FOURIER_PREFACTOR = np.exp(-0.25j * np.pi) / np.sqrt(2.0 * np.pi)
INVERSE_FOURIER_PREFACTOR = np.exp(0.25j * np.pi) / np.sqrt(2.0 * np.pi)

# Memory cap for the outer-product quadrature in the continuous transforms.
_QUAD_BLOCK = 1 << 21


class DomainTooSmallWarning(UserWarning):
    """Raised as a warning when data carries non-negligible boundary mass."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [x_min, x_max) with an even number of points."""

    x_min: float
    x_max: float
    num_points: int

    def __post_init__(self):
        if self.num_points < 4 or self.num_points % 2 != 0:
            raise ValueError(f"num_points must be even and >= 4, got {self.num_points}")
        if not self.x_max > self.x_min:
            raise ValueError(f"need x_max > x_min, got [{self.x_min}, {self.x_max})")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.num_points

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.x_min + self.x_max)

    def nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.num_points)

    def wavenumber_indices(self) -> np.ndarray:
        """Integer mode indices in centered order, k = -N/2 .. N/2-1."""
        half = self.num_points // 2
        return np.arange(-half, half)


@dataclass
class WaveField:
    """Complex samples of a wave function on a periodic grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.num_points,):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid size "
                f"{self.grid.num_points}"
            )

    def copy(self) -> "WaveField":
        return WaveField(self.grid, self.values.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values.view(np.float64))))


@dataclass
class SpectrumField:
    """Mode coefficients in centered order, index k = -N/2 .. N/2-1."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (self.grid.num_points,):
            raise ValueError(
                f"coeffs shape {self.coeffs.shape} does not match grid size "
                f"{self.grid.num_points}"
            )

    def coeff(self, k: int) -> complex:
        """Coefficient of mode k (centered index)."""
        half = self.grid.num_points // 2
        if not -half <= k < half:
            raise IndexError(f"mode {k} outside [-N/2, N/2) for N={self.grid.num_points}")
        return complex(self.coeffs[k + half])


def forward_dft(field: WaveField) -> SpectrumField:
    """Forward transform with 1/N normalization and centered index order.

    coeffs[k] = (1/N) * sum_j values[j] * exp(-i*k*theta_j) where
    theta_j = 2*pi*(x_j - x_min)/L, so exp(i*m*theta) maps to a unit
    coefficient at index m.
    """
    n = field.grid.num_points
    coeffs = np.fft.fftshift(np.fft.fft(field.values)) / n
    return SpectrumField(field.grid, coeffs)


def inverse_dft(spec: SpectrumField) -> WaveField:
    """Exact inverse of :func:`forward_dft` (up to round-off)."""
    n = spec.grid.num_points
    values = np.fft.ifft(np.fft.ifftshift(spec.coeffs)) * n
    return WaveField(spec.grid, values)


def physical_wavenumbers(grid: GridSpec) -> np.ndarray:
    """xi_k = 2*pi*k/L in centered order; equals k itself on a 2*pi domain."""
    return 2.0 * np.pi * grid.wavenumber_indices() / grid.length


def fft_order_wavenumbers(grid: GridSpec) -> np.ndarray:
    """Same wavenumbers in the FFT library's natural (unshifted) order."""
    return 2.0 * np.pi * np.fft.fftfreq(grid.num_points, d=grid.dx)


def l2_norm(field: WaveField) -> float:
    """Rectangle-rule L2 norm, spectrally exact for band-limited data."""
    v = field.values
    return float(np.sqrt(np.sum(v.real**2 + v.imag**2) * field.grid.dx))


def sup_norm(field: WaveField) -> float:
    return float(np.max(np.abs(field.values)))


def boundary_mass_fraction(field: WaveField, fraction: float = 0.05) -> float:
    """Fraction of |u|^2 mass lying in the outer `fraction` of the domain.

    The outer region is split evenly between the two ends.  Used to decide
    whether periodic quadrature is a faithful stand-in for a line integral,
    and by the scattering module to detect wrap-around contamination.
    """
    n = field.grid.num_points
    edge = max(1, int(round(0.5 * fraction * n)))
    density = field.values.real**2 + field.values.imag**2
    total = float(np.sum(density))
    if total == 0.0:
        return 0.0
    outer = float(np.sum(density[:edge]) + np.sum(density[-edge:]))
    return outer / total


def _check_decay(field: WaveField, warn_tol: float) -> None:
    frac = boundary_mass_fraction(field)
    if frac > warn_tol:
        warnings.warn(
            f"boundary mass fraction {frac:.3e} exceeds {warn_tol:.1e}; "
            "domain may be too small for a line-integral quadrature",
            DomainTooSmallWarning,
            stacklevel=3,
        )


def continuous_fourier(
    field: WaveField, xi: np.ndarray, warn_tol: float = 1e-10
) -> np.ndarray:
    """Line Fourier transform (2*i*pi)^(-1/2) * integral(e^{-i*x*xi} u(x) dx).

    Rectangle-rule quadrature over the grid, valid when the data decays at
    the domain ends; warns otherwise.  Evaluates at arbitrary frequencies.
    """
    _check_decay(field, warn_tol)
    return FOURIER_PREFACTOR * _oscillatory_quadrature(field, np.asarray(xi, float), -1.0)


def continuous_inverse_fourier(
    field: WaveField, x: np.ndarray, warn_tol: float = 1e-10
) -> np.ndarray:
    """Inverse line transform: conjugate kernel and prefactor (2*i*pi)^(+1/2)/(2*pi).

    The input samples are read as a function of frequency on the field's
    grid; composing with :func:`continuous_fourier` gives the identity on
    decaying data.
    """
    _check_decay(field, warn_tol)
    return INVERSE_FOURIER_PREFACTOR * _oscillatory_quadrature(field, np.asarray(x, float), +1.0)


def _oscillatory_quadrature(field: WaveField, targets: np.ndarray, sign: float) -> np.ndarray:
    """sum_j exp(sign*i*t*x_j) * u_j * dx for each target t, in blocks."""
    nodes = field.grid.nodes()
    values = field.values * field.grid.dx
    out = np.empty(targets.shape, dtype=np.complex128)
    flat_t = targets.ravel()
    flat_out = out.ravel()
    block = max(1, _QUAD_BLOCK // max(1, nodes.size))
    for start in range(0, flat_t.size, block):
        t = flat_t[start : start + block]
        kernel = np.exp((sign * 1j) * np.outer(t, nodes))
        flat_out[start : start + block] = kernel @ values
    return out
