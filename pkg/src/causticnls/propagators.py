"""Split-step time integrators for i*eps*u_t + (eps^2/2)*u_xx = coupling*eps^alpha*|u|^(2*sigma)*u.

Both substeps are exact flows: the free step is a Fourier multiplier
exp(-i*eps*xi^2*t/2), and the nonlinear step is a pointwise phase rotation
(|u| is conserved along it), so the only time-discretization error is the
splitting error.  Lie is first order, Strang second.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Callable, Optional

import numpy as np

from causticnls import kernels
from causticnls.spectral import GridSpec, WaveField, fft_order_wavenumbers, l2_norm

if TYPE_CHECKING:
    from causticnls.observables import ObservableRecord

__all__ = [
    "SemiclassicalParams",
    "SplitScheme",
    "RunConfig",
    "BlowUpError",
    "free_step",
    "free_step_is_unitary_check",
    "nonlinear_step",
    "lie_evolve",
    "strang_evolve",
    "evolve",
    "evolve_with_snapshots",
]

# Evolution aborts when the sup norm exceeds this multiple of its t=0 value.
BLOWUP_GUARD_FACTOR = 1e6


class BlowUpError(RuntimeError):
    """The field left the guarded amplitude range (or went non-finite)."""


class SplitScheme(Enum):
    LIE = "lie"
    STRANG = "strang"


@dataclass(frozen=True)
class SemiclassicalParams:
    """PDE parameters: i*eps*u_t + (eps^2/2)*u_xx = coupling*eps^alpha*|u|^(2*sigma)*u.

    coupling > 0 is defocusing, < 0 focusing (may blow up), 0 free.
    """

    epsilon: float
    sigma: float
    alpha: float
    coupling: float = 1.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")

    @property
    def phase_coefficient(self) -> float:
        """Coefficient of |u|^(2*sigma)*t in the exact nonlinear phase."""
        return self.coupling * self.epsilon ** (self.alpha - 1.0)


@dataclass(frozen=True)
class RunConfig:
    params: SemiclassicalParams
    scheme: SplitScheme
    t_final: float
    dt: float
    snapshot_every: int = 1

    def __post_init__(self):
        if self.t_final < 0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be >= 1, got {self.snapshot_every}")
        self.num_steps  # validates divisibility

    @property
    def num_steps(self) -> int:
        ratio = self.t_final / self.dt
        n = int(round(ratio))
        # Tolerance is relative: for tens of thousands of steps a decimal dt
        # cannot hit an integer ratio to 1e-9 absolute in float64.
        if abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
            raise ValueError(
                f"t_final/dt = {ratio!r} is not a whole number of steps"
            )
        return n


def _free_multiplier(grid: GridSpec, t: float, epsilon: float) -> np.ndarray:
    xi = fft_order_wavenumbers(grid)
    return np.exp((-0.5j * epsilon * t) * xi * xi)


def free_step(field: WaveField, t: float, epsilon: float) -> WaveField:
    """Exact free evolution over time t (t may be negative).

    Multiplies the spectrum by exp(-i*eps*xi^2*t/2); solves
    i*eps*u_t + (eps^2/2)*u_xx = 0 exactly for band-limited data.
    """
    spec = np.fft.fft(field.values)
    spec *= _free_multiplier(field.grid, t, epsilon)
    return WaveField(field.grid, np.fft.ifft(spec))


def free_step_is_unitary_check(field: WaveField, t: float, epsilon: float) -> float:
    """Relative L2-norm drift of one free step; contract: <= 1e-12."""
    before = l2_norm(field)
    if before == 0.0:
        return 0.0
    after = l2_norm(free_step(field, t, epsilon))
    return abs(after - before) / before


def nonlinear_step(field: WaveField, t: float, params: SemiclassicalParams) -> WaveField:
    """Exact flow of i*eps*u_t = coupling*eps^alpha*|u|^(2*sigma)*u over time t.

    Pointwise u <- u * exp(-i*coupling*eps^(alpha-1)*|u|^(2*sigma)*t); the
    modulus is unchanged.
    """
    values = field.values.copy()
    kernels.nonlinear_phase_inplace(values, params.phase_coefficient * t, params.sigma)
    return WaveField(field.grid, values)


def _evolve(
    field: WaveField,
    cfg: RunConfig,
    emit: Optional[Callable[[int, float, np.ndarray], None]] = None,
) -> WaveField:
    params = cfg.params
    n = cfg.num_steps
    u = field.values.copy()
    if emit is not None:
        emit(0, 0.0, u)
    if n == 0:
        return WaveField(field.grid, u)

    mult = _free_multiplier(field.grid, cfg.dt, params.epsilon)
    sigma = params.sigma
    coef = params.phase_coefficient * cfg.dt
    guard = BLOWUP_GUARD_FACTOR * float(np.max(np.abs(u)))
    strang = cfg.scheme is SplitScheme.STRANG

    for step in range(1, n + 1):
        if strang:
            # V(dt/2) U(dt) V(dt/2); half rotations of adjacent steps compose
            # exactly, so this telescopes to the usual merged form.
            kernels.nonlinear_phase_inplace(u, 0.5 * coef, sigma)
            spec = np.fft.fft(u)
            kernels.multiply_inplace(spec, mult)
            u = np.fft.ifft(spec)
            kernels.nonlinear_phase_inplace(u, 0.5 * coef, sigma)
        else:
            # One Lie round V(dt) o U(dt): free step first.
            spec = np.fft.fft(u)
            kernels.multiply_inplace(spec, mult)
            u = np.fft.ifft(spec)
            kernels.nonlinear_phase_inplace(u, coef, sigma)

        sup = float(np.max(np.abs(u)))
        if np.isnan(sup) or sup > guard:
            raise BlowUpError(
                f"sup norm {sup:.3e} at t={step * cfg.dt:.6g} exceeds guard "
                f"{guard:.3e} (initial sup x {BLOWUP_GUARD_FACTOR:.0e})"
            )
        if emit is not None and (step % cfg.snapshot_every == 0 or step == n):
            emit(step, step * cfg.dt, u)

    return WaveField(field.grid, u)


def lie_evolve(field: WaveField, cfg: RunConfig) -> WaveField:
    """First-order splitting [V(dt) o U(dt)]^n."""
    if cfg.scheme is not SplitScheme.LIE:
        cfg = RunConfig(cfg.params, SplitScheme.LIE, cfg.t_final, cfg.dt, cfg.snapshot_every)
    return _evolve(field, cfg)


def strang_evolve(field: WaveField, cfg: RunConfig) -> WaveField:
    """Second-order splitting V(dt/2) U(dt) [V(dt) U(dt)]^(n-1) V(dt/2)."""
    if cfg.scheme is not SplitScheme.STRANG:
        cfg = RunConfig(cfg.params, SplitScheme.STRANG, cfg.t_final, cfg.dt, cfg.snapshot_every)
    return _evolve(field, cfg)


def evolve(field: WaveField, cfg: RunConfig) -> WaveField:
    """Run whichever scheme cfg selects."""
    return _evolve(field, cfg)


def evolve_with_snapshots(
    field: WaveField,
    cfg: RunConfig,
    sink: Callable[[float, WaveField, "ObservableRecord"], None],
) -> WaveField:
    """Evolve, emitting (t, field, record) at t=0, every snapshot_every steps,
    and at t_final."""
    from causticnls.observables import observable_record

    def emit(_step: int, t: float, values: np.ndarray) -> None:
        snap = WaveField(field.grid, values.copy())
        sink(t, snap, observable_record(t, snap, cfg.params))

    return _evolve(field, cfg, emit)
