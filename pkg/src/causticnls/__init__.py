"""Pseudospectral toolkit for the 1-D semiclassical nonlinear Schrodinger
equation: split-step propagators, caustic experiments, the numerical
scattering operator, and FFT aliasing diagnostics."""

__version__ = "0.1.0"

from causticnls.spectral import (  # noqa: F401
    GridSpec,
    SpectrumField,
    WaveField,
    continuous_fourier,
    continuous_inverse_fourier,
    forward_dft,
    inverse_dft,
    l2_norm,
    physical_wavenumbers,
    sup_norm,
)
from causticnls.propagators import (  # noqa: F401
    BlowUpError,
    RunConfig,
    SemiclassicalParams,
    SplitScheme,
    evolve,
    evolve_with_snapshots,
    free_step,
    lie_evolve,
    nonlinear_step,
    strang_evolve,
)
from causticnls.kernels import KERNEL_BACKEND  # noqa: F401
