"""Pure-numpy reference implementations of the split-step hot kernels.

The compiled twin lives in _kernels.pyx; both must agree to round-off.
"""

import numpy as np


def nonlinear_phase_inplace(u: np.ndarray, coef: float, sigma: float) -> None:
    """u[j] *= exp(-i * coef * |u[j]|**(2*sigma)), in place."""
    if coef == 0.0:
        return
    mag2 = u.real**2 + u.imag**2
    if sigma == 1.0:
        theta = coef * mag2
    elif sigma == 2.0:
        theta = coef * mag2 * mag2
    else:
        theta = coef * mag2**sigma
    u *= np.exp(-1j * theta)


def multiply_inplace(u: np.ndarray, m: np.ndarray) -> None:
    """u[j] *= m[j], in place."""
    u *= m
