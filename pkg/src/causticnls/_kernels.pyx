# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pointwise kernels for the split-step inner loop.

Semantics match causticnls._kernels_py exactly; see that module for the
reference implementations.
"""

from libc.math cimport cos, sin, pow

import numpy as np

cimport numpy as cnp

cnp.import_array()


def nonlinear_phase_inplace(cnp.complex128_t[::1] u, double coef, double sigma):
    """u[j] *= exp(-i * coef * |u[j]|**(2*sigma)), in place."""
    cdef Py_ssize_t j, n = u.shape[0]
    cdef double re, im, mag2, theta, c, s
    if coef == 0.0:
        return
    if sigma == 1.0:
        for j in range(n):
            re = u[j].real
            im = u[j].imag
            theta = coef * (re * re + im * im)
            c = cos(theta)
            s = sin(theta)
            u[j].real = re * c + im * s
            u[j].imag = im * c - re * s
    elif sigma == 2.0:
        for j in range(n):
            re = u[j].real
            im = u[j].imag
            mag2 = re * re + im * im
            theta = coef * mag2 * mag2
            c = cos(theta)
            s = sin(theta)
            u[j].real = re * c + im * s
            u[j].imag = im * c - re * s
    else:
        for j in range(n):
            re = u[j].real
            im = u[j].imag
            mag2 = re * re + im * im
            theta = coef * pow(mag2, sigma)
            c = cos(theta)
            s = sin(theta)
            u[j].real = re * c + im * s
            u[j].imag = im * c - re * s


def multiply_inplace(cnp.complex128_t[::1] u, cnp.complex128_t[::1] m):
    """u[j] *= m[j], in place."""
    cdef Py_ssize_t j, n = u.shape[0]
    cdef double re, im
    for j in range(n):
        re = u[j].real * m[j].real - u[j].imag * m[j].imag
        im = u[j].real * m[j].imag + u[j].imag * m[j].real
        u[j].real = re
        u[j].imag = im
