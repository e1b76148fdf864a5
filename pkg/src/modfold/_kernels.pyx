# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: centered modulo fold, mid-rise quantizer, NLMS."""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, fmax, fmin

cnp.import_array()

BACKEND = "cython"


def modulo_fold(x, double lam):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double two_lam = 2.0 * lam
    cdef Py_ssize_t k
    for k in range(n):
        out[k] = xv[k] - two_lam * floor(xv[k] / two_lam + 0.5)
    return out.reshape(np.shape(x))


def quantize_midrise(x, double step, long levels):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double lo = -(levels // 2)
    cdef double hi = levels // 2 - 1
    cdef double inv_step = 1.0 / step
    cdef Py_ssize_t k
    for k in range(n):
        out[k] = (fmin(fmax(floor(xv[k] * inv_step), lo), hi) + 0.5) * step
    return out.reshape(np.shape(x))


def nlms(reference, received, long order, double step_mu, double reg_delta):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] ref = \
        np.ascontiguousarray(reference, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rx = \
        np.ascontiguousarray(received, dtype=np.complex128)
    cdef Py_ssize_t n = ref.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w = np.zeros(order, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] buf = np.zeros(order, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] y = np.empty(n, dtype=np.complex128)
    cdef double complex yk, e, g
    cdef double energy
    cdef Py_ssize_t k, i
    for k in range(n):
        for i in range(order - 1, 0, -1):
            buf[i] = buf[i - 1]
        buf[0] = ref[k]
        yk = 0
        energy = 0.0
        for i in range(order):
            yk += w[i].conjugate() * buf[i]
            energy += buf[i].real * buf[i].real + buf[i].imag * buf[i].imag
        y[k] = yk
        e = rx[k] - yk
        g = (step_mu / (energy + reg_delta)) * e.conjugate()
        for i in range(order):
            w[i] = w[i] + buf[i] * g
    return y
