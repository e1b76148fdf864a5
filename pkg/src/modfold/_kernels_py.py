"""Pure numpy implementations of the hot kernels.

Used when the compiled extension is unavailable; also the reference the
compiled kernels are tested against.
"""

import numpy as np

BACKEND = "numpy"


def modulo_fold(x, lam):
    """Centered modulo: map into [-lam, lam) with residue in 2*lam*Z."""
    x = np.asarray(x, dtype=float)
    return x - 2.0 * lam * np.floor(x / (2.0 * lam) + 0.5)


def quantize_midrise(x, step, levels):
    """Mid-rise quantizer with 2^b levels; ties round toward +inf."""
    x = np.asarray(x, dtype=float)
    half = levels // 2
    idx = np.clip(np.floor(x / step), -half, half - 1)
    return (idx + 0.5) * step


def nlms(reference, received, order, step_mu, reg_delta):
    """Normalized-LMS echo path adaptation (complex taps).

    Returns the filter output sequence (the SI estimate). The loop is
    inherently sequential over samples.
    """
    reference = np.asarray(reference, dtype=complex)
    received = np.asarray(received, dtype=complex)
    n = reference.size
    w = np.zeros(order, dtype=complex)
    buf = np.zeros(order, dtype=complex)
    y = np.empty(n, dtype=complex)
    for k in range(n):
        buf[1:] = buf[:-1]
        buf[0] = reference[k]
        yk = np.dot(np.conj(w), buf)
        y[k] = yk
        e = received[k] - yk
        energy = np.real(np.dot(np.conj(buf), buf))
        w = w + (step_mu / (energy + reg_delta)) * buf * np.conj(e)
    return y
