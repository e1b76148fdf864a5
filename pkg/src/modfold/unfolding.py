"""Recovery of the high-dynamic-range signal from modulo samples.

The folded residue is piecewise constant on the 2*lam lattice, so its
L-th finite difference can be read off the folded samples directly. The
difference operator is then inverted by repeated cumulative summation,
re-anchoring the unknown integration constant at every stage.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import UnfoldingError
from .signals import BasebandSignal

EULER = math.e


@dataclass
class UnfoldingConfig:
    """Difference order, folding threshold and amplitude bound.

    beta_r must be a 2*lam multiple at least as large as the true signal
    peak; sample_interval and bandwidth fix the contraction factor
    T * Omega * e of each differencing stage.
    """

    order: int
    lam: float
    beta_r: float
    sample_interval: float
    bandwidth: float

    def __post_init__(self):
        if self.order < 1:
            raise UnfoldingError("difference order must be >= 1")
        if not (self.lam > 0):
            raise UnfoldingError("folding threshold must be positive")
        if self.beta_r < self.lam:
            raise UnfoldingError("beta_r must be at least lam")
        ratio = self.beta_r / (2.0 * self.lam)
        if abs(ratio - round(ratio)) > 1e-9:
            raise UnfoldingError("beta_r must be an integer multiple of 2*lam")
        if self.sample_interval <= 0 or self.bandwidth <= 0:
            raise UnfoldingError("sample interval and bandwidth must be positive")

    @property
    def contraction(self) -> float:
        return self.sample_interval * self.bandwidth * EULER


def beta_bound(peak: float, lam: float, margin: int = 1) -> float:
    """Smallest 2*lam multiple >= peak, plus `margin` extra lattice steps."""
    return 2.0 * lam * (math.ceil(peak / (2.0 * lam)) + margin)


def finite_difference(x, order: int) -> np.ndarray:
    """L-fold application of x[k+1] - x[k]."""
    x = np.asarray(x)
    if order < 1:
        raise UnfoldingError("difference order must be >= 1")
    if x.size <= order:
        raise UnfoldingError("sequence too short for the requested order")
    return np.diff(x, n=order)


def anti_difference(s) -> np.ndarray:
    """Cumulative sum, the (left) inverse of the first difference."""
    s = np.asarray(s)
    if s.size == 0:
        raise UnfoldingError("anti-difference of an empty sequence")
    return np.cumsum(s)


def choose_order(cfg: UnfoldingConfig, zeta: float) -> int:
    """Smallest order meeting both the amplitude bound and the folding
    ratio constraint (T*Omega*e)^L < zeta."""
    rho = cfg.contraction
    if rho >= 1:
        raise UnfoldingError("not oversampled: T * Omega * e must be < 1")
    if not (0 < zeta <= 1):
        raise UnfoldingError("zeta must lie in (0, 1]")
    if cfg.beta_r > cfg.lam:
        lower = math.ceil((math.log(cfg.lam) - math.log(cfg.beta_r)) / math.log(rho))
    else:
        lower = 1
    order = max(1, lower)
    while rho ** order >= zeta:
        order += 1
        if order > 256:
            raise UnfoldingError("no feasible difference order below 256")
    return order


def _snap_lattice(values: np.ndarray, lam: float, stage: str) -> np.ndarray:
    """Round to the 2*lam lattice, rejecting residuals beyond lam/2."""
    steps = np.round(values / (2.0 * lam))
    residual = np.max(np.abs(values - 2.0 * lam * steps)) if values.size else 0.0
    if residual > lam / 2.0:
        raise UnfoldingError(
            f"lattice snap residual {residual:.3g} exceeds lam/2 at {stage}; "
            "oversampling violated or noise too large"
        )
    return 2.0 * lam * steps


def _recover_rail(y: np.ndarray, cfg: UnfoldingConfig) -> np.ndarray:
    lam = cfg.lam
    L = cfg.order
    n = y.size - L
    if n < 2:
        raise UnfoldingError("sequence too short for the difference order")
    # minimum length needed to anchor the integration constants reliably
    need = 4.0 * (cfg.beta_r / lam + 2.0 ** L)
    if n < need:
        raise UnfoldingError(
            f"frame of {y.size} samples too short for order {L} "
            f"(need about {int(need) + L})"
        )
    dy = np.diff(y, n=L)
    s = np.asarray(kernels.modulo_fold(dy, lam)) - dy
    s = _snap_lattice(s, lam, "difference stage")
    for _ in range(L - 1):
        u = np.cumsum(s)
        drift = np.cumsum(u)
        const = 2.0 * lam * np.round(-drift[-1] / (2.0 * lam * u.size))
        s = _snap_lattice(u + const, lam, "anti-difference stage")
    residue = np.cumsum(s) if L >= 1 else s
    trimmed = y[L:]
    partial = trimmed + residue
    # final constant: the amplitude bound rules out most lattice offsets;
    # among the admissible ones the baseband signal carries no DC, so the
    # smallest window mean pins the remaining 2*lam multiple
    base = 2.0 * lam * np.round(-np.mean(partial) / (2.0 * lam))
    reach = int(math.ceil(cfg.beta_r / (2.0 * lam))) + 1
    best = None
    best_mean = np.inf
    for k in range(-reach, reach + 1):
        out = partial + base + 2.0 * lam * k
        if np.max(np.abs(out)) > cfg.beta_r + lam:
            continue
        mean = abs(np.mean(out))
        if mean < best_mean:
            best, best_mean = out, mean
    if best is None:
        raise UnfoldingError(
            "recovered amplitude exceeds beta_r for every lattice offset: "
            "oversampling violated or noise too large"
        )
    return best


def usf_recover(folded: BasebandSignal, cfg: UnfoldingConfig) -> BasebandSignal:
    """Unfold modulo samples back to the full-range signal.

    The output is trimmed by `cfg.order` samples at the start; sample k
    of the output estimates sample k + order of the input frame.
    """
    i = _recover_rail(np.asarray(folded.i, dtype=float), cfg)
    q = _recover_rail(np.asarray(folded.q, dtype=float), cfg)
    return BasebandSignal(i + 1j * q, folded.sample_interval, folded.bandwidth)
