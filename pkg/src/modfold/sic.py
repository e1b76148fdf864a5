"""Digital SI cancellation, detection, the NLMS baseline and metrics."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SignalError
from .signals import (
    BasebandSignal,
    SparseChannel,
    _fractional_delay,
)


@dataclass
class MetricSet:
    nmse: float = float("nan")
    mse: float = float("nan")
    ber: float = float("nan")
    sic_db: float = float("nan")


@dataclass
class SicResult:
    r_si_hat: BasebandSignal
    r_soi: BasebandSignal
    residual_si_power_db: float
    metrics: MetricSet


def reconstruct_si(ch: SparseChannel, tx_reference: BasebandSignal) -> BasebandSignal:
    """Pass the known downlink reference through the estimated channel."""
    delayed = _fractional_delay(tx_reference.samples,
                                ch.delay / tx_reference.sample_interval)
    return tx_reference.with_samples(ch.amplitude * delayed)


def cancel_si(recovered: BasebandSignal, si_hat: BasebandSignal,
              true_si: BasebandSignal | None = None) -> SicResult:
    """Subtract the reconstructed SI from the recovered received signal.

    When the ground-truth SI is supplied the achieved suppression
    10*log10(P_before / P_residual) is recorded.
    """
    if len(recovered) != len(si_hat):
        raise SignalError("recovered signal and SI estimate length mismatch")
    soi = recovered.with_samples(recovered.samples - si_hat.samples)
    sic_db = float("nan")
    residual_db = float("nan")
    if true_si is not None:
        if len(true_si) != len(si_hat):
            raise SignalError("ground-truth SI length mismatch")
        before = np.mean(np.abs(true_si.samples) ** 2)
        residual = np.mean(np.abs(true_si.samples - si_hat.samples) ** 2)
        if residual > 0:
            sic_db = float(10.0 * np.log10(before / residual))
            residual_db = float(10.0 * np.log10(residual))
        else:
            sic_db = float("inf")
            residual_db = float("-inf")
    return SicResult(
        r_si_hat=si_hat,
        r_soi=soi,
        residual_si_power_db=residual_db,
        metrics=MetricSet(sic_db=sic_db),
    )


def nlms_estimate(tx_reference: BasebandSignal, received: BasebandSignal,
                  order: int = 32, step_mu: float = 0.5,
                  reg_delta: float = 1e-6) -> BasebandSignal:
    """Adaptive-filter SI estimate: NLMS taps driven by the reference."""
    if order < 1:
        raise SignalError("NLMS order must be >= 1")
    if not (0 <= step_mu <= 2):
        raise SignalError("NLMS step must lie in [0, 2]")
    if len(tx_reference) != len(received):
        raise SignalError("reference and received length mismatch")
    y = kernels.nlms(tx_reference.samples, received.samples, order,
                     step_mu, reg_delta)
    return received.with_samples(np.asarray(y))


def matched_filter_symbols(signal: BasebandSignal, samples_per_symbol: int,
                           pulse: np.ndarray, n_symbols: int,
                           offset: int = 0) -> np.ndarray:
    """Matched filter then sample at the symbol instants.

    `offset` is the index in `signal` where symbol 0's shaping kernel
    begins (pulse_shape output starts there).
    """
    pulse = np.asarray(pulse, dtype=float)
    mf = np.convolve(signal.samples, pulse[::-1])
    delay = offset + (pulse.size - 1)
    idx = delay + samples_per_symbol * np.arange(n_symbols)
    idx = idx[idx < mf.size]
    return mf[idx]


def qpsk_detect(r_soi: BasebandSignal, h_u: SparseChannel,
                samples_per_symbol: int, pulse: np.ndarray,
                n_symbols: int, offset: int = 0) -> np.ndarray:
    """Matched filter, symbol-rate sampling, flat equalization by the
    known uplink gain, and minimum-distance QPSK slicing."""
    sym = matched_filter_symbols(r_soi, samples_per_symbol, pulse,
                                 n_symbols, offset)
    sym = sym / h_u.amplitude
    bits = np.empty(2 * sym.size, dtype=int)
    bits[0::2] = (sym.real < 0).astype(int)
    bits[1::2] = (sym.imag < 0).astype(int)
    return bits


def compute_metrics(estimate, truth, bits_est=None, bits_true=None) -> MetricSet:
    """MSE / NMSE of a signal estimate plus optional BER."""
    estimate = np.asarray(estimate)
    truth = np.asarray(truth)
    if estimate.shape != truth.shape:
        raise SignalError("estimate and truth must have matching lengths")
    err = estimate - truth
    mse = float(np.mean(np.abs(err) ** 2))
    denom = float(np.sum(np.abs(truth) ** 2))
    if denom == 0:
        raise SignalError("NMSE undefined for zero-energy truth")
    nmse = float(np.sum(np.abs(err) ** 2) / denom)
    ber = float("nan")
    if bits_est is not None and bits_true is not None:
        bits_est = np.asarray(bits_est, dtype=int)
        bits_true = np.asarray(bits_true, dtype=int)
        if bits_est.size != bits_true.size or bits_est.size == 0:
            raise SignalError("bit sequences must be non-empty and equal length")
        ber = float(np.mean(bits_est != bits_true))
    return MetricSet(nmse=nmse, mse=mse, ber=ber)
