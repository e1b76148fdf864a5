"""Modulo-domain sparse SI-channel estimation.

Works on one folded pilot period: the periodic first difference turns the
folded residue into a sparse spike train whose DFT is a sum of complex
exponentials. Prony's method extracts the spikes from the out-of-band
bins, the in-band spectrum is corrected, and a point-wise deconvolution
by the pilot yields the path amplitude and delay.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ChannelEstimationError
from .signals import BasebandSignal, PilotSpec, SparseChannel, generate_pilot

TWO_PI = 2.0 * np.pi


@dataclass
class SpectralFrame:
    """DFT of the periodically differenced folded pilot frame.

    The pilot is periodic over its K samples, so the difference is taken
    circularly and the bins live on a K-point grid. In-band bins are the
    2P+1 harmonics of the pilot; every other bin carries fold energy only.
    """

    dft_bins: np.ndarray
    harmonics: int

    def __post_init__(self):
        self.dft_bins = np.asarray(self.dft_bins, dtype=complex)

    @property
    def size(self) -> int:
        return self.dft_bins.size

    @property
    def inband_indices(self) -> np.ndarray:
        K, P = self.size, self.harmonics
        return np.concatenate([np.arange(0, P + 1), np.arange(K - P, K)])

    @property
    def outband_indices(self) -> np.ndarray:
        K, P = self.size, self.harmonics
        return np.arange(P + 1, K - P)


@dataclass
class FoldModel:
    """Parametric folded residue: spike amplitudes (2*lam lattice) and
    spike locations in time units."""

    amplitudes: np.ndarray = field(default_factory=lambda: np.empty(0))
    locations: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        self.amplitudes = np.atleast_1d(np.asarray(self.amplitudes, dtype=float))
        self.locations = np.atleast_1d(np.asarray(self.locations, dtype=float))
        if self.amplitudes.size != self.locations.size:
            raise ChannelEstimationError("fold amplitudes and locations mismatch")

    @property
    def count(self) -> int:
        return self.amplitudes.size


def periodic_difference(x: np.ndarray) -> np.ndarray:
    """First difference of one period of a periodic sequence (length
    preserved through the wrap-around sample)."""
    x = np.asarray(x)
    return np.diff(np.append(x, x[0]))


def difference_dft(folded, harmonics: int) -> SpectralFrame:
    """DFT of the periodically differenced folded samples."""
    folded = np.asarray(folded)
    K = folded.size
    if K < 2 * harmonics + 2:
        raise ChannelEstimationError(
            "frame too short: need K >= 2P+2 for any out-of-band bin"
        )
    return SpectralFrame(np.fft.fft(periodic_difference(folded)), harmonics)


def estimate_fold_count(z, floor_rel: float = 1e-8) -> int:
    """Model order from the gap structure of the Hankel singular values."""
    z = np.asarray(z, dtype=complex)
    if z.size < 4:
        raise ChannelEstimationError("need at least 4 spectral samples")
    rows = z.size // 2 + 1
    H = scipy.linalg.hankel(z[:rows], z[rows - 1:])
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[0] <= 0 or not np.isfinite(sv[0]):
        return 0
    floor = floor_rel * sv[0]
    # Prony needs 2M samples and the gap test needs one singular value of
    # tail, capping the detectable order at min(len/2, min_dim - 1)
    max_m = min(z.size // 2, min(H.shape) - 1)
    if np.all(np.abs(z) < 1e-14):
        return 0
    # largest relative drop across consecutive singular values
    candidates = sv[: max_m + 1]
    ratios = candidates[:-1] / np.maximum(candidates[1:], floor * 1e-8)
    if ratios.size == 0:
        return min(1, max_m)
    m = int(np.argmax(ratios)) + 1
    if candidates[m - 1] < floor:
        return 0
    return min(m, max_m)


def prony(z, count: int, dft_size: int, start_index: int = 0,
          sample_interval: float = 1.0, lam: float | None = None) -> FoldModel:
    """Fit `count` complex exponentials to consecutive spectral samples.

    z[i] is the bin at index start_index + i of a dft_size-point DFT.
    Exponential frequencies come from the annihilating-filter roots;
    amplitudes from a linear least-squares fit. With `lam` given the
    amplitudes are snapped to the 2*lam lattice and vanishing spikes are
    dropped.
    """
    z = np.asarray(z, dtype=complex)
    if count == 0:
        return FoldModel()
    if z.size < 2 * count:
        raise ChannelEstimationError("need at least 2M spectral samples for Prony")

    def solve(m):
        H = scipy.linalg.hankel(z[: z.size - m], z[z.size - m - 1:])
        coeffs, _, rank, _ = np.linalg.lstsq(H[:, :m], -H[:, m], rcond=None)
        if rank < m:
            raise np.linalg.LinAlgError("rank-deficient Hankel system")
        roots = np.roots(np.concatenate([[1.0], coeffs[::-1]]))
        mags = np.abs(roots)
        roots = roots / np.where(mags > 0, mags, 1.0)
        n = start_index + np.arange(z.size)
        basis = roots[np.newaxis, :] ** n[:, np.newaxis]
        amps, _, _, _ = np.linalg.lstsq(basis, z, rcond=None)
        return roots, amps

    try:
        roots, amps = solve(count)
    except np.linalg.LinAlgError:
        if count > 1:
            roots, amps = solve(count - 1)
        else:
            raise ChannelEstimationError("Prony system is rank deficient")

    K = dft_size
    locations = (-np.angle(roots)) * K / TWO_PI % K
    amplitudes = np.real(amps)
    if lam is not None:
        amplitudes = 2.0 * lam * np.round(amplitudes / (2.0 * lam))
        keep = amplitudes != 0
        amplitudes, locations = amplitudes[keep], locations[keep]
    order = np.argsort(locations)
    return FoldModel(amplitudes[order], locations[order] * sample_interval)


def reconstruct_residue_spectrum(folds: FoldModel, dft_size: int,
                                 sample_interval: float = 1.0) -> np.ndarray:
    """Evaluate the spike-train DFT of the fold model at every bin."""
    n = np.arange(dft_size)
    if folds.count == 0:
        return np.zeros(dft_size, dtype=complex)
    k = folds.locations / sample_interval
    phases = np.exp(-1j * TWO_PI * np.outer(n, k) / dft_size)
    return phases @ folds.amplitudes.astype(complex)


def lattice_spike_fit(z, dft_size: int, outband_indices, lam: float,
                      sample_interval: float = 1.0,
                      max_spikes: int | None = None) -> FoldModel:
    """Greedy fold-spike recovery on the out-of-band bins.

    Exploits what Prony cannot: spike locations lie on the integer sample
    grid and amplitudes on the 2*lam lattice. Orthogonal matching pursuit
    with a per-iteration least-squares refit stays stable for large fold
    counts and quantized bins where polynomial rooting falls apart.
    """
    z = np.asarray(z, dtype=complex)
    n = np.asarray(outband_indices)
    K = dft_size
    if max_spikes is None:
        max_spikes = min(z.size // 2, K)
    support: list[int] = []
    resid = z.copy()
    amps = np.empty(0)
    synthesis = np.exp(2j * np.pi * np.outer(np.arange(K), n) / K)
    for _ in range(max_spikes):
        # matched filter over candidate integer locations
        b = synthesis @ resid / n.size
        b[support] = 0.0
        k_star = int(np.argmax(np.abs(b)))
        if np.abs(b[k_star]) < lam:
            break
        support.append(k_star)
        atoms = np.exp(-2j * np.pi * np.outer(n, support) / K)
        amps, _, _, _ = np.linalg.lstsq(atoms, z, rcond=None)
        resid = z - atoms @ amps
    if not support:
        return FoldModel()
    amplitudes = 2.0 * lam * np.round(np.real(amps) / (2.0 * lam))
    keep = amplitudes != 0
    amplitudes = amplitudes[keep]
    locations = np.asarray(support, dtype=float)[keep]
    order = np.argsort(locations)
    return FoldModel(amplitudes[order], locations[order] * sample_interval)


def pilot_difference_spectrum(pilot: PilotSpec) -> np.ndarray:
    """DFT of the periodically differenced pilot (the deconvolution
    denominator); bin 0 vanishes by construction."""
    gamma = generate_pilot(pilot).samples.real
    return np.fft.fft(periodic_difference(gamma))


def estimate_si_channel(folded_pilot, pilot: PilotSpec, lam: float,
                        pilot_bin_tol: float = 1e-9) -> SparseChannel:
    """Recover the single-path SI channel from one folded pilot period.

    Steps: difference + DFT, lattice-constrained spike fit on the
    out-of-band bins, in-band correction, point-wise deconvolution by
    the pilot, then delay from the phase progression across harmonics
    and amplitude from the mean deconvolved magnitude.
    """
    folded_pilot = np.asarray(folded_pilot, dtype=float)
    K = folded_pilot.size
    P = pilot.harmonics
    if K != pilot.sample_count:
        raise ChannelEstimationError("folded frame length must match the pilot")
    frame = difference_dft(folded_pilot, P)
    z = -frame.dft_bins[frame.outband_indices]

    folds = lattice_spike_fit(z, K, frame.outband_indices, lam,
                              sample_interval=pilot.sample_interval)
    residue_spec = reconstruct_residue_spectrum(folds, K, pilot.sample_interval)
    corrected = frame.dft_bins + residue_spec

    gamma_spec = pilot_difference_spectrum(pilot)
    tol = pilot_bin_tol * np.max(np.abs(gamma_spec))
    # signed harmonics -P..P mapped onto DFT bins (mod K)
    ps = np.concatenate([np.arange(-P, 0), np.arange(1, P + 1)])
    bins = ps % K
    usable = np.abs(gamma_spec[bins]) > tol
    ps, bins = ps[usable], bins[usable]
    if ps.size < 2:
        raise ChannelEstimationError("fewer than 2 usable pilot bins")
    d = corrected[bins] / gamma_spec[bins]

    amplitude = float(np.mean(np.abs(d)))
    omega0 = pilot.omega0
    by_p = dict(zip(ps.tolist(), d))
    pairs = [(p, p + 1) for p in ps if p + 1 in by_p]
    if pairs:
        # least-squares phasor for the common per-harmonic rotation
        q = sum(by_p[b] * np.conj(by_p[a]) for a, b in pairs)
        tau = (-np.angle(q) / omega0) % pilot.period
    else:
        # P == 1: only the +-1 harmonics exist; use the absolute phase of
        # the +1 bin (the path gain is real positive)
        tau = (-np.angle(by_p[1]) / omega0) % pilot.period
    if amplitude <= 0:
        raise ChannelEstimationError("estimated amplitude is not positive")
    return SparseChannel(amplitude, float(tau), kind="si")


def channel_nmse(estimate: SparseChannel, truth: SparseChannel,
                 pilot: PilotSpec) -> float:
    """NMSE between the estimated and true channel frequency responses
    over the pilot harmonics."""
    p = np.arange(-pilot.harmonics, pilot.harmonics + 1)
    h_true = truth.amplitude * np.exp(-1j * p * pilot.omega0 * truth.delay)
    h_est = estimate.amplitude * np.exp(-1j * p * pilot.omega0 * estimate.delay)
    return float(np.sum(np.abs(h_est - h_true) ** 2) / np.sum(np.abs(h_true) ** 2))
