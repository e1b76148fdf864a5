"""Baseband waveform generation and full-duplex mixture composition.

Provides the sampled-signal container, the periodic pilot (Fourier-series)
reference, sparse single-path channels, QPSK modulation, pulse shaping and
the seeded composition of the received SoI + SI + noise mixture.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SignalError

TWO_PI = 2.0 * np.pi


@dataclass
class BasebandSignal:
    """Uniformly sampled complex baseband waveform.

    samples         complex amplitudes (unitless baseband)
    sample_interval seconds per sample
    bandwidth       one-sided bandwidth in rad/s
    """

    samples: np.ndarray
    sample_interval: float
    bandwidth: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.size == 0:
            raise SignalError("signal must contain at least one sample")
        if not (self.sample_interval > 0):
            raise SignalError("sample_interval must be positive")
        if not (self.bandwidth > 0):
            raise SignalError("bandwidth must be positive")

    @property
    def i(self) -> np.ndarray:
        """In-phase rail."""
        return self.samples.real

    @property
    def q(self) -> np.ndarray:
        """Quadrature rail."""
        return self.samples.imag

    def __len__(self) -> int:
        return self.samples.size

    def power(self) -> float:
        return float(np.mean(np.abs(self.samples) ** 2))

    def peak(self) -> float:
        """Largest rail amplitude (I and Q considered separately)."""
        return float(max(np.max(np.abs(self.i)), np.max(np.abs(self.q))))

    def with_samples(self, samples: np.ndarray) -> "BasebandSignal":
        return BasebandSignal(samples, self.sample_interval, self.bandwidth)


@dataclass
class PilotSpec:
    """Periodic bandlimited reference signal given by its Fourier series.

    coefficients holds the 2P+1 values for harmonics -P..P; the pilot is
    real when the conjugate-symmetry invariant holds.
    """

    period: float
    harmonics: int
    coefficients: np.ndarray
    sample_count: int

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=complex)
        if self.period <= 0:
            raise SignalError("pilot period must be positive")
        if self.harmonics < 1:
            raise SignalError("pilot needs at least one harmonic")
        if self.coefficients.size != 2 * self.harmonics + 1:
            raise SignalError("expected 2P+1 Fourier coefficients")
        if self.sample_count < 2 * self.harmonics + 1:
            raise SignalError("sample_count must be at least 2P+1")
        flipped = np.conj(self.coefficients[::-1])
        if not np.allclose(self.coefficients, flipped, atol=1e-12):
            raise SignalError("coefficients must be conjugate symmetric (real pilot)")

    @property
    def omega0(self) -> float:
        """Fundamental frequency in rad/s."""
        return TWO_PI / self.period

    @property
    def bandwidth(self) -> float:
        return self.harmonics * self.omega0

    @property
    def sample_interval(self) -> float:
        return self.period / self.sample_count

    def coefficient(self, p: int) -> complex:
        """Fourier coefficient for harmonic p, zero beyond +-P."""
        if abs(p) > self.harmonics:
            return 0.0
        return self.coefficients[p + self.harmonics]


def random_pilot(period: float, harmonics: int, sample_count: int,
                 rng_seed: int = 0) -> PilotSpec:
    """Flat-spectrum pilot with seeded random phases and no DC term.

    Unit magnitude on every harmonic keeps the deconvolution denominators
    away from zero; the missing DC term keeps the unfold constant of the
    data path identifiable.
    """
    rng = np.random.default_rng(rng_seed)
    phases = rng.uniform(0.0, TWO_PI, size=harmonics)
    coeffs = np.zeros(2 * harmonics + 1, dtype=complex)
    for p in range(1, harmonics + 1):
        coeffs[harmonics + p] = 0.5 * np.exp(1j * phases[p - 1])
        coeffs[harmonics - p] = np.conj(coeffs[harmonics + p])
    spec = PilotSpec(period, harmonics, coeffs, sample_count)
    # normalize to unit peak so fold counts scale directly with the SI gain
    pk = np.max(np.abs(generate_pilot(spec).samples.real))
    spec.coefficients = spec.coefficients / pk
    return spec


@dataclass
class SparseChannel:
    """Single-path channel: amplitude and delay in seconds."""

    amplitude: float
    delay: float
    kind: str = "si"

    def __post_init__(self):
        if not (self.amplitude > 0):
            raise SignalError("channel amplitude must be positive")
        if self.delay < 0:
            raise SignalError("channel delay must be non-negative")


@dataclass
class MixtureConfig:
    """Powers, noise level and SI-to-SoI ratio for the received mixture."""

    p_u: float = 1.0
    p_d: float = 1.0
    snr_db: float | None = 40.0
    sir_db: float | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.p_u < 0 or self.p_d < 0:
            raise SignalError("transmit powers must be non-negative")


GRAY_QPSK = np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]) / np.sqrt(2.0)


def qpsk_modulate(bits) -> np.ndarray:
    """Map a bit sequence to Gray-coded unit-energy QPSK symbols.

    Bit pairs (b0, b1): b0 selects the I sign, b1 the Q sign;
    00 -> (1+j)/sqrt(2).
    """
    bits = np.asarray(bits, dtype=int)
    if bits.size % 2 != 0:
        raise SignalError("QPSK needs an even number of bits")
    b = bits.reshape(-1, 2)
    return GRAY_QPSK[b[:, 0] + 2 * b[:, 1]]


def rrc_pulse(samples_per_symbol: int, rolloff: float = 0.25,
              span: int = 8) -> np.ndarray:
    """Unit-energy root-raised-cosine kernel spanning `span` symbols."""
    n = span * samples_per_symbol
    t = (np.arange(-n // 2, n // 2 + 1)) / samples_per_symbol
    beta = rolloff
    h = np.empty_like(t)
    for idx, ti in enumerate(t):
        if abs(ti) < 1e-12:
            h[idx] = 1.0 - beta + 4 * beta / np.pi
        elif beta > 0 and abs(abs(ti) - 1.0 / (4 * beta)) < 1e-12:
            h[idx] = (beta / np.sqrt(2)) * (
                (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta))
                + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta))
            )
        else:
            num = (np.sin(np.pi * ti * (1 - beta))
                   + 4 * beta * ti * np.cos(np.pi * ti * (1 + beta)))
            den = np.pi * ti * (1 - (4 * beta * ti) ** 2)
            h[idx] = num / den
    return h / np.sqrt(np.sum(h ** 2))


def rect_pulse(samples_per_symbol: int) -> np.ndarray:
    return np.ones(samples_per_symbol)


def pulse_shape(symbols, samples_per_symbol: int, pulse: np.ndarray,
                sample_interval: float = 1.0,
                bandwidth: float | None = None) -> BasebandSignal:
    """Semi-discrete convolution of a symbol train with a finite kernel."""
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.size == 0:
        raise SignalError("empty symbol sequence")
    if samples_per_symbol < 1:
        raise SignalError("samples_per_symbol must be >= 1")
    pulse = np.asarray(pulse, dtype=float)
    up = np.zeros((symbols.size - 1) * samples_per_symbol + 1, dtype=complex)
    up[::samples_per_symbol] = symbols
    out = np.convolve(up, pulse)
    if bandwidth is None:
        # occupied band of the shaped signal; RRC-style excess assumed 0.25
        bandwidth = 1.25 * np.pi / (samples_per_symbol * sample_interval)
    return BasebandSignal(out, sample_interval, bandwidth)


def generate_pilot(spec: PilotSpec, sample_interval: float | None = None) -> BasebandSignal:
    """Evaluate the pilot Fourier series on one full period of K samples."""
    T = spec.sample_interval if sample_interval is None else sample_interval
    if abs(spec.sample_count * T - spec.period) > 1e-9 * spec.period:
        raise SignalError("K * T must equal the pilot period")
    k = np.arange(spec.sample_count)
    p = np.arange(-spec.harmonics, spec.harmonics + 1)
    phases = np.exp(1j * np.outer(k, p) * spec.omega0 * T)
    samples = phases @ spec.coefficients
    return BasebandSignal(samples, T, spec.bandwidth)


def _fractional_delay(x: np.ndarray, shift_samples: float) -> np.ndarray:
    """Delay by a (possibly fractional) number of samples.

    Integer shifts are realized exactly with zero fill; fractional shifts
    use an FFT phase ramp on a zero-padded grid, which is accurate away
    from the frame edges for decaying signals.
    """
    n = x.size
    m = int(round(shift_samples))
    if abs(shift_samples - m) < 1e-12:
        out = np.zeros_like(x)
        if m < n:
            out[m:] = x[: n - m]
        return out
    pad = 4 * int(np.ceil(abs(shift_samples))) + 64
    xe = np.concatenate([x, np.zeros(pad, dtype=x.dtype)])
    freq = np.fft.fftfreq(xe.size)
    shifted = np.fft.ifft(np.fft.fft(xe) * np.exp(-2j * np.pi * freq * shift_samples))
    return shifted[:n]


def apply_sparse_channel(x: BasebandSignal, ch: SparseChannel,
                         power: float = 1.0, periodic: bool = False) -> BasebandSignal:
    """Apply `sqrt(power) * A * x(t - tau)`.

    With `periodic=True` the delay is applied exactly in the Fourier
    domain (per-bin phase ramp), valid for bandlimited periodic signals
    such as the pilot; tau must then lie within one period.
    """
    T = x.sample_interval
    scale = np.sqrt(power) * ch.amplitude
    if periodic:
        K = len(x)
        if not (0 <= ch.delay < K * T):
            raise SignalError("delay must lie within one period of a periodic signal")
        spec = np.fft.fft(x.samples)
        omega = np.fft.fftfreq(K, d=T) * TWO_PI
        out = np.fft.ifft(spec * np.exp(-1j * omega * ch.delay))
        return x.with_samples(scale * out)
    return x.with_samples(scale * _fractional_delay(x.samples, ch.delay / T))


def compose_received(soi: BasebandSignal, si: BasebandSignal,
                     cfg: MixtureConfig) -> BasebandSignal:
    """Form the received mixture sqrt(p_u)*soi + sqrt(p_d)*si + noise.

    When `sir_db` is set the SI term is rescaled so the measured
    SI-to-SoI power ratio equals -sir_db exactly; the complex Gaussian
    noise power is referenced to the measured SoI power.
    """
    if len(soi) != len(si):
        raise SignalError("SoI and SI must have equal lengths")
    if abs(soi.sample_interval - si.sample_interval) > 1e-12 * soi.sample_interval:
        raise SignalError("SoI and SI must share a sample interval")
    soi_term = np.sqrt(cfg.p_u) * soi.samples
    si_term = np.sqrt(cfg.p_d) * si.samples
    p_soi = np.mean(np.abs(soi_term) ** 2)
    if cfg.sir_db is not None and p_soi > 0:
        p_si = np.mean(np.abs(si_term) ** 2)
        target = p_soi * 10.0 ** (-cfg.sir_db / 10.0)
        if p_si > 0:
            si_term = si_term * np.sqrt(target / p_si)
    z = soi_term + si_term
    if cfg.snr_db is not None and p_soi > 0:
        rng = np.random.default_rng(cfg.rng_seed)
        sigma2 = p_soi * 10.0 ** (-cfg.snr_db / 10.0)
        noise = np.sqrt(sigma2 / 2.0) * (
            rng.standard_normal(len(soi)) + 1j * rng.standard_normal(len(soi))
        )
        # rescale to the exact target power so measured SNR hits snr_db
        pn = np.mean(np.abs(noise) ** 2)
        if pn > 0:
            noise *= np.sqrt(sigma2 / pn)
        z = z + noise
    return BasebandSignal(z, soi.sample_interval,
                          max(soi.bandwidth, si.bandwidth))
