"""Digital SI cancellation, detection, NLMS baseline and metrics."""

import numpy as np
import pytest

from modfold import (
    BasebandSignal,
    SignalError,
    SparseChannel,
    cancel_si,
    compute_metrics,
    nlms_estimate,
    qpsk_detect,
    qpsk_modulate,
    reconstruct_si,
    rrc_pulse,
)
from modfold.signals import pulse_shape


def shaped_frame(n_symbols=64, sps=8, seed=0):
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, 2 * n_symbols)
    sig = pulse_shape(qpsk_modulate(bits), sps, rrc_pulse(sps))
    return bits, sig


class TestReconstructSi:
    def test_identity(self):
        _, sig = shaped_frame()
        out = reconstruct_si(SparseChannel(1.0, 0.0), sig)
        assert np.allclose(out.samples, sig.samples)

    def test_scaling(self):
        _, sig = shaped_frame()
        out = reconstruct_si(SparseChannel(2.0, 0.0), sig)
        assert np.allclose(out.samples, 2.0 * sig.samples)

    def test_integer_delay(self):
        _, sig = shaped_frame()
        out = reconstruct_si(SparseChannel(1.0, 3.0), sig)
        assert np.allclose(out.samples[3:], sig.samples[:-3])


class TestCancelSi:
    def test_perfect_cancellation(self):
        _, sig = shaped_frame(seed=1)
        si = sig.with_samples(0.5 * sig.samples[::-1])
        recovered = sig.with_samples(sig.samples + si.samples)
        result = cancel_si(recovered, si, true_si=si)
        assert np.allclose(result.r_soi.samples, sig.samples)
        assert result.metrics.sic_db == np.inf

    def test_suppression_accounting(self):
        _, sig = shaped_frame(seed=2)
        true_si = sig.with_samples(10.0 * sig.samples)
        si_hat = sig.with_samples(10.0 * sig.samples * (1 + 1e-2))
        result = cancel_si(true_si, si_hat, true_si=true_si)
        assert result.metrics.sic_db == pytest.approx(40.0, abs=0.1)

    def test_cancellation_is_additive(self):
        _, sig = shaped_frame(seed=3)
        s1 = sig.with_samples(0.3 * sig.samples)
        s2 = sig.with_samples(0.1 * np.roll(sig.samples, 5))
        both = sig.with_samples(s1.samples + s2.samples)
        direct = cancel_si(sig, both).r_soi.samples
        chained = cancel_si(cancel_si(sig, s1).r_soi, s2).r_soi.samples
        assert np.allclose(direct, chained)

    def test_length_mismatch_rejected(self):
        _, sig = shaped_frame()
        with pytest.raises(SignalError):
            cancel_si(sig, sig.with_samples(sig.samples[:-1]))


class TestNlms:
    def test_converges_on_static_channel(self):
        rng = np.random.default_rng(4)
        n = 20000
        ref = BasebandSignal(rng.standard_normal(n)
                             + 1j * rng.standard_normal(n), 1.0, 1.0)
        received = ref.with_samples(
            2.0 * np.concatenate([np.zeros(5), ref.samples[:-5]]))
        est = nlms_estimate(ref, received, order=16, step_mu=0.5)
        tail = slice(n // 2, None)
        err = np.mean(np.abs(est.samples[tail] - received.samples[tail]) ** 2)
        p_si = np.mean(np.abs(received.samples[tail]) ** 2)
        assert 10 * np.log10(err / p_si) < -30.0

    def test_zero_step_no_adaptation(self):
        _, sig = shaped_frame(seed=5)
        est = nlms_estimate(sig, sig, order=8, step_mu=0.0)
        assert np.allclose(est.samples, 0.0)

    def test_parameter_validation(self):
        _, sig = shaped_frame()
        with pytest.raises(SignalError):
            nlms_estimate(sig, sig, order=0)
        with pytest.raises(SignalError):
            nlms_estimate(sig, sig, order=8, step_mu=3.0)


class TestQpskDetect:
    def test_clean_loopback_zero_ber(self):
        sps = 8
        bits, sig = shaped_frame(n_symbols=128, sps=sps, seed=6)
        det = qpsk_detect(sig, SparseChannel(1.0, 0.0, kind="uplink"),
                          sps, rrc_pulse(sps), 128)
        # edge symbols lack full matched-filter support
        assert np.array_equal(det[8:-8], bits[8:-8])

    def test_gain_equalization(self):
        sps = 8
        bits, sig = shaped_frame(n_symbols=64, sps=sps, seed=7)
        scaled = sig.with_samples(0.01 * sig.samples)
        det = qpsk_detect(scaled, SparseChannel(0.01, 0.0, kind="uplink"),
                          sps, rrc_pulse(sps), 64)
        assert np.array_equal(det[8:-8], bits[8:-8])


class TestComputeMetrics:
    def test_perfect_estimate(self):
        x = np.arange(10, dtype=float)
        m = compute_metrics(x, x, [0, 1, 1], [0, 1, 1])
        assert m.mse == 0.0 and m.nmse == 0.0 and m.ber == 0.0

    def test_zero_estimate_nmse_one(self):
        x = np.random.default_rng(8).standard_normal(100)
        m = compute_metrics(np.zeros(100), x)
        assert m.nmse == pytest.approx(1.0)

    def test_random_bits_half_ber(self):
        rng = np.random.default_rng(9)
        a = rng.integers(0, 2, 10 ** 4)
        b = rng.integers(0, 2, 10 ** 4)
        m = compute_metrics(np.zeros(1), np.ones(1) * 0 + 1, a, b)
        assert abs(m.ber - 0.5) < 0.02

    def test_zero_energy_truth_rejected(self):
        with pytest.raises(SignalError):
            compute_metrics(np.ones(4), np.zeros(4))
