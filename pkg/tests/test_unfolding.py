"""Unfolding: finite differences, anti-differences, order selection and
full modulo-sample recovery."""

import math

import numpy as np
import pytest

from modfold import (
    BasebandSignal,
    ModuloAdcConfig,
    UnfoldingConfig,
    UnfoldingError,
    anti_difference,
    choose_order,
    finite_difference,
    modulo_adc,
    usf_recover,
)
from modfold.unfolding import beta_bound


def bandlimited_frame(n, omega, peak, seed, sample_interval=1.0):
    """Random zero-mean bandlimited test signal with an exact peak."""
    rng = np.random.default_rng(seed)
    t = np.arange(n) * sample_interval
    n_tones = 12
    freqs = rng.uniform(0.05 * omega, omega, n_tones)
    phases = rng.uniform(0, 2 * np.pi, n_tones)
    amps = rng.uniform(0.2, 1.0, n_tones)
    x = np.sum(amps[:, None] * np.cos(freqs[:, None] * t + phases[:, None]),
               axis=0)
    return peak * x / np.max(np.abs(x))


class TestFiniteDifference:
    def test_first(self):
        assert np.array_equal(finite_difference([1, 2, 4], 1), [1, 2])

    def test_second(self):
        assert np.array_equal(finite_difference([1, 2, 4], 2), [1])

    def test_polynomial_annihilation(self):
        k = np.arange(20, dtype=float)
        poly = 3 * k ** 2 - k + 5
        assert np.allclose(finite_difference(poly, 3), 0.0)

    def test_too_short_rejected(self):
        with pytest.raises(UnfoldingError):
            finite_difference([1.0, 2.0], 2)


class TestAntiDifference:
    def test_running_sum(self):
        assert np.array_equal(anti_difference([1, 1, 1]), [1, 2, 3])

    def test_inverts_difference_up_to_offset(self):
        x = np.array([2.0, 5.0, 3.0, 8.0])
        rebuilt = anti_difference(finite_difference(x, 1))
        assert np.allclose(rebuilt, x[1:] - x[0])

    def test_zeros(self):
        assert np.array_equal(anti_difference(np.zeros(5)), np.zeros(5))

    def test_empty_rejected(self):
        with pytest.raises(UnfoldingError):
            anti_difference([])


class TestChooseOrder:
    def _cfg(self, t_omega_e, lam=1.0, beta=10.0):
        omega = 1.0
        return UnfoldingConfig(order=1, lam=lam, beta_r=beta,
                               sample_interval=t_omega_e / (omega * math.e),
                               bandwidth=omega)

    def test_reference_point(self):
        # amplitude bound alone gives 1, the strict ratio constraint bumps to 2
        assert choose_order(self._cfg(0.1), zeta=0.1) == 2

    def test_degenerate_no_fold_bound(self):
        # smallest admissible bound (beta_r = 2*lam) needs minimal order
        assert choose_order(self._cfg(0.1, lam=1.0, beta=2.0), zeta=0.5) == 1

    def test_postcondition_holds(self):
        for toe in (0.05, 0.2, 0.45):
            for zeta in (0.5, 0.1, 0.02):
                cfg = self._cfg(toe)
                L = choose_order(cfg, zeta)
                assert cfg.contraction ** L < zeta
                assert cfg.contraction ** (L - 1) >= zeta or \
                    L == math.ceil(-math.log(cfg.beta_r) / math.log(cfg.contraction))

    def test_not_oversampled_rejected(self):
        with pytest.raises(UnfoldingError):
            choose_order(self._cfg(1.5), 0.1)


class TestUnfoldingConfig:
    def test_beta_must_be_lattice_multiple(self):
        with pytest.raises(UnfoldingError):
            UnfoldingConfig(order=1, lam=1.0, beta_r=3.0,
                            sample_interval=0.1, bandwidth=1.0)

    def test_beta_bound_snaps_up(self):
        assert beta_bound(9.7, 1.0) == pytest.approx(12.0)
        assert beta_bound(9.7, 1.0, margin=0) == pytest.approx(10.0)


class TestUsfRecover:
    def _recover_case(self, peak, seed, n=512, quantized=False, bits=4):
        lam = 1.0
        omega = 0.05
        T = 1.0 / (2 * omega * math.e)  # T * omega * e = 0.5
        x = bandlimited_frame(n, omega, peak, seed, T)
        sig = BasebandSignal(x + 1j * x[::-1], T, omega)
        adc_cfg = ModuloAdcConfig(lam=lam, bits=bits if quantized else None)
        folded = modulo_adc(sig, adc_cfg)
        beta = beta_bound(peak, lam)
        cfg = UnfoldingConfig(order=1, lam=lam, beta_r=beta,
                              sample_interval=T, bandwidth=omega)
        L = choose_order(cfg, lam / peak)
        cfg = UnfoldingConfig(order=L, lam=lam, beta_r=beta,
                              sample_interval=T, bandwidth=omega)
        rec = usf_recover(folded, cfg)
        return rec.samples, sig.samples[L:]

    def test_no_folds_is_identity(self):
        lam = 1.0
        x = 0.4 * np.sin(0.02 * np.arange(400))
        sig = BasebandSignal(x + 1j * x, 1.0, 0.05)
        cfg = UnfoldingConfig(order=2, lam=lam, beta_r=2.0,
                              sample_interval=1.0, bandwidth=0.05)
        rec = usf_recover(sig, cfg)
        assert np.max(np.abs(rec.samples - sig.samples[2:])) < 1e-12

    def test_exact_unfolding_peak_10(self):
        rec, truth = self._recover_case(peak=10.0, seed=0)
        assert np.max(np.abs(rec - truth)) < 1e-9

    @pytest.mark.parametrize("peak,seed", [(2.5, 1), (6.0, 2), (19.0, 3)])
    def test_exact_unfolding_range(self, peak, seed):
        rec, truth = self._recover_case(peak=peak, seed=seed)
        assert np.max(np.abs(rec - truth)) < 1e-9

    def test_quantized_error_near_quant_noise(self):
        rec, truth = self._recover_case(peak=6.0, seed=4, quantized=True,
                                        bits=9)
        step = 2.0 / 2 ** 9
        mse = np.mean(np.abs(rec - truth) ** 2)
        assert mse < 6.0 * step ** 2 / 12.0  # both rails plus slack

    def test_determinism(self):
        a, _ = self._recover_case(peak=10.0, seed=5)
        b, _ = self._recover_case(peak=10.0, seed=5)
        assert np.array_equal(a, b)

    def test_commutation_of_difference_and_fold(self):
        # modulo of the L-th difference of folded samples equals the L-th
        # difference of the signal when the latter stays inside the range
        lam = 1.0
        omega = 0.05
        T = 1.0 / (2 * omega * math.e)
        x = bandlimited_frame(600, omega, 10.0, seed=6, sample_interval=T)
        L = 4
        dx = np.diff(x, n=L)
        assert np.max(np.abs(dx)) <= lam
        folded = np.asarray(
            modulo_adc(BasebandSignal(x + 0j, T, omega),
                       ModuloAdcConfig(lam=lam, bits=None)).i)
        from modfold import modulo_fold
        assert np.allclose(modulo_fold(np.diff(folded, n=L), lam), dx,
                           atol=1e-9)

    def test_short_frame_rejected(self):
        cfg = UnfoldingConfig(order=3, lam=1.0, beta_r=12.0,
                              sample_interval=0.1, bandwidth=1.0)
        sig = BasebandSignal(np.zeros(20) + 0.1 + 0j, 0.1, 1.0)
        with pytest.raises(UnfoldingError):
            usf_recover(sig, cfg)

    def test_noise_overload_raises_or_flags(self):
        # destroying the oversampling margin must not fail silently
        lam = 1.0
        rng = np.random.default_rng(9)
        x = 10 * rng.standard_normal(400)  # not bandlimited at all
        sig = BasebandSignal(x + 1j * x, 1.0, 0.01)
        cfg = UnfoldingConfig(order=3, lam=lam, beta_r=12.0,
                              sample_interval=1.0, bandwidth=0.01)
        folded = modulo_adc(sig, ModuloAdcConfig(lam=lam, bits=None))
        with pytest.raises(UnfoldingError):
            usf_recover(folded, cfg)
