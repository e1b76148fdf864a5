"""Experiment orchestration: seeded Monte Carlo trials, parameter sweeps
and CSV emission for the full-duplex modulo-receiver pipeline."""

import csv
import dataclasses
import io
import time
from dataclasses import dataclass, field

import numpy as np

from . import adc, chanest, sic, signals, unfolding
from .errors import ConfigError

SCHEMA_VERSION = 1

TRIAL_COLUMNS = [
    "trial",
    "mse_received",
    "nmse_received",
    "mse_si_proposed",
    "nmse_si_proposed",
    "mse_si_nlms",
    "nmse_si_nlms",
    "mse_soi",
    "ber",
    "sic_proposed_db",
    "sic_nlms_db",
    "mse_clipped",
    "chan_nmse",
    "sigma_qlambda_sq",
    "error",
]


@dataclass
class ExperimentConfig:
    """Every knob of one experiment; all trials derive from (config, seed)."""

    schema_version: int = SCHEMA_VERSION
    # waveform
    n_symbols: int = 256
    samples_per_symbol: int = 32
    pulse: str = "rrc"
    rolloff: float = 0.25
    pulse_span: int = 8
    # pilot (few harmonics keep the fold count well below the bin budget)
    pilot_harmonics: int = 4
    pilot_samples: int = 512
    # channel truth
    channel_amplitude: float = 1.0
    channel_delay_samples: float = 7.0
    # mixture
    p_u: float = 1.0
    p_d: float = 1.0
    snr_db: float = 40.0
    sir_db: float = -20.0
    # ADC
    lam: float = 1.0
    bits: int = 4
    peak_ratio: float = 10.0
    # unfolding (None = auto)
    order: int | None = None
    beta_r: float | None = None
    # baselines
    run_nlms: bool = True
    run_clipped: bool = True
    nlms_order: int = 32
    nlms_step: float = 0.5
    nlms_delta: float = 1e-6
    # Monte Carlo
    trials: int = 10
    seed: int = 1234

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.pulse not in ("rrc", "rect"):
            raise ConfigError("pulse must be 'rrc' or 'rect'")
        if self.peak_ratio <= 0 or self.lam <= 0:
            raise ConfigError("peak_ratio and lam must be positive")

    def pulse_kernel(self) -> np.ndarray:
        if self.pulse == "rect":
            return signals.rect_pulse(self.samples_per_symbol)
        return signals.rrc_pulse(self.samples_per_symbol, self.rolloff,
                                 self.pulse_span)

    def signal_bandwidth(self) -> float:
        return (1.0 + self.rolloff) * np.pi / self.samples_per_symbol

    def replace(self, **kwargs) -> "ExperimentConfig":
        return dataclasses.replace(self, **kwargs)


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse the flat key = value config document."""
    values: dict = {}
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in fields:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        values[key] = _coerce(val, key)
    if "schema_version" not in values:
        raise ConfigError("config must declare schema_version")
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _coerce(val: str, key: str):
    low = val.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "auto"):
        return None
    try:
        return int(val)
    except ValueError:
        pass
    try:
        return float(val)
    except ValueError:
        pass
    return val


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


@dataclass
class TrialReport:
    """Metrics of one Monte Carlo trial; `error` is set when a stage failed."""

    trial: int
    values: dict = field(default_factory=dict)
    error: str = ""

    def row(self) -> list:
        out = [self.trial]
        for col in TRIAL_COLUMNS[1:-1]:
            v = self.values.get(col, float("nan"))
            out.append(v)
        out.append(self.error)
        return out


@dataclass
class TrialWaveforms:
    """Aligned per-sample traces of a single trial (I rail) for dumps."""

    truth: np.ndarray
    folded: np.ndarray
    quantized: np.ndarray
    recovered: np.ndarray
    si_hat_proposed: np.ndarray
    si_hat_nlms: np.ndarray
    soi_hat: np.ndarray


def _run_trial(cfg: ExperimentConfig, trial: int,
               keep_waveforms: bool = False):
    t0 = time.perf_counter()
    rng = np.random.default_rng([cfg.seed, trial])
    sps = cfg.samples_per_symbol
    kernel = cfg.pulse_kernel()
    bw = cfg.signal_bandwidth()
    lam = cfg.lam

    bits_u = rng.integers(0, 2, size=2 * cfg.n_symbols)
    bits_d = rng.integers(0, 2, size=2 * cfg.n_symbols)
    x_u = signals.pulse_shape(signals.qpsk_modulate(bits_u), sps, kernel,
                              bandwidth=bw)
    x_d = signals.pulse_shape(signals.qpsk_modulate(bits_d), sps, kernel,
                              bandwidth=bw)
    n = len(x_u)
    tau = cfg.channel_delay_samples * x_u.sample_interval
    truth_ch = signals.SparseChannel(cfg.channel_amplitude, tau)

    soi_term = np.sqrt(cfg.p_u) * x_u.samples
    si_raw = signals.apply_sparse_channel(x_d, truth_ch,
                                          power=cfg.p_d).samples
    p_soi = np.mean(np.abs(soi_term) ** 2)
    p_si = np.mean(np.abs(si_raw) ** 2)
    sir_scale = np.sqrt(p_soi * 10.0 ** (-cfg.sir_db / 10.0) / p_si)
    si_term = sir_scale * si_raw
    sigma2 = p_soi * 10.0 ** (-cfg.snr_db / 10.0)
    noise = np.sqrt(sigma2 / 2.0) * (rng.standard_normal(n)
                                     + 1j * rng.standard_normal(n))
    z = soi_term + si_term + noise

    # normalize the frame so the largest rail amplitude is peak_ratio * lam
    peak = max(np.max(np.abs(z.real)), np.max(np.abs(z.imag)))
    kappa = cfg.peak_ratio * lam / peak
    z, soi_term, si_term = kappa * z, kappa * soi_term, kappa * si_term
    g_si = kappa * sir_scale * np.sqrt(cfg.p_d) * cfg.channel_amplitude

    received = signals.BasebandSignal(z, x_u.sample_interval, bw)
    adc_cfg = adc.ModuloAdcConfig(lam=lam, bits=cfg.bits)
    folded = adc.modulo_adc(received, adc_cfg)

    peak_bound = cfg.peak_ratio * lam
    beta = cfg.beta_r if cfg.beta_r is not None else unfolding.beta_bound(peak_bound, lam)
    ucfg = unfolding.UnfoldingConfig(order=1, lam=lam, beta_r=beta,
                                     sample_interval=received.sample_interval,
                                     bandwidth=bw)
    zeta = lam / peak_bound
    order = cfg.order if cfg.order is not None else unfolding.choose_order(ucfg, zeta)
    ucfg = dataclasses.replace(ucfg, order=order)

    values: dict = {}
    report = TrialReport(trial=trial, values=values)
    waveforms = None

    recovered = unfolding.usf_recover(folded, ucfg)
    L = order
    truth_trim = z[L:]
    m_rx = sic.compute_metrics(recovered.samples, truth_trim)
    values["mse_received"] = m_rx.mse
    values["nmse_received"] = m_rx.nmse
    values["sigma_qlambda_sq"] = 2.0 * adc_cfg.step ** 2 / 12.0

    # pilot phase: no SoI, the SI path alone drives the folded pilot. The
    # pilot is sent at the downlink reference's peak level so the folded
    # pilot sees the same dynamic range as the data phase.
    pilot = signals.random_pilot(cfg.pilot_samples * received.sample_interval,
                                 cfg.pilot_harmonics, cfg.pilot_samples,
                                 rng_seed=cfg.seed)
    ref_peak = max(np.max(np.abs(x_d.samples.real)),
                   np.max(np.abs(x_d.samples.imag)))
    pilot_sig = signals.generate_pilot(pilot)
    pilot_rx = signals.apply_sparse_channel(
        pilot_sig, signals.SparseChannel(g_si * ref_peak, tau),
        periodic=True).samples.real
    pilot_noise = kappa * np.sqrt(sigma2 / 2.0) * rng.standard_normal(pilot_rx.size)
    pilot_folded = adc.modulo_adc(
        signals.BasebandSignal(pilot_rx + pilot_noise,
                               received.sample_interval, pilot.bandwidth),
        adc_cfg)
    est_raw = chanest.estimate_si_channel(pilot_folded.i, pilot, lam)
    est_ch = signals.SparseChannel(est_raw.amplitude / ref_peak,
                                   est_raw.delay, kind="si")
    values["chan_nmse"] = chanest.channel_nmse(
        est_ch, signals.SparseChannel(g_si, tau), pilot)

    si_hat = sic.reconstruct_si(est_ch, x_d)
    m_si = sic.compute_metrics(si_hat.samples, si_term)
    values["mse_si_proposed"] = m_si.mse
    values["nmse_si_proposed"] = m_si.nmse

    si_true_sig = signals.BasebandSignal(si_term[L:], received.sample_interval, bw)
    result = sic.cancel_si(recovered,
                           recovered.with_samples(si_hat.samples[L:]),
                           true_si=si_true_sig)
    values["sic_proposed_db"] = result.metrics.sic_db
    soi_trim = soi_term[L:]
    values["mse_soi"] = sic.compute_metrics(result.r_soi.samples, soi_trim).mse

    # detection: skip symbols whose shaping support touches the trimmed edge
    skip = int(np.ceil(L / sps)) + 1
    h_u = signals.SparseChannel(kappa * np.sqrt(cfg.p_u), 0.0, kind="uplink")
    det = sic.qpsk_detect(result.r_soi, h_u, sps, kernel, cfg.n_symbols,
                          offset=-L)
    n_sym_det = det.size // 2
    bits_hat = det[2 * skip: 2 * n_sym_det]
    bits_ref = bits_u[2 * skip: 2 * n_sym_det]
    values["ber"] = float(np.mean(bits_hat != bits_ref))

    nlms_hat = None
    if cfg.run_nlms:
        nlms_sig = sic.nlms_estimate(x_d, received, cfg.nlms_order,
                                     cfg.nlms_step, cfg.nlms_delta)
        m_nlms = sic.compute_metrics(nlms_sig.samples, si_term)
        values["mse_si_nlms"] = m_nlms.mse
        values["nmse_si_nlms"] = m_nlms.nmse
        res_nlms = sic.cancel_si(
            received, nlms_sig,
            true_si=signals.BasebandSignal(si_term, received.sample_interval, bw))
        values["sic_nlms_db"] = res_nlms.metrics.sic_db
        nlms_hat = nlms_sig.samples

    if cfg.run_clipped:
        clipped = adc.conventional_adc(received, span=2.0 * lam, bits=cfg.bits)
        values["mse_clipped"] = sic.compute_metrics(clipped.samples, z).mse

    if keep_waveforms:
        waveforms = TrialWaveforms(
            truth=truth_trim.real,
            folded=np.asarray(adc.modulo_fold(z.real, lam))[L:],
            quantized=folded.i[L:],
            recovered=recovered.i,
            si_hat_proposed=si_hat.samples.real[L:],
            si_hat_nlms=(nlms_hat.real[L:] if nlms_hat is not None
                         else np.full(truth_trim.size, np.nan)),
            soi_hat=result.r_soi.samples.real,
        )

    values["elapsed_s"] = time.perf_counter() - t0
    return report, waveforms


def run_experiment(cfg: ExperimentConfig, keep_waveforms: bool = False):
    """Run all trials; per-trial failures are recorded and skipped."""
    reports = []
    waveforms = None
    for t in range(cfg.trials):
        try:
            report, wf = _run_trial(cfg, t, keep_waveforms and t == 0)
            if wf is not None:
                waveforms = wf
        except Exception as exc:  # per-trial errors keep the run alive
            report = TrialReport(trial=t, error=f"{type(exc).__name__}: {exc}")
        reports.append(report)
    if keep_waveforms:
        return reports, waveforms
    return reports


def aggregate(reports) -> dict:
    """Mean and standard deviation of every numeric column over the
    successful trials."""
    out: dict = {"trials_ok": 0, "trials_failed": 0}
    ok = [r for r in reports if not r.error]
    out["trials_ok"] = len(ok)
    out["trials_failed"] = len(reports) - len(ok)
    for col in TRIAL_COLUMNS[1:-1]:
        vals = np.array([r.values.get(col, np.nan) for r in ok], dtype=float)
        vals = vals[np.isfinite(vals)]
        out[f"{col}_mean"] = float(np.mean(vals)) if vals.size else float("nan")
        out[f"{col}_std"] = float(np.std(vals)) if vals.size else float("nan")
    return out


def trials_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRIAL_COLUMNS)
    for r in reports:
        writer.writerow(_fmt_row(r.row()))
    return buf.getvalue()


def waveforms_csv(wf: TrialWaveforms) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "truth", "folded", "quantized", "recovered",
                     "si_hat_proposed", "si_hat_nlms", "soi_hat"])
    for k in range(wf.truth.size):
        writer.writerow(_fmt_row([
            k, wf.truth[k], wf.folded[k], wf.quantized[k], wf.recovered[k],
            wf.si_hat_proposed[k], wf.si_hat_nlms[k], wf.soi_hat[k],
        ]))
    return buf.getvalue()


SWEEPABLE = {
    "snr_db", "sir_db", "bits", "peak_ratio", "lam", "n_symbols",
    "channel_delay_samples", "channel_amplitude", "trials", "seed",
    "pilot_harmonics", "pilot_samples", "nlms_order", "nlms_step",
}


def sweep(cfg: ExperimentConfig, axis: str, sweep_values) -> str:
    """One aggregated CSV row per axis value."""
    if axis not in SWEEPABLE:
        raise ConfigError(f"unknown sweep axis '{axis}'")
    rows = []
    header = None
    for v in sweep_values:
        sub = cfg.replace(**{axis: type(getattr(cfg, axis))(v)})
        agg = aggregate(run_experiment(sub))
        if header is None:
            header = [axis] + list(agg.keys())
        rows.append([v] + [agg[k] for k in header[1:]])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(_fmt_row(row))
    return buf.getvalue()


def noise_analysis_csv(zeta: float, bits_values, dr_multipliers=None,
                       mc_samples: int = 0, seed: int = 0) -> str:
    """Analytic (and optionally empirical) quantization-noise curves.

    One row per (bits, dr) pair; with mc_samples > 0 the empirical
    variances come from uniformly distributed amplitudes over the span.
    """
    if dr_multipliers is None:
        dr_multipliers = [1.0]
    rng = np.random.default_rng(seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bits", "dr_multiplier", "zeta",
                     "sigma_conventional", "sigma_modulo",
                     "sigma_conventional_mc", "sigma_modulo_mc",
                     "gap_db", "effective_bits"])
    for dr in dr_multipliers:
        peak = dr / 2.0
        for b in bits_values:
            lam = zeta * peak
            cfg = adc.ModuloAdcConfig(lam=lam, bits=int(b))
            rep = adc.quant_noise_analysis(cfg, signal_peak=peak)
            emp_c = emp_m = float("nan")
            if mc_samples > 0:
                x = rng.uniform(-peak, peak, size=mc_samples)
                conv_cfg = adc.ModuloAdcConfig(lam=peak, bits=int(b),
                                               dynamic_range=2.0 * peak)
                qc = adc.quantize_midrise(x, conv_cfg)
                emp_c = float(np.mean((qc - x) ** 2))
                xf = np.asarray(adc.modulo_fold(x, lam))
                qm = adc.quantize_midrise(xf, cfg)
                emp_m = float(np.mean((qm - xf) ** 2))
            gap = 10.0 * np.log10(rep.sigma_q_sq / rep.sigma_qlambda_sq)
            writer.writerow(_fmt_row([
                int(b), dr, zeta, rep.sigma_q_sq, rep.sigma_qlambda_sq,
                emp_c, emp_m, gap, rep.effective_bits,
            ]))
    return buf.getvalue()


def _fmt_row(row):
    out = []
    for v in row:
        if isinstance(v, float):
            out.append(f"{v:.10g}")
        else:
            out.append(v)
    return out
