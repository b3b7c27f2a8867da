"""
Seeded sampling, synthetic photocurrents, spectrum-analyzer emulation and a
binary pulse-code-modulation link.

Determinism contract: samples are produced in fixed-size chunks, chunk ``k``
drawing from a generator seeded by ``(seed, k)``. Results therefore do not
depend on how many worker threads evaluate the chunks.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy import signal, stats

from .gaussian import GaussianState, QuadratureForm

__all__ = [
    "CHUNK_SIZE",
    "SpectrumConfig",
    "ToneSignal",
    "SpectrumTrace",
    "VarianceEstimate",
    "BpcmResult",
    "sample_quadratures",
    "sample_form",
    "sample_variance",
    "synthesize_photocurrent",
    "spectrum_estimate",
    "trace_floor_db",
    "bpcm_roundtrip",
    "bpcm_ber_oracle",
]

CHUNK_SIZE = 1 << 16
# equivalent noise bandwidth of a Hann window, in bins
HANN_ENBW = 1.5


def _rng(seed, chunk):
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), chunk]))


def _chunked(n, seed, draw, workers):
    sizes = [min(CHUNK_SIZE, n - k) for k in range(0, n, CHUNK_SIZE)]

    def job(k):
        return draw(_rng(seed, k), sizes[k])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(k) for k in range(len(sizes))]
    return np.concatenate(parts)


def sample_quadratures(state: GaussianState, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """Draw ``n`` quadrature vectors, shape ``(n, 2N)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    # eigh instead of cholesky: pure states after heavy squeezing are near-singular
    w, U = np.linalg.eigh(state.cov)
    L = U * np.sqrt(np.clip(w, 0, None))

    def draw(rng, m):
        return state.mean + rng.standard_normal((m, L.shape[0])) @ L.T

    return _chunked(n, seed, draw, workers)


def sample_form(state: GaussianState, form: QuadratureForm, n: int, seed: int, workers: int = 1) -> np.ndarray:
    c = form.coefficients
    if c.size != state.mean.size:
        raise ValueError("form and state dimensions differ")
    return sample_quadratures(state, n, seed, workers) @ c


class VarianceEstimate(NamedTuple):
    value: float
    stderr: float
    n: int

    def within(self, expected, k=3.0):
        return abs(self.value - expected) <= k * self.stderr


def _variance(x):
    n = x.size
    mean = math.fsum(x) / n
    d = x - mean
    return math.fsum(d * d) / (n - 1)


def sample_variance(state: GaussianState, form: QuadratureForm, n: int, seed: int,
                    workers: int = 1) -> VarianceEstimate:
    """Unbiased sample variance of ``form`` with stderr ``sqrt(2/(n-1)) * var``."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if not np.any(form.coefficients):
        return VarianceEstimate(0.0, 0.0, n)
    var = _variance(sample_form(state, form, n, seed, workers))
    return VarianceEstimate(var, math.sqrt(2 / (n - 1)) * var, n)


@dataclass(frozen=True)
class SpectrumConfig:
    """Sampling and analyzer settings. Defaults follow the measured traces."""

    sample_rate: float = 10e6
    center: float = 2e6
    span: float = 1e6
    rbw: float = 30e3
    vbw: float = 100.0

    def __post_init__(self):
        if min(self.sample_rate, self.span, self.rbw, self.vbw) <= 0:
            raise ValueError("rates and bandwidths must be positive")
        if self.rbw > self.span:
            raise ValueError("rbw must not exceed the span")
        if self.vbw > self.rbw:
            raise ValueError("vbw must not exceed rbw")
        if self.center + self.span / 2 > self.sample_rate / 2:
            raise ValueError("span reaches beyond the Nyquist frequency")

    @property
    def segment_length(self) -> int:
        return int(round(HANN_ENBW * self.sample_rate / self.rbw))

    @property
    def hop(self) -> int:
        return self.segment_length // 2

    @property
    def video_frames(self) -> int:
        """Periodogram frames spanning one video-filter time constant, 1/VBW."""
        return int(math.ceil(self.sample_rate / (self.vbw * self.hop)))

    def samples_for_full_average(self) -> int:
        return self.hop * (self.video_frames - 1) + self.segment_length

    def min_samples(self) -> int:
        return 10 * self.segment_length


@dataclass(frozen=True)
class ToneSignal:
    """On-off keyed carrier: each bit lasts ``samples_per_bit`` samples."""

    freq: float = 2e6
    depth: float = 0.0
    bit_pattern: tuple = ()
    samples_per_bit: int = 50

    def waveform(self, n, sample_rate):
        t = np.arange(n) / sample_rate
        carrier = np.cos(2 * np.pi * self.freq * t)
        if not self.bit_pattern:
            return self.depth * carrier
        bits = np.asarray(self.bit_pattern, dtype=float)
        envelope = np.resize(np.repeat(bits, self.samples_per_bit), n)
        return self.depth * envelope * carrier


def synthesize_photocurrent(noise_variance: float, tone: ToneSignal, cfg: SpectrumConfig,
                            n_samples: int, seed: int) -> np.ndarray:
    """White Gaussian noise at ``noise_variance`` (SNL = 1) plus the modulated tone."""
    if cfg.sample_rate < 4 * tone.freq:
        raise ValueError(f"sample rate {cfg.sample_rate} below 4x the signal frequency {tone.freq}")
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    sd = math.sqrt(noise_variance)
    noise = _chunked(n_samples, seed, lambda rng, m: rng.standard_normal(m), 1)
    return sd * noise + tone.waveform(n_samples, cfg.sample_rate)


class SpectrumTrace(NamedTuple):
    freq_hz: np.ndarray
    psd_db_rel_snl: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["freq_hz", "psd_db_rel_snl"])
        for f, p in zip(self.freq_hz, self.psd_db_rel_snl):
            w.writerow([f"{f:.6g}", f"{p:.6g}"])
        return buf.getvalue()


def spectrum_estimate(series, cfg: SpectrumConfig, full_band: bool = False) -> SpectrumTrace:
    """Analyzer trace over ``center +/- span/2`` relative to the SNL.

    Half-overlapped Hann periodograms of ``segment_length`` samples set the
    resolution bandwidth; a moving average over the frames covering 1/VBW
    seconds plays the role of the video filter and the last averaged frame is
    returned. With ``full_band=True`` the linear PSD over 0..fs/2 is
    returned instead (for integration checks), still SNL-relative.
    """
    series = np.asarray(series, dtype=float)
    nper = cfg.segment_length
    if series.size < cfg.min_samples():
        raise ValueError(f"series of {series.size} samples is shorter than 10 RBW windows ({cfg.min_samples()})")
    freqs, _, frames = signal.spectrogram(series, fs=cfg.sample_rate, window="hann", nperseg=nper,
                                          noverlap=nper - cfg.hop, detrend=False, scaling="density")
    n_avg = min(cfg.video_frames, frames.shape[1])
    kernel = np.ones(n_avg) / n_avg
    video = np.apply_along_axis(lambda row: np.convolve(row, kernel, mode="valid"), 1, frames)
    trace = video[:, -1] / (2 / cfg.sample_rate)
    if full_band:
        return SpectrumTrace(freqs, trace)
    sel = np.abs(freqs - cfg.center) <= cfg.span / 2
    return SpectrumTrace(freqs[sel], 10 * np.log10(trace[sel]))


def trace_floor_db(trace: SpectrumTrace, exclude=(), guard: float = 100e3) -> float:
    """Noise floor: mean linear level away from the listed tone frequencies, in dB."""
    mask = np.ones(trace.freq_hz.size, dtype=bool)
    for f in exclude:
        mask &= np.abs(trace.freq_hz - f) > guard
    return float(10 * np.log10(np.mean(10 ** (trace.psd_db_rel_snl[mask] / 10))))


@dataclass(frozen=True)
class BpcmResult:
    sent: tuple
    decoded: tuple
    n_errors: int
    ber: float
    ci_low: float
    ci_high: float

    def to_json(self) -> str:
        d = asdict(self)
        d["sent"] = "".join(map(str, self.sent))
        d["decoded"] = "".join(map(str, self.decoded))
        return json.dumps(d, sort_keys=True)


def bpcm_roundtrip(bits, noise_variance: float, depth: float, seed: int,
                   samples_per_bit: int = 20, cfg: SpectrumConfig = SpectrumConfig(),
                   freq: float = 2e6) -> BpcmResult:
    """Send ``bits`` as on-off pulses of the carrier and decode coherently.

    The receiver correlates each bit slot with the carrier (matched filter)
    and compares against half the expected "1" amplitude.
    """
    bits = np.asarray(bits, dtype=int).ravel()
    if bits.size == 0:
        raise ValueError("bit sequence is empty")
    if depth <= 0:
        raise ValueError("depth must be > 0")
    tone = ToneSignal(freq, depth, tuple(bits.tolist()), samples_per_bit)
    n = bits.size * samples_per_bit
    x = synthesize_photocurrent(noise_variance, tone, cfg, n, seed)
    carrier = np.cos(2 * np.pi * freq * np.arange(samples_per_bit) / cfg.sample_rate)
    energy = carrier @ carrier
    stat = x.reshape(bits.size, samples_per_bit) @ carrier / energy
    decoded = (stat > depth / 2).astype(int)
    errors = int(np.sum(decoded != bits))
    ci = stats.binomtest(errors, bits.size).proportion_ci(0.95, method="wilson")
    return BpcmResult(tuple(bits.tolist()), tuple(decoded.tolist()), errors,
                      errors / bits.size, float(ci.low), float(ci.high))


def bpcm_ber_oracle(noise_variance: float, depth: float, samples_per_bit: int = 20,
                    cfg: SpectrumConfig = SpectrumConfig(), freq: float = 2e6) -> float:
    """Bit error rate ``Q(depth * sqrt(E) / (2 sigma))`` of the coherent on-off decoder.

    ``E`` is the carrier energy over one bit slot; for whole carrier periods
    it equals ``samples_per_bit / 2``.
    """
    if noise_variance == 0:
        return 0.0
    carrier = np.cos(2 * np.pi * freq * np.arange(samples_per_bit) / cfg.sample_rate)
    energy = carrier @ carrier
    return float(stats.norm.sf(depth * math.sqrt(energy) / (2 * math.sqrt(noise_variance))))
