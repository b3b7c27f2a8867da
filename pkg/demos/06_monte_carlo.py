# coding: utf-8

# # Sampling, spectra and a pulse-code link

# The analytic variances can be checked by drawing quadrature samples, and the
# measured traces can be imitated by white noise at the same level passed
# through an emulated spectrum analyzer (30 kHz RBW, 100 Hz VBW).

import numpy as np

from tripartite_cv import circuit as ct
from tripartite_cv import detection as det
from tripartite_cv import montecarlo as mc

p = ct.SetupParams()
state = ct.run_circuit(ct.build_dense_coding_setup(p, with_detectors=False))
plus, minus = det.bell_currents(state, 1, 2, p.eta)
est = mc.sample_variance(plus.detected_state(), plus.form, 10**6, seed=1)
print(f"sampled {est.value:.4f} +- {est.stderr:.4f}, analytic {plus.variance_linear:.4f}")

# Spectrum at the corrected helped level with a 2 MHz tone on top

cfg = mc.SpectrumConfig()
x = mc.synthesize_photocurrent(0.4699, mc.ToneSignal(depth=0.5), cfg, cfg.samples_for_full_average(), seed=1)
trace = mc.spectrum_estimate(x, cfg)
print("floor", round(mc.trace_floor_db(trace, exclude=[2e6]), 2), "dB")
print("peak at", trace.freq_hz[np.argmax(trace.psd_db_rel_snl)], "Hz")

# Bits sent as on-off pulses of the carrier. Lower noise, fewer errors.

bits = np.random.default_rng(0).integers(0, 2, 20000)
for noise in (0.47, 0.76):
    res = mc.bpcm_roundtrip(bits, noise, depth=0.8, seed=3)
    print(noise, res.ber, (round(res.ci_low, 4), round(res.ci_high, 4)), "oracle", round(mc.bpcm_ber_oracle(noise, 0.8), 4))
