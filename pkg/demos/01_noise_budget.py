# coding: utf-8

# # Noise budget of the three-party dense-coding setup

# A two-mode squeezed state is split three ways. Bob measures the sum and
# difference photocurrents of his two beams; Claire measures the amplitude
# quadrature of the third beam and feeds it forward to Bob. Everything here is
# relative to the shot noise limit (SNL = 1).

import math

from tripartite_cv import analysis as an
from tripartite_cv import circuit as ct

# The experimental operating point: squeeze parameter, propagation and detector
# efficiencies, and the feed-forward gain.

p = an.EXPERIMENT
print(p)

# Closed-form variances

budget = an.closed_form_variances(p)
print(f"sum current     {budget.v_sum:.4f}  ({budget.v_sum_db:+.2f} dB)")
print(f"diff current    {budget.v_diff:.4f}  ({budget.v_diff_db:+.2f} dB)")
print(f"helped current  {budget.v_sum_helped:.4f}  ({budget.v_sum_helped_db:+.2f} dB)")
print(f"improvement from Claire's help: {budget.v_sum - budget.v_sum_helped:.3f}")

# The same numbers from the circuit engine, which propagates the full
# covariance matrix through the netlist below.

spec = ct.build_dense_coding_setup(p.setup_params())
print(ct.render_netlist(spec))
engine = an.circuit_variances(p)
print("largest disagreement:", max(abs(engine.v_sum - budget.v_sum),
                                   abs(engine.v_diff - budget.v_diff),
                                   abs(engine.v_sum_helped - budget.v_sum_helped)))

# Squeezing of the source in dB

print(f"{10 * math.log10(math.exp(-2 * p.r)):.2f} dB")
