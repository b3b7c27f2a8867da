# coding: utf-8

# # Channel capacities and where dense coding wins

# Capacities are in nats per use. The coherent-state baseline is ln(1 + n),
# the squeezed-state baseline ln(1 + 2n); dense coding uses both quadratures
# with the measured noise floors.

from tripartite_cv import analysis as an

p = an.EXPERIMENT

c = an.channel_capacities(p.with_nbar(11))
print(f"n=11: unhelped {c.c_unhelped:.3f}, helped {c.c_helped:.3f}, "
      f"coherent {c.c_coherent:.3f}, squeezed {c.c_squeezed:.3f}")

# Photon numbers where the dense-coding curves cross the baselines. The
# squeezed crossing is very flat, so small changes in the floors move it a
# lot; compare exact floors with the rounded measured ones.

print("closed-form floors", an.capacity_thresholds(p))
print("measured floors   ", an.capacity_thresholds(p, an.MEASURED_FLOORS))

# A short table of the capacity curves

for c in an.sweep_nbar(p, [1, 2, 5, 11, 20]):
    print(f"{c.nbar:5.1f} {c.c_helped:7.3f} {c.c_unhelped:7.3f} {c.c_coherent:7.3f} {c.c_squeezed:7.3f}")
