# coding: utf-8

# # Describing a circuit as a netlist

# One statement per line, modes numbered from 1. Comments start with '#'.

from tripartite_cv import circuit as ct
from tripartite_cv import detection as det

text = """
modes 2
tms 1 2 0.674        # EPR source
loss 1 0.9935
loss 2 0.9935
detect bell 1 2 0.9747
"""

spec = ct.parse_netlist(text)
state = ct.run_circuit(spec)
print(state.cov.round(4))

bell = spec.detectors[0]
print("sum/diff variances", det.bell_variances(state, bell.i, bell.j, bell.eta))

# Rendering gives back text that parses to the same spec

print(ct.render_netlist(spec))
assert ct.parse_netlist(ct.render_netlist(spec)) == spec

# Mistakes are reported with their line number

try:
    ct.parse_netlist("modes 2\nloss 3 0.5")
except ct.NetlistError as exc:
    print(type(exc).__name__, exc)
