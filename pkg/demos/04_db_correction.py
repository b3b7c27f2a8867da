# coding: utf-8

# # Removing the electronics noise floor

# Spectrum-analyzer traces include the detector electronics noise (ENL). With
# the trace and ENL both relative to the SNL, the optical noise is
# (measured - enl) / (1 - enl).

from tripartite_cv import detection as det

measured_db = [-0.969, -2.540]
enl_db = -7.83

corrected = det.enl_correct(det.from_db(measured_db), float(det.from_db(enl_db)))
print("corrected linear", corrected)
print("corrected dB    ", det.to_db(corrected))
print("gap before", abs(measured_db[0] - measured_db[1]), "after", abs(det.to_db(corrected)[0] - det.to_db(corrected)[1]))
