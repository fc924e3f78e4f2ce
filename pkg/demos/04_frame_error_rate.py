"""
Frame error rate against the design figures
===========================================

The union of the design erasure probabilities over the information set is an
upper estimate of the frame error rate. With a single information bit it is
exact.
"""

from mkpolar import T2, construct_code
from mkpolar.simulation import run_fer_simulation, union_bound

###############################################################################
# One information bit: the FER estimate should bracket the leaf erasure
# probability.

spec = construct_code([T2] * 3, "bec:0.5", 1)
exact = spec.reliabilities[spec.information_set[0] - 1]
r = run_fer_simulation(spec, "bec:0.5", 50_000, seed=0)
print("exact %.5f   simulated %.5f   95%% CI [%.5f, %.5f]" % (exact, r.fer, r.wilson_low, r.wilson_high))

###############################################################################
# Sweep the rate of a length-256 code

for k in (32, 64, 96, 128, 150):
    spec = construct_code([T2] * 8, "bec:0.4", k)
    r = run_fer_simulation(spec, "bec:0.4", 5000, seed=1)
    print("K=%3d  rate %.3f  FER %.4f  union bound %.4g" % (k, spec.rate, r.fer, union_bound(spec)))

###############################################################################
# A BSC design uses the propagated Bhattacharyya upper bound instead.

spec = construct_code([T2] * 8, "bsc:0.08", 64)
r = run_fer_simulation(spec, "bsc:0.08", 5000, seed=2)
print(spec.design_mode, " FER %.4f" % r.fer)
