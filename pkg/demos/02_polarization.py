"""
Watching an erasure channel polarize
====================================

On the binary erasure channel every synthesized channel is again an erasure
channel, so the whole tree can be followed exactly.
"""

import numpy as np

from mkpolar import T2, T3, bec_tree
from mkpolar.analysis import martingale_report, polarization_trajectory
from mkpolar.channel import ErasureChannel

eps = 0.5

###############################################################################
# Twelve T2 stages.  The mean stays at capacity while the spread grows.

tree = bec_tree(eps, [T2] * 12)
for m, (hi, lo, mid) in enumerate(polarization_trajectory(tree, 0.01)):
    i = tree.mutual_info(m)
    print("stage %2d  N=%5d  mean I=%.12f  good %.3f  bad %.3f  undecided %.3f"
          % (m, i.size, i.mean(), hi, lo, mid))

###############################################################################
# A crude histogram of the leaves

counts, edges = np.histogram(tree.mutual_info(), bins=10, range=(0, 1))
for c, a in zip(counts, edges):
    print("%.1f  %s" % (a, "#" * int(60 * c / counts.max())))

###############################################################################
# Mixed kernels
# -------------
# Alternating sizes 2 and 3 gives N = 6^k.  Conservation holds at every
# stage to rounding.

ks = [T2, T3] * 4
rep = martingale_report(ErasureChannel(eps), ks)
print("N =", np.prod([k.size for k in ks]), " max deviation of stage means:", rep.max_deviation)

mixed = bec_tree(eps, ks)
print("middle fraction by stage:",
      ["%.3f" % mid for _, _, mid in polarization_trajectory(mixed, 0.01)])

###############################################################################
# Deep trees underflow in linear form but not in the log2 companions.

deep = bec_tree(eps, [T2] * 18)
print("smallest erasure prob (linear):", deep.erasure().min())
print("smallest log2 Z:", deep.log2_z[-1].min())
