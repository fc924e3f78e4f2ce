"""
Designing a code and decoding it
================================

We rank the synthesized channels, freeze the worst, encode a few messages
and run successive cancellation over an erasure channel.
"""

import numpy as np

from mkpolar import T2, T3, construct_code
from mkpolar.codec import encode, erasure_evidence, sc_decode

rng = np.random.default_rng(1)

###############################################################################
# An (18, 9) code from kernels 2, 3, 3 designed for bec:0.4

spec = construct_code([T2, T3, T3], "bec:0.4", 9)
print("information set:", spec.information_set)
print("frozen set     :", spec.frozen_set)
print(np.round(spec.reliabilities, 4))

###############################################################################
# Encode, erase, decode.

msg = rng.integers(0, 2, size=(8, spec.K), dtype=np.uint8)
x = encode(spec, msg)
erased = rng.random(x.shape) < 0.4
est, post = sc_decode(spec, erasure_evidence(x, erased))

for m, e, er in zip(msg, est, erased):
    flag = "ok " if np.array_equal(m, e) else "ERR"
    print(flag, "".join(map(str, m)), "->", "".join(map(str, e)), "  erased", er.sum())

###############################################################################
# The same code spec round-trips through JSON, which is what the command
# line tool writes and reads.

text = spec.to_json()
print(text[:200], "...")
