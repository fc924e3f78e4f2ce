"""
Kernels, partial distances and exponents
========================================

A kernel is a small invertible binary matrix. How fast the channels it
synthesizes polarize is governed by its partial distances.
"""

import numpy as np

from mkpolar import T2, T3, Kernel
from mkpolar.analysis import multi_kernel_exponent

###############################################################################
# The two built-in kernels
# ------------------------

for k in (T2, T3):
    print(k.name)
    print(k.matrix.to_text(), end="")
    print("  partial distances", k.partial_distances, " exponent %.6f" % k.exponent)

###############################################################################
# A 4x4 kernel of our own: the Kronecker square of T2 in disguise.
# Its exponent matches T2, since Kronecker powers never improve it.

k4 = Kernel(np.kron(T2.rows, T2.rows), name="T2xT2")
print(k4.partial_distances, k4.exponent)

###############################################################################
# Rows swapped: still invertible, but a row now lies closer to the span
# of the rows below it.

bad = Kernel(T2.rows[::-1], name="flipped")
print("flipped T2:", bad.partial_distances, bad.exponent)

###############################################################################
# Mixing kernel sizes
# -------------------
#
# With a fraction p of size-3 stages the combined exponent moves between
# the two single-kernel values.  It is weighted by log2 of the kernel size.

for p in np.linspace(0, 1, 6):
    e = multi_kernel_exponent([(T2, 1 - p), (T3, p)])
    print("p(T3) = %.1f   E = %.5f" % (p, e))
