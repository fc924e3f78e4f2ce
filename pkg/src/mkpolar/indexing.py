"""Mixed-radix addressing of synthesized channels.

Channel ``i`` (1-based) of a code built from kernels of sizes
``(l_1, ..., l_m)`` sits at path ``(b_1, ..., b_m)`` with

    i - 1 = sum_j (b_j - 1) * prod_{k > j} l_k

so ``b_1`` (the first kernel of the Kronecker product) is the most
significant digit.
"""

from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np


def mixed_radix(i: int, bases: Sequence[int]) -> tuple[int, ...]:
    """1-based index -> 1-based digit tuple."""
    n = prod(bases)
    if not 1 <= i <= n:
        raise ValueError(f"index {i} outside [1, {n}]")
    rem = i - 1
    digits = []
    for l in reversed(bases):
        rem, d = divmod(rem, l)
        digits.append(d + 1)
    return tuple(reversed(digits))


def from_mixed_radix(digits: Sequence[int], bases: Sequence[int]) -> int:
    """Inverse of :func:`mixed_radix`."""
    if len(digits) != len(bases):
        raise ValueError(f"{len(digits)} digits for {len(bases)} bases")
    i = 0
    for b, l in zip(digits, bases):
        if not 1 <= b <= l:
            raise ValueError(f"digit {b} outside [1, {l}]")
        i = i * l + (b - 1)
    return i + 1


def all_paths(bases: Sequence[int]) -> np.ndarray:
    """Digit table of shape (prod(bases), m), row ``i-1`` holding the path of channel ``i``."""
    if not bases:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices(tuple(bases)).reshape(len(bases), -1).T
    return grids + 1
