"""Polarization kernels and their partial distances / exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .gf2 import MAX_SPAN_ROWS, BitMatrix, is_invertible, row_space


@dataclass(frozen=True)
class KernelReport:
    """Outcome of :func:`validate_kernel`."""

    name: str
    size: int
    invertible: bool
    partial_distances: tuple[int, ...]
    distances_in_range: bool
    has_distance_ge_2: bool
    failures: tuple[str, ...] = field(default=())

    @property
    def accepted(self) -> bool:
        return self.invertible and self.distances_in_range and self.has_distance_ge_2


class Kernel:
    """An ``l x l`` binary kernel.

    The matrix is used as ``x = u @ T`` over GF(2), so row ``i`` is the
    contribution of input ``u_i``.  Partial distances and the exponent are
    computed lazily and cached.
    """

    def __init__(self, matrix, name: str | None = None, check: bool = True):
        m = matrix if isinstance(matrix, BitMatrix) else BitMatrix(matrix)
        if m.rows != m.cols:
            raise ValueError(f"kernel matrix must be square, got {m.shape}")
        if check and not is_invertible(m):
            raise ValueError("kernel matrix is not invertible over GF(2)")
        self.matrix = m
        self.name = name or f"K{m.rows}:" + "/".join("".join(map(str, r)) for r in m.bits)

    @property
    def size(self) -> int:
        return self.matrix.rows

    @property
    def rows(self) -> np.ndarray:
        return self.matrix.bits

    @cached_property
    def partial_distances(self) -> tuple[int, ...]:
        return partial_distances(self)

    @cached_property
    def exponent(self) -> float:
        return kernel_exponent(self)

    def __eq__(self, other):
        return isinstance(other, Kernel) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Kernel({self.name!r}, size={self.size})"

    @classmethod
    def load(cls, path, name: str | None = None) -> "Kernel":
        p = Path(path)
        return cls(BitMatrix.load(p), name=name or p.stem)


T2 = Kernel([[1, 0], [1, 1]], name="T2")
T3 = Kernel([[1, 1, 1], [1, 0, 1], [0, 1, 1]], name="T3")

BUILTIN = {"T2": T2, "T3": T3}
# size shorthand used by the CLI (``--kernels 2,3,2``)
BY_SIZE = {2: T2, 3: T3}


def get_kernel(ref) -> Kernel:
    """Resolve ``ref`` (Kernel, builtin name, size shorthand or text file path)."""
    if isinstance(ref, Kernel):
        return ref
    if isinstance(ref, int):
        try:
            return BY_SIZE[ref]
        except KeyError:
            raise ValueError(f"no built-in kernel of size {ref}") from None
    s = str(ref).strip()
    if s in BUILTIN:
        return BUILTIN[s]
    if s.isdigit():
        return get_kernel(int(s))
    if Path(s).is_file():
        return Kernel.load(s)
    raise ValueError(f"unknown kernel {ref!r}; use T2, T3, a size (2, 3) or a matrix file")


def partial_distances(k) -> tuple[int, ...]:
    """Distance of each row to the span of the rows below it.

    ``D_i = min_{c in <t_{i+1},...,t_l>} wt(t_i + c)``, found by enumerating the
    whole span; the last entry is simply the weight of the last row.
    """
    rows = k.rows if isinstance(k, Kernel) else np.asarray(BitMatrix(k).bits)
    l = rows.shape[0]
    if l - 1 > MAX_SPAN_ROWS:
        raise ValueError(f"partial distances enumerate spans of at most {MAX_SPAN_ROWS} rows (kernel size {l})")
    out = []
    for i in range(l):
        span = row_space(rows[i + 1:], length=rows.shape[1])
        out.append(int(((span ^ rows[i]).sum(axis=1)).min()))
    return tuple(out)


def kernel_exponent(k) -> float:
    """``(1/l) * sum_i log_l(D_i)``; zero when some row lies in the span of later rows."""
    d = k.partial_distances if isinstance(k, Kernel) else partial_distances(k)
    l = len(d)
    if l < 2 or min(d) == 0:
        return 0.0
    return sum(math.log(x) for x in d) / (l * math.log(l))


def validate_kernel(k) -> KernelReport:
    """Check invertibility and the necessary partial-distance conditions."""
    kern = k if isinstance(k, Kernel) else Kernel(k, check=False)
    inv = is_invertible(kern.matrix)
    d = partial_distances(kern)
    l = kern.size
    in_range = all(1 <= x <= l for x in d)
    ge2 = any(x >= 2 for x in d)
    failures = []
    if not inv:
        failures.append("matrix is singular over GF(2)")
    if not in_range:
        failures.append(f"partial distances {list(d)} outside [1, {l}]")
    if not ge2:
        failures.append("no partial distance >= 2 (kernel does not polarize)")
    return KernelReport(kern.name, l, inv, d, in_range, ge2, tuple(failures))
