"""Virtual-channel synthesis.

Three routes are provided:

* :func:`synthesize_step` builds the ``l`` synthesized channels of one kernel
  application exactly, for any finite-output channel;
* :func:`bec_step` / :func:`bec_tree` run the exact erasure recursion for any
  number of stages (erasure channels stay erasure channels under linear
  kernels);
* :func:`z_bounds_step` / :func:`z_bounds_tree` propagate the partial-distance
  bounds on the Bhattacharyya parameter for arbitrary channels.

Tree values are kept as base-2 logarithms so very reliable channels
(``Z`` far below the double-precision range) stay representable.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, prod
from typing import Sequence

import numpy as np

from .channel import DiscreteChannel, _discrete, bhattacharyya
from .gf2 import BitMatrix, rank
from .indexing import all_paths
from .kernel import Kernel, get_kernel

#: joint-state guard for exact single-step synthesis
MAX_JOINT_STATES = 2**24
#: leaf guard for multi-stage trees
MAX_LEAVES = 2**22


def _matrix(k) -> np.ndarray:
    if isinstance(k, Kernel):
        return k.rows
    if isinstance(k, BitMatrix):
        return k.bits
    return np.asarray(k, dtype=np.uint8)


def synthesize_step(w, k) -> list[DiscreteChannel]:
    """Exact synthesized channels for one application of kernel ``k``.

    Channel ``i`` maps ``u_i`` to ``(y_1^l, u_1^{i-1})``; its pmf is obtained
    by averaging over uniform ``u_{i+1}^l`` with ``x = u @ T`` fed through
    ``l`` independent uses of ``w``.  Output symbols are ordered with ``y``
    major (``y_1`` most significant) and the past inputs minor.

    ``k`` may be a :class:`Kernel` or any square binary matrix, in particular a
    full generator matrix, which makes this the brute-force oracle for
    multi-stage trees.
    """
    t = _matrix(k)
    l = t.shape[0]
    p = _discrete(w).pmf
    a = p.shape[0]
    if (2 * a) ** l > MAX_JOINT_STATES:
        raise ValueError(f"synthesis would enumerate {(2 * a) ** l} joint states (limit {MAX_JOINT_STATES})")
    us = ((np.arange(2**l)[:, None] >> np.arange(l - 1, -1, -1)) & 1).astype(np.int64)
    xs = (us @ t.astype(np.int64)) & 1
    lik = np.ones((2**l, 1))
    for j in range(l):
        lik = (lik[:, :, None] * p[:, xs[:, j]].T[:, None, :]).reshape(2**l, -1)
    out = []
    for i in range(l):
        w_i = lik.reshape(2**i, 2, 2 ** (l - i - 1), a**l).sum(axis=2) / 2 ** (l - 1)
        pmf = w_i.transpose(2, 0, 1).reshape(-1, 2)
        out.append(DiscreteChannel(pmf, f"W{i + 1}"))
    return out


@lru_cache(maxsize=64)
def _pattern_counts_cached(key: bytes, l: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.frombuffer(key, dtype=np.uint8).reshape(l, l)
    erased = np.zeros((l, l + 1), dtype=np.int64)
    for mask in range(2**l):
        seen = [j for j in range(l) if not (mask >> (l - 1 - j)) & 1]
        k = l - len(seen)
        for b in range(l):
            sub = t[b:, seen]
            e = np.zeros((l - b, 1), dtype=np.uint8)
            e[0, 0] = 1
            if rank(sub) == rank(np.hstack([sub, e])):
                continue
            erased[b, k] += 1
    total = np.array([comb(l, k) for k in range(l + 1)], dtype=np.int64)
    return erased, total[None, :] - erased


def pattern_counts(k) -> tuple[np.ndarray, np.ndarray]:
    """Erasure-pattern census of a kernel.

    Returns ``(erased, recovered)``, both of shape ``(l, l + 1)``: entry
    ``[b, e]`` counts the patterns with ``e`` erased outputs for which input
    ``b`` is (respectively is not) left undetermined once the earlier inputs
    are known.  Determination is a rank test: ``u_b`` is recoverable iff the
    unit vector lies in the span of the unerased columns of the kernel rows
    ``b..l``.
    """
    t = _matrix(k)
    return _pattern_counts_cached(np.ascontiguousarray(t, dtype=np.uint8).tobytes(), t.shape[0])


def _poly(counts: np.ndarray, eps: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """sum_k counts[b, k] eps^k keep^(l-k), evaluated per parent; shape (M, l)."""
    l = counts.shape[1] - 1
    e = np.asarray(eps, dtype=float)
    c = np.asarray(keep, dtype=float)
    out = np.zeros((e.size, counts.shape[0]))
    for kk in range(l + 1):
        col = counts[:, kk]
        if col.any():
            out += (e**kk * c ** (l - kk))[:, None] * col[None, :]
    return out


def bec_step(eps: float, k) -> list[float]:
    """Erasure probabilities of the ``l`` channels synthesized from ``bec(eps)``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {eps}")
    if not isinstance(k, (Kernel, BitMatrix, np.ndarray)):
        k = get_kernel(k)
    erased, _ = pattern_counts(k)
    return [float(v) for v in _poly(erased, np.array([eps]), np.array([1.0 - eps]))[0]]


def _log2_poly(counts: np.ndarray, log_e: np.ndarray, log_c: np.ndarray) -> np.ndarray:
    """log2 of sum_k counts[b, k] e^k c^(l-k), evaluated per parent; shape (M, l)."""
    l = counts.shape[1] - 1
    m = log_e.shape[0]
    out = np.full((m, counts.shape[0]), -np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        for kk in range(l + 1):
            col = counts[:, kk]
            if not col.any():
                continue
            te = np.zeros(m) if kk == 0 else kk * log_e
            tc = np.zeros(m) if kk == l else (l - kk) * log_c
            base = te + tc
            logc = np.where(col > 0, np.log2(np.maximum(col, 1)), -np.inf)
            out = np.logaddexp2(out, base[:, None] + logc[None, :])
    return out


def _complementary(z: np.ndarray, i: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # keep the smaller side as computed and take the other as its complement
    small_z = z <= i
    z = np.clip(np.where(small_z, z, 1.0 - i), 0.0, 1.0)
    i = np.clip(np.where(small_z, 1.0 - z, i), 0.0, 1.0)
    return z, i


@dataclass
class ReliabilityTree:
    """Per-stage figures of merit of the synthesized channels.

    Stage ``m`` holds ``prod(l_1..l_m)`` entries in mixed-radix path order
    (stage 0 is the design channel itself).  In ``"erasure"`` mode ``z`` is
    the erasure probability and ``i`` the mutual information; in ``"bound"``
    mode ``z`` / ``zu`` are the lower / upper Bhattacharyya bounds.
    Every linear array has a ``log2_`` companion that stays finite after the
    linear value underflows.
    """

    kernels: list
    mode: str
    z: list = field(default_factory=list)
    i: list = field(default_factory=list)
    zu: list = field(default_factory=list)
    log2_z: list = field(default_factory=list)
    log2_i: list = field(default_factory=list)
    log2_z_upper: list = field(default_factory=list)
    design: str = ""

    @property
    def bases(self) -> tuple[int, ...]:
        return tuple(k.size for k in self.kernels)

    @property
    def depth(self) -> int:
        return len(self.kernels)

    @property
    def n(self) -> int:
        return prod(self.bases)

    def stage_size(self, m: int) -> int:
        return prod(self.bases[:m])

    def erasure(self, m: int | None = None) -> np.ndarray:
        self._need("erasure")
        return self.z[self.depth if m is None else m]

    def mutual_info(self, m: int | None = None) -> np.ndarray:
        self._need("erasure")
        return self.i[self.depth if m is None else m]

    def z_lower(self, m: int | None = None) -> np.ndarray:
        self._need("bound")
        return self.z[self.depth if m is None else m]

    def z_upper(self, m: int | None = None) -> np.ndarray:
        self._need("bound")
        return self.zu[self.depth if m is None else m]

    def leaves_log2_z(self) -> np.ndarray:
        """Ranking figure of the leaves: exact log2 Z, or log2 of the upper bound."""
        return self.log2_z[-1] if self.mode == "erasure" else self.log2_z_upper[-1]

    def _need(self, mode):
        if self.mode != mode:
            raise ValueError(f"tree is in {self.mode!r} mode, {mode!r} values requested")

    def to_csv(self, stage: int | None = None) -> str:
        """CSV export of one stage (default: leaves)."""
        m = self.depth if stage is None else stage
        paths = all_paths(self.bases[:m])
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        bcols = [f"b_{j + 1}" for j in range(m)]
        if self.mode == "erasure":
            wr.writerow(["index", *bcols, "erasure_prob", "mutual_info", "log2_Z"])
            z, i, lz = self.erasure(m), self.mutual_info(m), self.log2_z[m]
            for n in range(paths.shape[0]):
                wr.writerow([n + 1, *paths[n].tolist(), repr(float(z[n])), repr(float(i[n])), repr(float(lz[n]))])
        else:
            wr.writerow(["index", *bcols, "log2_Z_lower", "log2_Z_upper", "Z_upper"])
            lo, up = self.log2_z[m], self.log2_z_upper[m]
            for n in range(paths.shape[0]):
                wr.writerow([n + 1, *paths[n].tolist(), repr(float(lo[n])), repr(float(up[n])),
                             repr(float(self.zu[m][n]))])
        return buf.getvalue()


def _check_size(kernels):
    n = prod(k.size for k in kernels)
    if n > MAX_LEAVES:
        raise ValueError(f"tree would have {n} leaves (limit {MAX_LEAVES})")


def bec_tree(eps: float, kernels: Sequence) -> ReliabilityTree:
    """Exact multi-stage erasure evolution.

    Stage ``m`` applies kernel ``kernels[m-1]`` to every stage ``m-1`` channel.
    Both the erasure probability and its complement are propagated as log2
    polynomials in the parent values, which keeps either side accurate when
    it is tiny.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {eps}")
    ks = [get_kernel(k) for k in kernels]
    _check_size(ks)
    with np.errstate(divide="ignore"):
        lz = np.array([np.log2(eps)])
        li = np.array([np.log2(1.0 - eps)])
    z, i = np.array([eps]), np.array([1.0 - eps])
    tree = ReliabilityTree(ks, "erasure", z=[z], i=[i], log2_z=[lz], log2_i=[li], design=f"bec:{eps!r}")
    for k in ks:
        erased, recovered = pattern_counts(k)
        z, i = _complementary(_poly(erased, z, i).ravel(), _poly(recovered, z, i).ravel())
        lz, li = _log2_poly(erased, lz, li).ravel(), _log2_poly(recovered, lz, li).ravel()
        tree.z.append(z)
        tree.i.append(i)
        tree.log2_z.append(lz)
        tree.log2_i.append(li)
    return tree


def z_bounds_step(z: float, k) -> list[tuple[float, float]]:
    """Partial-distance bounds ``(z^D_b, min(1, 2^(l-b) z^D_b))`` for each child ``b``."""
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"Bhattacharyya parameter must lie in [0, 1], got {z}")
    kern = get_kernel(k)
    l = kern.size
    out = []
    for b, d in enumerate(kern.partial_distances, 1):
        lo = z**d
        out.append((lo, min(1.0, 2.0 ** (l - b) * lo)))
    return out


def z_bounds_tree(w, kernels: Sequence) -> ReliabilityTree:
    """Bound-mode tree seeded with ``Z(w)``; lower and upper bounds propagated separately."""
    ks = [get_kernel(k) for k in kernels]
    _check_size(ks)
    z0 = bhattacharyya(w)
    with np.errstate(divide="ignore"):
        lo = np.array([np.log2(z0)])
    up = lo.copy()
    label = w.spec() if hasattr(w, "spec") else getattr(w, "label", "")
    tree = ReliabilityTree(ks, "bound", log2_z=[lo], log2_z_upper=[up], design=label)
    for k in ks:
        d = np.array(k.partial_distances, dtype=float)
        shift = np.arange(k.size - 1, -1, -1, dtype=float)
        with np.errstate(invalid="ignore"):
            lo = (lo[:, None] * d[None, :]).ravel()
            up = np.minimum(0.0, up[:, None] * d[None, :] + shift[None, :]).ravel()
        lo = np.where(np.isnan(lo), -np.inf, lo)
        up = np.where(np.isnan(up), -np.inf, up)
        tree.log2_z.append(lo)
        tree.log2_z_upper.append(up)
    tree.z = [np.exp2(v) for v in tree.log2_z]
    tree.zu = [np.exp2(v) for v in tree.log2_z_upper]
    return tree
