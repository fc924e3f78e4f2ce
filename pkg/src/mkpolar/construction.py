"""Code construction: generator matrices, reliability ranking and code specs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import reduce
from math import prod
from pathlib import Path
from typing import Sequence

import numpy as np

from .channel import ErasureChannel, parse_channel
from .gf2 import BitMatrix, kron
from .indexing import all_paths, from_mixed_radix, mixed_radix  # noqa: F401  (re-exported)
from .kernel import BUILTIN, Kernel, get_kernel
from .synthesis import bec_tree, z_bounds_tree

FORMAT_VERSION = 1
#: largest N for which the dense generator matrix is materialized
MAX_DENSE_N = 2**13

EXACT = "bec-exact"
BOUND = "bhattacharyya-upper-bound"


def build_generator(kernels: Sequence, max_n: int = MAX_DENSE_N) -> BitMatrix:
    """``T_{l_1} ⊗ T_{l_2} ⊗ ... ⊗ T_{l_m}`` as a dense matrix."""
    ks = [get_kernel(k) for k in kernels]
    if not ks:
        raise ValueError("at least one kernel is required")
    n = prod(k.size for k in ks)
    if n > max_n:
        raise ValueError(f"N = {n} exceeds the dense generator limit {max_n}")
    return reduce(kron, (k.matrix for k in ks))


def select_frozen(reliabilities: Sequence[float], k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ``[1:N]`` into (information set, frozen set).

    ``reliabilities`` are figures where smaller is better (erasure
    probabilities, Bhattacharyya values or their logarithms).  The ``k`` best
    indices carry information; on ties the larger index is frozen.
    """
    fig = np.asarray(reliabilities, dtype=float)
    n = fig.size
    if not 0 <= k <= n:
        raise ValueError(f"K = {k} outside [0, {n}]")
    order = np.lexsort((np.arange(n), fig))
    info = tuple(sorted(int(i) + 1 for i in order[:k]))
    frozen = tuple(sorted(int(i) + 1 for i in order[k:]))
    return info, frozen


@dataclass(frozen=True)
class CodeSpec:
    """An (N, K) multi-kernel polar code."""

    kernels: tuple[str, ...]
    N: int
    K: int
    information_set: tuple[int, ...]
    design_channel: str
    reliabilities: tuple[float, ...]
    design_mode: str = EXACT
    log2_reliabilities: tuple = ()
    kernel_matrices: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.N != prod(k.size for k in self.kernel_objects):
            raise ValueError("N does not match the kernel sizes")
        info = tuple(self.information_set)
        if len(info) != self.K or len(set(info)) != self.K:
            raise ValueError(f"information set must hold K = {self.K} distinct indices")
        if any(not 1 <= i <= self.N for i in info):
            raise ValueError("information indices must lie in [1, N]")
        object.__setattr__(self, "information_set", tuple(sorted(info)))

    @property
    def kernel_objects(self) -> list[Kernel]:
        out = []
        for name in self.kernels:
            if name in self.kernel_matrices:
                out.append(Kernel(BitMatrix.from_rows(self.kernel_matrices[name]), name=name))
            else:
                out.append(get_kernel(name))
        return out

    @property
    def frozen_set(self) -> tuple[int, ...]:
        info = set(self.information_set)
        return tuple(i for i in range(1, self.N + 1) if i not in info)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.ones(self.N, dtype=bool)
        mask[np.asarray(self.information_set, dtype=int) - 1] = False
        return mask

    @property
    def rate(self) -> float:
        return self.K / self.N

    def to_dict(self) -> dict:
        d = {
            "format_version": self.format_version,
            "kernels": list(self.kernels),
            "N": self.N,
            "K": self.K,
            "information_set": list(self.information_set),
            "design_channel": self.design_channel,
            "design_mode": self.design_mode,
            "reliabilities": [float(r) for r in self.reliabilities],
            "log2_reliabilities": [None if not math.isfinite(v) else float(v) for v in self.log2_reliabilities],
        }
        if self.kernel_matrices:
            d["kernel_matrices"] = {k: list(v) for k, v in self.kernel_matrices.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_dict(cls, d: dict) -> "CodeSpec":
        version = d.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported code spec format_version {version}")
        logs = tuple(-math.inf if v is None else float(v) for v in d.get("log2_reliabilities", []))
        return cls(
            kernels=tuple(d["kernels"]),
            N=int(d["N"]),
            K=int(d["K"]),
            information_set=tuple(int(i) for i in d["information_set"]),
            design_channel=d["design_channel"],
            reliabilities=tuple(float(r) for r in d["reliabilities"]),
            design_mode=d.get("design_mode", EXACT),
            log2_reliabilities=logs,
            kernel_matrices={k: tuple(v) for k, v in d.get("kernel_matrices", {}).items()},
            format_version=version,
        )

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "CodeSpec":
        return cls.from_json(Path(path).read_text())


def _kernel_entry(k: Kernel) -> tuple[str, dict]:
    if k.name in BUILTIN and BUILTIN[k.name] == k:
        return k.name, {}
    return k.name, {k.name: tuple("".join(map(str, r)) for r in k.rows)}


def construct_code(kernels: Sequence, channel, k: int) -> CodeSpec:
    """Design a code for ``channel`` (spec string or channel object).

    Erasure channels use the exact erasure recursion; any other channel is
    ranked by the propagated Bhattacharyya upper bound, which is conservative
    rather than optimal.
    """
    ks = [get_kernel(x) for x in kernels]
    if not ks:
        raise ValueError("at least one kernel is required")
    n = prod(x.size for x in ks)
    if not 0 <= k <= n:
        raise ValueError(f"K = {k} outside [0, {n}]")
    w = parse_channel(channel) if isinstance(channel, str) else channel
    if isinstance(w, ErasureChannel):
        tree = bec_tree(w.epsilon, ks)
        mode = EXACT
        label = w.spec()
    else:
        tree = z_bounds_tree(w, ks)
        mode = BOUND
        label = w.spec() if hasattr(w, "spec") else (channel if isinstance(channel, str) else w.label)
    log_fig = tree.leaves_log2_z()
    info, _ = select_frozen(log_fig, k)
    names, mats = [], {}
    for x in ks:
        name, extra = _kernel_entry(x)
        names.append(name)
        mats.update(extra)
    return CodeSpec(
        kernels=tuple(names),
        N=n,
        K=k,
        information_set=info,
        design_channel=label,
        reliabilities=tuple(float(v) for v in np.exp2(log_fig)),
        design_mode=mode,
        log2_reliabilities=tuple(float(v) for v in log_fig),
        kernel_matrices=mats,
    )
