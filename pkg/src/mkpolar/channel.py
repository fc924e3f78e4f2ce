"""Binary-input discrete memoryless channels and scalar information functionals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

PMF_TOL = 1e-12
H2_INV_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Binary-input channel given by its transition table.

    ``pmf[y, x] = W(y | x)`` for ``x in {0, 1}``.  Outputs with
    ``W(y|0) = W(y|1) = 0`` are allowed (they appear after synthesis).
    """

    pmf: np.ndarray
    label: str = ""

    def __post_init__(self):
        p = np.array(self.pmf, dtype=float)
        if p.ndim != 2 or p.shape[1] != 2 or p.shape[0] < 1:
            raise ValueError(f"pmf must have shape (outputs, 2), got {p.shape}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("pmf entries must be finite and nonnegative")
        s = p.sum(axis=0)
        if np.any(np.abs(s - 1.0) > PMF_TOL * max(1, p.shape[0] ** 0.5)):
            raise ValueError(f"each input's conditional pmf must sum to 1, got {s}")
        p.setflags(write=False)
        object.__setattr__(self, "pmf", p)

    @property
    def output_alphabet_size(self) -> int:
        return self.pmf.shape[0]

    def pruned(self) -> "DiscreteChannel":
        """Copy with degenerate (all-zero) outputs removed."""
        keep = self.pmf.sum(axis=1) > 0
        return DiscreteChannel(self.pmf[keep], self.label)

    @property
    def capacity(self) -> float:
        return mutual_information(self)

    @property
    def z(self) -> float:
        return bhattacharyya(self)

    def __repr__(self):
        lbl = f" {self.label!r}" if self.label else ""
        return f"<DiscreteChannel{lbl} |Y|={self.output_alphabet_size}>"


@dataclass(frozen=True)
class ErasureChannel:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"erasure probability must lie in [0, 1], got {self.epsilon}")

    @property
    def capacity(self) -> float:
        return 1.0 - self.epsilon

    @property
    def z(self) -> float:
        return self.epsilon

    def as_discrete(self) -> DiscreteChannel:
        e = self.epsilon
        # outputs: 0, 1, erasure
        return DiscreteChannel(np.array([[1 - e, 0.0], [0.0, 1 - e], [e, e]]), f"bec:{e}")

    def spec(self) -> str:
        return f"bec:{self.epsilon!r}"


@dataclass(frozen=True)
class SymmetricChannel:
    """Binary symmetric channel with crossover probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"crossover probability must lie in [0, 1], got {self.p}")

    @property
    def capacity(self) -> float:
        return 1.0 - h2(self.p)

    @property
    def z(self) -> float:
        return 2.0 * math.sqrt(self.p * (1.0 - self.p))

    def as_discrete(self) -> DiscreteChannel:
        p = self.p
        return DiscreteChannel(np.array([[1 - p, p], [p, 1 - p]]), f"bsc:{p}")

    def spec(self) -> str:
        return f"bsc:{self.p!r}"


def bec(epsilon: float) -> DiscreteChannel:
    return ErasureChannel(epsilon).as_discrete()


def bsc(p: float) -> DiscreteChannel:
    return SymmetricChannel(p).as_discrete()


def noiseless() -> DiscreteChannel:
    return DiscreteChannel(np.eye(2), "noiseless")


def _discrete(w) -> DiscreteChannel:
    if isinstance(w, DiscreteChannel):
        return w
    if hasattr(w, "as_discrete"):
        return w.as_discrete()
    return DiscreteChannel(np.asarray(w, dtype=float))


def _xlog2(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=float)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def mutual_information(w) -> float:
    """``I(X;Y)`` in bits for a uniform binary input."""
    if isinstance(w, (ErasureChannel, SymmetricChannel)):
        return w.capacity
    p = _discrete(w).pmf
    joint = 0.5 * p
    py = joint.sum(axis=1)
    # I = H(Y) - H(Y|X)
    i = -_xlog2(py).sum() + _xlog2(joint).sum() + 1.0
    return float(min(1.0, max(0.0, i)))


def bhattacharyya(w) -> float:
    """``Z(W) = sum_y sqrt(W(y|0) W(y|1))``."""
    if isinstance(w, (ErasureChannel, SymmetricChannel)):
        return w.z
    p = _discrete(w).pmf
    return float(min(1.0, np.sqrt(p[:, 0] * p[:, 1]).sum()))


def h2(p: float) -> float:
    """Binary entropy in bits."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"h2 argument must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def h2_array(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return -(_xlog2(p) + _xlog2(1.0 - p))


def h2_inv(h: float) -> float:
    """Preimage of ``h`` under ``h2`` restricted to ``[0, 1/2]`` (bisection)."""
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"h2_inv argument must lie in [0, 1], got {h}")
    if h == 1.0:
        # h2 is flat to double precision near 1/2
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > H2_INV_TOL:
        mid = 0.5 * (lo + hi)
        if h2(mid) < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bconv(a, b):
    """Binary convolution ``a * (1 - b) + b * (1 - a)``."""
    for v in (a, b):
        if np.any(np.asarray(v) < 0) or np.any(np.asarray(v) > 1):
            raise ValueError("bconv arguments must lie in [0, 1]")
    return a + b - 2 * a * b


def parse_channel(spec: str):
    """Parse ``bec:<eps>``, ``bsc:<p>``, ``noiseless`` or a table-file path."""
    s = spec.strip()
    kind, _, arg = s.partition(":")
    kind = kind.lower()
    if kind in ("bec", "bsc"):
        try:
            val = float(arg)
        except ValueError:
            raise ValueError(f"bad channel parameter in {spec!r}") from None
        return ErasureChannel(val) if kind == "bec" else SymmetricChannel(val)
    if kind == "noiseless":
        return ErasureChannel(0.0)
    if Path(s).is_file():
        return load_channel_table(s)
    raise ValueError(f"unknown channel spec {spec!r}; expected bec:<eps>, bsc:<p> or a table file")


def load_channel_table(path) -> DiscreteChannel:
    """Read a table file: one output per line, ``W(y|0) W(y|1)``."""
    rows = []
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{n}: expected two probabilities, got {line!r}")
        rows.append([float(x) for x in parts])
    return DiscreteChannel(np.array(rows), str(path))


def save_channel_table(w: DiscreteChannel, path) -> None:
    Path(path).write_text("".join(f"{float(a)!r} {float(b)!r}\n" for a, b in w.pmf))
