"""Dense binary matrix algebra over GF(2).

Matrices are stored as ``uint8`` arrays holding 0/1 entries.  Everything the
polar machinery needs is here: Kronecker products, rank / invertibility,
vector-matrix products and exhaustive enumeration of small row spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

#: enumeration bound for :func:`row_space`
MAX_SPAN_ROWS = 20


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Immutable binary matrix.

    Parameters
    ----------
    bits : array_like
        2-D array of 0/1 entries (row-major).
    """

    bits: np.ndarray

    def __init__(self, bits):
        arr = np.asarray(bits)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"BitMatrix needs a non-empty 2-D array, got shape {arr.shape}")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("BitMatrix entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def __getitem__(self, idx):
        return self.bits[idx]

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.shape, self.bits.tobytes()))

    def __repr__(self):
        body = ", ".join("".join(map(str, r)) for r in self.bits)
        return f"BitMatrix([{body}])"

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Iterable[str]) -> "BitMatrix":
        """Build from strings such as ``["10", "11"]``."""
        return cls([[int(c) for c in r] for r in rows])

    # text format: one row per line, '0'/'1' characters, newline terminated
    def to_text(self) -> str:
        return "".join("".join(map(str, r)) + "\n" for r in self.bits)

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        width = len(lines[0])
        for n, ln in enumerate(lines, 1):
            if len(ln) != width or set(ln) - {"0", "1"}:
                raise ValueError(f"line {n}: expected {width} characters of '0'/'1', got {ln!r}")
        return cls.from_rows(lines)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "BitMatrix":
        return cls.from_text(Path(path).read_text())


def _as_array(m) -> np.ndarray:
    return m.bits if isinstance(m, BitMatrix) else np.asarray(m, dtype=np.uint8)


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Kronecker product ``a ⊗ b`` (the first factor indexes the coarse blocks)."""
    return BitMatrix(np.kron(_as_array(a), _as_array(b)) & 1)


def matmul(a, b) -> np.ndarray:
    """GF(2) product of two arrays (vectors allowed on either side)."""
    return (np.asarray(_as_array(a), dtype=np.int64) @ np.asarray(_as_array(b), dtype=np.int64)) & 1


def vecmat(u, m: BitMatrix) -> np.ndarray:
    """Row vector(s) ``u`` times ``m`` over GF(2); ``u`` may be batched along axis 0."""
    return matmul(u, m).astype(np.uint8)


def row_reduce(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Returns the reduced matrix (zero rows dropped) and the pivot columns.
    """
    a = np.array(_as_array(m), dtype=np.uint8, copy=True)
    if a.ndim != 2:
        raise ValueError("row_reduce expects a 2-D array")
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        hit = np.flatnonzero(a[:, c])
        hit = hit[hit != r]
        a[hit] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    arr = _as_array(m)
    if arr.size == 0:
        return 0
    return len(row_reduce(arr)[1])


def is_invertible(m: BitMatrix) -> bool:
    """True iff the square matrix ``m`` has full rank over GF(2)."""
    arr = _as_array(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"is_invertible needs a square matrix, got shape {arr.shape}")
    return rank(arr) == arr.shape[0]


def inverse(m: BitMatrix) -> BitMatrix:
    arr = _as_array(m)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    aug = np.hstack([arr, np.eye(n, dtype=np.uint8)])
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular over GF(2)")
    return BitMatrix(red[:, n:])


def row_space(rows: Sequence, length: int | None = None) -> np.ndarray:
    """All distinct GF(2) combinations of ``rows``, zero word included.

    Parameters
    ----------
    rows : sequence of 0/1 vectors
        Generators of the span; may be empty, in which case ``length`` is required.
    length : int, optional
        Word length, needed only when ``rows`` is empty.

    Returns
    -------
    ndarray of shape (2**rank, length)
        Codewords sorted lexicographically.
    """
    arr = np.asarray(rows, dtype=np.uint8)
    if arr.size == 0:
        if length is None:
            if arr.ndim == 2:
                length = arr.shape[1]
            else:
                raise ValueError("length is required for an empty generator list")
        return np.zeros((1, length), dtype=np.uint8)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.shape[0] > MAX_SPAN_ROWS:
        raise ValueError(f"row_space enumerates at most {MAX_SPAN_ROWS} rows, got {arr.shape[0]}")
    basis, _ = row_reduce(arr)
    k = basis.shape[0]
    coeffs = (np.arange(2**k)[:, None] >> np.arange(k - 1, -1, -1)) & 1
    words = matmul(coeffs, basis).astype(np.uint8)
    return np.unique(words, axis=0)
