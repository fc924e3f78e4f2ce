"""Encoding and successive cancellation decoding for multi-kernel polar codes.

Evidence is carried in the probability domain: an array whose last axis
holds ``(P(x=0|y), P(x=1|y))`` for every code position; an erased position is
``(0.5, 0.5)``.  Every routine accepts a leading batch axis so many frames
can be processed at once.
"""

from __future__ import annotations

import numpy as np

from .construction import CodeSpec
from .kernel import Kernel, get_kernel

EVIDENCE_TOL = 1e-12


def _kernels(spec_or_kernels) -> list[Kernel]:
    if isinstance(spec_or_kernels, CodeSpec):
        return spec_or_kernels.kernel_objects
    return [get_kernel(k) for k in spec_or_kernels]


def transform(u, kernels) -> np.ndarray:
    """``u @ (T_1 ⊗ ... ⊗ T_m)`` over GF(2), one kernel axis at a time.

    Never builds the generator matrix; ``u`` may carry leading batch axes.
    """
    ks = _kernels(kernels)
    u = np.asarray(u, dtype=np.uint8)
    sizes = [k.size for k in ks]
    n = int(np.prod(sizes))
    if u.shape[-1] != n:
        raise ValueError(f"expected {n} input bits, got {u.shape[-1]}")
    lead = u.shape[:-1]
    x = u.reshape(*lead, *sizes).astype(np.int64)
    off = len(lead)
    for j, k in enumerate(ks):
        x = np.moveaxis(np.tensordot(x, k.rows.astype(np.int64), axes=([off + j], [0])), -1, off + j) & 1
    return x.reshape(*lead, n).astype(np.uint8)


def assemble_input(spec: CodeSpec, message) -> np.ndarray:
    """Place message bits at the information indices; frozen bits are zero."""
    m = np.asarray(message, dtype=np.uint8)
    if m.shape[-1] != spec.K:
        raise ValueError(f"message must have K = {spec.K} bits, got {m.shape[-1]}")
    if np.any(m > 1):
        raise ValueError("message entries must be bits")
    u = np.zeros(m.shape[:-1] + (spec.N,), dtype=np.uint8)
    u[..., np.asarray(spec.information_set, dtype=int) - 1] = m
    return u


def encode(spec: CodeSpec, message) -> np.ndarray:
    """Codeword(s) ``x = u G_N`` for message(s) of length K."""
    return transform(assemble_input(spec, message), spec.kernel_objects)


def erasure_evidence(x, erased) -> np.ndarray:
    """Evidence for codeword bits ``x`` with ``erased`` positions marked (0.5, 0.5)."""
    x = np.asarray(x, dtype=np.uint8)
    ev = np.stack([1.0 - x, x.astype(float)], axis=-1)
    ev[np.asarray(erased, dtype=bool)] = 0.5
    return ev


def bsc_evidence(y, p: float) -> np.ndarray:
    """Posterior pairs for BSC outputs ``y`` under a uniform prior."""
    y = np.asarray(y, dtype=np.uint8)
    return np.stack([np.where(y == 0, 1.0 - p, p), np.where(y == 1, 1.0 - p, p)], axis=-1)


def check_evidence(evidence, n: int | None = None) -> np.ndarray:
    ev = np.asarray(evidence, dtype=float)
    if ev.shape[-1] != 2:
        raise ValueError("evidence must end in an axis of (P(x=0|y), P(x=1|y)) pairs")
    if n is not None and ev.shape[-2] != n:
        raise ValueError(f"evidence length {ev.shape[-2]} does not match N = {n}")
    if np.any(ev < 0) or np.any(np.abs(ev.sum(axis=-1) - 1.0) > EVIDENCE_TOL):
        raise ValueError("evidence pairs must be nonnegative and sum to 1")
    return ev


def _completions(t: np.ndarray, b: int) -> np.ndarray:
    """Codeword parts ``(u_b..u_l) @ T[b-1:]`` for every completion, u_b most significant."""
    free = t.shape[0] - b + 1
    w = (np.arange(2**free)[:, None] >> np.arange(free - 1, -1, -1)) & 1
    return ((w @ t[b - 1:].astype(np.int64)) & 1).astype(bool)


def kernel_marginal(k, evidence, past, b: int, return_flag: bool = False):
    """Posterior of ``u_b`` through one kernel given evidence on its outputs.

    Parameters
    ----------
    k : Kernel
    evidence : array, shape (..., l, 2)
        Posterior pairs for the kernel outputs ``x_1..x_l``.
    past : array, shape (..., b - 1)
        Already decided inputs ``u_1..u_{b-1}``.
    b : int
        1-based position being decoded.

    Returns
    -------
    array, shape (..., 2)
        Normalized ``P(u_b | evidence, past)``.  Where every completion has
        zero likelihood the posterior is uniform; with ``return_flag`` the
        boolean mask of such cases is returned as well.
    """
    kern = get_kernel(k)
    t = kern.rows
    l = kern.size
    if not 1 <= b <= l:
        raise ValueError(f"position {b} outside [1, {l}]")
    ev = np.asarray(evidence, dtype=float)
    past = np.asarray(past, dtype=np.int64)
    if past.shape[-1] != b - 1:
        raise ValueError(f"past must hold {b - 1} decisions")
    known = (past @ t[: b - 1].astype(np.int64)) & 1 if b > 1 else np.zeros(ev.shape[:-1], dtype=np.int64)
    e_same = np.take_along_axis(ev, known[..., None], axis=-1)[..., 0]
    e_flip = np.take_along_axis(ev, 1 - known[..., None], axis=-1)[..., 0]
    xr = _completions(t, b)
    prob = np.ones(ev.shape[:-2] + (xr.shape[0],))
    for j in range(l):
        prob = prob * np.where(xr[:, j], e_flip[..., j, None], e_same[..., j, None])
    half = xr.shape[0] // 2
    post = np.stack([prob[..., :half].sum(axis=-1), prob[..., half:].sum(axis=-1)], axis=-1)
    total = post.sum(axis=-1, keepdims=True)
    flag = total[..., 0] <= 0
    post = np.where(total > 0, post / np.where(total > 0, total, 1.0), 0.5)
    return (post, flag) if return_flag else post


def _sc(kernels, ev, frozen, genie):
    """Recursive SC pass; ev has shape (B, N, 2). Returns (u, x, posteriors)."""
    bsz, n, _ = ev.shape
    if not kernels:
        post = ev
        if genie is not None:
            u = genie.astype(np.uint8)
        elif frozen[0]:
            u = np.zeros((bsz, 1), dtype=np.uint8)
        else:
            # ties resolve to 0
            u = (post[:, :, 1] > post[:, :, 0]).astype(np.uint8)
        return u, u.copy(), post
    kern, rest = kernels[0], kernels[1:]
    l = kern.size
    sub = n // l
    # output index c*sub + d  ->  [c, d]; kernel acts along c
    ev4 = ev.reshape(bsz, l, sub, 2).transpose(0, 2, 1, 3)
    v = np.zeros((bsz, sub, l), dtype=np.int64)
    u_out = np.empty((bsz, n), dtype=np.uint8)
    post_out = np.empty((bsz, n, 2))
    for a in range(l):
        ev_a = kernel_marginal(kern, ev4, v[:, :, :a], a + 1)
        sl = slice(a * sub, (a + 1) * sub)
        g = None if genie is None else genie[:, sl]
        u_a, v_a, p_a = _sc(rest, ev_a, frozen[sl], g)
        u_out[:, sl] = u_a
        post_out[:, sl] = p_a
        v[:, :, a] = v_a
    x = (v @ kern.rows.astype(np.int64)) & 1  # (B, sub, l) -> x[c, d]
    return u_out, x.transpose(0, 2, 1).reshape(bsz, n).astype(np.uint8), post_out


def sc_decode_full(spec: CodeSpec, evidence, genie=None):
    """SC decoding returning ``(u_hat, posteriors)`` over all N positions.

    ``posteriors[..., i, :]`` is the posterior of ``u_i`` given the evidence and
    the decisions on ``u_1..u_{i-1}``.  With ``genie`` (the true ``u``) the
    past decisions are replaced by the true bits.
    """
    ev = check_evidence(evidence, spec.N)
    single = ev.ndim == 2
    if single:
        ev = ev[None]
    g = None
    if genie is not None:
        g = np.asarray(genie, dtype=np.uint8).reshape(ev.shape[0], spec.N)
    u, _, post = _sc(spec.kernel_objects, ev, spec.frozen_mask, g)
    if single:
        return u[0], post[0]
    return u, post


def sc_decode(spec: CodeSpec, evidence, genie=None):
    """Decode evidence into ``(message_estimate, per_bit_posteriors)``.

    Frozen positions are forced to zero, information bits take the larger
    posterior and an exact tie decides 0.  The posteriors cover all N input
    positions.
    """
    u, post = sc_decode_full(spec, evidence, genie)
    info = np.asarray(spec.information_set, dtype=int) - 1
    return u[..., info], post
