"""Self-check suites run by ``mkpolar verify``.

Each suite returns a list of :class:`Check` results.  The oracles used here
(brute-force posteriors, dense generator products, direct synthesis on the
full generator matrix) are deliberately independent of the fast paths they
check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .analysis import (
    entropy_inequality_checks,
    inequality_suite,
    distance_bound_sweep,
    martingale_report,
    multi_kernel_exponent,
)
from .channel import ErasureChannel, bec, mutual_information
from .codec import encode, erasure_evidence, sc_decode_full
from .construction import CodeSpec, build_generator, construct_code
from .gf2 import vecmat
from .kernel import T2, T3
from .synthesis import bec_tree, synthesize_step

EPS_GRID = [round(0.1 * j, 1) for j in range(1, 10)]


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.suite}: {self.name}  {self.detail}".rstrip()


def brute_force_posteriors(g, evidence, u_true) -> np.ndarray:
    """``P(u_i | y, u_1^{i-1})`` for every i by enumerating all ``2^N`` inputs."""
    g = np.asarray(g.bits if hasattr(g, "bits") else g, dtype=np.int64)
    n = g.shape[0]
    us = ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1)
    xs = (us @ g) & 1
    lik = np.prod(np.asarray(evidence)[np.arange(n), xs], axis=1)
    out = np.empty((n, 2))
    for i in range(n):
        match = np.all(us[:, :i] == np.asarray(u_true)[:i], axis=1)
        p = np.array([lik[match & (us[:, i] == v)].sum() for v in (0, 1)])
        out[i] = p / p.sum() if p.sum() > 0 else 0.5
    return out


def suite_exponent() -> list[Check]:
    e2, e3 = T2.exponent, T3.exponent
    mixed = multi_kernel_exponent([(T2, 0.5), (T3, 0.5)])
    hand = (0.5 * 1.0 * e2 + 0.5 * np.log2(3) * e3) / (0.5 + 0.5 * np.log2(3))
    return [
        Check("exponent", "E(T2) = 0.5", e2 == 0.5, f"{e2!r}"),
        Check("exponent", "E(T3) = 0.4206 +- 0.001", abs(e3 - 0.4206) <= 1e-3, f"{e3:.6f}"),
        Check("exponent", "mixed T2/T3 matches weighted formula", abs(mixed - hand) <= 1e-12, f"{mixed:.12f}"),
    ]


def suite_martingale() -> list[Check]:
    out = []
    for ks in ([T2] * 10, [T2, T3] * 4, [T3, T2, T2, T3, T3]):
        for eps in (0.1, 0.5, 0.9):
            r = martingale_report(ErasureChannel(eps), ks)
            name = f"bec:{eps} {'.'.join(str(k.size) for k in ks)}"
            out.append(Check("martingale", name, r.max_deviation <= 1e-12, f"max dev {r.max_deviation:.2e}"))
    return out


def suite_inequality(n_random: int = 100, seed: int = 0) -> list[Check]:
    out = []
    for k, a, b in ((T2, 1, 2), (T3, 2, 2)):
        r = inequality_suite(k, a, b, n_random=n_random, seed=seed)
        out.append(Check("inequality", f"{k.name} alpha={a} beta={b}", r.passed,
                         f"worst margin {r.worst_margin:.3e} at {r.worst_label}"))
    return out


def suite_entropy() -> list[Check]:
    r = entropy_inequality_checks(1000, 200)
    return [
        Check("entropy", "h2(a*a) - h2(a) >= h2(a)^2 (1 - h2(a))", r.self_conv_margin >= -1e-10,
              f"worst {r.self_conv_margin:.3e}"),
        Check("entropy", "h2(a*b) <= h2(a) + h2(b) - h2(a) h2(b)", r.gerber_margin >= -1e-10,
              f"worst {r.gerber_margin:.3e}"),
    ]


def suite_bounds() -> list[Check]:
    out = []
    for ks in ([T2] * 12, [T2, T3] * 5, [T3] * 7):
        for eps in (0.05, 0.3, 0.5, 0.7, 0.95):
            r = distance_bound_sweep(bec_tree(eps, ks))
            out.append(Check("bounds", f"bec:{eps} {'.'.join(str(k.size) for k in ks)}", r.passed,
                             f"slack {r.worst_slack:.2e}"))
    return out


def suite_oracle() -> list[Check]:
    out = []
    for ks in ([T2], [T3], [T2, T2], [T2, T3], [T3, T2]):
        g = build_generator(ks)
        worst = 0.0
        for eps in EPS_GRID:
            direct = np.array([mutual_information(c) for c in synthesize_step(bec(eps), g)])
            worst = max(worst, float(np.abs(direct - bec_tree(eps, ks).mutual_info()).max()))
        out.append(Check("oracle", f"tree vs direct synthesis {'.'.join(str(k.size) for k in ks)}",
                         worst <= 1e-9, f"max diff {worst:.2e}"))
    return out


def _full_spec(ks) -> CodeSpec:
    return construct_code(ks, "bec:0.5", int(np.prod([k.size for k in ks])))


def suite_codec(seed: int = 0) -> list[Check]:
    out = []
    spec = _full_spec([T2, T3])
    g = build_generator([T2, T3])
    msgs = np.array(list(itertools.product([0, 1], repeat=6)), dtype=np.uint8)
    x = encode(spec, msgs)
    ok_enc = np.array_equal(x, vecmat(msgs, g))
    u, _ = sc_decode_full(spec, erasure_evidence(x, np.zeros_like(x, dtype=bool)))
    out.append(Check("codec", "N=6 exhaustive noiseless roundtrip", ok_enc and np.array_equal(u, msgs)))
    rng = np.random.default_rng(seed)
    spec12 = _full_spec([T2, T3, T2])
    m = rng.integers(0, 2, size=(200, 12), dtype=np.uint8)
    u12, _ = sc_decode_full(spec12, erasure_evidence(encode(spec12, m), np.zeros((200, 12), dtype=bool)))
    out.append(Check("codec", "N=12 random noiseless roundtrip (200)", np.array_equal(u12, m)))
    worst = 0.0
    for ks in ([T2, T2], [T2, T3], [T3, T2]):
        sp = _full_spec(ks)
        gm = build_generator(ks)
        for _ in range(10):
            utrue = rng.integers(0, 2, size=sp.N, dtype=np.uint8)
            ev = rng.dirichlet([1.0, 1.0], size=sp.N)
            _, post = sc_decode_full(sp, ev, genie=utrue)
            worst = max(worst, float(np.abs(post - brute_force_posteriors(gm, ev, utrue)).max()))
    out.append(Check("codec", "stage posteriors vs brute force (N<=6)", worst <= 1e-9, f"max diff {worst:.2e}"))
    return out


SUITES = {
    "exponent": suite_exponent,
    "martingale": suite_martingale,
    "inequality": suite_inequality,
    "entropy": suite_entropy,
    "bounds": suite_bounds,
    "oracle": suite_oracle,
    "codec": suite_codec,
}


def run_suites(names) -> list[Check]:
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {['all', *SUITES]}")
    results = []
    for n in names:
        results.extend(SUITES[n]())
    return results
