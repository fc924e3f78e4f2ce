"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Every test records a PASS/FAIL line that is echoed in the pytest summary.
"""

import itertools
import math
import time

import numpy as np

import oracles
from acceptance_log import record
from mkpolar.analysis import (
    convergence_probe,
    entropy_inequality_checks,
    inequality_suite,
    distance_bound_sweep,
    martingale_report,
    multi_kernel_exponent,
    polarization_fraction,
    polarization_trajectory,
)
from mkpolar.channel import ErasureChannel, bec, mutual_information
from mkpolar.codec import encode, erasure_evidence, sc_decode, sc_decode_full
from mkpolar.construction import build_generator, construct_code
from mkpolar.kernel import T2, T3, kernel_exponent
from mkpolar.simulation import run_fer_simulation, union_bound
from mkpolar.synthesis import bec_tree, synthesize_step

EPS_GRID = [round(0.1 * j, 1) for j in range(1, 10)]


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_01_kernel_exponents():
    (e2, e3), dt = timed(lambda: (kernel_exponent(T2), kernel_exponent(T3)))
    # independent: partial distances by brute-force span, then the mean log
    d3 = oracles.partial_distances(T3.rows.tolist())
    e3_oracle = sum(math.log(d, 3) for d in d3) / 3
    ok = e2 == 0.5 and abs(e3 - 0.4206) <= 1e-3 and abs(e3 - e3_oracle) < 1e-15 and dt < 1
    assert record(1, ok, f"E(T2)={e2!r} E(T3)={e3:.6f} oracle={e3_oracle:.6f} ({dt:.3f}s)")


def test_02_multi_kernel_exponent():
    def go():
        return (multi_kernel_exponent([(T2, 1.0)]), multi_kernel_exponent([(T3, 1.0)]),
                multi_kernel_exponent([(T2, 0.5), (T3, 0.5)]))

    (a, b, mixed), dt = timed(go)
    hand = (0.5 * 1 * 0.5 + 0.5 * math.log2(3) * T3.exponent) / (0.5 * 1 + 0.5 * math.log2(3))
    ok = a == 0.5 and b == T3.exponent and abs(mixed - hand) <= 1e-12 and dt < 1
    assert record(2, ok, f"{{T2:1}}={a} {{T3:1}}={b:.6f} mixed={mixed:.12f} hand={hand:.12f} ({dt:.3f}s)")


def test_03_martingale():
    def go():
        worst = 0.0
        for ks in ([T2, T3] * 6, [T3, T2] * 6):
            for eps in EPS_GRID:
                worst = max(worst, martingale_report(ErasureChannel(eps), ks).max_deviation)
        return worst

    worst, dt = timed(go)
    ok = worst <= 1e-12 and dt < 30
    assert record(3, ok, f"N=46656 [2,3]x6 and [3,2]x6, eps 0.1..0.9: max deviation {worst:.2e} ({dt:.2f}s)")


def test_04_polarization():
    def go():
        t2 = bec_tree(0.5, [T2] * 16)
        mixed = bec_tree(0.5, [T2, T3] * 3)
        return t2, mixed

    (t2, mixed), dt = timed(go)
    f2 = polarization_fraction(t2, 0.01)[0]
    fm = polarization_fraction(mixed, 0.01)[0]
    results = []
    for tree in (t2, mixed):
        mids = [m for _, _, m in polarization_trajectory(tree, 0.01)[-4:]]
        results.append(all(x > y for x, y in zip(mids, mids[1:])))
    ok = 0.45 <= f2 <= 0.50 and 0.38 <= fm <= 0.52 and all(results) and dt < 60
    assert record(4, ok, f"high fraction T2^16={f2:.4f} (want [0.45,0.50]), [2,3,2,3,2,3] N={mixed.n}="
                         f"{fm:.4f} (want [0.38,0.52]); middle strictly decreasing: {results} ({dt:.2f}s)")


def test_05_step_inequality():
    (r2, r3), dt = timed(lambda: (inequality_suite(T2, 1, 2, n_random=100, seed=0),
                                  inequality_suite(T3, 2, 2, n_random=100, seed=0)))
    ok = r2.worst_margin >= -1e-12 and r3.worst_margin >= -1e-12 and dt < 60
    assert record(5, ok, f"T2(1,2) worst {r2.worst_margin:.3e} at {r2.worst_label}; "
                         f"T3(2,2) worst {r3.worst_margin:.3e} at {r3.worst_label} ({dt:.2f}s)")


def test_06_entropy_inequalities():
    r, dt = timed(lambda: entropy_inequality_checks(1000, 200))
    ok = r.self_conv_margin >= -1e-10 and r.gerber_margin >= -1e-10
    assert record(6, ok, f"self-convolution worst {r.self_conv_margin:.3e}, "
                         f"convolution bound worst {r.gerber_margin:.3e} ({dt:.2f}s)")


def test_07_partial_distance_bounds():
    def go():
        worst, n = math.inf, 0
        for ks in ([T2] * 14, [T3] * 8, [T2, T3] * 5, [T3, T3, T2, T2, T3]):
            for eps in (0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
                rep = distance_bound_sweep(bec_tree(eps, ks))
                worst, n = min(worst, rep.worst_slack), n + rep.transitions
        return worst, n

    (worst, n), dt = timed(go)
    assert record(7, worst >= -1e-12, f"{n} transitions, worst slack {worst:.3e} ({dt:.2f}s)")


def test_08_oracle_equivalence():
    def go():
        worst = 0.0
        for ks in ([T2, T2], [T2, T3], [T3, T2]):
            g = build_generator(ks)
            for eps in EPS_GRID:
                direct = np.array([mutual_information(c) for c in synthesize_step(bec(eps), g)])
                worst = max(worst, float(np.abs(direct - bec_tree(eps, ks).mutual_info()).max()))
        return worst

    worst, dt = timed(go)
    assert record(8, worst <= 1e-9, f"N in {{4,6}}, eps 0.1..0.9: max |tree - direct| {worst:.2e} ({dt:.2f}s)")


def test_09_codec():
    def go():
        out = {}
        spec6 = construct_code([T2, T3], "bec:0.5", 6)
        msgs = np.array(list(itertools.product([0, 1], repeat=6)), dtype=np.uint8)
        est, _ = sc_decode(spec6, erasure_evidence(encode(spec6, msgs), np.zeros((64, 6), bool)))
        out["exhaustive N=6"] = bool(np.array_equal(est, msgs))
        spec12 = construct_code([T2, T3, T2], "bec:0.5", 12)
        rng = np.random.default_rng(2024)
        m = rng.integers(0, 2, size=(200, 12), dtype=np.uint8)
        est, _ = sc_decode(spec12, erasure_evidence(encode(spec12, m), np.zeros((200, 12), bool)))
        out["random N=12"] = bool(np.array_equal(est, m))
        worst = 0.0
        for ks in ([T2, T2], [T2, T3], [T3, T2], [T2, T2, T2]):
            n = int(np.prod([k.size for k in ks]))
            spec = construct_code(ks, "bec:0.5", n)
            g = build_generator(ks).bits.tolist()
            for _ in range(10):
                u = rng.integers(0, 2, size=n, dtype=np.uint8)
                ev = rng.dirichlet([1.0, 1.0], size=n)
                _, post = sc_decode_full(spec, ev, genie=u)
                brute = np.array(oracles.posteriors(g, ev.tolist(), u.tolist()))
                worst = max(worst, float(np.abs(post - brute).max()))
        out["posterior diff"] = worst
        return out

    out, dt = timed(go)
    ok = out["exhaustive N=6"] and out["random N=12"] and out["posterior diff"] <= 1e-9
    assert record(9, ok, f"{out} ({dt:.2f}s)")


def test_10_fer_sanity():
    def go():
        coverage, over = {}, []
        for ks, eps in (([T2, T2], 0.5), ([T2, T3], 0.3)):
            spec = construct_code(ks, f"bec:{eps}", 1)
            exact = spec.reliabilities[spec.information_set[0] - 1]
            hits = 0
            for seed in range(20):
                r = run_fer_simulation(spec, f"bec:{eps}", 100_000, seed=seed)
                hits += r.wilson_low <= exact <= r.wilson_high
                sigma = math.sqrt(exact * (1 - exact) / r.trials)
                if r.fer > union_bound(spec) + 3 * sigma:
                    over.append((spec.N, seed, r.fer))
            coverage[f"N={spec.N} bec:{eps} exact={exact:.4g}"] = hits
        # a longer code where the union bound is not tight
        big = construct_code([T2] * 10, "bec:0.3", 512)
        ub = union_bound(big)
        r = run_fer_simulation(big, "bec:0.3", 2000, seed=7)
        sigma = math.sqrt(ub * (1 - ub) / r.trials)
        if r.fer > ub + 3 * sigma:
            over.append((big.N, 7, r.fer))
        return coverage, over, (r.fer, ub)

    (coverage, over, big), dt = timed(go)
    ok = all(h >= 19 for h in coverage.values()) and not over
    cov = ", ".join(f"{k}: {h}/20" for k, h in coverage.items())
    assert record(10, ok, f"Wilson coverage {cov}; union-bound violations {over}; "
                          f"N=1024 K=512 fer={big[0]:.4f} bound={big[1]:.4f} ({dt:.2f}s)")


def test_11_convergence_probe():
    tree, dt = timed(lambda: bec_tree(0.5, [T2] * 18))
    below, _ = convergence_probe(tree, 0.4)
    _, above = convergence_probe(tree, 0.9)
    finite = bool(np.all(np.isfinite(tree.log2_z[-1])))
    ok = 0.35 <= below <= 0.50 and above >= 0.99 and finite
    assert record(11, ok, f"N=2^18: frac(Z<=2^-N^0.4)={below:.5f} (want [0.35,0.50]), "
                          f"frac(Z>=2^-N^0.9)={above:.5f} (want >=0.99), log2 Z finite={finite} ({dt:.2f}s)")
