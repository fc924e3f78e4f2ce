"""Numerical checks of polarization and convergence-rate properties.

Everything here works at finite depth: limits are never asserted, only the
finite-stage quantities that bear on them (stage means, leaf fractions,
per-step inequalities and bound slacks).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .channel import (
    DiscreteChannel,
    ErasureChannel,
    _discrete,
    bconv,
    h2_array,
    mutual_information,
)
from .kernel import Kernel, get_kernel
from .synthesis import ReliabilityTree, bec_tree, synthesize_step

ZERO_TOL = 1e-12


# --------------------------------------------------------------------------
# martingale / conservation


@dataclass
class MartingaleReport:
    design: str
    kernels: list[str]
    i0: float
    stage_means: list[float]
    deviations: list[float]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["max_deviation"] = self.max_deviation
        d["version"] = __version__
        return d


def martingale_report(channel, kernels: Sequence) -> MartingaleReport:
    """Mean mutual information of every stage, with its deviation from ``I(W)``.

    Erasure channels are followed exactly through all stages; any other
    channel is limited to a single kernel step via exact synthesis.
    """
    ks = [get_kernel(k) for k in kernels]
    names = [k.name for k in ks]
    if isinstance(channel, ErasureChannel):
        tree = bec_tree(channel.epsilon, ks)
        i0 = 1.0 - channel.epsilon
        means = [math.fsum(tree.mutual_info(m)) / tree.stage_size(m) for m in range(tree.depth + 1)]
        design = channel.spec()
    else:
        if len(ks) != 1:
            raise ValueError("multi-stage martingale checks need an erasure channel")
        w = _discrete(channel)
        i0 = mutual_information(w)
        children = [mutual_information(c) for c in synthesize_step(w, ks[0])]
        means = [i0, math.fsum(children) / len(children)]
        design = getattr(channel, "label", "") or repr(channel)
    return MartingaleReport(design, names, i0, means, [abs(m - i0) for m in means])


# --------------------------------------------------------------------------
# polarization fractions


def polarization_fraction(tree: ReliabilityTree, eps_threshold: float, stage: int | None = None):
    """Fractions ``(high, low, middle)`` of channels with ``I >= 1-t``, ``I <= t`` and in between."""
    if not 0.0 < eps_threshold < 0.5:
        raise ValueError(f"threshold must lie in (0, 0.5), got {eps_threshold}")
    i = tree.mutual_info(stage)
    n = i.size
    high = np.count_nonzero(i >= 1.0 - eps_threshold) / n
    low = np.count_nonzero(i <= eps_threshold) / n
    return high, low, 1.0 - high - low


def polarization_trajectory(tree: ReliabilityTree, eps_threshold: float) -> list[tuple[float, float, float]]:
    """:func:`polarization_fraction` at every stage 0..m."""
    return [polarization_fraction(tree, eps_threshold, m) for m in range(tree.depth + 1)]


# --------------------------------------------------------------------------
# per-step inequality |I_child - I| >= I^alpha (1 - I)^beta


@dataclass
class InequalityEntry:
    label: str
    capacity: float
    children: list[float]
    margin: float


@dataclass
class InequalityReport:
    kernel: str
    alpha: float
    beta: float
    grid: str
    seed: int | None
    worst_margin: float
    worst_label: str
    entries: list[InequalityEntry] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -ZERO_TOL

    def to_dict(self, with_entries: bool = False) -> dict:
        d = {
            "kernel": self.kernel,
            "alpha": self.alpha,
            "beta": self.beta,
            "grid": self.grid,
            "seed": self.seed,
            "worst_margin": self.worst_margin,
            "worst_label": self.worst_label,
            "pass": self.passed,
            "version": __version__,
        }
        if with_entries:
            d["entries"] = [asdict(e) for e in self.entries]
        return d


def check_step_inequality(w, k, alpha: float, beta: float, label: str = "") -> InequalityEntry:
    """Margin ``min_b |I(W_b) - I(W)| - I(W)^alpha (1 - I(W))^beta`` for one channel."""
    kern = get_kernel(k)
    dw = _discrete(w)
    i = mutual_information(dw)
    children = [mutual_information(c) for c in synthesize_step(dw, kern)]
    rhs = i**alpha * (1.0 - i) ** beta
    margin = min(abs(c - i) for c in children) - rhs
    return InequalityEntry(label or getattr(dw, "label", ""), i, children, margin)


def random_channel(rng: np.random.Generator, max_alphabet: int = 6) -> DiscreteChannel:
    """Channel with both conditional rows uniform on the simplex; empty outputs pruned."""
    a = int(rng.integers(2, max_alphabet + 1))
    pmf = rng.dirichlet(np.ones(a), size=2).T
    return DiscreteChannel(pmf, f"random|Y|={a}").pruned()


def inequality_suite(k, alpha: float, beta: float,
                     eps_grid: Iterable[float] | None = None,
                     n_random: int = 100, seed: int = 0,
                     max_alphabet: int = 6) -> InequalityReport:
    """Run :func:`check_step_inequality` over erasure channels and seeded random channels."""
    kern = get_kernel(k)
    if eps_grid is None:
        eps_grid = [round(0.01 * j, 2) for j in range(1, 100)]
    eps_grid = list(eps_grid)
    entries = [check_step_inequality(ErasureChannel(e), kern, alpha, beta, f"bec:{e}") for e in eps_grid]
    rng = np.random.default_rng(seed)
    for j in range(n_random):
        w = random_channel(rng, max_alphabet)
        entries.append(check_step_inequality(w, kern, alpha, beta, f"random#{j}({w.label})"))
    worst = min(entries, key=lambda e: e.margin)
    grid = f"bec eps in {eps_grid[0]}..{eps_grid[-1]} ({len(eps_grid)} pts); {n_random} random channels |Y|<={max_alphabet}"
    return InequalityReport(kern.name, alpha, beta, grid, seed, worst.margin, worst.label, entries)


# --------------------------------------------------------------------------
# binary-entropy inequalities used for T2 / T3


@dataclass
class EntropyReport:
    resolution: int
    resolution_2d: int
    self_conv_margin: float
    self_conv_argmin: float
    gerber_margin: float
    gerber_argmin: tuple[float, float]

    @property
    def passed(self) -> bool:
        return min(self.self_conv_margin, self.gerber_margin) >= -1e-10

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        d["version"] = __version__
        return d


def self_convolution_margin(a) -> np.ndarray:
    """``h2(a*a) - h2(a) - h2(a)^2 (1 - h2(a))``."""
    a = np.asarray(a, dtype=float)
    ha = h2_array(a)
    return h2_array(bconv(a, a)) - ha - ha**2 * (1.0 - ha)


def gerber_margin(a, b) -> np.ndarray:
    """``h2(a) + h2(b) - h2(a) h2(b) - h2(a*b)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ha, hb = h2_array(a), h2_array(b)
    return ha + hb - ha * hb - h2_array(bconv(a, b))


def entropy_inequality_checks(resolution: int = 1000, resolution_2d: int = 200) -> EntropyReport:
    """Worst margins of both inequalities on uniform grids over ``[0, 1/2]``."""
    if resolution < 100 or resolution_2d < 2:
        raise ValueError("need at least 100 grid points")
    a = np.linspace(0.0, 0.5, resolution)
    m1 = self_convolution_margin(a)
    j = int(np.argmin(m1))
    g = np.linspace(0.0, 0.5, resolution_2d)
    aa, bb = np.meshgrid(g, g, indexing="ij")
    m2 = gerber_margin(aa, bb)
    r, c = np.unravel_index(int(np.argmin(m2)), m2.shape)
    return EntropyReport(resolution, resolution_2d, float(m1[j]), float(a[j]),
                         float(m2[r, c]), (float(g[r]), float(g[c])))


# --------------------------------------------------------------------------
# exponents


@dataclass
class ExponentProfile:
    """Kernel mix ``(size, frequency, exponent)`` and its combined exponent."""

    entries: list[tuple[int, float, float]]
    combined: float = field(init=False)

    def __post_init__(self):
        self.combined = multi_kernel_exponent(self.entries)

    def to_dict(self) -> dict:
        return {
            "entries": [{"size": l, "frequency": p, "exponent": e} for l, p, e in self.entries],
            "combined": self.combined,
            "version": __version__,
        }


def _entry(e) -> tuple[int, float, float]:
    if isinstance(e[0], Kernel) or isinstance(e[0], str):
        kern = get_kernel(e[0])
        return kern.size, float(e[1]), kern.exponent
    l, p, ex = e
    return int(l), float(p), float(ex)


def multi_kernel_exponent(entries) -> float:
    """Combined exponent ``sum_j p_j log2(l_j) E_j / sum_j p_j log2(l_j)``.

    ``entries`` holds ``(size, frequency, exponent)`` triples or
    ``(kernel, frequency)`` pairs.
    """
    es = [_entry(e) for e in entries]
    if not es:
        raise ValueError("empty exponent profile")
    ps = [p for _, p, _ in es]
    if any(p < 0 for p in ps) or abs(math.fsum(ps) - 1.0) > 1e-12:
        raise ValueError(f"frequencies must be nonnegative and sum to 1, got {ps}")
    weights = [p * math.log2(l) for l, p, _ in es]
    denom = math.fsum(weights)
    if denom <= 0:
        raise ValueError("profile has no kernel of size >= 2 with positive frequency")
    return math.fsum(w * e for w, (_, _, e) in zip(weights, es)) / denom


def profile_from_kernels(kernels: Sequence) -> ExponentProfile:
    """Empirical frequencies ``n_j / m`` of the kernels in a finite product."""
    ks = [get_kernel(k) for k in kernels]
    counts = Counter(ks)
    m = len(ks)
    order = sorted(counts, key=lambda k: (k.size, k.name))
    return ExponentProfile([(k.size, counts[k] / m, k.exponent) for k in order])


# --------------------------------------------------------------------------
# convergence-rate probe


def convergence_probe(tree: ReliabilityTree, gamma: float, stage: int | None = None) -> tuple[float, float]:
    """Fractions of channels with ``Z <= 2^(-N^gamma)`` and ``Z >= 2^(-N^gamma)``.

    Comparisons are made on log2 Z, so thresholds far below the smallest
    double are handled exactly.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    m = tree.depth if stage is None else stage
    lz = tree.log2_z[m] if tree.mode == "erasure" else tree.log2_z_upper[m]
    n = tree.stage_size(m)
    thr = -(float(n) ** gamma)
    return (np.count_nonzero(lz <= thr) / lz.size, np.count_nonzero(lz >= thr) / lz.size)


def convergence_trajectory(tree: ReliabilityTree, gamma: float) -> list[dict]:
    """Per-stage :func:`convergence_probe` values (stages 1..m)."""
    out = []
    for m in range(1, tree.depth + 1):
        below, above = convergence_probe(tree, gamma, m)
        out.append({"stage": m, "N": tree.stage_size(m), "log2_threshold": -(float(tree.stage_size(m)) ** gamma),
                    "fraction_below": below, "fraction_above": above})
    return out


# --------------------------------------------------------------------------
# partial-distance bounds on every transition


@dataclass
class BoundSweepReport:
    design: str
    kernels: list[str]
    k_factor: float
    lower_slack: float
    upper_slack: float
    relaxed_slack: float
    transitions: int

    @property
    def worst_slack(self) -> float:
        return min(self.lower_slack, self.upper_slack, self.relaxed_slack)

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -ZERO_TOL

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(worst_slack=self.worst_slack, version=__version__)
        d["pass"] = self.passed
        return d


def distance_bound_sweep(tree: ReliabilityTree) -> BoundSweepReport:
    """Check ``Z^D <= Z_child <= 2^(l-b) Z^D`` (and ``<= 2^(l*) Z^D``) on every edge.

    Slacks are linear-domain differences; the minimum over all transitions
    is reported for each side.
    """
    tree._need("erasure")
    l_star = max(k.size for k in tree.kernels)
    k_factor = 2.0**l_star
    lo_s = up_s = rel_s = math.inf
    count = 0
    for m, kern in enumerate(tree.kernels, 1):
        parent = tree.z[m - 1]
        child = tree.z[m].reshape(parent.size, kern.size)
        d = np.array(kern.partial_distances, dtype=float)
        shift = np.arange(kern.size - 1, -1, -1, dtype=float)
        base = parent[:, None] ** d[None, :]
        lo_s = min(lo_s, float((child - base).min()))
        up_s = min(up_s, float((np.minimum(1.0, base * np.exp2(shift)) - child).min()))
        rel_s = min(rel_s, float((np.minimum(1.0, k_factor * base) - child).min()))
        count += child.size
    return BoundSweepReport(tree.design, [k.name for k in tree.kernels], k_factor, lo_s, up_s, rel_s, count)


# --------------------------------------------------------------------------
# text rendering


def format_table(headers: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Aligned plain-text table."""
    def cell(v):
        if isinstance(v, float):
            return f"{v:.6g}"
        return str(v)

    body = [[cell(v) for v in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in body]
    return "\n".join(lines) + "\n"
