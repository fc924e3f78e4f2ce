"""Monte-Carlo frame/bit error simulation.

Trial ``t`` draws its randomness from a fixed window of a Philox stream keyed
by the seed, so any split of the trials into chunks (and any number of
worker threads) produces the same counts.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from statistics import NormalDist

import numpy as np

from . import __version__
from .channel import ErasureChannel, SymmetricChannel, parse_channel
from .codec import bsc_evidence, encode, erasure_evidence, sc_decode
from .construction import CodeSpec

FORMAT_VERSION = 1
THREADS_ENV = "MKPOLAR_THREADS"
DEFAULT_CHUNK = 4096
CSV_HEADER = "format_version,spec,N,K,channel,trials,frame_errors,bit_errors,fer,ber,wilson_low,wilson_high,seed\n"


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = errors / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class FerReport:
    spec: str
    N: int
    K: int
    channel: str
    trials: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    wilson_low: float
    wilson_high: float
    seed: int
    wall_time: float = 0.0
    format_version: int = FORMAT_VERSION

    def to_dict(self, include_timing: bool = False) -> dict:
        d = asdict(self)
        if not include_timing:
            d.pop("wall_time")
        d["version"] = __version__
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2) + "\n"

    def csv_row(self) -> str:
        vals = [self.format_version, self.spec, self.N, self.K, self.channel, self.trials,
                self.frame_errors, self.bit_errors, repr(self.fer), repr(self.ber),
                repr(self.wilson_low), repr(self.wilson_high), self.seed]
        return ",".join(str(v) for v in vals) + "\n"


def _words_per_trial(spec: CodeSpec) -> int:
    need = spec.K + spec.N
    return -(-need // 4) * 4


def _uniforms(seed: int, start: int, count: int, width: int) -> np.ndarray:
    key = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)
    bg = np.random.Philox(key=key)
    # Philox advances in blocks of four 64-bit words; width is a multiple of 4
    bg.advance(start * width // 4)
    return np.random.Generator(bg).random((count, width))


def _run_chunk(spec: CodeSpec, channel, seed: int, start: int, count: int) -> tuple[int, int]:
    width = _words_per_trial(spec)
    r = _uniforms(seed, start, count, width)
    msg = (r[:, : spec.K] < 0.5).astype(np.uint8)
    noise = r[:, spec.K: spec.K + spec.N]
    x = encode(spec, msg)
    if isinstance(channel, ErasureChannel):
        ev = erasure_evidence(x, noise < channel.epsilon)
    else:
        y = x ^ (noise < channel.p).astype(np.uint8)
        ev = bsc_evidence(y, channel.p)
    est, post = sc_decode(spec, ev)
    info = np.asarray(spec.information_set, dtype=int) - 1
    # an information bit left at an exact tie counts as wrong
    tie = post[:, info, 0] == post[:, info, 1]
    wrong = (est != msg) | tie
    return int(wrong.any(axis=1).sum()), int(wrong.sum())


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_fer_simulation(spec: CodeSpec, channel, trials: int, seed: int,
                       threads: int | None = None, chunk: int = DEFAULT_CHUNK,
                       spec_name: str = "") -> FerReport:
    """Estimate frame and bit error rates of SC decoding over ``channel``.

    Each trial encodes a uniformly random message, passes it through an
    erasure or binary symmetric channel and decodes.  Results depend only on
    ``(spec, channel, trials, seed)``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    w = parse_channel(channel) if isinstance(channel, str) else channel
    if not isinstance(w, (ErasureChannel, SymmetricChannel)):
        raise ValueError(f"unsupported channel for simulation: {channel!r} (use bec:<eps> or bsc:<p>)")
    t0 = time.perf_counter()
    starts = list(range(0, trials, chunk))
    jobs = [(s, min(chunk, trials - s)) for s in starts]
    if spec.K == 0:
        results = [(0, 0)]
    else:
        nthreads = threads or default_threads()
        if nthreads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(nthreads) as pool:
                results = list(pool.map(lambda j: _run_chunk(spec, w, seed, *j), jobs))
        else:
            results = [_run_chunk(spec, w, seed, *j) for j in jobs]
    fe = sum(r[0] for r in results)
    be = sum(r[1] for r in results)
    lo, hi = wilson_interval(fe, trials)
    return FerReport(
        spec=spec_name or f"{'x'.join(spec.kernels)}:K={spec.K}",
        N=spec.N,
        K=spec.K,
        channel=w.spec(),
        trials=trials,
        frame_errors=fe,
        bit_errors=be,
        fer=fe / trials,
        ber=be / (trials * spec.K) if spec.K else 0.0,
        wilson_low=lo,
        wilson_high=hi,
        seed=seed,
        wall_time=time.perf_counter() - t0,
    )


def union_bound(spec: CodeSpec) -> float:
    """Sum of the design figures over the information set (Bhattacharyya union bound)."""
    info = np.asarray(spec.information_set, dtype=int) - 1
    return float(min(1.0, math.fsum(np.asarray(spec.reliabilities)[info])))
