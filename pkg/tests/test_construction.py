import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from mkpolar.channel import bec, bsc, mutual_information
from mkpolar.construction import (
    BOUND,
    EXACT,
    CodeSpec,
    all_paths,
    build_generator,
    construct_code,
    from_mixed_radix,
    mixed_radix,
    select_frozen,
)
from mkpolar.gf2 import kron
from mkpolar.kernel import T2, T3, Kernel
from mkpolar.synthesis import synthesize_step


def test_mixed_radix_examples():
    assert mixed_radix(6, (2, 3)) == (2, 3)
    assert mixed_radix(1, (2, 3)) == (1, 1)
    assert mixed_radix(4, (2, 3)) == (2, 1)
    assert mixed_radix(4, (3, 2)) == (2, 2)
    with pytest.raises(ValueError):
        mixed_radix(7, (2, 3))
    with pytest.raises(ValueError):
        from_mixed_radix((3, 1), (2, 3))


def test_mixed_radix_roundtrip_235():
    bases = (2, 3, 5)
    seen = set()
    for i in range(1, 31):
        d = mixed_radix(i, bases)
        seen.add(d)
        assert from_mixed_radix(d, bases) == i
    assert len(seen) == 30


@given(st.lists(st.integers(2, 5), min_size=1, max_size=4), st.data())
def test_all_paths_agrees_with_mixed_radix(bases, data):
    tbl = all_paths(bases)
    i = data.draw(st.integers(1, tbl.shape[0]))
    assert tuple(tbl[i - 1]) == mixed_radix(i, bases)


def test_build_generator():
    g = build_generator([T2, T2])
    assert g.to_text().split() == ["1000", "1100", "1010", "1111"]
    assert build_generator(["T2", "T3"]) == kron(T2.matrix, T3.matrix)
    assert build_generator([T3, T2]).shape == (6, 6)
    with pytest.raises(ValueError):
        build_generator([])
    with pytest.raises(ValueError):
        build_generator([T2] * 14)


def test_generator_agrees_with_oracle_encoder():
    g = build_generator([T2, T3, T2])
    rng = np.random.default_rng(3)
    rows = g.bits.tolist()
    for _ in range(20):
        u = rng.integers(0, 2, 12).tolist()
        assert list(oracles.encode(u, rows)) == ((np.array(u) @ g.bits) % 2).tolist()


def test_select_frozen_examples():
    info, frozen = select_frozen([0.9375, 0.5625, 0.4375, 0.0625], 2)
    assert info == (3, 4) and frozen == (1, 2)
    assert select_frozen([0.5, 0.5, 0.1], 2) == ((1, 3), (2,))
    assert select_frozen([0.2] * 4, 1) == ((1,), (2, 3, 4))
    assert select_frozen([0.3, 0.1], 0) == ((), (1, 2))
    assert select_frozen([0.3, 0.1], 2) == ((1, 2), ())
    for k in (-1, 3):
        with pytest.raises(ValueError):
            select_frozen([0.3, 0.1], k)


@given(st.lists(st.sampled_from([0.0, 0.1, 0.5, 1.0]), min_size=1, max_size=12), st.data())
def test_select_frozen_partitions(figs, data):
    k = data.draw(st.integers(0, len(figs)))
    info, frozen = select_frozen(figs, k)
    assert sorted(info + frozen) == list(range(1, len(figs) + 1))
    assert len(info) == k
    if info and frozen:
        assert max(figs[i - 1] for i in info) <= min(figs[i - 1] for i in frozen)


def test_construct_bec_example():
    spec = construct_code([T2, T2], "bec:0.5", 2)
    assert spec.information_set == (3, 4)
    assert spec.frozen_set == (1, 2)
    assert spec.design_mode == EXACT
    assert spec.reliabilities == pytest.approx((0.9375, 0.5625, 0.4375, 0.0625))
    assert spec.frozen_mask.tolist() == [True, True, False, False]
    assert spec.rate == 0.5


def test_construct_bsc_regression():
    spec = construct_code([T2, T2], "bsc:0.11", 2)
    assert spec.design_mode == BOUND
    assert spec.information_set == (3, 4)
    assert spec.reliabilities[3] == pytest.approx(0.15335056, abs=1e-8)
    assert spec.reliabilities[0] == 1.0


def test_construct_is_deterministic_and_roundtrips(tmp_path):
    a = construct_code([T2, T3, T2], "bec:0.42", 5)
    b = construct_code(["T2", "T3", "T2"], "bec:0.42", 5)
    assert a.to_json() == b.to_json()
    p = tmp_path / "c.json"
    a.save(p)
    back = CodeSpec.load(p)
    assert back == a
    assert back.to_json() == a.to_json()


def test_json_handles_exactly_reliable_leaves():
    spec = construct_code([T2] * 3, "bec:0.0", 4)
    d = json.loads(spec.to_json())
    assert d["log2_reliabilities"] == [None] * 8
    assert CodeSpec.from_json(spec.to_json()).log2_reliabilities == (-np.inf,) * 8


def test_custom_kernel_survives_roundtrip():
    k4 = Kernel([[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]], name="K4x")
    spec = construct_code([k4, T2], "bec:0.3", 3)
    back = CodeSpec.from_json(spec.to_json())
    assert back.kernel_objects[0].matrix == k4.matrix
    assert back.N == 8


@pytest.mark.parametrize("kernels", [[T2, T2], [T2, T3], [T3, T2]])
@pytest.mark.parametrize("eps", [0.2, 0.5, 0.8])
def test_ranking_matches_direct_synthesis(kernels, eps):
    direct = [mutual_information(c) for c in synthesize_step(bec(eps), build_generator(kernels))]
    spec = construct_code(kernels, f"bec:{eps}", len(direct) // 2)
    # reliability of every leaf equals 1 - I of the directly synthesized channel
    assert np.allclose(1 - np.array(spec.reliabilities), direct, atol=1e-9)


def test_bound_mode_accepts_discrete_channel():
    spec = construct_code([T2, T2], bsc(0.11), 1)
    assert spec.information_set == (4,)


@pytest.mark.parametrize("k", [-1, 5])
def test_k_out_of_range(k):
    with pytest.raises(ValueError):
        construct_code([T2, T2], "bec:0.5", k)


def test_spec_validation():
    good = construct_code([T2, T2], "bec:0.5", 2).to_dict()
    for bad in ({"N": 6}, {"information_set": [3, 3]}, {"information_set": [0, 4]}, {"format_version": 9}):
        with pytest.raises(ValueError):
            CodeSpec.from_dict({**good, **bad})
