import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mkpolar.gf2 import BitMatrix, inverse, is_invertible, kron, rank, row_space, vecmat
from mkpolar.kernel import T2, T3


def bit_matrices(min_side=1, max_side=4, square=False):
    @st.composite
    def build(draw):
        r = draw(st.integers(min_side, max_side))
        c = r if square else draw(st.integers(min_side, max_side))
        bits = draw(st.lists(st.integers(0, 1), min_size=r * c, max_size=r * c))
        return BitMatrix(np.array(bits).reshape(r, c))
    return build()


def test_kron_identity():
    b = BitMatrix([[1, 0, 1], [0, 1, 1]])
    assert kron(BitMatrix.identity(1), b) == b


def test_kron_t2_t2():
    expected = BitMatrix.from_rows(["1000", "1100", "1010", "1111"])
    assert kron(T2.matrix, T2.matrix) == expected


def test_kron_dims():
    assert kron(T2.matrix, T3.matrix).shape == (6, 6)


def test_kron_entry_formula():
    a, b = T3.matrix, T2.matrix
    k = kron(a, b)
    for i in range(3):
        for j in range(3):
            for r in range(2):
                for s in range(2):
                    assert k[i * 2 + r, j * 2 + s] == a[i, j] * b[r, s]


@pytest.mark.parametrize("m, expected", [
    (T2.matrix, True),
    (T3.matrix, True),
    (BitMatrix([[1, 1], [1, 1]]), False),
])
def test_is_invertible(m, expected):
    assert is_invertible(m) is expected


def test_is_invertible_rejects_non_square():
    with pytest.raises(ValueError):
        is_invertible(BitMatrix([[1, 0, 1]]))


def test_inverse_roundtrip():
    inv = inverse(T3.matrix)
    assert np.array_equal(vecmat(T3.matrix.bits, inv), np.eye(3, dtype=np.uint8))


def test_row_space_empty():
    assert row_space([], length=3).tolist() == [[0, 0, 0]]


def test_row_space_t3_tail():
    words = {tuple(w) for w in row_space(T3.rows[1:])}
    assert words == {(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)}


def test_row_space_size_independent_rows():
    rows = np.eye(5, dtype=np.uint8)
    assert len(row_space(rows)) == 2**5


def test_row_space_guard():
    with pytest.raises(ValueError):
        row_space(np.eye(21, dtype=np.uint8))


def test_text_roundtrip(tmp_path):
    m = BitMatrix.from_rows(["101", "011", "110"])
    assert m.to_text() == "101\n011\n110\n"
    p = tmp_path / "m.txt"
    m.save(p)
    assert BitMatrix.load(p) == m


@pytest.mark.parametrize("text", ["", "10\n1\n", "12\n01\n"])
def test_text_rejects_malformed(text):
    with pytest.raises(ValueError):
        BitMatrix.from_text(text)


def test_rejects_non_binary_entries():
    with pytest.raises(ValueError):
        BitMatrix([[0, 2]])


@settings(max_examples=60, deadline=None)
@given(bit_matrices(1, 5))
def test_rank_matches_enumeration(m):
    assert rank(m) == oracles.gf2_rank(m.bits.tolist())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_vecmat_distributes_over_xor(data):
    m = data.draw(bit_matrices(1, 6))
    u = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m.rows, max_size=m.rows)), dtype=np.uint8)
    v = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m.rows, max_size=m.rows)), dtype=np.uint8)
    assert np.array_equal(vecmat(u ^ v, m), vecmat(u, m) ^ vecmat(v, m))


@settings(max_examples=40, deadline=None)
@given(bit_matrices(1, 3), bit_matrices(1, 3), bit_matrices(1, 3))
def test_kron_associative(a, b, c):
    assert kron(kron(a, b), c) == kron(a, kron(b, c))


@settings(max_examples=60, deadline=None)
@given(bit_matrices(1, 3, square=True), bit_matrices(1, 3, square=True))
def test_kron_invertibility(a, b):
    assert is_invertible(kron(a, b)) == (is_invertible(a) and is_invertible(b))
