from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from knotfill.f2algebra import F2Matrix, GradedComplexF2, f2_rank


def brute_rank(rows, nrows):
    """log2 of the size of the row space -- independent of elimination."""
    span = {0}
    for r in rows:
        span |= {v ^ r for v in span}
    n = len(span)
    return n.bit_length() - 1


@settings(deadline=None, max_examples=80)
@given(
    st.integers(min_value=0, max_value=8),
    st.integers(min_value=1, max_value=10),
    st.randoms(use_true_random=False),
)
def test_rank_matches_row_space_size(nrows, ncols, rng):
    rows = [rng.getrandbits(ncols) for _ in range(nrows)]
    assert f2_rank(rows) == brute_rank(rows, nrows)


def test_rank_examples():
    assert f2_rank([]) == 0
    assert f2_rank([0, 0]) == 0
    assert f2_rank([0b1, 0b10, 0b11]) == 2
    assert F2Matrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]]).rank() == 2


def test_mul_and_transpose():
    a = F2Matrix.from_dense([[1, 1], [0, 1]])
    b = F2Matrix.from_dense([[1, 0], [1, 1]])
    assert a.mul(b).to_dense() == [[0, 1], [1, 1]]
    assert a.transpose().to_dense() == [[1, 0], [1, 1]]


@settings(deadline=None, max_examples=40)
@given(st.randoms(use_true_random=False))
def test_transpose_preserves_rank(rng):
    n, m = rng.randint(1, 8), rng.randint(1, 8)
    a = F2Matrix(n, m, [rng.getrandbits(m) for _ in range(n)])
    assert a.rank() == a.transpose().rank()


def _identity(n):
    return F2Matrix(n, n, [1 << i for i in range(n)])


def test_complex_triangle_circle():
    # boundary of a triangle: three vertices, three edges, H^0 = H^1 = F2.
    # cohomological indexing: C^0 = functions on vertices -> C^1 on edges.
    d0 = F2Matrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    cx = GradedComplexF2(
        dims={(0, 0): 3, (1, 0): 3}, diffs={(0, 0): d0}
    ).validate()
    assert cx.check_d_squared()
    assert cx.homology_dims() == {(0, 0): 1, (1, 0): 1}


def test_complex_torus_delta():
    # standard one-vertex Delta-complex of the torus: 1 vertex, 3 edges, 2 faces.
    # coboundary d0 = 0; d1 sends each edge functional to a+b+c on both faces.
    d0 = F2Matrix(3, 1, [0, 0, 0])
    d1 = F2Matrix.from_dense([[1, 1, 1], [1, 1, 1]])
    cx = GradedComplexF2(
        dims={(0, 0): 1, (1, 0): 3, (2, 0): 2},
        diffs={(0, 0): d0, (1, 0): d1},
    ).validate()
    assert cx.check_d_squared()
    assert cx.homology_dims() == {(0, 0): 1, (1, 0): 2, (2, 0): 1}


@settings(deadline=None, max_examples=50)
@given(st.randoms(use_true_random=False))
def test_planted_homology_recovered(rng):
    """Conjugating a planted complex by row operations keeps its homology."""
    n0, n1, n2 = (rng.randint(0, 6) for _ in range(3))
    r1 = rng.randint(0, min(n0, n1))
    r2 = rng.randint(0, min(n2, max(n1 - r1, 0)))
    d1 = F2Matrix.from_entries(n1, n0, [(i, i) for i in range(r1)])
    d2 = F2Matrix.from_entries(n2, n1, [(i, r1 + i) for i in range(r2)])
    # change basis of C1 by an invertible P: d1 -> P d1, d2 -> d2 P^{-1}
    p = _identity(n1)
    pinv = _identity(n1)
    ops = []
    for _ in range(3 * n1):
        i, j = (rng.randrange(n1), rng.randrange(n1)) if n1 else (0, 0)
        if n1 == 0 or i == j:
            continue
        ops.append((i, j))
        p.rows[i] ^= p.rows[j]
    # inverse of a product of transvections: apply them in reverse
    for i, j in reversed(ops):
        pinv.rows[i] ^= pinv.rows[j]
    # sanity: P * Pinv = I ... note both act on the left as row ops
    d1c = p.mul(d1)
    d2c = d2.mul(pinv)
    cx = GradedComplexF2(
        dims={(0, 0): n0, (1, 0): n1, (2, 0): n2},
        diffs={(0, 0): d1c, (1, 0): d2c},
    ).validate()
    assert cx.check_d_squared()
    got = cx.homology_dims()
    want = {}
    if n0 - r1:
        want[(0, 0)] = n0 - r1
    if n1 - r1 - r2:
        want[(1, 0)] = n1 - r1 - r2
    if n2 - r2:
        want[(2, 0)] = n2 - r2
    assert got == want


def test_euler_per_q():
    cx = GradedComplexF2(
        dims={(0, 1): 2, (1, 1): 3, (2, 1): 1, (0, 5): 4},
        diffs={},
    )
    e = cx.euler_per_q()
    assert e[1] == 2 - 3 + 1
    assert e[5] == 4


def test_validate_catches_shape_mismatch():
    with pytest.raises(ValueError):
        GradedComplexF2(
            dims={(0, 0): 2, (1, 0): 2},
            diffs={(0, 0): F2Matrix(3, 2, [0, 0, 0])},
        ).validate()
