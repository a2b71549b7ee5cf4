"""Ordering and objective metric tests, including invariance properties."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bandopt.instance import InteractionMatrix, generate, interaction_matrix
from bandopt.metrics import (
    Ordering,
    classic_bandwidth,
    load_ordering,
    ordering_from_json,
    ordering_to_json,
    permute_matrix,
    rcm_gap,
    save_ordering,
    weighted_bandwidth,
)


def _matrix_from_points(pts):
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    u = np.zeros((n, n))
    off = ~np.eye(n, dtype=bool)
    u[off] = 1.0 / d2[off] ** 3
    return InteractionMatrix.from_array(u)


COLLINEAR = _matrix_from_points([(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)])


@st.composite
def _points(draw, min_n=2, max_n=9):
    n = draw(st.integers(min_n, max_n))
    coords = draw(
        st.lists(
            st.tuples(
                st.integers(0, 400).map(lambda v: v / 16.0),
                st.integers(0, 400).map(lambda v: v / 16.0),
            ),
            min_size=n,
            max_size=n,
            unique=True,
        )
    )
    return coords


@st.composite
def _matrix_and_ordering(draw):
    pts = draw(_points())
    n = len(pts)
    perm = draw(st.permutations(range(1, n + 1)))
    return _matrix_from_points(pts), Ordering(tuple(perm))


class TestOrdering:
    def test_identity(self):
        assert Ordering.identity(4).perm == (1, 2, 3, 4)

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Ordering((1, 1, 3))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Ordering((0, 1, 2))

    def test_reversed(self):
        assert Ordering((1, 3, 2)).reversed().perm == (3, 1, 2)

    def test_reversed_is_involution(self):
        o = Ordering((2, 4, 1, 3))
        assert o.reversed().reversed() == o

    def test_vertex_at_inverse(self):
        o = Ordering((2, 3, 1))
        assert o.vertex_at() == (2, 0, 1)


class TestWeightedBandwidth:
    def test_two_sites(self):
        U = _matrix_from_points([(0.0, 0.0), (2.0, 0.0)])
        bw = weighted_bandwidth(U, Ordering.identity(2))
        assert bw.value == 1.0 / 64.0
        assert bw.argpair == (0, 1)

    def test_collinear_identity(self):
        bw = weighted_bandwidth(COLLINEAR, Ordering.identity(3))
        # pairs: (0,1) weight 1 at distance 1; (0,2) 1/729 at 2; (1,2) 1/64 at 1
        assert bw.value == 1.0
        assert bw.argpair == (0, 1)

    def test_single_vertex(self):
        U = InteractionMatrix.from_array(np.zeros((1, 1)))
        bw = weighted_bandwidth(U, Ordering.identity(1))
        assert bw.value == 0.0
        assert bw.argpair is None

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            weighted_bandwidth(COLLINEAR, Ordering.identity(4))

    @settings(max_examples=200, deadline=None)
    @given(_matrix_and_ordering())
    def test_reversal_invariance(self, pair):
        U, ordering = pair
        assert (
            weighted_bandwidth(U, ordering).value
            == weighted_bandwidth(U, ordering.reversed()).value
        )

    @settings(max_examples=100, deadline=None)
    @given(_matrix_and_ordering())
    def test_matches_permuted_matrix(self, pair):
        U, ordering = pair
        permuted = permute_matrix(U, ordering)
        assert (
            weighted_bandwidth(U, ordering).value
            == weighted_bandwidth(permuted, Ordering.identity(U.n)).value
        )


class TestClassicBandwidth:
    def test_path_identity(self):
        assert classic_bandwidth(frozenset({(0, 1), (1, 2)}), Ordering.identity(3)) == 1

    def test_empty_bonds(self):
        assert classic_bandwidth(frozenset(), Ordering.identity(3)) == 0

    def test_spread_pair(self):
        assert classic_bandwidth(frozenset({(0, 2)}), Ordering.identity(3)) == 2

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            classic_bandwidth(frozenset({(0, 5)}), Ordering.identity(3))


class TestPermuteMatrix:
    def test_relabels_positions(self):
        inst = generate(6, 11)
        U = interaction_matrix(inst)
        ordering = Ordering((3, 1, 2, 6, 4, 5))
        P = permute_matrix(U, ordering)
        for v in range(6):
            for w in range(6):
                assert P.u[ordering.perm[v] - 1, ordering.perm[w] - 1] == U.u[v, w]

    def test_identity_is_noop(self):
        U = interaction_matrix(generate(5, 3))
        assert np.array_equal(permute_matrix(U, Ordering.identity(5)).u, U.u)


class TestRcmGap:
    def test_fifty_percent(self):
        assert rcm_gap(1.5, 1.0) == 50.0

    def test_zero_gap(self):
        assert rcm_gap(2.0, 2.0) == 0.0

    def test_nonpositive_opt_rejected(self):
        with pytest.raises(ValueError):
            rcm_gap(1.0, 0.0)


class TestOrderingSerialization:
    def test_round_trip(self, tmp_path):
        o = Ordering((2, 3, 1))
        path = tmp_path / "ord.json"
        save_ordering(o, path)
        assert load_ordering(path) == o

    def test_stable_bytes(self):
        o = Ordering((4, 1, 3, 2))
        assert ordering_to_json(ordering_from_json(ordering_to_json(o))) == ordering_to_json(o)

    def test_schema_guard(self):
        with pytest.raises(ValueError):
            ordering_from_json('{"schema":"other/1","perm":[1]}')
