import numpy as np
import pytest
from hypothesis import given, strategies as st

from xilab import (LatticePath, LatticePoint, Stream, ValidationError, extend,
                   hitting_index, random_walk)


def east_path(n, step=LatticePoint(1, 0)):
    xs = np.arange(n + 1, dtype=np.int64) * step.re
    ys = np.arange(n + 1, dtype=np.int64) * step.im
    return LatticePath(xs=xs, ys=ys, step=step)


class TestLatticePoint:
    def test_gaussian_product(self):
        assert LatticePoint(0, 1) * LatticePoint(0, 1) == LatticePoint(-1, 0)
        assert LatticePoint(4, 3) * LatticePoint(4, -3) == LatticePoint(25, 0)

    def test_conjugate_and_norm(self):
        p = LatticePoint(4, 3)
        assert p.conjugate() == LatticePoint(4, -3)
        assert p.norm2() == 25

    def test_str_forms(self):
        assert str(LatticePoint(5, 0)) == "5"
        assert str(LatticePoint(0, 5)) == "5i"
        assert str(LatticePoint(4, -3)) == "4-3i"


class TestExtend:
    def test_zero_steps_is_identity(self):
        p = LatticePath.at()
        assert extend(p, Stream(0), 0) is p

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            extend(LatticePath.at(), Stream(0), -1)

    def test_increments_in_step_set(self):
        # every increment of a complex-step walk is one of {a, ia, -a, -ia}
        step = LatticePoint(4, 3)
        path = extend(LatticePath.at(step=step), Stream(3, 1), 500)
        allowed = {(4, 3), (-3, 4), (-4, -3), (3, -4)}
        deltas = set(zip(np.diff(path.xs).tolist(), np.diff(path.ys).tolist()))
        assert deltas <= allowed
        assert len(deltas) == 4  # all four appear over 500 draws

    def test_double_run_identical(self):
        a = extend(LatticePath.at(), Stream(42, 7), 100)
        b = extend(LatticePath.at(), Stream(42, 7), 100)
        assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)

    def test_extension_independent_of_chunking(self):
        s = Stream(5, 0)
        one = extend(LatticePath.at(), s, 64)
        two = extend(extend(LatticePath.at(), s, 40), s, 24)
        assert np.array_equal(one.xs, two.xs) and np.array_equal(one.ys, two.ys)

    def test_invalid_jump_rejected(self):
        with pytest.raises(ValidationError):
            LatticePath(xs=np.array([0, 2]), ys=np.array([0, 0]))

    def test_origin_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            LatticePath(xs=np.array([1]), ys=np.array([0]))


class TestHittingIndex:
    def test_straight_east(self):
        rec = hitting_index(east_path(5), 3)
        assert rec.index == 3

    def test_radius_zero_hits_origin(self):
        assert hitting_index(east_path(5), 0).index == 0

    def test_never_reached(self):
        assert hitting_index(east_path(5), 10).index is None

    def test_matches_naive_scan(self):
        path = random_walk(1000, seed=11)
        for radius in (1, 2.5, 7, 13.0, 31):
            naive = None
            for i in range(len(path)):
                p = path.point(i)
                if p.norm2() >= radius * radius:
                    naive = i
                    break
            assert hitting_index(path, radius).index == naive

    def test_negative_radius_rejected(self):
        with pytest.raises(ValidationError):
            hitting_index(east_path(1), -1)

    @given(st.integers(min_value=0, max_value=60))
    def test_monotone_in_radius(self, r_tenths):
        path = random_walk(400, seed=23)
        r1 = r_tenths / 10
        r2 = r1 + 0.7
        i1 = hitting_index(path, r1).index
        i2 = hitting_index(path, r2).index
        if i2 is not None:
            assert i1 is not None and i1 <= i2


def test_random_walk_label():
    path = random_walk(10, seed=3, stream=4)
    assert "seed=3" in path.label and path.n_steps == 10
