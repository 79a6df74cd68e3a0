import math

import pytest

from xilab import (LatticePoint, MultiplierSet, ValidationError,
                   log_hausdorff_distance, parse_gaussian, parse_set_spec)


class TestParseGaussian:
    @pytest.mark.parametrize("text,expect", [
        ("5", (5, 0)),
        ("-1", (-1, 0)),
        ("4+3i", (4, 3)),
        ("4-3i", (4, -3)),
        ("5i", (0, 5)),
        ("-5i", (0, -5)),
        ("i", (0, 1)),
        ("-i", (0, -1)),
        ("0+1i", (0, 1)),
        (" 2 + 7i ", (2, 7)),
    ])
    def test_valid(self, text, expect):
        assert parse_gaussian(text) == LatticePoint(*expect)

    @pytest.mark.parametrize("text", ["", "abc", "1+2", "2.5", "i5", "++1"])
    def test_invalid(self, text):
        with pytest.raises(ValidationError):
            parse_gaussian(text)


class TestValidation:
    def test_zero_not_allowed(self):
        with pytest.raises(ValidationError):
            MultiplierSet.from_points(0)

    def test_empty_not_allowed(self):
        with pytest.raises(ValidationError):
            MultiplierSet(kind="points", points=())

    def test_wedge_angle_domain(self):
        MultiplierSet.wedge(0.0)
        MultiplierSet.wedge(6.28)
        with pytest.raises(ValidationError):
            MultiplierSet.wedge(2 * math.pi)
        with pytest.raises(ValidationError):
            MultiplierSet.wedge(-0.1)

    def test_points_canonicalized(self):
        a = MultiplierSet.from_points("1", "-1", "1")
        assert a.points == (LatticePoint(-1, 0), LatticePoint(1, 0))


class TestTransforms:
    def test_conjugate(self):
        a = MultiplierSet.from_points("1", "i")
        assert a.conjugated().points == (LatticePoint(0, -1), LatticePoint(1, 0))

    def test_fourfold_union_of_one(self):
        a = MultiplierSet.from_points("1").nfold_union(4)
        assert a.points == (LatticePoint(-1, 0), LatticePoint(0, -1),
                            LatticePoint(0, 1), LatticePoint(1, 0))

    def test_power_two(self):
        a = MultiplierSet.from_points("1", "i").power(2)
        assert a.points == (LatticePoint(-1, 0), LatticePoint(1, 0))

    def test_threefold_union_rejected(self):
        with pytest.raises(ValidationError, match="lattice"):
            MultiplierSet.from_points("1").nfold_union(3)

    def test_scale(self):
        a = MultiplierSet.from_points("1", "i").scaled(LatticePoint(0, 1))
        assert a.points == (LatticePoint(-1, 0), LatticePoint(0, 1))

    def test_scale_by_zero_rejected(self):
        with pytest.raises(ValidationError):
            MultiplierSet.from_points("1").scaled(LatticePoint(0, 0))

    def test_transforms_require_finite(self):
        with pytest.raises(ValidationError):
            MultiplierSet.wedge(1.0).conjugated()


class TestLogHausdorff:
    def test_identity(self):
        a = MultiplierSet.from_points("1", "i")
        assert log_hausdorff_distance(a, a) == 0.0

    def test_single_points(self):
        d = log_hausdorff_distance(MultiplierSet.from_points("1"),
                                   MultiplierSet.from_points("2"))
        assert d == pytest.approx(math.log(2), abs=1e-12)

    def test_pair_sets(self):
        d = log_hausdorff_distance(MultiplierSet.from_points("1", "i"),
                                   MultiplierSet.from_points("2", "i"))
        # enumerate all pairings: the 1 <-> 2 match dominates at log 2
        assert d == pytest.approx(math.log(2), abs=1e-12)

    def test_symmetry_and_triangle(self):
        a = MultiplierSet.from_points("1", "2i")
        b = MultiplierSet.from_points("3", "-i")
        c = MultiplierSet.from_points("1", "1+1i")
        dab = log_hausdorff_distance(a, b)
        assert dab == log_hausdorff_distance(b, a)
        assert dab <= (log_hausdorff_distance(a, c)
                       + log_hausdorff_distance(c, b) + 1e-12)

    def test_scale_invariance(self):
        a = MultiplierSet.from_points("1", "i")
        b = MultiplierSet.from_points("2", "1+1i")
        lam = LatticePoint(3, 4)
        assert log_hausdorff_distance(a.scaled(lam), b.scaled(lam)) == pytest.approx(
            log_hausdorff_distance(a, b), rel=1e-12)

    def test_requires_finite(self):
        with pytest.raises(ValidationError):
            log_hausdorff_distance(MultiplierSet.wedge(1.0),
                                   MultiplierSet.from_points("1"))


class TestSpecLanguage:
    @pytest.mark.parametrize("spec", [
        "points:1+0i,0+1i",
        "points:5,4+3i,5i",
        "points:1,-1",
        "wedge:alpha=1.5708",
        "arc:alpha=0.7854,res=256",
    ])
    def test_round_trip(self, spec):
        ms = parse_set_spec(spec)
        again = parse_set_spec(ms.descriptor())
        assert again == ms

    def test_bad_kind(self):
        with pytest.raises(ValidationError):
            parse_set_spec("blob:1,2")

    def test_missing_alpha(self):
        with pytest.raises(ValidationError):
            parse_set_spec("wedge:res=2")

    def test_zero_rejected_via_spec(self):
        with pytest.raises(ValidationError):
            parse_set_spec("points:0")

    def test_arc_fields(self):
        arc = parse_set_spec("arc:alpha=0.7854,res=128")
        assert arc.kind == "arc" and arc.arc_resolution == 128
        assert arc.alpha == pytest.approx(0.7854)
