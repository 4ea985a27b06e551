import math

import numpy as np
import pytest

from qcskew.errors import DomainError, NonInjectiveImageError
from qcskew.geometry import Disk, equilateral_from
from qcskew.linear import linear_skew, K_of_sigma
from qcskew.maps import PlanarMap, RADIAL_CENTER, WholePlane, identity_map, make_affine, make_radial_stretch, make_square_map
from qcskew.metrics import (
    SamplingPlan,
    dilatation_ratio,
    estimate_H,
    estimate_kf,
    estimate_skew_at,
    estimate_skew_sup,
    image_skew,
)

UNIT_DISK = Disk(0j, 1.0)


class TestSamplingPlan:
    def test_defaults_valid(self):
        plan = SamplingPlan()
        assert plan.scale_ladder[0] == 0.5 and len(plan.scale_ladder) == 10

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"triangle_count": 0},
            {"scale_ladder": ()},
            {"scale_ladder": (0.5, 0.5)},
            {"scale_ladder": (0.25, 0.5)},
            {"scale_ladder": (0.5, -0.1)},
        ],
    )
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(ValueError):
            SamplingPlan(**kwargs)


class TestImageSkew:
    def test_identity_equilateral(self):
        t = equilateral_from(0.2 + 0.1j, 0.5, 1.0)
        assert image_skew(identity_map(), t) == pytest.approx(1.0, abs=1e-12)

    def test_affine_bounded_by_extremal_value(self, rng):
        pm = make_affine(0.5)
        bound = linear_skew(0.5)
        for _ in range(200):
            t = equilateral_from(complex(*rng.uniform(-2, 2, 2)), rng.uniform(0.01, 2), rng.uniform(0, 7))
            val = image_skew(pm, t)
            assert 1.0 <= val <= bound * (1.0 + 1e-12)

    def test_affine_orientation_sweep_hits_extremal_value(self):
        # brute-force orientation sweep must reproduce the closed-form max
        pm = make_affine(0.5)
        vals = [image_skew(pm, equilateral_from(0j, 1.0, th))
                for th in np.linspace(0, 2 * math.pi / 3, 512, endpoint=False)]
        assert max(vals) == pytest.approx(linear_skew(0.5), rel=1e-4)

    def test_degenerate_image(self):
        const = PlanarMap("const", lambda z: np.zeros_like(z), WholePlane())
        with pytest.raises(NonInjectiveImageError):
            image_skew(const, equilateral_from(0j, 1.0, 0.0))


class TestSkewSup:
    def test_identity(self, small_plan):
        rep = estimate_skew_sup(identity_map(), UNIT_DISK, small_plan)
        assert rep.estimate == pytest.approx(1.0, abs=1e-12)
        assert rep.estimate == max(rep.scale_values())

    def test_affine_matches_closed_form(self, small_plan):
        rep = estimate_skew_sup(make_affine(0.5), UNIT_DISK, small_plan)
        assert rep.estimate == pytest.approx(linear_skew(0.5), rel=0.02)
        assert rep.estimate <= linear_skew(0.5) * (1 + 1e-12)

    def test_deterministic(self, small_plan):
        a = estimate_skew_sup(make_affine(0.3), UNIT_DISK, small_plan)
        b = estimate_skew_sup(make_affine(0.3), UNIT_DISK, small_plan)
        assert a.to_dict() == b.to_dict()

    def test_threads_do_not_change_payload(self):
        plan = SamplingPlan(seed=9, triangle_count=3000, orientation_count=16,
                            scale_ladder=(0.3, 0.15), circle_samples=256)
        a = estimate_skew_sup(make_affine(0.4), UNIT_DISK, plan, threads=1)
        b = estimate_skew_sup(make_affine(0.4), UNIT_DISK, plan, threads=4)
        assert a.to_dict() == b.to_dict()

    def test_monotone_in_counts(self):
        base = dict(seed=5, scale_ladder=(0.4, 0.2, 0.1), circle_samples=64)
        maps = make_affine(0.45)
        est = {}
        for tc, oc in [(100, 8), (200, 8), (100, 16), (400, 32)]:
            rep = estimate_skew_sup(maps, UNIT_DISK, SamplingPlan(triangle_count=tc, orientation_count=oc, **base))
            est[(tc, oc)] = rep.estimate
        assert est[(200, 8)] >= est[(100, 8)]
        assert est[(100, 16)] >= est[(100, 8)]
        assert est[(400, 32)] >= max(est.values()) - 1e-15

    def test_square_patch_tends_conformal(self, small_plan):
        # conformal away from 0: per-scale maxima decrease toward 1
        rep = estimate_skew_sup(make_square_map(), Disk(1.2 + 0.7j, 0.35), small_plan)
        vals = rep.scale_values()
        assert all(a >= b * (1 - 1e-12) for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1.02 and vals[0] > 1.05

    def test_region_clipping_error(self, small_plan):
        sq = make_square_map()
        with pytest.raises(DomainError):
            estimate_skew_sup(sq, Disk(-3.0 + 0j, 0.2), small_plan)

    def test_witness_is_argmax(self, small_plan):
        rep = estimate_skew_sup(make_affine(0.5), UNIT_DISK, small_plan)
        a, b, c = (complex(*xy) for xy in rep.witness["vertices"])
        sides = sorted((abs(a - b), abs(b - c), abs(c - a)))
        assert sides[0] == pytest.approx(sides[2], rel=1e-9)  # equilateral input
        tri_skew = image_skew(make_affine(0.5), equilateral_from(0, 1, 0))
        assert rep.witness["value"] == rep.estimate


class TestSkewAt:
    def test_identity(self, small_plan):
        rep = estimate_skew_at(identity_map(), 0.4 - 0.2j, small_plan)
        assert rep.estimate == pytest.approx(1.0, abs=1e-12)

    def test_affine_scale_free(self, small_plan):
        rep = estimate_skew_at(make_affine(0.5), 0j, small_plan)
        assert rep.estimate == pytest.approx(linear_skew(0.5), rel=0.02)
        vals = rep.scale_values()
        spread = (max(vals) - min(vals)) / max(vals)
        assert spread < 1e-9  # linear maps cannot see the scale

    def test_square_at_one_decreases_to_conformal(self, small_plan):
        rep = estimate_skew_at(make_square_map(), 1.0 + 0.3j, small_plan)
        vals = rep.scale_values()
        assert all(a >= b * (1 - 1e-12) for a, b in zip(vals, vals[1:]))
        assert rep.estimate == min(vals) and rep.estimate < 1.03

    def test_boundary_scales_dropped(self, small_plan):
        # probe close to the square-map boundary: big radii must be dropped
        rep = estimate_skew_at(make_square_map(), 0.35 + 0.25j, small_plan)
        assert rep.dropped_scales and rep.per_scale

    def test_all_scales_dropped(self, small_plan):
        sq = make_square_map()
        with pytest.raises(DomainError):
            estimate_skew_at(sq, 2.95 + 0.75j, small_plan)


class TestDilatationRatio:
    def test_identity(self):
        assert dilatation_ratio(identity_map(), 0.2j, 0.5, 512) == pytest.approx(1.0, abs=1e-12)

    def test_affine_exact_axes(self):
        # the sample grid contains the major and minor ellipse axes, so the
        # analytic value (1+mu)/(1-mu) = 3 is hit nearly exactly
        assert dilatation_ratio(make_affine(0.5), 0j, 1.0, 4096) == pytest.approx(3.0, rel=1e-6)

    def test_radial_tends_to_k_away_from_center(self):
        pm = make_radial_stretch(2.0)
        vals = [dilatation_ratio(pm, 0.3 + 0j, r, 2048) for r in (0.1, 0.01, 0.001)]
        errs = [abs(v - 2.0) for v in vals]
        assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2

    def test_sample_count_validation(self):
        with pytest.raises(ValueError):
            dilatation_ratio(identity_map(), 0j, 0.5, 2)
        with pytest.raises(ValueError):
            dilatation_ratio(identity_map(), 0j, 0.0, 16)

    def test_non_injective(self):
        const = PlanarMap("const", lambda z: np.zeros_like(z), WholePlane())
        with pytest.raises(NonInjectiveImageError):
            dilatation_ratio(const, 0j, 0.5, 16)


class TestEstimateH:
    def test_identity(self, small_plan):
        rep = estimate_H(identity_map(), 0j, small_plan)
        assert rep.estimate == pytest.approx(1.0, abs=1e-12)

    def test_affine(self, small_plan):
        rep = estimate_H(make_affine(0.5), 0j, small_plan)
        assert rep.estimate == pytest.approx(3.0, rel=0.01)

    def test_radial_at_origin(self):
        rep = estimate_H(make_radial_stretch(2.0), 0j, SamplingPlan())
        assert rep.estimate == pytest.approx(2.0, rel=0.02)
        # ratios grow with the radius: the limsup window uses the small rungs
        vals = rep.scale_values()
        assert vals[0] > vals[-1]

    def test_estimate_equals_window_max(self, small_plan):
        rep = estimate_H(make_radial_stretch(3.0), 0j, small_plan)
        window = rep.samples["limsup_window"]
        window_vals = [v for (r, v) in rep.per_scale if r in window]
        assert rep.estimate == max(window_vals)

    def test_consistency_with_closed_form(self):
        # ties the sampled estimators to the conversion formulas: for the
        # linear zoo, H == K_of_sigma(skew sup)
        plan = SamplingPlan(seed=2, triangle_count=2000, orientation_count=48,
                            scale_ladder=(0.5, 0.25), circle_samples=2048)
        for mu in (0.2, 0.5):
            h = estimate_H(make_affine(mu), 0j, plan).estimate
            tau = estimate_skew_sup(make_affine(mu), UNIT_DISK, plan).estimate
            assert K_of_sigma(tau) == pytest.approx(h, rel=0.02)


class TestEstimateKf:
    def test_identity(self, small_plan):
        rep = estimate_kf(identity_map(), -0.3 + 1.1j, small_plan)
        assert rep.estimate == pytest.approx(4.0 / math.pi, rel=5e-3)

    def test_affine_ellipse_value(self, small_plan):
        mu = 0.5
        rep = estimate_kf(make_affine(mu), 0j, small_plan)
        assert rep.estimate == pytest.approx(4 * (1 + mu) / (math.pi * (1 - mu)), rel=0.01)

    def test_radial_at_its_center(self, small_plan):
        rep = estimate_kf(make_radial_stretch(2.0), RADIAL_CENTER, small_plan)
        assert rep.estimate == pytest.approx(4.0 / math.pi, rel=5e-3)

    def test_disk_minimizes_over_zoo(self, small_plan):
        floor = 4.0 / math.pi
        cases = [
            (identity_map(), 0.1 + 0.1j),
            (make_affine(0.25), 0j),
            (make_affine(0.5), 0.3j),
            (make_radial_stretch(2.0), 0j),
            (make_square_map(), 1.1 + 0.6j),
        ]
        for pm, z in cases:
            rep = estimate_kf(pm, z, small_plan)
            assert rep.estimate >= floor * (1 - 1e-9)

    def test_estimate_is_ladder_min(self, small_plan):
        rep = estimate_kf(make_square_map(), 1.1 + 0.6j, small_plan)
        assert rep.estimate == min(rep.scale_values())
        assert not rep.flags


class TestEstimatesAtLeastOne:
    def test_zoo_lower_bounds(self, small_plan):
        for pm in (identity_map(), make_affine(0.4), make_radial_stretch(1.5)):
            assert estimate_skew_sup(pm, UNIT_DISK, small_plan).estimate >= 1.0
            assert estimate_H(pm, 0j, small_plan).estimate >= 1.0


class TestThreadResolution:
    def test_env_fallback(self, monkeypatch):
        from qcskew.metrics import resolve_threads

        monkeypatch.setenv("QCSKEW_THREADS", "2")
        assert resolve_threads(None) == 2
        assert resolve_threads(8) == 8  # explicit argument wins
        monkeypatch.delenv("QCSKEW_THREADS")
        assert resolve_threads(None) >= 1
