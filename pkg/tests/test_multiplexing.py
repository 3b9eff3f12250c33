"""Multiplexing-region tests: distance limits, orientation solvers, Gram checks.

The load-bearing oracle throughout is constructive: whenever the solver
claims a (D_t, D_r) point supports full multiplexing, we assemble the
actual cascaded channel at the returned orientations and require the Gram
matrix to be (numerically) a scaled identity.
"""

import math
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from irsmimo.channel import (
    build_channels,
    coupling_constants,
    irs_rx_channel,
    side_anchors,
    tx_irs_channel,
)
from irsmimo.geometry import ArrayPose, IrsLayout
from irsmimo.multiplexing import (
    boundary_cap,
    check_orthogonality,
    fmr_inner_bound,
    fmr_orientations,
    fmr_probe_orientation,
    rayleigh_distances,
    region_contains,
    round_tiny,
    single_hop_orientation,
)
from irsmimo.response import WaveConfig
from irsmimo.scenario import Scenario

TWO_PI = 2.0 * math.pi

GOLD_WAVE = WaveConfig(0.005)
GOLD_LAYOUT = IrsLayout(15, 15, 0.1, 0.1, 0.1, 0.1)
GOLD_TX = ArrayPose(5, 0.1, 10.0, 7 * math.pi / 6, math.pi / 6)
GOLD_RX = ArrayPose(5, 0.1, 10.0, math.pi / 3, 3 * math.pi / 7)

RIGHT_ANGLES = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


@lru_cache(maxsize=None)
def golden_bound():
    return fmr_inner_bound(GOLD_TX, GOLD_RX, GOLD_LAYOUT, GOLD_WAVE)


def solved_scenario(bound, d_t, d_r, region, probe=False):
    """Scenario with the reference directions placed at solver orientations."""
    solver = fmr_probe_orientation if probe else fmr_orientations
    o_t, o_r = solver(bound, d_t, d_r, region)
    return Scenario(
        wave=GOLD_WAVE,
        tx=ArrayPose(5, 0.1, d_t, GOLD_TX.azimuth, GOLD_TX.elevation, o_t.gamma, o_t.psi),
        rx=ArrayPose(5, 0.1, d_r, GOLD_RX.azimuth, GOLD_RX.elevation, o_r.gamma, o_r.psi),
        irs=GOLD_LAYOUT,
    )


def region_limits(bound, region):
    if region == "x":
        return bound.d_t_star_x, bound.d_t_rayleigh_x, bound.d_r_rayleigh_x
    return bound.d_t_star_y, bound.d_t_rayleigh_y, bound.d_r_rayleigh_y


def angle_in(value, candidates, tol=1e-9):
    return any(abs((value - c + math.pi) % TWO_PI - math.pi) < tol for c in candidates)


class TestRayleighDistances:
    def test_reference_geometry_limits(self):
        rr = rayleigh_distances(GOLD_TX, GOLD_LAYOUT, GOLD_WAVE)
        assert rr.d_rx_axis == pytest.approx(27.0416, abs=1e-3)
        assert rr.d_ry_axis == pytest.approx(29.0474, abs=1e-3)
        assert rr.x_applicable and rr.y_applicable
        assert rr.d_r == pytest.approx(rr.d_ry_axis)

    def test_normal_direction_hits_plain_product(self):
        # looking straight down the surface normal both direction amplitudes
        # are 1, so the limit is just d*S*Q/lambda = 30 m here
        pose = ArrayPose(5, 0.1, 10.0, 1.0, 0.0)
        rr = rayleigh_distances(pose, GOLD_LAYOUT, GOLD_WAVE)
        assert rr.d_rx_axis == pytest.approx(30.0, rel=1e-12)
        assert rr.d_ry_axis == pytest.approx(30.0, rel=1e-12)

    @given(factor=st.floats(0.25, 4.0))
    def test_limits_scale_linearly(self, factor):
        base = rayleigh_distances(GOLD_TX, GOLD_LAYOUT, GOLD_WAVE)
        wider = ArrayPose(5, GOLD_TX.spacing * factor, 10.0, GOLD_TX.azimuth, GOLD_TX.elevation)
        assert rayleigh_distances(wider, GOLD_LAYOUT, GOLD_WAVE).d_rx_axis == pytest.approx(
            factor * base.d_rx_axis, rel=1e-12
        )
        shorter = WaveConfig(GOLD_WAVE.wavelength / factor)
        assert rayleigh_distances(GOLD_TX, GOLD_LAYOUT, shorter).d_ry_axis == pytest.approx(
            factor * base.d_ry_axis, rel=1e-12
        )

    def test_outcounted_axis_clears_overall_limit(self):
        pose = ArrayPose(7, 0.1, 1.0, 0.0, 0.3)
        rr = rayleigh_distances(pose, IrsLayout(5, 15, 0.1, 0.1, 0.1, 0.1), GOLD_WAVE)
        assert not rr.x_applicable
        assert rr.y_applicable
        assert rr.d_r is None
        # the per-axis figures themselves are still reported
        assert rr.d_rx_axis > 0.0


class TestSingleHopOrientation:
    """One array against the surface: orthogonal equal-gain streams."""

    def test_at_the_limit_opens_fully(self):
        rr = rayleigh_distances(GOLD_TX, GOLD_LAYOUT, GOLD_WAVE)
        pose = ArrayPose(5, 0.1, rr.d_rx_axis, GOLD_TX.azimuth, GOLD_TX.elevation)
        o = single_hop_orientation(pose, GOLD_LAYOUT, GOLD_WAVE, "x")
        assert o.psi == pytest.approx(math.pi / 2, abs=1e-12)
        assert o.branch == "x-default"
        # the azimuth lands on the x anchor of this direction
        _, gbar_x, _, _ = side_anchors(GOLD_TX)
        assert o.gamma == pytest.approx(gbar_x % TWO_PI, abs=1e-12)
        cc_pose = ArrayPose(5, 0.1, rr.d_rx_axis, GOLD_TX.azimuth, GOLD_TX.elevation, o.gamma, o.psi)
        scn = Scenario(wave=GOLD_WAVE, tx=cc_pose, rx=GOLD_RX, irs=GOLD_LAYOUT)
        cc = coupling_constants(scn)
        assert abs(cc.c_tx) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("frac", [1.0, 0.5, 0.1])
    def test_eigenvalues_are_flat(self, frac):
        rr = rayleigh_distances(GOLD_TX, GOLD_LAYOUT, GOLD_WAVE)
        d = frac * rr.d_rx_axis
        o = single_hop_orientation(
            ArrayPose(5, 0.1, d, GOLD_TX.azimuth, GOLD_TX.elevation), GOLD_LAYOUT, GOLD_WAVE, "x"
        )
        assert math.sin(o.psi) == pytest.approx(frac, rel=1e-12)
        posed = ArrayPose(5, 0.1, d, GOLD_TX.azimuth, GOLD_TX.elevation, o.gamma, o.psi)
        scn = Scenario(wave=GOLD_WAVE, tx=posed, rx=GOLD_RX, irs=GOLD_LAYOUT)
        h_t = tx_irs_channel(scn)
        ev = np.linalg.eigvalsh(h_t.conj().T @ h_t / GOLD_LAYOUT.n_elements)
        assert ev.max() / ev.min() < 1.0 + 1e-6
        assert check_orthogonality(h_t, "columns", float(GOLD_LAYOUT.n_elements)).passed

    def test_receive_side_rows(self):
        base = ArrayPose(5, 0.1, 10.0, GOLD_RX.azimuth, GOLD_RX.elevation)
        rr = rayleigh_distances(base, GOLD_LAYOUT, GOLD_WAVE)
        d = 0.8 * rr.d_ry_axis
        o = single_hop_orientation(
            ArrayPose(5, 0.1, d, base.azimuth, base.elevation), GOLD_LAYOUT, GOLD_WAVE, "y"
        )
        assert o.branch == "y-default"
        rx = ArrayPose(5, 0.1, d, base.azimuth, base.elevation, o.gamma, o.psi)
        scn = Scenario(wave=GOLD_WAVE, tx=GOLD_TX, rx=rx, irs=GOLD_LAYOUT)
        assert check_orthogonality(irs_rx_channel(scn), "rows", float(GOLD_LAYOUT.n_elements)).passed

    def test_rejects_distance_beyond_limit(self):
        pose = ArrayPose(5, 0.1, 40.0, GOLD_TX.azimuth, GOLD_TX.elevation)
        with pytest.raises(ValueError, match="exceeds the axis limit"):
            single_hop_orientation(pose, GOLD_LAYOUT, GOLD_WAVE, "x")

    def test_rejects_outcounted_surface(self):
        pose = ArrayPose(7, 0.1, 1.0, 0.0, 0.3)
        with pytest.raises(ValueError, match="5 elements for 7 antennas"):
            single_hop_orientation(pose, IrsLayout(5, 15, 0.1, 0.1, 0.1, 0.1), GOLD_WAVE, "x")

    def test_rejects_unknown_axis(self):
        with pytest.raises(ValueError, match="axis must be"):
            single_hop_orientation(GOLD_TX, GOLD_LAYOUT, GOLD_WAVE, "z")


class TestInnerBound:
    def test_reference_geometry_apexes(self):
        b = golden_bound()
        # regression figures cross-validated by the Gram checks below
        assert b.d_t_star_x == pytest.approx(25.265587, abs=1e-4)
        assert b.d_t_star_y == pytest.approx(16.672515, abs=1e-4)
        assert b.d_t_star_x <= b.d_t_rayleigh_x
        assert b.d_t_star_y <= b.d_t_rayleigh_y
        assert b.d_t_star_x == pytest.approx(
            b.d_t_rayleigh_x * abs(math.cos(b.gamma_star_x - b.gbar_tx)), rel=1e-12
        )
        assert b.d_r_star_y == pytest.approx(
            b.d_r_rayleigh_y * abs(math.cos(b.gamma_star_ry - b.gbar_ry)), rel=1e-12
        )

    @pytest.mark.parametrize("axis", ["x", "y"])
    def test_boundary_endpoint_identities(self, axis):
        b = golden_bound()
        d_star, d_ray_t, d_ray_r = region_limits(b, axis)
        d_star_r = b.d_r_star_x if axis == "x" else b.d_r_star_y
        assert boundary_cap(b, axis, d_star) == pytest.approx(d_ray_r, rel=1e-9)
        assert boundary_cap(b, axis, d_ray_t) == pytest.approx(d_star_r, rel=1e-9)

    def test_corner_tuples_match_limits(self):
        b = golden_bound()
        assert b.r_rx == (b.d_t_star_x, b.d_r_rayleigh_x)
        assert b.r_tx == (b.d_t_rayleigh_x, b.d_r_star_x)
        assert b.r_ry == (b.d_t_star_y, b.d_r_rayleigh_y)
        assert b.r_ty == (b.d_t_rayleigh_y, b.d_r_star_y)

    def test_sampled_curves_span_the_lobe(self):
        b = fmr_inner_bound(GOLD_TX, GOLD_RX, GOLD_LAYOUT, GOLD_WAVE, samples=17)
        assert b.boundary_x.shape == (17, 2)
        assert b.boundary_x[0, 0] == pytest.approx(b.d_t_star_x, rel=1e-12)
        assert b.boundary_x[-1, 0] == pytest.approx(b.d_t_rayleigh_x, rel=1e-12)
        assert b.boundary_x[0, 1] == pytest.approx(b.d_r_rayleigh_x, rel=1e-9)
        assert b.boundary_x[-1, 1] == pytest.approx(b.d_r_star_x, rel=1e-9)
        assert b.boundary_y[0, 1] == pytest.approx(b.d_r_rayleigh_y, rel=1e-9)

    def test_right_angle_directions_make_rectangles(self):
        # with both azimuths on a quadrant boundary the apex reaches the
        # axis limit exactly, on all four distance limits
        for w_t in RIGHT_ANGLES:
            for w_r in RIGHT_ANGLES:
                b = fmr_inner_bound(
                    ArrayPose(5, 0.1, 10.0, w_t, math.pi / 6),
                    ArrayPose(5, 0.1, 10.0, w_r, 3 * math.pi / 7),
                    GOLD_LAYOUT,
                    GOLD_WAVE,
                    samples=8,
                )
                assert b.d_t_star_x == pytest.approx(b.d_t_rayleigh_x, rel=1e-9)
                assert b.d_t_star_y == pytest.approx(b.d_t_rayleigh_y, rel=1e-9)
                assert b.d_r_star_x == pytest.approx(b.d_r_rayleigh_x, rel=1e-9)
                assert b.d_r_star_y == pytest.approx(b.d_r_rayleigh_y, rel=1e-9)

    def test_x_region_can_swallow_y_region(self):
        # both arrays sideways on: the x rectangle is the full Rayleigh
        # rectangle and the y region fits inside it
        b = fmr_inner_bound(
            ArrayPose(5, 0.1, 10.0, 3 * math.pi / 2, math.pi / 6),
            ArrayPose(5, 0.1, 10.0, math.pi / 2, 3 * math.pi / 7),
            GOLD_LAYOUT,
            GOLD_WAVE,
            samples=8,
        )
        assert b.d_t_star_x == pytest.approx(b.d_t_rayleigh_x, rel=1e-12)
        assert b.d_r_star_x == pytest.approx(b.d_r_rayleigh_x, rel=1e-12)
        assert b.d_t_rayleigh_y < b.d_t_rayleigh_x
        assert b.d_r_rayleigh_y < b.d_r_rayleigh_x
        assert region_contains(b, b.d_t_rayleigh_y, b.d_r_rayleigh_y, "x")

    def test_precondition_names_the_failing_inequality(self):
        squeezed = IrsLayout(11, 15, 0.1, 0.1, 0.1, 0.1)
        with pytest.raises(ValueError, match=r"N_t \+ N_r - 2 < 2\*Q_x"):
            fmr_inner_bound(
                ArrayPose(13, 0.1, 10.0, 0.0, 0.3), ArrayPose(11, 0.1, 10.0, 0.0, 0.3),
                squeezed, GOLD_WAVE,
            )
        squeezed_y = IrsLayout(15, 11, 0.1, 0.1, 0.1, 0.1)
        with pytest.raises(ValueError, match=r"N_t \+ N_r - 2 < 2\*Q_y"):
            fmr_inner_bound(
                ArrayPose(13, 0.1, 10.0, 0.0, 0.3), ArrayPose(11, 0.1, 10.0, 0.0, 0.3),
                squeezed_y, GOLD_WAVE,
            )


class TestRegionMembership:
    def test_rectangle_and_lobe_points(self):
        b = golden_bound()
        assert region_contains(b, 0.5 * b.d_t_star_x, 0.5 * b.d_r_rayleigh_x, "x")
        mid = 0.5 * (b.d_t_star_x + b.d_t_rayleigh_x)
        assert region_contains(b, mid, 0.9 * boundary_cap(b, "x", mid), "x")
        assert not region_contains(b, mid, 1.01 * boundary_cap(b, "x", mid), "x")
        assert not region_contains(b, 1.01 * b.d_t_rayleigh_x, 1.0, "x")
        assert not region_contains(b, 0.5 * b.d_t_star_x, 1.01 * b.d_r_rayleigh_x, "x")
        assert not region_contains(b, -1.0, 5.0, "x")
        assert not region_contains(b, 5.0, 0.0, "y")

    @given(
        frac_t=st.floats(0.02, 0.999),
        frac_r=st.floats(0.02, 0.98),
        axis=st.sampled_from(["x", "y"]),
    )
    def test_membership_is_consistent_with_the_cap(self, frac_t, frac_r, axis):
        b = golden_bound()
        _, d_ray_t, _ = region_limits(b, axis)
        d_t = frac_t * d_ray_t
        cap = boundary_cap(b, axis, d_t) if d_t > region_limits(b, axis)[0] else region_limits(b, axis)[2]
        assert region_contains(b, d_t, frac_r * cap, axis)
        assert not region_contains(b, d_t, cap * 1.02 / max(frac_r, 0.5), axis)


class TestOrientationSolver:
    def test_sideways_corner_lies_flat_along_x(self):
        # both azimuths sideways on: at the (limit, limit) corner both
        # arrays end up parallel to the surface's first axis
        b = fmr_inner_bound(
            ArrayPose(5, 0.1, 10.0, 3 * math.pi / 2, math.pi / 6),
            ArrayPose(5, 0.1, 10.0, math.pi / 2, 3 * math.pi / 7),
            GOLD_LAYOUT, GOLD_WAVE, samples=8,
        )
        o_t, o_r = fmr_orientations(b, b.d_t_rayleigh_x, b.d_r_rayleigh_x, "x")
        assert o_t.psi == pytest.approx(math.pi / 2, abs=1e-9)
        assert o_r.psi == pytest.approx(math.pi / 2, abs=1e-9)
        assert angle_in(o_t.gamma, (0.0, math.pi))
        assert angle_in(o_r.gamma, (0.0, math.pi))

    def test_facing_corner_splits_the_orientations(self):
        # transmit azimuth 0, receive azimuth pi/2.  At the corner the tilt
        # is fully open on both sides, so unit coupling on the first surface
        # axis pins each azimuth to its anchor: pi/2 for the transmitter
        # (axis in the x-z plane, square to the boresight), 0 for the
        # receiver (axis along x).
        b = fmr_inner_bound(
            ArrayPose(5, 0.1, 10.0, 0.0, math.pi / 6),
            ArrayPose(5, 0.1, 10.0, math.pi / 2, 3 * math.pi / 7),
            GOLD_LAYOUT, GOLD_WAVE, samples=8,
        )
        o_t, o_r = fmr_orientations(b, b.d_t_rayleigh_x, b.d_r_rayleigh_x, "x")
        assert o_t.psi == pytest.approx(math.pi / 2, abs=1e-9)
        assert o_r.psi == pytest.approx(math.pi / 2, abs=1e-9)
        assert angle_in(o_t.gamma, (math.pi / 2, 3 * math.pi / 2))
        assert angle_in(o_r.gamma, (0.0, math.pi))
        scn = Scenario(
            wave=GOLD_WAVE,
            tx=ArrayPose(5, 0.1, b.d_t_rayleigh_x, 0.0, math.pi / 6, o_t.gamma, o_t.psi),
            rx=ArrayPose(5, 0.1, b.d_r_rayleigh_x, math.pi / 2, 3 * math.pi / 7, o_r.gamma, o_r.psi),
            irs=GOLD_LAYOUT,
        )
        cc = coupling_constants(scn)
        assert abs(cc.c_tx) == pytest.approx(1.0, abs=1e-9)
        assert abs(cc.c_rx) == pytest.approx(1.0, abs=1e-9)

    def test_rectangle_branch_fields(self):
        b = golden_bound()
        d_t, d_r = 0.6 * b.d_t_star_x, 0.7 * b.d_r_rayleigh_x
        o_t, o_r = fmr_orientations(b, d_t, d_r, "x")
        assert o_t.branch == "x-rect" and o_r.branch == "x-rect"
        assert math.sin(o_t.psi) == pytest.approx(d_t / b.d_t_star_x, rel=1e-12)
        assert math.sin(o_r.psi) == pytest.approx(d_r / b.d_r_rayleigh_x, rel=1e-12)
        assert angle_in(o_t.gamma, (b.gamma_star_x % math.pi, b.gamma_star_x % math.pi + math.pi))
        assert angle_in(o_r.gamma, (b.gbar_rx % math.pi, b.gbar_rx % math.pi + math.pi))

    def test_lobe_branch_fields(self):
        b = golden_bound()
        d_t = 0.5 * (b.d_t_star_y + b.d_t_rayleigh_y)
        cap = boundary_cap(b, "y", d_t)
        d_r = 0.8 * cap
        o_t, o_r = fmr_orientations(b, d_t, d_r, "y")
        assert o_t.branch == "y-lobe"
        assert o_t.psi == pytest.approx(math.pi / 2, abs=1e-12)
        ratio = math.sqrt((b.d_t_rayleigh_y / d_t) ** 2 - 1.0)
        assert abs(math.tan(o_t.gamma - b.gbar_ty)) == pytest.approx(ratio, rel=1e-9)
        assert math.sin(o_r.psi) * cap == pytest.approx(d_r, rel=1e-9)

    def test_couplings_lock_at_sampled_points(self, rng):
        # the defining conditions at any feasible point: unit coupling on
        # the region axis at both ends, and matched magnitude on the other
        for i in range(10):
            region = "x" if i % 2 == 0 else "y"
            b = golden_bound()
            d_star, d_ray_t, d_ray_r = region_limits(b, region)
            if i % 4 < 2:
                d_t = float(rng.uniform(0.3, 1.0)) * d_star
                d_r = float(rng.uniform(0.3, 1.0)) * d_ray_r
            else:
                d_t = d_star + float(rng.uniform(0.05, 0.95)) * (d_ray_t - d_star)
                d_r = float(rng.uniform(0.3, 0.999)) * boundary_cap(b, region, d_t)
            cc = coupling_constants(solved_scenario(b, d_t, d_r, region))
            if region == "x":
                main_t, main_r, side_t, side_r = cc.c_tx, cc.c_rx, cc.c_ty, cc.c_ry
            else:
                main_t, main_r, side_t, side_r = cc.c_ty, cc.c_ry, cc.c_tx, cc.c_rx
            assert abs(main_t) == pytest.approx(1.0, abs=1e-9)
            assert abs(main_r) == pytest.approx(1.0, abs=1e-9)
            assert abs(side_t) == pytest.approx(abs(side_r), abs=1e-9)
            if abs(side_t) > 1e-9:
                assert np.sign(main_t * main_r) == np.sign(side_t * side_r)

    def test_probe_matches_solver_inside_the_rectangle(self):
        b = golden_bound()
        d_t, d_r = 0.4 * b.d_t_star_x, 0.6 * b.d_r_rayleigh_x
        o = fmr_orientations(b, d_t, d_r, "x")
        p = fmr_probe_orientation(b, d_t, d_r, "x")
        assert p[0].branch == "x-probe"
        assert (p[0].psi, p[0].gamma) == pytest.approx((o[0].psi, o[0].gamma))
        assert (p[1].psi, p[1].gamma) == pytest.approx((o[1].psi, o[1].gamma))

    def test_rejections(self):
        b = golden_bound()
        with pytest.raises(ValueError, match="rectangle cap"):
            fmr_orientations(b, 0.5 * b.d_t_star_x, 1.01 * b.d_r_rayleigh_x, "x")
        mid = 0.5 * (b.d_t_star_x + b.d_t_rayleigh_x)
        with pytest.raises(ValueError, match="boundary cap"):
            fmr_orientations(b, mid, 1.01 * boundary_cap(b, "x", mid), "x")
        with pytest.raises(ValueError, match="axis limit"):
            fmr_orientations(b, 1.01 * b.d_t_rayleigh_x, 1.0, "x")
        with pytest.raises(ValueError, match="region must be"):
            fmr_orientations(b, 1.0, 1.0, "diag")
        with pytest.raises(ValueError, match="positive"):
            fmr_orientations(b, -1.0, 1.0, "x")


class TestGramCheck:
    def test_trivial_single_entry(self):
        rep = check_orthogonality(np.array([[1.0 + 0j]]), "columns", 1.0)
        assert rep.passed
        assert rep.max_offdiag == 0.0
        assert rep.diag_values == pytest.approx([1.0])

    def test_crafted_failure_modes(self):
        good = np.diag([1.0 + 0j, 1.0])
        assert check_orthogonality(good, "columns", 1.0).passed
        assert not check_orthogonality(good, "columns", 1.1).passed  # diagonals off target
        leaky = np.array([[1.0, 1e-5], [0.0, 1.0]], dtype=complex)
        assert not check_orthogonality(leaky, "columns", 1.0).passed
        assert check_orthogonality(leaky, "columns", 1.0, tol_off=1e-2, tol_diag=1e-3).passed

    def test_full_link_at_sampled_feasible_points(self, rng):
        b = golden_bound()
        for i in range(10):
            region = "x" if i % 2 == 0 else "y"
            d_star, d_ray_t, d_ray_r = region_limits(b, region)
            if i % 4 < 2:
                d_t = float(rng.uniform(0.3, 1.0)) * d_star
                d_r = float(rng.uniform(0.3, 1.0)) * d_ray_r
            else:
                d_t = d_star + float(rng.uniform(0.05, 0.95)) * (d_ray_t - d_star)
                d_r = float(rng.uniform(0.3, 0.999)) * boundary_cap(b, region, d_t)
            chans = build_channels(solved_scenario(b, d_t, d_r, region))
            target = chans.eta0**2 * GOLD_LAYOUT.n_elements**2
            assert check_orthogonality(chans.h, "columns", target).passed
            assert check_orthogonality(chans.h, "rows", target).passed

    def test_focused_link_is_a_scaled_permutation(self):
        b = golden_bound()
        chans = build_channels(solved_scenario(b, 0.5 * b.d_t_star_x, 0.5 * b.d_r_rayleigh_x, "x"))
        mag = np.abs(chans.h) / (chans.eta0 * GOLD_LAYOUT.n_elements)
        big = mag > 0.5
        assert np.all(big.sum(axis=0) == 1)
        assert np.all(big.sum(axis=1) == 1)
        assert mag[big] == pytest.approx(np.ones(5), rel=1e-9)
        assert np.all(mag[~big] < 1e-6)

    def test_point_beyond_both_regions_fails(self):
        b = golden_bound()
        d_t = 1.05 * b.d_t_rayleigh_x
        d_r = 0.5 * b.d_r_rayleigh_x
        assert not region_contains(b, d_t, d_r, "x")
        assert not region_contains(b, d_t, d_r, "y")
        chans = build_channels(solved_scenario(b, d_t, d_r, "x", probe=True))
        target = chans.eta0**2 * GOLD_LAYOUT.n_elements**2
        assert not check_orthogonality(chans.h, "columns", target).passed

    def test_input_validation(self):
        with pytest.raises(ValueError, match="nonempty"):
            check_orthogonality(np.zeros((0, 3), dtype=complex), "columns", 1.0)
        with pytest.raises(ValueError, match="mode must be"):
            check_orthogonality(np.eye(2, dtype=complex), "diagonal", 1.0)


def test_round_tiny_snaps_only_near_zero():
    assert round_tiny(3e-13) == 0.0
    assert round_tiny(-3e-13) == 0.0
    assert round_tiny(2e-12) == 2e-12
    assert round_tiny(-1.0) == -1.0
