import math

import pytest

import cadexec._kernel.cadquery as cq
from cadexec._kernel.cadquery import KernelLimitation
import helpers as h


def build(script_fn):
    return script_fn().val()


class TestPrisms:
    def test_circle_prism_volume(self):
        wp = cq.Workplane("XY").moveTo(0, 0).circle(0.5).extrude(1.0)
        solid = wp.val()
        assert h.is_watertight(solid)
        assert h.signed_volume(solid) == pytest.approx(math.pi * 0.25, rel=5e-3)

    def test_rect_prism_exact(self):
        wp = (
            cq.Workplane("XY")
            .moveTo(0, 0)
            .lineTo(2, 0)
            .lineTo(2, 1)
            .lineTo(0, 1)
            .close()
            .extrude(0.5)
        )
        solid = wp.val()
        assert h.is_watertight(solid)
        assert h.signed_volume(solid) == pytest.approx(1.0, abs=1e-12)

    def test_negative_distance_extrudes_down(self):
        wp = cq.Workplane("XY").moveTo(0, 0).circle(0.5).extrude(-1.0)
        solid = wp.val()
        zs = [v[2] for v in solid.vertices]
        assert min(zs) == pytest.approx(-1.0)
        assert max(zs) == pytest.approx(0.0)
        assert h.signed_volume(solid) > 0

    def test_both_doubles_span(self):
        wp = cq.Workplane("XY").moveTo(0, 0).circle(0.5).extrude(0.4, both=True)
        zs = [v[2] for v in wp.val().vertices]
        assert min(zs) == pytest.approx(-0.4)
        assert max(zs) == pytest.approx(0.4)

    def test_plate_with_hole_volume(self):
        wp = (
            cq.Workplane("XY")
            .moveTo(0, 0)
            .lineTo(2, 0)
            .lineTo(2, 1)
            .lineTo(0, 1)
            .close()
            .moveTo(1.0, 0.5)
            .circle(0.3)
            .extrude(0.25)
        )
        solid = wp.val()
        assert h.is_watertight(solid)
        expected = (2.0 * 1.0 - math.pi * 0.09) * 0.25
        assert h.signed_volume(solid) == pytest.approx(expected, rel=5e-3)

    def test_three_point_arc_wedge(self):
        wp = (
            cq.Workplane("XY")
            .moveTo(0, 0)
            .lineTo(1, 0)
            .threePointArc((math.sqrt(2) / 2, math.sqrt(2) / 2), (0, 1))
            .lineTo(0, 0)
            .close()
            .extrude(1.0)
        )
        solid = wp.val()
        assert h.is_watertight(solid)
        assert h.signed_volume(solid) == pytest.approx(math.pi / 4.0, rel=5e-3)

    def test_tilted_plane_preserves_volume(self):
        plane = cq.Plane(origin=(1, 2, 3), xDir=(0.6, 0.8, 0.0), normal=(0, 0, 1))
        wp = cq.Workplane(plane).moveTo(0, 0).circle(0.5).extrude(1.0)
        assert h.signed_volume(wp.val()) == pytest.approx(math.pi * 0.25, rel=5e-3)

    def test_two_disjoint_outers_in_one_sketch(self):
        wp = (
            cq.Workplane("XY")
            .moveTo(0, 0)
            .circle(0.25)
            .moveTo(2, 0)
            .circle(0.25)
            .extrude(1.0)
        )
        solid = wp.val()
        assert h.is_watertight(solid)
        # inscribed-polygon deficit grows at small radius; 1% headroom
        assert h.signed_volume(solid) == pytest.approx(2 * math.pi * 0.0625, rel=1e-2)


class TestBooleans:
    def _cyl(self, cx):
        return cq.Workplane("XY").moveTo(cx, 0).circle(0.4).extrude(1.0)

    def test_disjoint_union(self):
        merged = self._cyl(0.0).union(self._cyl(3.0))
        solid = merged.val()
        assert h.is_watertight(solid)
        assert h.signed_volume(solid) == pytest.approx(2 * math.pi * 0.16, rel=5e-3)

    def test_overlapping_union_rejected(self):
        with pytest.raises(KernelLimitation):
            self._cyl(0.0).union(self._cyl(0.2))

    def test_cut_rejected(self):
        with pytest.raises(KernelLimitation):
            self._cyl(0.0).cut(self._cyl(3.0))

    def test_intersect_rejected(self):
        with pytest.raises(KernelLimitation):
            self._cyl(0.0).intersect(self._cyl(3.0))


class TestDrawingErrors:
    def test_move_mid_wire_rejected(self):
        with pytest.raises(KernelLimitation):
            cq.Workplane("XY").moveTo(0, 0).lineTo(1, 0).moveTo(2, 2)

    def test_line_before_move(self):
        with pytest.raises(KernelLimitation):
            cq.Workplane("XY").lineTo(1, 0)

    def test_close_empty(self):
        with pytest.raises(KernelLimitation):
            cq.Workplane("XY").close()

    def test_extrude_nothing(self):
        with pytest.raises(KernelLimitation):
            cq.Workplane("XY").extrude(1.0)

    def test_collinear_arc_fails_at_discretization(self):
        # arcs are recorded lazily; the degenerate circle surfaces at extrude
        chain = (
            cq.Workplane("XY")
            .moveTo(0, 0)
            .threePointArc((0.5, 0.0), (1.0, 0.0))
            .lineTo(0.5, 1.0)
            .close()
        )
        with pytest.raises(KernelLimitation):
            chain.extrude(1.0)

    def test_val_without_solid(self):
        with pytest.raises(KernelLimitation):
            cq.Workplane("XY").val()


class TestReferenceBuilder:
    def test_matches_kernel_for_plate_with_hole(self):
        commands = h.fixture_programs()["plate_with_hole"]
        solid = h.reference_mesh(commands)
        assert h.is_watertight(solid)
        expected = (1.4 * 0.8 - math.pi * 0.04) * 0.3
        assert h.signed_volume(solid) == pytest.approx(expected, rel=5e-3)

    def test_all_fixture_programs_build_watertight(self):
        for name, commands in h.fixture_programs().items():
            solid = h.reference_mesh(commands)
            assert h.is_watertight(solid), name
            assert h.signed_volume(solid) > 0, name
