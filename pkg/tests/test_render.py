import pytest

from minstab import Segment, render_svg
from minstab.render import RenderError


class TestRenderSvg:
    def test_points_only(self, unit_square):
        svg = render_svg(unit_square)
        assert svg.startswith('<?xml version="1.0"')
        assert svg.count("<circle") == 4
        assert "<line" not in svg

    def test_integral_matching_uniform_strokes(self, unit_square):
        svg = render_svg(unit_square, edges=[Segment(0, 1), Segment(2, 3)])
        lines = [l for l in svg.splitlines() if l.startswith("<line")]
        assert len(lines) == 2
        widths = {l.split('stroke-width="')[1].split('"')[0] for l in lines}
        assert len(widths) == 1

    def test_fractional_strokes_scale(self, unit_square):
        weights = {
            Segment(0, 1): 0.5,
            Segment(0, 2): 0.5,
            Segment(1, 3): 0.5,
            Segment(2, 3): 1.0,
        }
        svg = render_svg(unit_square, weights=weights)
        lines = [l for l in svg.splitlines() if l.startswith("<line")]
        assert len(lines) == 4
        widths = sorted(
            float(l.split('stroke-width="')[1].split('"')[0]) for l in lines
        )
        assert widths[0] == pytest.approx(widths[-1] / 2)

    def test_subthreshold_weights_hidden(self, unit_square):
        svg = render_svg(unit_square, weights={Segment(0, 1): 1e-9})
        assert "<line" not in svg

    def test_byte_identical_reruns(self, unit_square):
        a = render_svg(unit_square, edges=[Segment(0, 3)], annotation="k=1")
        b = render_svg(unit_square, edges=[Segment(0, 3)], annotation="k=1")
        assert a == b

    def test_annotation_escaped(self, unit_square):
        svg = render_svg(unit_square, annotation="k<2 & more")
        assert "k&lt;2 &amp; more" in svg

    def test_bad_edge_rejected(self, unit_square):
        with pytest.raises(RenderError):
            render_svg(unit_square, edges=[Segment(0, 9)])
