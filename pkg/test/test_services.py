from fractions import Fraction
from itertools import cycle

import pytest

from config.plot_style import ACC_CURVE_COLOR, FALLBACK_COLORS, LOWER_BOUND_COLOR, OBSTRUCTION_COLORS, VOLUME_COLOR
from core.classes import QuasiPerfectClass
from core.echcap import toric_caps
from core.errors import DomainError, UsageError
from ingest.models import CurvePoint, CurveSeries
from services.curve_service import CurveService
from services.plot_service import PlotService, emit_svg


@pytest.fixture
def service():
    return CurveService()


def values(curve):
    return [point.value for point in curve.points]


class TestCurveService:
    def test_grid(self, service):
        assert service.grid(1, 2, Fraction(1, 2)) == [1, Fraction(3, 2), 2]
        assert service.grid(6, 6, 1) == [6]
        with pytest.raises(UsageError):
            service.grid(1, 2, 0)
        with pytest.raises(UsageError):
            service.grid(2, 1, 1)
        with pytest.raises(DomainError):
            service.grid(Fraction(1, 2), 2, 1)

    def test_volume_series(self, service):
        curve = service.volume_series(Fraction(0), [4, 5])
        assert curve.label == "volume"
        assert values(curve) == ["2", "2.23606797749979"]
        assert [point.z for point in curve.points] == ["4", "5"]

    def test_lower_bound_series(self, service):
        table = toric_caps(0, 1, 50)
        curve = service.lower_bound_series(table, [4, 5])
        assert values(curve) == ["2", "2.5"]
        assert service.stats["series_built"] == 1

    def test_acc_curve_series(self, service):
        curve = service.acc_curve_series(Fraction(1, 5), [5, 6])
        assert values(curve) == [None, "2.5"]

    def test_obstruction_series(self, service):
        curve = service.obstruction_series(QuasiPerfectClass(3, 2, 6, 1), Fraction(0), [6])
        assert curve.label == "mu (3,2;w(6))"
        assert values(curve) == ["2"]

    def test_classes_for_index(self, service):
        assert service.classes_for_index(6) == [QuasiPerfectClass(3, 2, 6, 1)]
        with pytest.raises(DomainError):
            service.classes_for_index(1)


def curve(label, pairs):
    return CurveSeries(label=label, points=[CurvePoint(z=z, value=value) for z, value in pairs])


class TestPlotService:
    def test_role_colors(self):
        plots = PlotService()
        obstructions, fallback = cycle(OBSTRUCTION_COLORS), cycle(FALLBACK_COLORS)
        assert plots.color_for("c_lower", obstructions, fallback) == LOWER_BOUND_COLOR
        assert plots.color_for("volume", obstructions, fallback) == VOLUME_COLOR
        assert plots.color_for("acc_curve", obstructions, fallback) == ACC_CURVE_COLOR
        assert plots.color_for("mu (3,2;w(6))", obstructions, fallback) == OBSTRUCTION_COLORS[0]
        assert plots.color_for("mu (14,9;4w(29/4))", obstructions, fallback) == OBSTRUCTION_COLORS[1]
        assert plots.color_for("something else", obstructions, fallback) == FALLBACK_COLORS[0]

    def test_render_is_deterministic(self, tmp_path):
        drawn = [curve("c_lower", [("1", "1"), ("2", "1.5")]), curve("volume", [("1", "1"), ("2", "1.41")])]
        first = PlotService().render(drawn, tmp_path / "first.svg")
        second = PlotService().render(drawn, tmp_path / "second.svg")
        assert first.read_bytes() == second.read_bytes()
        assert b"<svg" in first.read_bytes()

    def test_nothing_to_plot_writes_nothing(self, tmp_path):
        target = tmp_path / "empty.svg"
        with pytest.raises(UsageError):
            PlotService().render([curve("c_lower", [("1", None)])], target)
        assert not target.exists()

    def test_emit_svg_from_csv(self, tmp_path):
        source = tmp_path / "curves.csv"
        source.write_text("z,c_lower,mu a\n1,1,0.5\n2,1.5,\n", encoding="utf-8")
        target = emit_svg([source], tmp_path / "out.svg")
        assert target.exists()
