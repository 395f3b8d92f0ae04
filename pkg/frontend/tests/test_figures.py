"""Figure fidelity: plotted artists must reproduce CSV cells exactly."""

import numpy as np
import pytest

from gplink_figs import (
    CsvFormatError,
    OutageFigureSpec,
    PanelsFigureSpec,
    build_outage_figure,
    build_prediction_figure,
    load_outage_table,
    load_panels,
    load_prior,
    render_outage_plot,
    render_prediction_panels,
)
from gplink_figs.cli import main as figs_main

PRIOR_HEADER = "t,path1,path2,path3,mean_db,ci_low_db,ci_high_db"
PANELS_HEADER = "panel,series,t,value_db,ci_low_db,ci_high_db"
SWEEP_HEADER = ("predictor,target,achieved_analytic,achieved_empirical,"
                "slots,mean_R,unallocatable_slots")


@pytest.fixture
def fig_inputs(tmp_path):
    rng = np.random.default_rng(0)
    n = 100
    prior_lines = [PRIOR_HEADER]
    for t in range(n):
        p = rng.normal(0, 0.5, 3)
        prior_lines.append(f"{t},{p[0]},{p[1]},{p[2]},0,-0.98,0.98")
    (tmp_path / "prior.csv").write_text("\n".join(prior_lines) + "\n")

    panel_lines = [PANELS_HEADER]
    for panel in range(1, 6):
        start = 75 + (panel - 1) * 5
        for t in range(start - 75, start):
            panel_lines.append(f"{panel},train,{t},{rng.normal(7, 1)},0,0")
        for t in np.arange(start - 5, start + 5, 0.5):
            mean = rng.normal(7, 1)
            panel_lines.append(f"{panel},posterior,{t},{mean},{mean - 0.4},{mean + 0.4}")
        for t in range(start - 5, start + 5):
            panel_lines.append(f"{panel},truth,{t},{rng.normal(7, 1)},0,0")
    (tmp_path / "panels.csv").write_text("\n".join(panel_lines) + "\n")

    sweep_lines = [SWEEP_HEADER]
    for pred, factor in (("genie", 0.6), ("ma", 4.0), ("gpr", 1.4)):
        for t in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
            sweep_lines.append(f"{pred},{t},{factor * t},{factor * t},1000,50,0")
    (tmp_path / "sweep.csv").write_text("\n".join(sweep_lines) + "\n")
    return tmp_path


def find_gid(fig_or_ax, gid):
    return [a for a in fig_or_ax.findobj() if a.get_gid() == gid]


class TestOutageFigure:
    def test_series_cardinality_and_exact_values(self, fig_inputs):
        rows = load_outage_table(fig_inputs / "sweep.csv")
        fig = build_outage_figure(rows)
        for name, factor in (("genie", 0.6), ("ma", 4.0), ("gpr", 1.4)):
            (line,) = find_gid(fig, f"series-{name}")
            x = np.asarray(line.get_xdata(), dtype=float)
            y = np.asarray(line.get_ydata(), dtype=float)
            assert len(x) == 5
            assert np.array_equal(np.sort(x), np.sort([1e-1, 1e-2, 1e-3, 1e-4, 1e-5]))
            assert np.allclose(y, factor * x, rtol=0, atol=0)  # exact pass-through

    def test_genie_on_or_below_reference(self, fig_inputs):
        rows = load_outage_table(fig_inputs / "sweep.csv")
        fig = build_outage_figure(rows)
        (line,) = find_gid(fig, "series-genie")
        assert np.all(np.asarray(line.get_ydata()) <= np.asarray(line.get_xdata()))

    def test_reference_line_and_log_axes(self, fig_inputs):
        rows = load_outage_table(fig_inputs / "sweep.csv")
        fig = build_outage_figure(rows)
        ax = fig.axes[0]
        assert find_gid(fig, "reference")
        assert ax.get_xscale() == "log" and ax.get_yscale() == "log"
        lo, hi = ax.get_xlim()
        assert lo <= 1e-5 and hi >= 1e-1  # limits cover all plotted targets

    def test_render_writes_vector_file(self, fig_inputs, tmp_path):
        spec = OutageFigureSpec(
            sweep_csv=fig_inputs / "sweep.csv", output_path=tmp_path / "out" / "outage.pdf"
        )
        out = render_outage_plot(spec)
        assert out.exists()
        assert out.read_bytes()[:5] == b"%PDF-"

    def test_missing_csv_reports_path(self, tmp_path):
        spec = OutageFigureSpec(
            sweep_csv=tmp_path / "absent.csv", output_path=tmp_path / "o.pdf"
        )
        with pytest.raises(CsvFormatError, match="absent.csv"):
            render_outage_plot(spec)

    def test_wrong_header_reports_path(self, tmp_path):
        bad = tmp_path / "sweep.csv"
        bad.write_text("foo,bar\n1,2\n")
        with pytest.raises(CsvFormatError, match="sweep.csv"):
            load_outage_table(bad)


class TestPredictionFigure:
    def test_six_panels(self, fig_inputs):
        prior = load_prior(fig_inputs / "prior.csv")
        panels = load_panels(fig_inputs / "panels.csv")
        fig = build_prediction_figure(prior, panels)
        drawn = [ax for ax in fig.axes if ax.axison]
        assert len(drawn) == 6

    def test_band_edges_equal_csv_ci_columns(self, fig_inputs):
        prior = load_prior(fig_inputs / "prior.csv")
        panels = load_panels(fig_inputs / "panels.csv")
        fig = build_prediction_figure(prior, panels)
        for panel in range(1, 6):
            ax = fig.axes[panel]
            (band,) = find_gid(ax, "band")
            verts = {
                (round(float(x), 9), round(float(y), 9))
                for x, y in band.get_paths()[0].vertices
            }
            post = panels[panel]["posterior"]
            for t, lo, hi in zip(post["t"], post["ci_low"], post["ci_high"]):
                assert (round(float(t), 9), round(float(lo), 9)) in verts
                assert (round(float(t), 9), round(float(hi), 9)) in verts

    def test_training_points_marked_distinctly(self, fig_inputs):
        prior = load_prior(fig_inputs / "prior.csv")
        panels = load_panels(fig_inputs / "panels.csv")
        fig = build_prediction_figure(prior, panels)
        (train,) = find_gid(fig.axes[1], "train")
        assert train.get_marker() == "x"
        assert len(train.get_xdata()) == 75

    def test_prior_panel_band_and_paths(self, fig_inputs):
        prior = load_prior(fig_inputs / "prior.csv")
        fig = build_prediction_figure(prior, {})
        ax = fig.axes[0]
        assert find_gid(ax, "band")
        assert len([a for a in ax.findobj() if str(a.get_gid()).startswith("sample-")]) == 3

    def test_empty_panels_render_prior_only_with_notice(self, fig_inputs, capsys):
        prior = load_prior(fig_inputs / "prior.csv")
        fig = build_prediction_figure(prior, {})
        assert fig.axes[0].axison
        assert all(not ax.axison for ax in fig.axes[1:6])
        assert "skipped" in capsys.readouterr().err

    def test_render_writes_vector_file(self, fig_inputs, tmp_path):
        spec = PanelsFigureSpec(
            prior_csv=fig_inputs / "prior.csv",
            panels_csv=fig_inputs / "panels.csv",
            output_path=tmp_path / "fig" / "panels.pdf",
        )
        out = render_prediction_panels(spec)
        assert out.exists()
        assert out.read_bytes()[:5] == b"%PDF-"


class TestCli:
    def test_both_figures_via_umbrella(self, fig_inputs, tmp_path, capsys):
        out = tmp_path / "figs"
        assert figs_main(["prediction-panels", "--in", str(fig_inputs), "--out", str(out)]) == 0
        assert figs_main(["outage-plot", "--in", str(fig_inputs), "--out", str(out)]) == 0
        assert (out / "prediction_panels.pdf").exists()
        assert (out / "outage.pdf").exists()

    def test_missing_input_is_clean_error(self, tmp_path, capsys):
        rc = figs_main(["outage-plot", "--in", str(tmp_path), "--out", str(tmp_path)])
        assert rc == 2
        assert "sweep.csv" in capsys.readouterr().err

    def test_unknown_figure(self, capsys):
        assert figs_main(["volcano-plot"]) == 2
