import pytest

from figplot.cli import main
from figplot.render import (
    FigureSpec,
    MissingColumnError,
    figure_spec,
    read_counts,
    render,
)

# events per panel: C(modes + photons - 1, photons) for each figure's input
EXPECTED = {
    1: {"panels": 2, "models": 4, "events": (10, 35)},
    2: {"panels": 4, "models": 2, "events": (35,) * 4},
    3: {"panels": 4, "models": 2, "events": (10,) * 4},
    4: {"panels": 4, "models": 4, "events": (10,) * 4},
}


@pytest.mark.parametrize("figure", [1, 2, 3, 4])
def test_renders_every_reproduction(figure, reproduction_dir, tmp_path):
    out = tmp_path / f"fig{figure}.png"
    spec = figure_spec(figure, reproduction_dir, out)
    rendered = render(spec)
    assert out.is_file() and out.stat().st_size > 0
    expect = EXPECTED[figure]
    panels = [ax for ax in rendered.axes if ax.get_visible() and ax.containers]
    assert len(panels) == expect["panels"]
    for ax, n_events in zip(panels, expect["events"]):
        assert len(ax.containers) == expect["models"]  # one bar series per model
        for container in ax.containers:
            assert len(container) == n_events  # one bar group per enumerated event
        assert len(ax.get_xticklabels()) == n_events


def test_event_order_is_lexicographic(reproduction_dir):
    _, events, _ = read_counts(reproduction_dir / "fig2_matrix1.csv")
    keys = [tuple(int(v) for v in e.split("-")) for e in events]
    assert keys == sorted(keys)


def test_legend_lists_models(reproduction_dir, tmp_path):
    spec = figure_spec(4, reproduction_dir, tmp_path / "fig4.png")
    rendered = render(spec)
    legend = rendered.axes[0].get_legend()
    labels = [t.get_text() for t in legend.get_texts()]
    assert labels == ["boson", "classical", "pd", "meanfield"]


def test_empty_counts_render_without_crash(tmp_path):
    csv_path = tmp_path / "fig2_matrix1.csv"
    csv_path.write_text("event,boson,meanfield\n0-0-0-4,0,0\n4-0-0-0,0,0\n")
    for name in ("fig2_matrix2.csv", "fig2_matrix3.csv", "fig2_matrix4.csv"):
        (tmp_path / name).write_text("event,boson,meanfield\n0-0-0-4,0,0\n")
    out = tmp_path / "empty.png"
    render(figure_spec(2, tmp_path, out))
    assert out.is_file() and out.stat().st_size > 0


def test_missing_columns_fail_descriptively(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("pattern,boson\n1-1,3\n")
    with pytest.raises(MissingColumnError, match="event"):
        read_counts(bad)
    only_events = tmp_path / "only.csv"
    only_events.write_text("event\n1-1\n")
    with pytest.raises(MissingColumnError):
        read_counts(only_events)


def test_unknown_figure_id_is_usage_error(tmp_path):
    with pytest.raises(ValueError, match="figure"):
        figure_spec(9, tmp_path, tmp_path / "x.png")
    with pytest.raises(SystemExit):
        main(["--figure", "9", "--in", str(tmp_path), "--out", str(tmp_path / "x.png")])


def test_missing_csvs_rejected(tmp_path):
    with pytest.raises(FileNotFoundError, match="missing"):
        FigureSpec(2, (tmp_path / "nope.csv",), (2, 2), tmp_path / "x.png")


def test_cli_end_to_end(reproduction_dir, tmp_path):
    out = tmp_path / "fig1.png"
    assert main(["--figure", "1", "--in", str(reproduction_dir), "--out", str(out)]) == 0
    assert out.is_file() and out.stat().st_size > 0


def test_cli_reports_missing_inputs(tmp_path, capsys):
    assert main(["--figure", "2", "--in", str(tmp_path), "--out", str(tmp_path / "x.png")]) == 1
    assert "missing" in capsys.readouterr().err
