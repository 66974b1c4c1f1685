# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
# pylint: disable=redefined-outer-name
import pytest


def _points(pairs):
    from prefixforge.timing import EvalPoint

    return [EvalPoint(index, area, delay) for index, (area, delay) in enumerate(pairs)]


def test_pareto_small():
    from prefixforge.dse import pareto

    assert pareto(_points([(1, 2.0), (2, 1.0), (2, 2.0)])) == [1, 0]
    assert pareto(_points([(5, 3.0)])) == [0]
    assert pareto([]) == []


def test_pareto_keeps_equal_points():
    from prefixforge.dse import pareto

    assert pareto(_points([(3, 1.0), (3, 1.0), (4, 1.0), (2, 2.0)])) == [0, 1, 3]


def test_pareto_matches_brute_force():
    import numpy as np
    from prefixforge.dse import pareto

    for trial in range(100):
        rng = np.random.default_rng(trial)
        area = rng.integers(100, 200, size=1000)
        delay = np.round(rng.uniform(10.0, 20.0, size=1000), 1)
        points = _points(zip(area.tolist(), delay.tolist()))

        no_worse = (area[:, None] <= area[None, :]) & (delay[:, None] <= delay[None, :])
        better = (area[:, None] < area[None, :]) | (delay[:, None] < delay[None, :])
        dominated = (no_worse & better).any(axis=0)
        expected = set(np.flatnonzero(~dominated).tolist())

        frontier = pareto(points)
        assert set(frontier) == expected
        keys = [(points[i].delay, points[i].area, i) for i in frontier]
        assert keys == sorted(keys)


def test_select_topk():
    from prefixforge.dse import select_topk

    frontier = _points([(10, 1.0), (8, 1.5), (20, 0.9)])
    assert select_topk(frontier, 2) == [0, 1]
    assert select_topk(frontier, 5) == [0, 1, 2]

    scaled = _points([(30, 1.0), (24, 1.5), (60, 0.9)])
    assert select_topk(scaled, 2) == select_topk(frontier, 2)

    tied = _points([(2, 2.0), (4, 1.0), (1, 4.0)])
    assert select_topk(tied, 2) == [0, 1]


def test_top_k_is_clamped():
    from prefixforge.dse import ExploreConfig

    assert ExploreConfig(8, top_k=2).top_k == 5
    assert ExploreConfig(8, top_k=50).top_k == 20
    assert ExploreConfig(8).top_k == 12


def test_config_checks():
    from prefixforge.dse import ExploreConfig
    from prefixforge.errors import InvalidConfig, UnsupportedWidth

    with pytest.raises(UnsupportedWidth):
        ExploreConfig(0).check()
    with pytest.raises(InvalidConfig):
        ExploreConfig(8, cap=3).check()
    with pytest.raises(InvalidConfig):
        ExploreConfig(8, sizing="always").check()
    assert ExploreConfig(32).effective_depth() == 6
    assert ExploreConfig(2).effective_depth() == 1


def test_spread():
    from prefixforge.dse import spread

    assert spread([2.0, 3.0, 4.0]) == pytest.approx(1.0)
    assert spread([]) == 0.0


def test_propagate_variants():
    import numpy as np
    from prefixforge.classical import make_classical
    from prefixforge.dse import propagate_variants

    graph = make_classical("bk", 8)
    everything = propagate_variants(graph, 1 << 20, np.random.default_rng(0))
    assert everything[0] == ()
    assert len(everything) == len(set(everything))
    assert len(everything) & (len(everything) - 1) == 0

    few = propagate_variants(graph, 3, np.random.default_rng(0))
    assert len(few) == 3
    assert few == propagate_variants(graph, 3, np.random.default_rng(0))
    assert propagate_variants(make_classical("ks", 2), 8, np.random.default_rng(0)) == [()]


def test_worker_count(monkeypatch):
    from prefixforge.dse import ExploreConfig, worker_count
    from prefixforge.errors import InvalidConfig

    monkeypatch.delenv("AXON_THREADS", raising=False)
    assert worker_count(ExploreConfig(8, workers=3)) == 3
    monkeypatch.setenv("AXON_THREADS", "2")
    assert worker_count(ExploreConfig(8, workers=3)) == 2
    monkeypatch.setenv("AXON_THREADS", "many")
    with pytest.raises(InvalidConfig):
        worker_count(ExploreConfig(8))


def test_explore_two_bits():
    from prefixforge.dse import ExploreConfig, explore

    result = explore(ExploreConfig(2))
    assert len(result.seeds) == 1
    assert len(result) == 1
    assert result.frontier == (0,)
    assert result.selected == (0,)


def test_explore_four_bits_is_equivalent():
    from prefixforge.dse import ExploreConfig, explore
    from prefixforge.verify import check_equiv

    result = explore(ExploreConfig(4, hybrid=True, sizing="both", inverter_slack=1))
    assert len(result) >= 4
    assert {candidate.recipe.mode for candidate in result.candidates} == {"prefix", "hybrid"}
    assert {candidate.recipe.sized for candidate in result.candidates} == {False, True}
    for candidate in result.candidates:
        verdict = check_equiv(result.netlist(candidate.id))
        assert verdict.mode == "exhaustive"
        verdict.assert_()


def test_rebuilt_netlist_matches_point():
    from prefixforge.dse import ExploreConfig, explore
    from prefixforge.timing import evaluate

    result = explore(ExploreConfig(6, hybrid=True))
    for candidate_id in result.selected:
        point = evaluate(result.netlist(candidate_id), result.library, candidate_id)
        assert point == result.candidate(candidate_id).point


def test_cap_bounds_candidates():
    from prefixforge.dse import ExploreConfig, explore

    result = explore(ExploreConfig(8, hybrid=True, cap=20, top_k=5))
    assert 1 <= len(result) <= 20


def test_export_and_read_back(tmp_path):
    from prefixforge.dse import ExploreConfig, SCATTER_COLUMNS, explore, read_manifest, read_scatter
    from prefixforge.verilog import parse_netlist

    result = explore(ExploreConfig(6, hybrid=True, output=str(tmp_path)))

    header = (tmp_path / "scatter.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == ",".join(SCATTER_COLUMNS)
    rows = read_scatter(tmp_path)
    assert len(rows) == len(result)
    assert [row["id"] for row in rows if row["on_frontier"]] == sorted(result.frontier)
    assert {row["id"] for row in rows if row["selected"]} == set(result.selected)

    manifest = read_manifest(tmp_path)
    assert manifest["format"] == 1
    assert manifest["seed"] == 0
    assert manifest["counts"]["candidates"] == len(result)
    assert [entry["id"] for entry in manifest["selected"]] == list(result.selected)
    assert len(manifest["comparisons"]) == len(result.seeds)
    assert (tmp_path / "clusters.json").exists()

    for candidate_id in result.selected:
        text = (tmp_path / "netlists" / f"cand_{candidate_id}.v").read_text(encoding="utf-8")
        parsed = parse_netlist(text, result.library)
        assert parsed.same_structure(result.netlist(candidate_id))
        assert parsed.name == f"cand_{candidate_id}"


def test_exports_are_deterministic(tmp_path):
    from prefixforge.dse import ExploreConfig, explore

    first, second = tmp_path / "first", tmp_path / "second"
    explore(ExploreConfig(8, hybrid=True, seed=7, cap=200, output=str(first)))
    explore(ExploreConfig(8, hybrid=True, seed=7, cap=200, output=str(second)))

    assert (first / "scatter.csv").read_bytes() == (second / "scatter.csv").read_bytes()
    netlists = sorted(path.name for path in (first / "netlists").iterdir())
    assert netlists == sorted(path.name for path in (second / "netlists").iterdir())
    for name in netlists:
        assert (first / "netlists" / name).read_bytes() == \
            (second / "netlists" / name).read_bytes()


def test_unwritable_output(tmp_path):
    from prefixforge.dse import ExploreConfig, explore
    from prefixforge.errors import OutputError

    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(OutputError):
        explore(ExploreConfig(2, output=str(blocker / "out")))


def test_read_missing_run(tmp_path):
    from prefixforge.dse import read_manifest
    from prefixforge.errors import OutputError

    with pytest.raises(OutputError):
        read_manifest(tmp_path)


def test_infeasible_exploration():
    from prefixforge.dse import ExploreConfig, explore
    from prefixforge.errors import InfeasibleConstraints

    with pytest.raises(InfeasibleConstraints):
        explore(ExploreConfig(16, depth=3))


@pytest.mark.slow
def test_explore_eight_bits_is_equivalent():
    from prefixforge.dse import ExploreConfig, explore
    from prefixforge.verify import check_equiv

    result = explore(ExploreConfig(8, depth=3, hybrid=True, cap=1000, sizing="both"))
    assert len(result) >= 1
    for candidate in result.candidates:
        check_equiv(result.netlist(candidate.id)).assert_()


@pytest.fixture(scope="module")
def wide_run():
    import os
    from prefixforge.dse import ExploreConfig, explore

    return explore(ExploreConfig(32, hybrid=True, workers=os.cpu_count() or 1))


@pytest.mark.slow
def test_wide_run_has_thousands_of_candidates(wide_run):
    assert len(wide_run) >= 1000


@pytest.mark.slow
def test_wide_run_uses_default_settings(wide_run):
    from prefixforge.dse import ExploreConfig

    defaults = ExploreConfig(32, hybrid=True)
    assert wide_run.config.sizing == defaults.sizing == "sized"
    assert wide_run.config.p_variants == defaults.p_variants
    assert wide_run.config.cap == defaults.cap
    assert all(candidate.recipe.sized for candidate in wide_run.candidates)


@pytest.mark.slow
def test_fastest_candidate_is_hybrid(wide_run):
    fastest = wide_run.candidate(wide_run.frontier[0])
    assert fastest.recipe.mode == "hybrid"
    assert fastest.point.delay == min(point.delay for point in wide_run.points())


@pytest.mark.slow
def test_hybrid_candidates_are_faster_and_larger(wide_run):
    baseline = {
        candidate.recipe.mode: candidate.point for candidate in wide_run.candidates
        if candidate.recipe.seed == "ks" and candidate.recipe.variant == 0
        and candidate.recipe.inverters == 0
    }
    assert baseline["hybrid"].delay < baseline["prefix"].delay
    assert baseline["hybrid"].area > baseline["prefix"].area
    assert baseline["hybrid"].n_ling > 0 == baseline["prefix"].n_ling

    def fastest(mode):
        return min(candidate.point.delay for candidate in wide_run.candidates
                   if candidate.recipe.mode == mode)

    assert fastest("hybrid") < fastest("prefix")


@pytest.mark.slow
def test_wide_run_delay_spreads_more_than_area(wide_run):
    spreads = wide_run.spreads()
    assert spreads["delay"] > spreads["area"]


@pytest.mark.slow
def test_wide_run_selection_verifies(wide_run):
    from prefixforge.verify import check_equiv

    for candidate_id in wide_run.selected:
        check_equiv(wide_run.netlist(candidate_id), seed=1).assert_()


@pytest.mark.slow
@pytest.mark.parametrize("width", [16, 23, 31])
def test_benchmark_selection_verifies(width):
    from prefixforge.dse import ExploreConfig, explore
    from prefixforge.verify import check_equiv

    result = explore(ExploreConfig(width, hybrid=True, cap=400, p_variants=8))
    for candidate_id in result.selected:
        verdict = check_equiv(result.netlist(candidate_id), seed=width)
        assert verdict.mode == "randomized"
        verdict.assert_()


@pytest.mark.slow
@pytest.mark.parametrize("width", [16, 23, 31, 32])
def test_hybrid_is_faster_and_larger(width):
    from prefixforge.classical import make_classical
    from prefixforge.dse import compare_hybrid

    comparison = compare_hybrid(make_classical("ks", width), name="ks")
    assert comparison.converted > 0
    assert comparison.hybrid.delay < comparison.prefix.delay
    assert comparison.hybrid.area > comparison.prefix.area
