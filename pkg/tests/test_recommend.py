import random

import pytest

from iscard.cards import BindingSet, IdiomKind, TaskKind
from iscard.recommender import (
    Level,
    NoInput,
    UnknownIdiom,
    UnknownTask,
    channel_requirements,
    recommend,
    recommend_by_data,
    recommend_by_task,
    validate_binding,
)
from iscard.tabular import ColumnType, DataSignature

from oracles import all_signatures, brute_force_is_satisfiable, table_for_signature

K = IdiomKind


def _levels(recs) -> dict:
    return {r.kind: r.level for r in recs}


def _recommended(recs) -> set:
    return {r.kind for r in recs if r.level is Level.RECOMMENDED}


# ---------------------------------------------------------------------------
# Task route
# ---------------------------------------------------------------------------

# The shipped task-to-idiom table, frozen after a row-by-row review against
# the action/target design guidance it was curated from. Guards the config
# file against accidental edits.
EXPECTED_TASK_TABLE = {
    TaskKind.COMPARISON: {K.BAR, K.GROUPED_BAR, K.MULTI_LINE, K.RADAR, K.HEATMAP},
    TaskKind.TREND_OVER_TIME: {K.LINE, K.MULTI_LINE, K.AREA},
    TaskKind.DISTRIBUTION: {K.HISTOGRAM, K.BOX_PLOT},
    TaskKind.PART_TO_WHOLE: {K.PIE, K.DONUT, K.STACKED_BAR},
    TaskKind.CORRELATION: {K.SCATTER, K.BUBBLE, K.HEATMAP},
    TaskKind.RANKING: {K.BAR},
    TaskKind.DEVIATION: {K.BAR, K.LINE, K.AREA},
}


def test_shipped_task_table_matches_frozen_fixture(config):
    for task, expected in EXPECTED_TASK_TABLE.items():
        assert set(config.task_idioms[task]) == expected, task


def test_comparison_recommends_bar_family_and_radar():
    recommended = _recommended(recommend_by_task(TaskKind.COMPARISON))
    assert {K.BAR, K.GROUPED_BAR, K.RADAR, K.MULTI_LINE} <= recommended


def test_trend_recommends_lines_not_pie():
    levels = _levels(recommend_by_task(TaskKind.TREND_OVER_TIME))
    assert levels[K.LINE] is Level.RECOMMENDED
    assert levels[K.MULTI_LINE] is Level.RECOMMENDED
    assert levels[K.AREA] is Level.RECOMMENDED
    assert levels[K.PIE] is Level.NOT_RECOMMENDED


@pytest.mark.parametrize("task", list(TaskKind))
def test_task_response_covers_full_catalog_once(task):
    recs = recommend_by_task(task)
    assert sorted(r.kind.value for r in recs) == sorted(k.value for k in IdiomKind)


def test_unknown_task_raises():
    with pytest.raises(UnknownTask):
        recommend_by_task("sorting")


# ---------------------------------------------------------------------------
# Data route
# ---------------------------------------------------------------------------

def test_scenario_signature_recommends_bar_and_grouped_bar():
    recommended = _recommended(recommend_by_data(DataSignature(1, 0, 2)))
    assert {K.BAR, K.GROUPED_BAR} <= recommended


def test_empty_table_recommends_nothing():
    recs = recommend_by_data(DataSignature(0, 0, 0))
    assert all(r.level is Level.NOT_RECOMMENDED for r in recs)
    assert len(recs) == len(IdiomKind)


def test_two_numericals_scatter_yes_pie_no(config):
    types = (ColumnType.NUMERICAL, ColumnType.NUMERICAL)
    table = table_for_signature(types)
    # Oracle: brute-force enumeration of all column-to-channel assignments.
    assert brute_force_is_satisfiable(K.SCATTER, table, config)
    assert not brute_force_is_satisfiable(K.PIE, table, config)
    levels = _levels(recommend_by_data(DataSignature(0, 0, 2)))
    assert levels[K.SCATTER] is Level.RECOMMENDED
    assert levels[K.PIE] is Level.NOT_RECOMMENDED


def test_data_reasons_name_the_failing_channel():
    levels = {r.kind: r for r in recommend_by_data(DataSignature(0, 0, 2))}
    assert "label" in levels[K.PIE].reasons[0]


def test_data_recommendation_monotone_under_added_columns():
    rng = random.Random(7)
    for _ in range(200):
        base = DataSignature(rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3))
        grown = DataSignature(*(c + extra for c, extra in
                                zip(base, (rng.randint(0, 2) for _ in range(3)))))
        before = _recommended(recommend_by_data(base))
        after = _recommended(recommend_by_data(grown))
        assert before <= after, (base, grown)


def test_signature_table_consistency_check(scenario_table):
    with pytest.raises(ValueError):
        recommend_by_data(DataSignature(0, 0, 0), table=scenario_table)


# ---------------------------------------------------------------------------
# Channel requirements
# ---------------------------------------------------------------------------

def test_bar_channels():
    by_name = {c.name: c for c in channel_requirements(K.BAR)}
    x, y = by_name["x"], by_name["y"]
    assert (x.min_columns, x.max_columns) == (1, 1)
    assert set(x.admissible_types) == {ColumnType.CATEGORICAL, ColumnType.CATEGORICAL_ORDERED}
    assert y.min_columns == 1 and y.max_columns is None
    assert set(y.admissible_types) == {ColumnType.NUMERICAL}


def test_scatter_channels():
    by_name = {c.name: c for c in channel_requirements(K.SCATTER)}
    assert (by_name["x"].min_columns, by_name["x"].max_columns) == (1, 1)
    assert (by_name["y"].min_columns, by_name["y"].max_columns) == (1, 1)
    assert (by_name["color"].min_columns, by_name["color"].max_columns) == (0, 1)
    assert set(by_name["color"].admissible_types) == {ColumnType.CATEGORICAL}
    assert (by_name["size"].min_columns, by_name["size"].max_columns) == (0, 1)
    assert set(by_name["size"].admissible_types) == {ColumnType.NUMERICAL}


def test_histogram_has_single_value_channel():
    channels = channel_requirements(K.HISTOGRAM)
    assert len(channels) == 1
    assert channels[0].name == "value"
    assert set(channels[0].admissible_types) == {ColumnType.NUMERICAL}


def test_unknown_idiom_raises():
    with pytest.raises(UnknownIdiom):
        channel_requirements("sparkline")


# ---------------------------------------------------------------------------
# validate_binding
# ---------------------------------------------------------------------------

def test_scenario_binding_is_valid(scenario_table):
    report = validate_binding(K.BAR, scenario_table,
                              BindingSet.of({"x": ["Exercises"],
                                             "y": ["Class Average Points", "My Points"]}))
    assert report.valid
    assert report.violations == ()


def test_numerical_column_rejected_on_category_axis(scenario_table):
    report = validate_binding(K.BAR, scenario_table,
                              BindingSet.of({"x": ["My Points"], "y": ["Class Average Points"]}))
    assert not report.valid
    assert any(v.rule == "type" and v.channel == "x" and v.column == "My Points"
               for v in report.violations)


def test_missing_required_channel_reported(scenario_table):
    report = validate_binding(K.BAR, scenario_table,
                              BindingSet.of({"x": ["Exercises"], "y": []}))
    assert not report.valid
    assert any(v.rule == "arity" and v.channel == "y" for v in report.violations)


def test_unknown_channel_and_column_and_duplicates(scenario_table):
    report = validate_binding(K.BAR, scenario_table,
                              BindingSet.of({"x": ["Exercises"], "y": ["My Points"],
                                             "z": ["My Points"]}))
    assert any(v.rule == "unknownChannel" and v.channel == "z" for v in report.violations)

    report = validate_binding(K.BAR, scenario_table,
                              BindingSet.of({"x": ["Exercises"], "y": ["Nope"]}))
    assert any(v.rule == "unknownColumn" and v.column == "Nope" for v in report.violations)

    report = validate_binding(K.SCATTER, scenario_table,
                              BindingSet.of({"x": ["My Points"], "y": ["My Points"]}))
    assert any(v.rule == "duplicateColumn" for v in report.violations)


# ---------------------------------------------------------------------------
# Combined mode
# ---------------------------------------------------------------------------

def test_combined_scenario_intersection():
    recs = _levels(recommend(task=TaskKind.COMPARISON, signature=DataSignature(1, 0, 2)))
    assert recs[K.BAR] is Level.RECOMMENDED
    assert recs[K.GROUPED_BAR] is Level.RECOMMENDED
    # Radar suits comparison but needs three numerical columns.
    assert recs[K.RADAR] is Level.PARTIALLY_COMPATIBLE


def test_task_only_combined_equals_task_route():
    assert recommend(task=TaskKind.RANKING) == recommend_by_task(TaskKind.RANKING)


def test_data_only_combined_equals_data_route():
    sig = DataSignature(1, 1, 1)
    assert recommend(signature=sig) == recommend_by_data(sig)


def test_trend_with_unordered_table_marks_line_partial():
    recs = _levels(recommend(task=TaskKind.TREND_OVER_TIME, signature=DataSignature(1, 0, 2)))
    assert recs[K.LINE] is Level.PARTIALLY_COMPATIBLE


def test_combined_reasons_name_both_inputs():
    recs = recommend(task=TaskKind.TREND_OVER_TIME, signature=DataSignature(1, 0, 2))
    line = next(r for r in recs if r.kind is K.LINE)
    assert any(reason.startswith("task:") for reason in line.reasons)
    assert any(reason.startswith("data:") for reason in line.reasons)


def test_no_input_raises():
    with pytest.raises(NoInput):
        recommend()


def test_ordering_recommended_first_then_catalog_order(config):
    recs = recommend(task=TaskKind.COMPARISON, signature=DataSignature(1, 0, 2))
    ranks = [(("recommended", "partiallyCompatible", "notRecommended").index(r.level.value))
             for r in recs]
    assert ranks == sorted(ranks)
    for level in Level:
        within = [config.catalog_index(r.kind) for r in recs if r.level is level]
        assert within == sorted(within)


# ---------------------------------------------------------------------------
# Soundness / completeness spot checks (full sweep lives in the acceptance suite)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("types", [
    (ColumnType.CATEGORICAL,),
    (ColumnType.NUMERICAL, ColumnType.NUMERICAL),
    (ColumnType.CATEGORICAL, ColumnType.NUMERICAL, ColumnType.NUMERICAL),
    (ColumnType.CATEGORICAL, ColumnType.CATEGORICAL_ORDERED, ColumnType.NUMERICAL),
])
def test_satisfiability_matches_brute_force(types, config):
    table = table_for_signature(types)
    sig = DataSignature(
        sum(t is ColumnType.CATEGORICAL for t in types),
        sum(t is ColumnType.CATEGORICAL_ORDERED for t in types),
        sum(t is ColumnType.NUMERICAL for t in types),
    )
    marked = _recommended(recommend_by_data(sig, config=config))
    for kind in IdiomKind:
        assert (kind in marked) == brute_force_is_satisfiable(kind, table, config), kind
