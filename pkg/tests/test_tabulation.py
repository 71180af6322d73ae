import math
import random

import pytest

from sdckit import (
    EmptyTableError,
    ProhibitionError,
    TableError,
    TypeMismatchError,
    UnknownColumnError,
    build_spec,
    crosstab,
    pivot_table,
)
from sdckit.tabulation import format_label

from conftest import make_dataset


def small_ds():
    return make_dataset(g=["a", "a", "b"], v=[1.0, 3.0, 5.0])


# -- spec construction ----------------------------------------------------


def test_mean_spec_is_valid():
    spec = build_spec("year", "grant_type", "inc_grants", "mean", False)
    assert spec.index_vars == ("year",)
    assert spec.column_vars == ("grant_type",)
    assert spec.aggfunc == "mean"


@pytest.mark.parametrize("aggfunc", ["min", "max"])
def test_min_max_prohibited(aggfunc):
    with pytest.raises(ProhibitionError, match="minima and\n?.*maxima|minima"):
        build_spec("year", "grant_type", "inc_grants", aggfunc, False)


def test_prohibition_happens_before_any_computation():
    # no dataset involved at all: TableSpec construction already refuses
    with pytest.raises(ProhibitionError):
        build_spec("g", (), "v", "max", False)


def test_count_spec_without_values_is_valid():
    spec = build_spec("year", "grant_type", None, "count", False)
    assert spec.values_var is None


def test_unknown_aggfunc_rejected():
    with pytest.raises(TableError, match="quantile"):
        build_spec("g", (), "v", "quantile", False)


def test_magnitude_aggfunc_requires_values():
    with pytest.raises(TableError):
        build_spec("g", (), None, "mean", False)


def test_index_required():
    with pytest.raises(TableError):
        build_spec((), "g", "v", "mean", False)


def test_axis_overlap_rejected():
    with pytest.raises(TableError):
        build_spec(("g", "h"), ("h",), None, "count", False)


def test_unknown_column_with_dataset():
    with pytest.raises(UnknownColumnError):
        build_spec("ghost", (), None, "count", False, ds=small_ds())


def test_categorical_values_rejected():
    ds = make_dataset(g=["a", "b"], tag=["x", "y"])
    with pytest.raises(TypeMismatchError, match="tag"):
        build_spec("g", (), "tag", "mean", False, ds=ds)


def test_crosstab_needs_column_vars():
    spec = build_spec("g", (), "v", "mean", False)
    with pytest.raises(TableError):
        crosstab(small_ds(), spec)


# -- hand-checked cells ----------------------------------------------------


def test_pivot_mean_by_hand():
    table = pivot_table(small_ds(), build_spec("g", (), "v", "mean", False))
    assert table.row_labels == (("a",), ("b",))
    assert table.col_labels == (("v",),)
    a, b = table.cells[0][0], table.cells[1][0]
    assert (a.count, a.contributions, a.aggregate) == (2, (1.0, 3.0), 2.0)
    assert (b.count, b.contributions, b.aggregate) == (1, (5.0,), 5.0)


def test_pivot_count_by_hand():
    table = pivot_table(small_ds(), build_spec("g", (), None, "count", False))
    assert table.col_labels == (("count",),)
    assert [row[0].count for row in table.cells] == [2, 1]


def test_pivot_sum_by_hand():
    table = pivot_table(small_ds(), build_spec("g", (), "v", "sum", False))
    assert [row[0].aggregate for row in table.cells] == [4.0, 5.0]


def test_pivot_with_columns_equals_crosstab():
    ds = make_dataset(
        g=["a", "a", "b", "b"], h=["x", "y", "x", "y"], v=[1, 2, 3, 4]
    )
    spec = build_spec("g", "h", "v", "sum", True)
    assert pivot_table(ds, spec) == crosstab(ds, spec)


def test_median_even_cell_is_mean_of_middles():
    ds = make_dataset(g=["a"] * 4, v=[1.0, 2.0, 10.0, 20.0])
    table = pivot_table(ds, build_spec("g", (), "v", "median", False))
    assert table.cells[0][0].aggregate == 6.0


def test_var_uses_sample_denominator_and_std_matches():
    values = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]
    ds = make_dataset(g=["a"] * len(values), v=values)
    var = pivot_table(ds, build_spec("g", (), "v", "var", False)).cells[0][0]
    std = pivot_table(ds, build_spec("g", (), "v", "std", False)).cells[0][0]
    n = len(values)
    mean = sum(values) / n
    expected = sum((v - mean) ** 2 for v in values) / (n - 1)
    assert math.isclose(var.aggregate, expected, rel_tol=1e-12)
    assert math.isclose(std.aggregate, math.sqrt(var.aggregate), rel_tol=1e-12)


def test_single_contributor_var_is_undefined():
    ds = make_dataset(g=["a"], v=[3.0])
    table = pivot_table(ds, build_spec("g", (), "v", "var", False))
    cell = table.cells[0][0]
    assert cell.count == 1 and cell.aggregate is None


# -- missing-value semantics -------------------------------------------------


def test_missing_index_rows_are_excluded():
    ds = make_dataset(g=["a", None, "b"], v=[1.0, 2.0, 3.0])
    table = pivot_table(ds, build_spec("g", (), "v", "sum", False))
    assert table.row_labels == (("a",), ("b",))
    assert [row[0].aggregate for row in table.cells] == [1.0, 3.0]


def test_missing_values_excluded_but_label_observed():
    # group "b" exists only through rows whose value is missing
    ds = make_dataset(g=["a", "a", "b"], v=[1.0, 2.0, None])
    table = pivot_table(ds, build_spec("g", (), "v", "mean", False))
    assert table.row_labels == (("a",), ("b",))
    b = table.cells[1][0]
    assert (b.count, b.contributions, b.aggregate) == (0, (), None)


def test_count_without_values_keeps_all_retained_rows():
    ds = make_dataset(g=["a", "a", "b"], v=[1.0, None, None])
    spec_count = build_spec("g", (), None, "count", False)
    table = pivot_table(ds, spec_count)
    assert [row[0].count for row in table.cells] == [2, 1]
    # with a values column, count follows the non-missing contributions
    spec_vcount = build_spec("g", (), "v", "count", False)
    table_v = pivot_table(ds, spec_vcount)
    assert [row[0].count for row in table_v.cells] == [1, 0]


def test_all_rows_missing_raises_empty_table():
    ds = make_dataset(g=[None, None], v=[1.0, 2.0])
    with pytest.raises(EmptyTableError):
        pivot_table(ds, build_spec("g", (), "v", "sum", False))


# -- labels and ordering -------------------------------------------------------


def test_numeric_labels_sort_numerically():
    ds = make_dataset(year=[10.0, 2.0, 1.0], v=[1, 2, 3])
    table = pivot_table(ds, build_spec("year", (), "v", "sum", False))
    assert table.row_labels == ((1.0,), (2.0,), (10.0,))


def test_string_labels_sort_lexicographically():
    ds = make_dataset(g=["R/G", "G", "R", "N"], v=[1, 2, 3, 4])
    table = pivot_table(ds, build_spec("g", (), "v", "sum", False))
    assert [lbl[0] for lbl in table.row_labels] == ["G", "N", "R", "R/G"]


def test_unobserved_combinations_get_empty_cells():
    ds = make_dataset(g=["a", "b"], h=["x", "y"], v=[1.0, 2.0])
    table = crosstab(ds, build_spec("g", "h", "v", "sum", False))
    assert table.cells[0][1].count == 0  # (a, y) never occurs
    assert table.cells[0][1].aggregate is None


def test_format_label_rendering():
    assert format_label((2010.0,)) == "2010"
    assert format_label((2.5,)) == "2.5"
    assert format_label(("G",)) == "G"
    assert format_label(("a", "b")) == "a|b"
    assert format_label(("All", "")) == "All"


# -- margins ---------------------------------------------------------------


def test_margin_labels_and_positions():
    ds = make_dataset(g=["a", "a", "b"], h=["x", "y", "x"], v=[1.0, 2.0, 4.0])
    table = crosstab(ds, build_spec("g", "h", "v", "sum", True))
    assert table.row_labels[-1] == ("All",)
    assert table.col_labels[-1] == ("All",)
    # grand total in the corner
    assert table.cells[-1][-1].aggregate == 7.0


def test_margin_contributions_are_the_union():
    rng = random.Random(99)
    g = [rng.choice("ab") for _ in range(40)]
    h = [rng.choice("xyz") for _ in range(40)]
    v = [round(rng.uniform(-5, 5), 3) for _ in range(40)]
    ds = make_dataset(g=g, h=h, v=v)
    table = crosstab(ds, build_spec("g", "h", "v", "sum", True))
    n_rows = len(table.row_labels)
    n_cols = len(table.col_labels)
    for i in range(n_rows - 1):
        interior = []
        for j in range(n_cols - 1):
            interior.extend(table.cells[i][j].contributions)
        margin = table.cells[i][n_cols - 1]
        assert sorted(interior) == sorted(margin.contributions)
    for j in range(n_cols - 1):
        interior = []
        for i in range(n_rows - 1):
            interior.extend(table.cells[i][j].contributions)
        margin = table.cells[n_rows - 1][j]
        assert sorted(interior) == sorted(margin.contributions)


def test_pivot_margin_without_columns():
    table = pivot_table(small_ds(), build_spec("g", (), "v", "sum", True))
    assert table.row_labels == (("a",), ("b",), ("All",))
    assert len(table.col_labels) == 1  # no margin column without column vars
    assert table.cells[-1][0].aggregate == 9.0


def test_multi_var_margin_labels_are_padded():
    ds = make_dataset(
        g=["a", "a", "b"], k=["p", "q", "p"], h=["x", "y", "x"], v=[1, 2, 3]
    )
    table = crosstab(ds, build_spec(("g", "k"), "h", "v", "sum", True))
    assert table.row_labels[-1] == ("All", "")


# -- randomised properties -----------------------------------------------------


def seeded_dataset(rng, n=200):
    g = [rng.choice(["a", "b", "c", None]) for _ in range(n)]
    h = [rng.choice(["x", "y", None]) for _ in range(n)]
    v = [
        None if rng.random() < 0.15 else round(rng.uniform(-100, 100), 4)
        for _ in range(n)
    ]
    return make_dataset(g=g, h=h, v=v), g, h, v


def test_cell_counts_sum_to_retained_rows():
    rng = random.Random(42)
    for _ in range(10):
        ds, g, h, v = seeded_dataset(rng)
        table = crosstab(ds, build_spec("g", "h", None, "count", False))
        retained = sum(
            1 for gi, hi in zip(g, h) if gi is not None and hi is not None
        )
        total = sum(cell.count for row in table.cells for cell in row)
        assert total == retained


def test_count_cells_match_brute_force_group_by():
    rng = random.Random(43)
    ds, g, h, v = seeded_dataset(rng)
    table = crosstab(ds, build_spec("g", "h", "v", "count", False))
    for i, rlab in enumerate(table.row_labels):
        for j, clab in enumerate(table.col_labels):
            expected = sum(
                1
                for gi, hi, vi in zip(g, h, v)
                if gi == rlab[0] and hi == clab[0] and vi is not None
            )
            assert table.cells[i][j].count == expected


def test_mean_equals_sum_over_count():
    rng = random.Random(44)
    ds, *_ = seeded_dataset(rng)
    mean_t = crosstab(ds, build_spec("g", "h", "v", "mean", True))
    sum_t = crosstab(ds, build_spec("g", "h", "v", "sum", True))
    for mrow, srow in zip(mean_t.cells, sum_t.cells):
        for mcell, scell in zip(mrow, srow):
            if mcell.count == 0:
                assert mcell.aggregate is None
                continue
            assert math.isclose(
                mcell.aggregate, scell.aggregate / mcell.count, rel_tol=1e-12
            )


def test_row_permutation_changes_nothing():
    rng = random.Random(45)
    ds, g, h, v = seeded_dataset(rng, n=120)
    spec = build_spec("g", "h", "v", "mean", True)
    base = crosstab(ds, spec)
    order = list(range(120))
    for _ in range(5):
        rng.shuffle(order)
        shuffled = make_dataset(
            g=[g[i] for i in order],
            h=[h[i] for i in order],
            v=[v[i] for i in order],
        )
        table = crosstab(shuffled, spec)
        assert table.row_labels == base.row_labels
        assert table.col_labels == base.col_labels
        for brow, trow in zip(base.cells, table.cells):
            for bcell, tcell in zip(brow, trow):
                assert bcell.count == tcell.count
                assert bcell.aggregate == tcell.aggregate  # bit-for-bit
                assert sorted(bcell.contributions) == sorted(tcell.contributions)


def test_aggregate_defined_iff_nonempty():
    rng = random.Random(46)
    ds, *_ = seeded_dataset(rng)
    for aggfunc in ("count", "sum", "mean", "median"):
        values = "v" if aggfunc != "count" else None
        table = crosstab(ds, build_spec("g", "h", values, aggfunc, True))
        for row in table.cells:
            for cell in row:
                assert (cell.aggregate is None) == (cell.count == 0)
