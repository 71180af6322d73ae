import numpy as np
import pytest

from sdckit import (
    FormulaError,
    RegressionError,
    TypeMismatchError,
    UnknownColumnError,
    parse_formula,
)

from conftest import make_dataset


def basic_ds():
    return make_dataset(
        y=[1.0, 2.0, 3.0, 4.0],
        x=[0.0, 1.0, 2.0, 3.0],
        g=["a", "b", "c", "b"],
    )


def test_numeric_term():
    dm = parse_formula("y ~ x", basic_ds())
    assert dm.column_names == ("intercept", "x")
    assert dm.has_intercept
    assert np.array_equal(dm.predictors[:, 0], np.ones(4))
    assert np.array_equal(dm.predictors[:, 1], [0.0, 1.0, 2.0, 3.0])
    assert np.array_equal(dm.response, [1.0, 2.0, 3.0, 4.0])


def test_categorical_term_drops_first_level():
    dm = parse_formula("y ~ g", basic_ds())
    assert dm.column_names == ("intercept", "g=b", "g=c")
    assert np.array_equal(dm.predictors[:, 1], [0.0, 1.0, 0.0, 1.0])
    assert np.array_equal(dm.predictors[:, 2], [0.0, 0.0, 1.0, 0.0])


def test_no_intercept_suffix():
    dm = parse_formula("y ~ x - 1", basic_ds())
    assert dm.column_names == ("x",)
    assert not dm.has_intercept


def test_whitespace_is_insignificant():
    a = parse_formula("y~x+g", basic_ds())
    b = parse_formula("  y ~ x  +  g ", basic_ds())
    assert a.column_names == b.column_names
    assert np.array_equal(a.predictors, b.predictors)


def test_multiple_terms():
    dm = parse_formula("y ~ x + g", basic_ds())
    assert dm.column_names == ("intercept", "x", "g=b", "g=c")


def test_missing_rows_dropped():
    ds = make_dataset(
        y=[1.0, None, 3.0, 4.0],
        x=[0.0, 1.0, None, 3.0],
    )
    dm = parse_formula("y ~ x", ds)
    assert dm.n_obs == 2
    assert np.array_equal(dm.response, [1.0, 4.0])
    assert np.array_equal(dm.predictors[:, 1], [0.0, 3.0])


def test_levels_are_those_observed_after_drops():
    ds = make_dataset(
        y=[1.0, None, 3.0],
        g=["a", "zed", "b"],
    )
    dm = parse_formula("y ~ g", ds)
    # "zed" only occurs on a dropped row, so it contributes no column
    assert dm.column_names == ("intercept", "g=b")


@pytest.mark.parametrize(
    "text,pos",
    [
        ("~ x", 0),
        ("y x", 2),
        ("y ~", 3),
        ("y ~ +", 4),
        ("y ~ x +", 7),
        ("y ~ x - 2", 8),
        ("y ~ x - 1 + g", 10),
        ("y ~ x ~ g", 6),
        ("y ~ x * g", 6),
        ("y ~ 1", 4),
    ],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(FormulaError) as exc_info:
        parse_formula(text, basic_ds())
    assert exc_info.value.position == pos
    assert f"position {pos}" in str(exc_info.value)


def test_duplicate_term_rejected():
    with pytest.raises(FormulaError, match="duplicate"):
        parse_formula("y ~ x + x", basic_ds())


def test_unknown_column():
    with pytest.raises(UnknownColumnError, match="ghost"):
        parse_formula("y ~ ghost", basic_ds())


def test_unknown_response():
    with pytest.raises(UnknownColumnError):
        parse_formula("ghost ~ x", basic_ds())


def test_categorical_response_rejected():
    with pytest.raises(TypeMismatchError, match="'g'"):
        parse_formula("g ~ x", basic_ds())


def test_all_rows_missing_is_an_error():
    ds = make_dataset(y=[None, None], x=[1.0, 2.0])
    with pytest.raises(RegressionError):
        parse_formula("y ~ x", ds)
