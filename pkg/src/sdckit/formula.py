"""Model formulas: ``response ~ term + term`` with optional ``- 1``.

The grammar is deliberately tiny — additive terms only.  Categorical
terms expand into indicator columns over their observed levels, dropping
the first level in sort order so the design stays full rank alongside an
intercept.  ``- 1`` at the end removes the intercept.
"""

from __future__ import annotations

import re

import numpy as np

from .dataset import Dataset, column
from .errors import FormulaError, TypeMismatchError
from .regression import DesignMatrix

_TOKEN_RE = re.compile(
    r"(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<one>1)|(?P<op>[~+\-])"
)

INTERCEPT_NAME = "intercept"


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise FormulaError(
                f"unexpected character {text[pos]!r}", position=pos
            )
        kind = match.lastgroup
        tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, what):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            got = repr(tok[1]) if tok[0] != "end" else "end of formula"
            raise FormulaError(f"expected {what}, got {got}", position=tok[2])
        self.i += 1
        return tok

    def parse(self):
        response = self.take("name", "a response column name")[1]
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "~":
            self.i += 1
        else:
            raise FormulaError("expected '~' after the response", position=tok[2])
        terms = [self.take("name", "a column name")[1]]
        intercept = True
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "+":
                self.i += 1
                terms.append(self.take("name", "a column name")[1])
                continue
            if tok[0] == "op" and tok[1] == "-":
                self.i += 1
                self.take("one", "'1' after '-'")
                intercept = False
            break
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaError(
                f"unexpected trailing input {tok[1]!r}", position=tok[2]
            )
        seen = set()
        for term in terms:
            if term in seen:
                raise FormulaError(f"duplicate term {term!r}")
            seen.add(term)
        return response, tuple(terms), intercept


def parse_formula(text: str, ds: Dataset) -> DesignMatrix:
    """Turn a formula plus a dataset into a ready-to-fit design matrix.

    Rows with a missing value in any referenced column are dropped before
    the matrix is built.
    """
    response_name, term_names, intercept = _Parser(text).parse()

    response_col = column(ds, response_name)
    if response_col.kind != "numeric":
        raise TypeMismatchError(
            f"response column {response_name!r} is categorical; "
            "pick a numeric response"
        )
    term_cols = [column(ds, name) for name in term_names]

    referenced = [response_col] + term_cols
    keep = [
        i
        for i in range(ds.row_count)
        if all(c.values[i] is not None for c in referenced)
    ]

    y = np.array([response_col.values[i] for i in keep], dtype=float)

    names = []
    columns = []
    if intercept:
        names.append(INTERCEPT_NAME)
        columns.append(np.ones(len(keep)))
    for col in term_cols:
        if col.kind == "numeric":
            names.append(col.name)
            columns.append(np.array([col.values[i] for i in keep], dtype=float))
        else:
            levels = sorted({col.values[i] for i in keep})
            # first level in sort order is the reference category
            for level in levels[1:]:
                names.append(f"{col.name}={level}")
                columns.append(
                    np.array(
                        [1.0 if col.values[i] == level else 0.0 for i in keep]
                    )
                )

    X = np.column_stack(columns) if columns else np.empty((len(keep), 0))
    return DesignMatrix(
        response=y,
        predictors=X,
        column_names=tuple(names),
        has_intercept=intercept,
    )
