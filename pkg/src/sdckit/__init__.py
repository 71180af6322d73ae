"""Disclosure-controlled tabulation and regression over confidential microdata.

The workflow: load a CSV, request tables or model fits, let the rules
decide cell by cell what is safe, record every output in a session, and
finally release the whole session as one auditable bundle.
"""

from .config import RuleConfig, default_config, load_config, resolve_config
from .dataset import Column, Dataset, load_csv, write_csv
from .errors import (
    ConfigError,
    DatasetError,
    EmptyTableError,
    FormulaError,
    ProhibitionError,
    RankDeficiencyError,
    RegressionError,
    SdcError,
    SeparationError,
    SessionError,
    SessionLockError,
    TableError,
    TypeMismatchError,
    UnknownColumnError,
    UnknownOutputError,
)
from .formula import parse_formula
from .regression import (
    DesignMatrix,
    RegressionResult,
    check_dof,
    fit_logit,
    fit_model,
    fit_ols,
    fit_probit,
)
from .rules import (
    RULE_NAMES,
    SUPPRESSED,
    CheckedTable,
    apply_checks,
    check_nk,
    check_p_ratio,
    check_threshold,
)
from .session import Session, load_session, new_session, save_session
from .tabulation import (
    Cell,
    RawTable,
    TableSpec,
    build_spec,
    crosstab,
    pivot_table,
    tabulate,
)

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "CheckedTable",
    "Column",
    "ConfigError",
    "Dataset",
    "DatasetError",
    "DesignMatrix",
    "EmptyTableError",
    "FormulaError",
    "ProhibitionError",
    "RULE_NAMES",
    "RankDeficiencyError",
    "RawTable",
    "RegressionError",
    "RegressionResult",
    "RuleConfig",
    "SUPPRESSED",
    "SdcError",
    "SeparationError",
    "Session",
    "SessionError",
    "SessionLockError",
    "TableError",
    "TableSpec",
    "TypeMismatchError",
    "UnknownColumnError",
    "UnknownOutputError",
    "apply_checks",
    "build_spec",
    "check_dof",
    "check_nk",
    "check_p_ratio",
    "check_threshold",
    "crosstab",
    "default_config",
    "fit_logit",
    "fit_model",
    "fit_ols",
    "fit_probit",
    "load_config",
    "load_csv",
    "load_session",
    "new_session",
    "parse_formula",
    "pivot_table",
    "resolve_config",
    "save_session",
    "tabulate",
    "write_csv",
]
