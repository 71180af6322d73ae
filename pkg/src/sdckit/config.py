"""Risk-appetite configuration: thresholds that decide what is safe to release.

The five knobs mirror the rule parameters used throughout :mod:`sdckit.rules`
and :mod:`sdckit.regression`.  They are deliberately kept in one frozen
dataclass so that a whole analysis session can be pinned to a single,
auditable set of numbers.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, fields

import yaml

from .errors import ConfigError

#: Environment variable consulted when no explicit config path is given.
CONFIG_ENV_VAR = "SDC_CONFIG"

# Key order used when serialising a config; also the canonical display order.
_KEY_ORDER = (
    "safe_threshold",
    "safe_dof_threshold",
    "safe_nk_n",
    "safe_nk_k",
    "safe_pratio_p",
)


@dataclass(frozen=True)
class RuleConfig:
    """The full risk appetite for one session.

    safe_threshold
        Minimum number of contributors a cell needs to be releasable.
    safe_dof_threshold
        Minimum residual degrees of freedom for a releasable model fit.
    safe_nk_n
        N in the dominance rule: how many largest contributors are pooled.
    safe_nk_k
        K in the dominance rule: the pooled share of the cell total that
        the largest N contributors may not reach.
    safe_pratio_p
        p in the concentration ratio rule: the remainder of the cell
        (everything below the top three contributors) must be at least
        p times the single largest contribution.
    """

    safe_threshold: float = 10.0
    safe_dof_threshold: float = 10.0
    safe_nk_n: float = 2.0
    safe_nk_k: float = 0.9
    safe_pratio_p: float = 0.1

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{f.name} must be a number, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise ConfigError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, value)
        if self.safe_threshold < 1:
            raise ConfigError(
                f"safe_threshold must be at least 1, got {self.safe_threshold}"
            )
        if self.safe_dof_threshold < 1:
            raise ConfigError(
                "safe_dof_threshold must be at least 1, "
                f"got {self.safe_dof_threshold}"
            )
        if self.safe_nk_n < 1 or self.safe_nk_n != int(self.safe_nk_n):
            raise ConfigError(
                f"safe_nk_n must be a whole number of at least 1, got {self.safe_nk_n}"
            )
        if not 0.0 < self.safe_nk_k < 1.0:
            raise ConfigError(
                f"safe_nk_k must lie strictly between 0 and 1, got {self.safe_nk_k}"
            )
        if self.safe_pratio_p <= 0.0:
            raise ConfigError(
                f"safe_pratio_p must be positive, got {self.safe_pratio_p}"
            )

    @property
    def nk_n(self) -> int:
        """The dominance-rule N as an integer, for slicing."""
        return int(self.safe_nk_n)

    def as_dict(self) -> dict:
        """Plain dict in canonical key order (for serialisation)."""
        return {key: getattr(self, key) for key in _KEY_ORDER}


def default_config() -> RuleConfig:
    return RuleConfig()


def load_config(path: str | None) -> RuleConfig:
    """Read a YAML risk-appetite file; ``None`` yields the defaults.

    Unknown keys are tolerated with a warning so that one file can serve
    several tool versions; wrong types are hard errors.
    """
    if path is None:
        return default_config()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config file {path!r}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(
            f"config file {path!r} must hold a mapping, got {type(raw).__name__}"
        )
    known = set(_KEY_ORDER)
    values = {}
    for key, value in raw.items():
        if key not in known:
            warnings.warn(f"ignoring unknown config key {key!r} in {path!r}")
            continue
        values[key] = value
    return RuleConfig(**values)


def write_config(config: RuleConfig, path: str) -> None:
    """Write a config as YAML, keys in canonical order."""
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(config.as_dict(), fh, sort_keys=False)


def resolve_config(path: str | None = None) -> RuleConfig:
    """Resolution order: explicit path, then $SDC_CONFIG, then defaults."""
    if path is not None:
        return load_config(path)
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        return load_config(env_path)
    return default_config()
