"""Certified bounds on Krohn-Rhodes complexity of finite semigroups."""
from krc.core import (
    AlgebraError,
    BudgetExceeded,
    FiniteSemigroup,
    KRCError,
    ParseError,
    TransformationSemigroup,
    builtin,
    classify,
    generate_ts,
    green,
    is_aperiodic,
    parse_semigroup,
    parse_tgen,
    right_regular,
    standard_semigroup,
)

__version__ = "0.1.0"
