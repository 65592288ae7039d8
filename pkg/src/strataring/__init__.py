"""Boundary level graphs and tautological-ring calculations for strata of
abelian differentials, in exact rational arithmetic."""

from .clutching import clutch
from .embedded import EmbeddedLevelGraph
from .errors import OracleMiss
from .evaluation import (
    DEFAULT_CACHE,
    adm_key,
    dict_key,
    print_adm_evals,
    print_top_xis,
    set_cache_dir,
)
from .euler import euler_characteristic, info_string
from .levelgraph import LevelGraph
from .sig import Signature
from .stratum import GeneralisedStratum, LevelStratum, Stratum
from .tautclass import AdditiveGenerator, TautClass
from .tautring import UNIT

__all__ = [
    "AdditiveGenerator",
    "DEFAULT_CACHE",
    "EmbeddedLevelGraph",
    "GeneralisedStratum",
    "LevelGraph",
    "LevelStratum",
    "OracleMiss",
    "Signature",
    "Stratum",
    "TautClass",
    "UNIT",
    "adm_key",
    "clutch",
    "dict_key",
    "euler_characteristic",
    "info_string",
    "print_adm_evals",
    "print_top_xis",
    "set_cache_dir",
]
