"""Call-by-need semantics workbench."""
import json

from ._core import (InvariantFault, ParseError, alpha_eq, classify, eval, gen, parse,
                    reduce)
from ._core import check as _check


def check(source, mode="letrec", audit=False):
    return [json.loads(v) for v in _check(source, mode, audit)]


__all__ = ["InvariantFault", "ParseError", "alpha_eq", "check", "classify", "eval", "gen",
           "parse", "reduce"]
