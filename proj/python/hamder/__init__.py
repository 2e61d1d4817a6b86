"""Hamiltonian and Witt Lie superalgebras over F_p: brackets, checks and derivation classification."""

import json

from ._core import (
    Algebra as _Algebra,
    BudgetExceeded,
    ExprError,
    MatchError,
    NotApplicable,
    ParamError,
    check_ids,
    _run_check_json,
)

__all__ = [
    "Algebra",
    "BudgetExceeded",
    "ExprError",
    "MatchError",
    "NotApplicable",
    "ParamError",
    "check_ids",
    "run_check",
]


class Algebra(_Algebra):
    def dims(self):
        return json.loads(self._dims_json())

    def classify(self, spec):
        """Classify a derivation given as a map description (dict or JSON text)."""
        text = spec if isinstance(spec, str) else json.dumps(spec)
        return json.loads(self._classify_json(text))


def run_check(name, p=5, m=2, n=4, t=None, relaxed=False, seed=0xC0FFEE, samples=1_000_000, cap=6,
              budget=4_000_000, timing=False):
    """Run a named check and return its report as a dict."""
    return json.loads(_run_check_json(name, p, m, n, t, relaxed, seed, samples, cap, budget, timing))
