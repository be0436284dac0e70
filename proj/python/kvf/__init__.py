"""Knowing-value and knowing-dependency logic toolkit.

Models, knowledge bases and proofs are plain dicts in the same JSON layout
the ``kvf`` command line tool reads.
"""

import json

from . import _core
from ._core import BudgetExceeded, FormulaSyntaxError, JsonError, KvfError, ValidationError

__all__ = [
    "BudgetExceeded",
    "FormulaSyntaxError",
    "JsonError",
    "KvfError",
    "ValidationError",
    "check",
    "closure",
    "countermodel",
    "format_formula",
    "lattice",
    "prove",
    "sat",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def format_formula(text, signature=None):
    """Canonical text of a formula. The signature is inferred when omitted."""
    return _core.format_formula(text, _dump(signature) if signature is not None else "")


def check(model, formula):
    """Truth of ``formula`` at every world: ``{"formula", "worlds", "holds"}``."""
    return json.loads(_core.check(_dump(model), formula))


def sat(kb, regime=None, seed=0, proof=False):
    """Decide a literal knowledge base.

    Consistent results carry the witness under ``"model"``; inconsistent ones
    carry the refutation under ``"trace"``. With ``proof=True`` the replayed
    Hilbert-style derivation is added under ``"proof"``.
    """
    return json.loads(_core.sat(_dump(kb), regime or "", seed, proof))


def closure(kb, variables, agent=1):
    return json.loads(_core.closure(_dump(kb), list(variables), agent))


def lattice(kb, agent=1):
    return json.loads(_core.lattice(_dump(kb), agent))


def prove(proof):
    return json.loads(_core.prove(_dump(proof)))


def countermodel(formula, regime="full", sharing="independent", max_worlds=3, max_values=3):
    return json.loads(_core.countermodel(formula, regime, sharing, max_worlds, max_values))
