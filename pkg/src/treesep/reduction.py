"""Run-preserving tree reduction, the run complexity measure, and
assignment-dispatch plans that split runs by the values of a few variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .analysis import essential_set
from .automaton import TreeAutomaton, assignments, evaluate, st, state_table
from .errors import PreconditionError, UnboundVariableError
from .terms import (
    Assignment,
    Const,
    Node,
    Term,
    Var,
    apply_assignment,
    postorder,
    replace_subterm,
    size,
    sorted_vars,
    var_set,
)


def equivalent_terms(a: TreeAutomaton, t1: Term, t2: Term) -> bool:
    """Same state under every assignment of the variables of both terms."""
    variables = sorted_vars(var_set(t1) | var_set(t2))
    return bool(np.array_equal(state_table(a, t1, variables), state_table(a, t2, variables)))


def fictive_steps(a: TreeAutomaton, t: Term):
    """Yield successive terms, each replacing one fictive variable by the canonical constant."""
    c = Const(a.signature.canonical_constant)
    while True:
        fictive = sorted_vars(var_set(t) - essential_set(a, t))
        if not fictive:
            return
        t = replace_subterm(t, Var(fictive[0]), c)
        yield t


def eliminate_fictive(a: TreeAutomaton, t: Term) -> Term:
    for t in fictive_steps(a, t):
        pass
    return t


def _collapse_candidates(t: Term):
    """(outer, inner) pairs in scan order: outer subterms in post-order,
    inner proper subterms of each by size, ties broken by post-order."""
    seen = set()
    for _, outer in postorder(t):
        if not isinstance(outer, Node) or outer in seen:
            continue
        seen.add(outer)
        inner = {}
        for rank, (path, u) in enumerate(postorder(outer)):
            if path and u not in inner:
                inner[u] = rank
        for u in sorted(inner, key=lambda u: (size(u), inner[u])):
            yield outer, u


def collapse_step(a: TreeAutomaton, t: Term) -> Optional[Term]:
    """Replace the first subterm that is run-equivalent to one of its own
    proper subterms by that subterm; None when no such pair exists."""
    for outer, inner in _collapse_candidates(t):
        if equivalent_terms(a, inner, outer):
            return replace_subterm(t, outer, inner)
    return None


def reduction_trace(a: TreeAutomaton, t: Term) -> list[tuple[str, Term]]:
    """Every single-step rewrite taken by ``simplify``, as ``(kind, term)`` pairs."""
    steps = []
    while True:
        for t in fictive_steps(a, t):
            steps.append(("fictive", t))
        nxt = collapse_step(a, t)
        if nxt is None:
            return steps
        t = nxt
        steps.append(("collapse", t))


def simplify(a: TreeAutomaton, t: Term) -> Term:
    """Normal form under fictive elimination followed by subterm collapse."""
    trace = reduction_trace(a, t)
    return trace[-1][1] if trace else t


def complexity_table(a: TreeAutomaton, t: Term) -> dict[Term, tuple[int, int]]:
    """``{subterm: (st, Comp)}`` for every distinct subterm of ``t``."""
    out: dict[Term, tuple[int, int]] = {}
    n_leaf = sum(st(a, Const(c)) for c in a.signature.constants)
    for _, u in postorder(t):
        if u in out:
            continue
        if isinstance(u, Var):
            comp = n_leaf
        elif isinstance(u, Const):
            comp = st(a, u)
        else:
            prod = 1
            for c in u.args:
                prod *= out[c][0]
            comp = prod + sum(out[c][1] for c in u.args)
        out[u] = (st(a, u), comp)
    return out


def complexity(a: TreeAutomaton, t: Term) -> int:
    """Comp(t, A): transition evaluations needed to run ``t`` under all assignments."""
    return complexity_table(a, t)[t][1]


def linear_dispatch_cost(n_vars: int, n_constants: int) -> int:
    """One comparison per constant per dispatch variable."""
    return n_vars * n_constants


@dataclass
class DistributionPlan:
    term: Term
    dispatch_vars: tuple[str, ...]
    classes: dict[tuple[str, ...], Term]
    per_class_cost: dict[tuple[str, ...], int]
    dispatch_cost: int
    original_cost: int = field(default=0)

    @property
    def worst_case_cost(self) -> int:
        return self.dispatch_cost + max(self.per_class_cost.values())

    def class_of(self, gamma: Assignment) -> tuple[str, ...]:
        missing = [x for x in self.dispatch_vars if x not in gamma]
        if missing:
            raise UnboundVariableError(f"dispatch variables {missing} are not bound")
        return tuple(gamma[x] for x in self.dispatch_vars)


def distribution_plan(
    a: TreeAutomaton,
    t: Term,
    Z,
    dispatch_cost: Callable[[int, int], int] = linear_dispatch_cost,
) -> DistributionPlan:
    """Pre-simplify ``t`` once per assignment of the dispatch variables ``Z``."""
    Z = sorted_vars(set(Z))
    missing = set(Z) - var_set(t)
    if missing:
        raise PreconditionError(f"dispatch variables {sorted_vars(missing)} do not occur in the term")
    consts = a.signature.constants
    classes, costs = {}, {}
    for delta in assignments(Z, consts):
        key = tuple(delta[x] for x in Z)
        residual = simplify(a, apply_assignment(delta, t))
        classes[key] = residual
        costs[key] = complexity(a, residual)
    return DistributionPlan(
        term=t,
        dispatch_vars=Z,
        classes=classes,
        per_class_cost=costs,
        dispatch_cost=dispatch_cost(len(Z), len(consts)) if Z else 0,
        original_cost=complexity(a, t),
    )


def evaluate_plan(plan: DistributionPlan, a: TreeAutomaton, gamma: Assignment) -> str:
    """Select the class from the dispatch variables, then run its residual tree."""
    missing = var_set(plan.term) - set(gamma)
    if missing:
        raise UnboundVariableError(f"variables {sorted_vars(missing)} are not bound")
    return evaluate(a, gamma, plan.classes[plan.class_of(gamma)])
