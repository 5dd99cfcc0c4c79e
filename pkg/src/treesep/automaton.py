"""Deterministic complete bottom-up tree automata.

Runs are evaluated two ways. ``run`` walks one term under one assignment.
``state_table`` evaluates a term under *every* assignment of a variable list
at once, as a numpy array indexed by constant positions (C order, so the
flat index order is the lexicographic assignment order: variables in
natural order, constants in declaration order). Everything that quantifies
over assignments is built on the table.
"""

from __future__ import annotations

import itertools
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

import numpy as np

from .errors import BudgetExceededError, SignatureError, UnboundVariableError, ValidationError
from .terms import Assignment, Const, Node, Signature, Term, Var, postorder, sorted_vars, var_set

DEFAULT_BUDGET = 10**6
_budget = int(os.environ.get("TREESEP_BUDGET", DEFAULT_BUDGET))


def get_budget() -> int:
    return _budget


def set_budget(n: int) -> None:
    global _budget
    if n < 1:
        raise ValueError("budget must be positive")
    _budget = int(n)


@contextmanager
def budget(n: int):
    old = get_budget()
    set_budget(n)
    try:
        yield
    finally:
        set_budget(old)


def check_budget(n_constants: int, n_vars: int) -> int:
    needed = n_constants**n_vars
    if needed > _budget:
        raise BudgetExceededError(needed, _budget)
    return needed


@dataclass(frozen=True)
class TreeAutomaton:
    signature: Signature
    states: tuple[str, ...]
    finals: frozenset[str]
    delta0: Mapping[str, str]
    delta: Mapping[str, Mapping[tuple[str, ...], str]]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "delta0", dict(self.delta0))
        object.__setattr__(self, "delta", {f: dict(rules) for f, rules in self.delta.items()})

    def _tables(self):
        """Index-based transition arrays, built once per (valid) automaton."""
        tables = self._cache.get("tables")
        if tables is None:
            problems = validate(self)
            if problems:
                raise ValidationError(problems)
            index = {q: i for i, q in enumerate(self.states)}
            d0 = {c: index[self.delta0[c]] for c in self.signature.constants}
            dk = {}
            nq = len(self.states)
            for f, k in self.signature.operators:
                arr = np.empty((nq,) * k, dtype=np.int64)
                for qs, q in self.delta[f].items():
                    arr[tuple(index[p] for p in qs)] = index[q]
                dk[f] = arr
            tables = (index, d0, dk)
            self._cache["tables"] = tables
        return tables


@dataclass(frozen=True)
class RunResult:
    state: str
    per_subterm: dict  # occurrence path -> state


def validate(a: TreeAutomaton) -> list[str]:
    """Every violation of completeness/state-declaration rules; empty when valid."""
    problems = []
    sig = a.signature
    declared = set(a.states)
    if not sig.constants:
        problems.append("empty F0: no constants declared")
    if len(declared) != len(a.states):
        problems.append("duplicate state names")
    if not a.states:
        problems.append("no states declared")
    for q in sorted(a.finals - declared):
        problems.append(f"unknown state {q} in final states")
    for c in sig.constants:
        if c not in a.delta0:
            problems.append(f"incomplete: {c}")
        elif a.delta0[c] not in declared:
            problems.append(f"unknown state {a.delta0[c]} in rule {c} -> {a.delta0[c]}")
    for c in a.delta0:
        if not sig.is_constant(c):
            problems.append(f"rule for undeclared constant {c}")
    for f, k in sig.operators:
        rules = a.delta.get(f, {})
        for qs, q in rules.items():
            if len(qs) != k:
                problems.append(f"rule {f}({','.join(qs)}) has wrong arity (expected {k})")
            for p in (*qs, q):
                if p not in declared:
                    problems.append(f"unknown state {p} in rule {f}({','.join(qs)}) -> {q}")
        for qs in itertools.product(a.states, repeat=k):
            if qs not in rules:
                problems.append(f"incomplete: {f} at ({','.join(qs)})")
    for f in a.delta:
        if not sig.arity(f):
            problems.append(f"rules for undeclared operator {f}")
    return problems


def run(a: TreeAutomaton, gamma: Assignment, t: Term) -> RunResult:
    """Evaluate ``t`` bottom-up under ``gamma``, recording the state of every occurrence."""
    sig = a.signature
    states = {}
    for path, u in postorder(t):
        if isinstance(u, Var):
            if u.name not in gamma:
                raise UnboundVariableError(f"variable {u.name} is not bound by the assignment")
            c = gamma[u.name]
            if not sig.is_constant(c):
                raise SignatureError(f"{u.name} bound to undeclared constant {c!r}")
            q = a.delta0[c]
        elif isinstance(u, Const):
            if not sig.is_constant(u.symbol):
                raise SignatureError(f"unknown constant {u.symbol!r}")
            q = a.delta0[u.symbol]
        else:
            if sig.arity(u.op) != len(u.args):
                raise SignatureError(f"operator {u.op!r} is undeclared or misapplied")
            q = a.delta[u.op][tuple(states[path + (i,)] for i in range(len(u.args)))]
        states[path] = q
    return RunResult(states[()], states)


def evaluate(a: TreeAutomaton, gamma: Assignment, t: Term) -> str:
    return run(a, gamma, t).state


def assignments(variables, constants) -> Iterator[dict[str, str]]:
    """Ass(variables, constants) in lexicographic order, subject to the budget."""
    variables = tuple(variables)
    check_budget(len(constants), len(variables))
    for values in itertools.product(constants, repeat=len(variables)):
        yield dict(zip(variables, values))


def assignment_at(variables, constants, index) -> dict[str, str]:
    return {x: constants[i] for x, i in zip(variables, index)}


def state_table(a: TreeAutomaton, t: Term, variables=None) -> np.ndarray:
    """State indices of ``t`` under every assignment of ``variables``.

    ``variables`` defaults to var_set(t) in natural order and must cover it.
    Axis i of the result ranges over the constants bound to variables[i].
    """
    index, d0, dk = a._tables()
    sig = a.signature
    if variables is None:
        variables = sorted_vars(var_set(t))
    variables = tuple(variables)
    n = len(sig.constants)
    check_budget(n, len(variables))
    axis = {x: i for i, x in enumerate(variables)}
    leaf_states = np.array([d0[c] for c in sig.constants], dtype=np.int64)
    memo = {}

    def table(u):
        hit = memo.get(u)
        if hit is not None:
            return hit
        if isinstance(u, Var):
            if u.name not in axis:
                raise UnboundVariableError(f"variable {u.name} is not among {variables}")
            shape = [1] * len(variables)
            shape[axis[u.name]] = n
            out = leaf_states.reshape(shape)
        elif isinstance(u, Const):
            if u.symbol not in d0:
                raise SignatureError(f"unknown constant {u.symbol!r}")
            out = np.array(d0[u.symbol], dtype=np.int64)
        else:
            if sig.arity(u.op) != len(u.args):
                raise SignatureError(f"operator {u.op!r} is undeclared or misapplied")
            out = dk[u.op][tuple(table(c) for c in u.args)]
        memo[u] = out
        return out

    return np.broadcast_to(table(t), (n,) * len(variables))


def state_set(a: TreeAutomaton, t: Term) -> frozenset[str]:
    """St(t, A): every state some assignment of var_set(t) drives ``t`` into."""
    return frozenset(a.states[i] for i in np.unique(state_table(a, t)))


def st(a: TreeAutomaton, t: Term) -> int:
    return len(state_set(a, t))


def compositional_state_set(a: TreeAutomaton, t: Term) -> frozenset[str]:
    """Over-approximation of St(t, A) treating sibling subterms as independent."""
    if isinstance(t, Var):
        return frozenset(a.delta0.values())
    if isinstance(t, Const):
        return frozenset({a.delta0[t.symbol]})
    kids = [sorted(compositional_state_set(a, c)) for c in t.args]
    return frozenset(a.delta[t.op][qs] for qs in itertools.product(*kids))


def acceptance_witness(a: TreeAutomaton, t: Term) -> Optional[dict[str, str]]:
    """Lexicographically first assignment under which ``t`` reaches a final state."""
    index, _, _ = a._tables()
    variables = sorted_vars(var_set(t))
    tab = state_table(a, t, variables)
    finals = [index[q] for q in a.finals]
    hits = np.flatnonzero(np.isin(tab, finals))
    if hits.size == 0:
        return None
    pos = np.unravel_index(hits[0], tab.shape) if variables else ()
    return assignment_at(variables, a.signature.constants, pos)


def accepts(a: TreeAutomaton, t: Term) -> bool:
    return acceptance_witness(a, t) is not None


def is_constant_surjective(a: TreeAutomaton) -> bool:
    return set(a.delta0.values()) >= set(a.states)
