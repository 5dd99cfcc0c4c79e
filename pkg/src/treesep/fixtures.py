"""Seeded random automata and terms for property suites."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .automaton import TreeAutomaton
from .errors import TreesepError
from .terms import Const, Node, Signature, Term, Var


class InfeasibleParams(TreesepError):
    pass


@dataclass(frozen=True)
class FixtureParams:
    num_states: int = 3
    num_constants: int = 3
    ops: tuple[tuple[str, int], ...] = (("f", 1), ("g", 2))
    num_vars: int = 4
    max_depth: int = 3
    max_table: int = 10_000  # cap on |Q|**arity per operator

    def check(self):
        if self.num_states < 1:
            raise InfeasibleParams("need at least one state")
        if self.num_constants < 1:
            raise InfeasibleParams("need at least one constant")
        if self.num_vars < 0 or self.max_depth < 0:
            raise InfeasibleParams("num_vars and max_depth must be non-negative")
        for name, k in self.ops:
            if k < 1:
                raise InfeasibleParams(f"operator {name} needs arity >= 1")
            if self.num_states**k > self.max_table:
                raise InfeasibleParams(f"transition table for {name}/{k} exceeds {self.max_table} rows")
        if self.max_depth > 0 and not self.ops:
            raise InfeasibleParams("max_depth > 0 needs at least one operator")


def random_automaton(rng: random.Random, params: FixtureParams) -> TreeAutomaton:
    params.check()
    states = tuple(f"q{i}" for i in range(params.num_states))
    sig = Signature(tuple(f"c{i}" for i in range(params.num_constants)), params.ops)
    finals = frozenset(q for q in states if rng.random() < 0.5)
    delta0 = {c: rng.choice(states) for c in sig.constants}
    delta = {
        f: {qs: rng.choice(states) for qs in itertools.product(states, repeat=k)}
        for f, k in sig.operators
    }
    return TreeAutomaton(sig, states, finals, delta0, delta)


def random_term(rng: random.Random, sig: Signature, num_vars: int, max_depth: int, leaf_prob: float = 0.3) -> Term:
    variables = [f"x{i}" for i in range(1, num_vars + 1)]

    def leaf():
        if variables and rng.random() < 0.75:
            return Var(rng.choice(variables))
        return Const(rng.choice(sig.constants))

    def grow(d):
        if d == 0 or not sig.operators or rng.random() < leaf_prob:
            return leaf()
        f, k = rng.choice(sig.operators)
        return Node(f, tuple(grow(d - 1) for _ in range(k)))

    if max_depth > 0 and sig.operators:
        f, k = rng.choice(sig.operators)
        return Node(f, tuple(grow(max_depth - 1) for _ in range(k)))
    return leaf()


def gen_fixture(seed: int, params: FixtureParams = FixtureParams()) -> tuple[TreeAutomaton, Term]:
    """Same seed and params give the same automaton and term."""
    params.check()
    rng = random.Random(seed)
    a = random_automaton(rng, params)
    return a, random_term(rng, a.signature, params.num_vars, params.max_depth)


def random_params(rng: random.Random) -> FixtureParams:
    """Small parameter sets: |Q|, |F0| <= 3, at most two operators of arity <= 3,
    at most four variables, depth <= 3."""
    n_ops = rng.randint(1, 2)
    ops = tuple((name, rng.randint(1, 3)) for name in ("f", "g")[:n_ops])
    return FixtureParams(
        num_states=rng.randint(1, 3),
        num_constants=rng.randint(1, 3),
        ops=ops,
        num_vars=rng.randint(1, 4),
        max_depth=rng.randint(1, 3),
    )


def fixture_suite(count: int, seed: int = 0):
    """``count`` fixtures with varied parameters, deterministic in ``seed``."""
    rng = random.Random(seed)
    for _ in range(count):
        params = random_params(rng)
        yield gen_fixture(rng.randrange(2**32), params)
