"""Essential variables, separable sets, distributive families and
representative systems, all decided by exhaustive enumeration."""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

import numpy as np

from .automaton import TreeAutomaton, assignment_at, assignments, state_table
from .errors import PreconditionError
from .terms import Term, Var, apply_assignment, sorted_vars, strong_chains, var_key, var_set


def canonical_key(s: Iterable[str]):
    """Order sets by cardinality, then lexicographically in natural variable order."""
    members = tuple(sorted(s, key=var_key))
    return (len(members), tuple(var_key(m) for m in members))


def canonical_family(family: Iterable[Iterable[str]]) -> list[frozenset[str]]:
    return sorted({frozenset(s) for s in family}, key=canonical_key)


def essential_witness(a: TreeAutomaton, t: Term, x: str) -> Optional[tuple[dict, dict]]:
    """Two assignments differing only at ``x`` that drive ``t`` into different states.

    The shared part is the lexicographically first one that works; ``x`` takes
    the first constant in the first assignment and the first constant giving
    a different state in the second.
    """
    variables = sorted_vars(var_set(t))
    if x not in variables:
        return None
    consts = a.signature.constants
    tab = np.moveaxis(state_table(a, t, variables), variables.index(x), -1)
    differs = tab != tab[..., :1]
    rows = np.flatnonzero(differs.any(axis=-1))
    if rows.size == 0:
        return None
    rest_vars = tuple(v for v in variables if v != x)
    rest_pos = np.unravel_index(rows[0], tab.shape[:-1]) if rest_vars else ()
    j = int(np.argmax(differs[rest_pos]))
    rest = assignment_at(rest_vars, consts, rest_pos)
    first = {v: rest.get(v, consts[0]) for v in variables}
    second = {v: rest.get(v, consts[j]) for v in variables}
    return first, second


def is_essential(a: TreeAutomaton, t: Term, x: str) -> bool:
    return essential_witness(a, t, x) is not None


def essential_set(a: TreeAutomaton, t: Term) -> frozenset[str]:
    """Ess(t, A)."""
    variables = sorted_vars(var_set(t))
    if not variables:
        return frozenset()
    tab = state_table(a, t, variables)
    ess = set()
    for i, x in enumerate(variables):
        first = np.take(tab, [0], axis=i)
        if np.any(tab != first):
            ess.add(x)
    return frozenset(ess)


def fictive_set(a: TreeAutomaton, t: Term) -> frozenset[str]:
    return var_set(t) - essential_set(a, t)


def _require_essential(ess, **sets):
    for name, s in sets.items():
        extra = set(s) - ess
        if extra:
            raise PreconditionError(f"{name} contains non-essential variables {sorted_vars(extra)}")


def separating_assignment(
    a: TreeAutomaton, t: Term, Y: Iterable[str], Z: Iterable[str], strict: bool = False
) -> Optional[dict[str, str]]:
    """First gamma on ``Z`` with Y a subset of Ess(gamma(t)), or None.

    With ``strict`` the condition becomes Y == Ess(gamma(t)).
    """
    Y, Z = frozenset(Y), frozenset(Z)
    ess = essential_set(a, t)
    _require_essential(ess, Y=Y, Z=Z)
    if Y & Z:
        raise PreconditionError(f"Y and Z overlap on {sorted_vars(Y & Z)}")
    for gamma in assignments(sorted_vars(Z), a.signature.constants):
        residual = essential_set(a, apply_assignment(gamma, t))
        if (Y == residual) if strict else (Y <= residual):
            return gamma
    return None


def is_separable_wrt(a, t, Y, Z, strict: bool = False) -> bool:
    """Y in Sep(t, A, Z)."""
    return separating_assignment(a, t, Y, Z, strict) is not None


def is_separable(a, t, Y, strict: bool = False) -> bool:
    """Y in Sep(t, A): separable w.r.t. the rest of Ess(t, A)."""
    Y = frozenset(Y)
    ess = essential_set(a, t)
    _require_essential(ess, Y=Y)
    return is_separable_wrt(a, t, Y, ess - Y, strict)


def separability_report(a, t, max_size: int) -> list[tuple[frozenset[str], bool]]:
    ess = sorted_vars(essential_set(a, t))
    out = []
    for k in range(1, min(max_size, len(ess)) + 1):
        for Y in itertools.combinations(ess, k):
            out.append((frozenset(Y), is_separable(a, t, Y)))
    out.sort(key=lambda row: canonical_key(row[0]))
    return out


def destroys(a: TreeAutomaton, t: Term, Y: frozenset[str], Z: Iterable[str]) -> bool:
    """True if every assignment of Z leaves some member of Y fictive."""
    for delta in assignments(sorted_vars(Z), a.signature.constants):
        if Y <= essential_set(a, apply_assignment(delta, t)):
            return False
    return True


def distributive_family(a: TreeAutomaton, t: Term, Y: Iterable[str]) -> list[frozenset[str]]:
    """Dis(Y, t, A): the minimal sets Z whose every assignment breaks Y.

    Candidates are scanned by size, so a candidate containing an already
    accepted set is skipped; the property is closed under supersets.
    Empty when Y is separable.
    """
    Y = frozenset(Y)
    if not Y:
        raise PreconditionError("Y must be nonempty")
    ess = essential_set(a, t)
    _require_essential(ess, Y=Y)
    pool = sorted_vars(ess - Y)
    found: list[frozenset[str]] = []
    for k in range(len(pool) + 1):
        for Z in itertools.combinations(pool, k):
            Z = frozenset(Z)
            if any(m <= Z for m in found):
                continue
            if destroys(a, t, Y, Z):
                found.append(Z)
    return canonical_family(found)


def representative_systems(family: Iterable[Iterable]) -> list[frozenset]:
    """All inclusion-minimal hitting sets of ``family``.

    Built incrementally: after each member, extend every partial transversal
    that misses it by one of its elements, then drop non-minimal sets. The
    empty family has the single representative system {}.
    """
    members = [frozenset(m) for m in family]
    transversals = {frozenset()}
    for m in members:
        grown = set()
        for T in transversals:
            if T & m:
                grown.add(T)
            else:
                grown.update(T | {e} for e in m)
        transversals = {T for T in grown if not any(S < T for S in grown)}
    return sorted(transversals, key=lambda s: canonical_key(map(str, s)))


def strong_chain_evidence(a: TreeAutomaton, t: Term, Y: Iterable[str]) -> Optional[dict[str, tuple]]:
    """For each x in Y, the first strong chain from t down to x along which x
    stays essential in every element; None if some x has no such chain.

    A variable fictive in ``t`` has no such chain, so it yields None rather
    than an error.
    """
    Y = frozenset(Y)
    cache: dict = {}

    def ess(u):
        if u not in cache:
            cache[u] = essential_set(a, u)
        return cache[u]

    evidence = {}
    for x in sorted_vars(Y):
        for chain in strong_chains(t, Var(x)):
            if all(x in ess(u) for u in chain):
                evidence[x] = chain
                break
        else:
            return None
    return evidence


def check_strong_chain_condition(a, t, Y) -> bool:
    return strong_chain_evidence(a, t, Y) is not None
