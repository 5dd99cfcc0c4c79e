"""Ranked terms over a signature with variable leaves.

Terms are immutable values: ``Var``, ``Const`` and ``Node``. Subterms are
identified by value, so substitution replaces every occurrence at once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from .errors import SignatureError

VARIABLE_RE = re.compile(r"x[0-9]+\Z")


def is_variable_name(name: str) -> bool:
    return VARIABLE_RE.match(name) is not None


def var_key(name: str):
    """Sort key putting x2 before x10."""
    if is_variable_name(name):
        return (int(name[1:]), name)
    return (float("inf"), name)


def sorted_vars(names) -> tuple[str, ...]:
    return tuple(sorted(names, key=var_key))


@dataclass(frozen=True)
class Signature:
    """Ranked alphabet. Constants come first and their order is significant:
    the first one is the canonical constant used by reductions."""

    constants: tuple[str, ...]
    operators: tuple[tuple[str, int], ...] = ()
    _arity: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "operators", tuple((n, int(k)) for n, k in self.operators))
        if not self.constants:
            raise SignatureError("signature must declare at least one constant")
        arity = {}
        for name in self.constants:
            if name in arity:
                raise SignatureError(f"duplicate symbol {name!r}")
            arity[name] = 0
        for name, k in self.operators:
            if name in arity:
                raise SignatureError(f"duplicate symbol {name!r}")
            if k < 1:
                raise SignatureError(f"operator {name!r} must have arity >= 1, got {k}")
            arity[name] = k
        for name in arity:
            if is_variable_name(name):
                raise SignatureError(f"symbol {name!r} clashes with the variable pattern x<digits>")
        object.__setattr__(self, "_arity", arity)

    def arity(self, symbol: str) -> Optional[int]:
        return self._arity.get(symbol)

    def is_constant(self, symbol: str) -> bool:
        return self._arity.get(symbol) == 0

    @property
    def canonical_constant(self) -> str:
        return self.constants[0]

    @property
    def max_arity(self) -> int:
        return max((k for _, k in self.operators), default=0)

    def check(self, t: "Term") -> None:
        """Raise SignatureError unless every symbol in ``t`` is declared with matching arity."""
        for u in _preorder(t):
            if isinstance(u, Const):
                if not self.is_constant(u.symbol):
                    raise SignatureError(f"unknown constant {u.symbol!r}")
            elif isinstance(u, Node):
                k = self.arity(u.op)
                if k is None or k == 0:
                    raise SignatureError(f"unknown operator {u.op!r}")
                if k != len(u.args):
                    raise SignatureError(f"operator {u.op}/{k} applied to {len(u.args)} arguments")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple["Term", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise SignatureError(f"operator node {self.op!r} needs at least one argument")

    def __str__(self):
        return f"{self.op}({','.join(str(a) for a in self.args)})"


Term = Union[Var, Const, Node]
Assignment = Mapping[str, str]
StrongChain = tuple  # tuple[Term, ...], outermost first


def _preorder(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, Node):
            stack.extend(reversed(u.args))


def postorder(t: Term, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Yield ``(path, subterm)`` for every occurrence, children left-to-right before parents."""
    if isinstance(t, Node):
        for i, a in enumerate(t.args):
            yield from postorder(a, path + (i,))
    yield path, t


def depth(t: Term) -> int:
    if isinstance(t, Node):
        return 1 + max(depth(a) for a in t.args)
    return 0


def size(t: Term) -> int:
    """Number of symbol occurrences (nodes and leaves)."""
    return sum(1 for _ in _preorder(t))


def var_set(t: Term) -> frozenset[str]:
    return frozenset(u.name for u in _preorder(t) if isinstance(u, Var))


def subterm_set(t: Term) -> frozenset:
    return frozenset(_preorder(t))


def is_subterm(s: Term, t: Term) -> bool:
    return any(u == s for u in _preorder(t))


def is_proper_subterm(s: Term, t: Term) -> bool:
    return s != t and is_subterm(s, t)


def replace_subterm(t: Term, old: Term, new: Term, signature: Optional[Signature] = None) -> Term:
    """Replace every occurrence of ``old`` in ``t`` by ``new`` in one outside-in pass.

    Occurrences of ``old`` inside ``new`` are left alone. When ``signature`` is
    given both ``t`` and ``new`` are checked against it first.
    """
    if signature is not None:
        signature.check(t)
        signature.check(new)

    def walk(u):
        if u == old:
            return new
        if isinstance(u, Node):
            args = tuple(walk(a) for a in u.args)
            if any(a is not b for a, b in zip(args, u.args)):
                return Node(u.op, args)
        return u

    return walk(t)


def apply_assignment(gamma: Assignment, t: Term) -> Term:
    """gamma(t): substitute constants for the bound variables; other bindings are ignored."""
    if not gamma:
        return t

    def walk(u):
        if isinstance(u, Var):
            c = gamma.get(u.name)
            return Const(c) if c is not None else u
        if isinstance(u, Node):
            args = tuple(walk(a) for a in u.args)
            if any(a is not b for a, b in zip(args, u.args)):
                return Node(u.op, args)
        return u

    return walk(t)


def subterm_at(t: Term, path) -> Term:
    for i in path:
        t = t.args[i]
    return t


def strong_chains(t: Term, target: Term) -> tuple[StrongChain, ...]:
    """All direct-child paths from ``t`` down to an occurrence of ``target``.

    Chains are deduplicated as term sequences and listed in left-to-right
    occurrence order.
    """
    found = []
    seen = set()

    def walk(u, prefix):
        chain = prefix + (u,)
        if u == target:
            if chain not in seen:
                seen.add(chain)
                found.append(chain)
            return
        if isinstance(u, Node):
            for a in u.args:
                walk(a, chain)

    walk(t, ())
    return tuple(found)


def check_assignment(gamma: Assignment, signature: Signature) -> None:
    for x, c in gamma.items():
        if not is_variable_name(x):
            raise SignatureError(f"{x!r} is not a variable name")
        if not signature.is_constant(c):
            raise SignatureError(f"{x}={c}: {c!r} is not a declared constant")
