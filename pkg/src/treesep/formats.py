"""Text formats: ``.tfa`` automata, ``.trm`` prefix terms, assignment literals.

A ``.tfa`` file is line oriented, ``#`` starts a comment::

    signature:
      const 0 1 2
      op f0/1 f1/1 g/2
    states: q0 q1 q2
    final: q1
    delta:
      0 -> q0
      f0(q0) -> q1
      f0(_) -> q0          # _ matches any state; first matching rule wins
"""

from __future__ import annotations

import itertools
import re
from importlib import resources
from pathlib import Path

from .automaton import TreeAutomaton, validate
from .errors import ParseError, SignatureError, ValidationError
from .terms import Const, Node, Signature, Term, Var, is_variable_name, sorted_vars

WILDCARD = "_"
_IDENT = r"[A-Za-z0-9_]+"
_CONST_RULE = re.compile(rf"\s*({_IDENT})\s*->\s*({_IDENT})\s*\Z")
_OP_RULE = re.compile(rf"\s*({_IDENT})\s*\(([^()]*)\)\s*->\s*({_IDENT})\s*\Z")
_IDENT_RE = re.compile(rf"{_IDENT}\Z")
_SECTION = re.compile(r"\s*(signature|states|finals?|delta)\s*:(.*)\Z")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _column(raw: str, token: str) -> int:
    return raw.find(token) + 1 if token in raw else 1


def _idents(raw: str, text: str, lineno: int) -> list[str]:
    out = text.split()
    for tok in out:
        if not _IDENT_RE.match(tok) or tok == WILDCARD:
            raise ParseError(f"invalid identifier {tok!r}", lineno, _column(raw, tok))
    return out


def parse_automaton(text: str) -> TreeAutomaton:
    constants: list[str] = []
    operators: list[tuple[str, int]] = []
    states: list[str] = []
    finals: list[str] = []
    const_rules: dict[str, tuple[str, int]] = {}
    op_rules: list[tuple[str, tuple[str, ...], str, int]] = []
    seen_sections = set()
    section = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _SECTION.match(line)
        if m:
            section = "final" if m.group(1).startswith("final") else m.group(1)
            if section in seen_sections:
                raise ParseError(f"section {section!r} appears twice", lineno, 1)
            seen_sections.add(section)
            rest = m.group(2)
            if section == "states":
                states.extend(_idents(raw, rest, lineno))
            elif section == "final":
                finals.extend(_idents(raw, rest, lineno))
            elif rest.strip():
                raise ParseError(f"unexpected text after '{m.group(1)}:'", lineno, _column(raw, rest.strip()))
            continue
        if section == "signature":
            words = line.split()
            if words[0] == "const":
                constants.extend(_idents(raw, " ".join(words[1:]), lineno))
            elif words[0] == "op":
                for decl in words[1:]:
                    name, slash, k = decl.partition("/")
                    if not slash or not _IDENT_RE.match(name) or not k.isdigit():
                        raise ParseError(f"operator declaration {decl!r} is not name/arity", lineno, _column(raw, decl))
                    operators.append((name, int(k)))
            else:
                raise ParseError(f"expected 'const' or 'op', got {words[0]!r}", lineno, _column(raw, words[0]))
        elif section in ("states", "final"):
            target = states if section == "states" else finals
            target.extend(_idents(raw, line, lineno))
        elif section == "delta":
            m = _OP_RULE.match(line)
            if m:
                f, args, q = m.groups()
                qs = tuple(s.strip() for s in args.split(","))
                for s in qs:
                    if not _IDENT_RE.match(s):
                        raise ParseError(f"invalid state {s!r} in rule", lineno, _column(raw, args))
                if q == WILDCARD:
                    raise ParseError("wildcard not allowed on the right-hand side", lineno, _column(raw, "->"))
                if any(r[0] == f and r[1] == qs for r in op_rules):
                    raise ParseError(f"duplicate rule for {f}({','.join(qs)})", lineno, 1)
                op_rules.append((f, qs, q, lineno))
                continue
            m = _CONST_RULE.match(line)
            if m:
                c, q = m.groups()
                if c == WILDCARD or q == WILDCARD:
                    raise ParseError("wildcard not allowed in constant rules", lineno, _column(raw, WILDCARD))
                if c in const_rules:
                    raise ParseError(f"duplicate rule for constant {c}", lineno, 1)
                const_rules[c] = (q, lineno)
                continue
            raise ParseError("malformed transition rule", lineno, 1)
        else:
            raise ParseError("text outside of any section", lineno, 1)

    signature = Signature(tuple(constants), tuple(operators))
    problems = []
    declared = set(states)
    arity = dict(operators)
    delta: dict[str, dict[tuple[str, ...], str]] = {f: {} for f, _ in operators}
    for f, qs, q, lineno in op_rules:
        if f not in arity:
            problems.append(f"line {lineno}: rule for undeclared operator {f}")
        elif len(qs) != arity[f]:
            problems.append(f"line {lineno}: rule {f}({','.join(qs)}) has {len(qs)} arguments, {f} has arity {arity[f]}")
        for s in qs:
            if s != WILDCARD and s not in declared:
                problems.append(f"line {lineno}: unknown state {s} in rule {f}({','.join(qs)})")
    for f, k in operators:
        rules = [(qs, q) for g, qs, q, _ in op_rules if g == f and len(qs) == k]
        for combo in itertools.product(states, repeat=k):
            for qs, q in rules:
                if all(p == WILDCARD or p == s for p, s in zip(qs, combo)):
                    delta[f][combo] = q
                    break
    delta0 = {c: q for c, (q, _) in const_rules.items()}
    a = TreeAutomaton(signature, tuple(states), frozenset(finals), delta0, delta)
    problems.extend(validate(a))
    if problems:
        raise ValidationError(problems)
    return a


def serialize_automaton(a: TreeAutomaton) -> str:
    """Explicit rule table (no wildcards) in declaration order."""
    sig = a.signature
    lines = ["signature:", "  const " + " ".join(sig.constants)]
    if sig.operators:
        lines.append("  op " + " ".join(f"{f}/{k}" for f, k in sig.operators))
    lines.append("states: " + " ".join(a.states))
    lines.append("final: " + " ".join(q for q in a.states if q in a.finals))
    lines.append("delta:")
    for c in sig.constants:
        lines.append(f"  {c} -> {a.delta0[c]}")
    for f, k in sig.operators:
        for qs in itertools.product(a.states, repeat=k):
            lines.append(f"  {f}({','.join(qs)}) -> {a.delta[f][qs]}")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(rf"\s*(?:({_IDENT})|(\()|(\))|(,))")


def parse_term(text: str, signature: Signature) -> Term:
    """Prefix notation, e.g. ``h(g(f0(x1),x2),0)``. Undeclared ``x<digits>`` names are variables."""
    text = "\n".join(_strip_comment(line) for line in text.splitlines())
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", *_line_col(text, pos))
        tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty term", 1, 1)

    i = 0

    def expect(tok):
        nonlocal i
        if i >= len(tokens):
            raise ParseError(f"expected {tok!r} but input ended", *_line_col(text, len(text)))
        if tokens[i][0] != tok:
            raise ParseError(f"expected {tok!r}, got {tokens[i][0]!r}", *_line_col(text, tokens[i][1]))
        i += 1

    def term():
        nonlocal i
        if i >= len(tokens):
            raise ParseError("unexpected end of term", *_line_col(text, len(text)))
        tok, at = tokens[i]
        if not _IDENT_RE.match(tok):
            raise ParseError(f"expected a symbol, got {tok!r}", *_line_col(text, at))
        i += 1
        k = signature.arity(tok)
        has_args = i < len(tokens) and tokens[i][0] == "("
        if k is None:
            if is_variable_name(tok) and not has_args:
                return Var(tok)
            raise ParseError(f"unknown symbol {tok!r}", *_line_col(text, at))
        if k == 0:
            if has_args:
                raise ParseError(f"constant {tok!r} takes no arguments", *_line_col(text, at))
            return Const(tok)
        if not has_args:
            raise ParseError(f"arity mismatch: {tok}/{k} used without arguments", *_line_col(text, at))
        expect("(")
        args = [term()]
        while i < len(tokens) and tokens[i][0] == ",":
            i += 1
            args.append(term())
        expect(")")
        if len(args) != k:
            raise ParseError(f"arity mismatch: {tok}/{k} applied to {len(args)} arguments", *_line_col(text, at))
        return Node(tok, tuple(args))

    t = term()
    if i != len(tokens):
        raise ParseError(f"trailing input {tokens[i][0]!r}", *_line_col(text, tokens[i][1]))
    return t


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def serialize_term(t: Term) -> str:
    return str(t)


def parse_assignment(text: str, signature: Signature) -> dict[str, str]:
    """``x1=0,x2=1`` -> {'x1': '0', 'x2': '1'}. Duplicate variables are rejected."""
    out: dict[str, str] = {}
    if not text.strip():
        return out
    for item in text.split(","):
        x, eq, c = (s.strip() for s in item.partition("="))
        if not eq or not is_variable_name(x) or not _IDENT_RE.match(c):
            raise ParseError(f"malformed binding {item.strip()!r}; expected x<digits>=constant")
        if x in out:
            raise ParseError(f"variable {x} bound twice")
        if not signature.is_constant(c):
            raise SignatureError(f"{x}={c}: {c!r} is not a declared constant")
        out[x] = c
    return out


def format_assignment(gamma) -> str:
    return ",".join(f"{x}={gamma[x]}" for x in sorted_vars(gamma))


def parse_varlist(text: str) -> tuple[str, ...]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    for x in names:
        if not is_variable_name(x):
            raise ParseError(f"{x!r} is not a variable name")
    if len(set(names)) != len(names):
        raise ParseError(f"duplicate variable in {text!r}")
    return sorted_vars(names)


def ascii_tree(t: Term, indent: str = "  ") -> str:
    lines = []

    def walk(u, level):
        label = u.op if isinstance(u, Node) else str(u)
        lines.append(indent * level + label)
        if isinstance(u, Node):
            for c in u.args:
                walk(c, level + 1)

    walk(t, 0)
    return "\n".join(lines)


BUNDLED = ("example1.tfa", "example1.trm")


def bundled_text(name: str) -> str:
    return resources.files("treesep").joinpath("data", name).read_text()


def read_source(spec: str) -> str:
    """Contents of the file ``spec``; falls back to a bundled fixture of that name."""
    p = Path(spec)
    if p.is_file():
        return p.read_text()
    if p.name in BUNDLED and not p.exists():
        return bundled_text(p.name)
    raise FileNotFoundError(spec)
