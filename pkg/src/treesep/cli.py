"""Command-line interface.

Every command builds a report ``{"command", "inputs", "result"}`` and prints
it either as canonical JSON (``--json``) or as indented text. Exit codes:
0 success, 2 input/validation error, 3 parse error, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import analysis, automaton, reduction
from .errors import BudgetExceededError, ParseError, TreesepError, ValidationError
from .fixtures import FixtureParams, gen_fixture
from .formats import (
    ascii_tree,
    format_assignment,
    parse_assignment,
    parse_automaton,
    parse_term,
    parse_varlist,
    read_source,
    serialize_automaton,
)
from .terms import apply_assignment, postorder, sorted_vars, var_set

EXIT_OK, EXIT_INPUT, EXIT_PARSE, EXIT_BUDGET = 0, 2, 3, 4


def _vars(s) -> list[str]:
    return list(sorted_vars(s))


def _family(fam) -> list[list[str]]:
    return [_vars(s) for s in fam]


def _assign(gamma) -> Optional[dict]:
    return None if gamma is None else {x: gamma[x] for x in sorted_vars(gamma)}


class _Context:
    def __init__(self, args):
        self.args = args
        self.inputs = {}
        self._a = None
        self._t = None

    @property
    def automaton(self):
        if self._a is None:
            if not self.args.automaton:
                raise TreesepError("this command needs an automaton (-a FILE)")
            self.inputs["automaton"] = self.args.automaton
            self._a = parse_automaton(read_source(self.args.automaton))
        return self._a

    @property
    def term(self):
        if self._t is None:
            spec = self.args.term
            if not spec:
                raise TreesepError("this command needs a term (-t FILE|EXPR)")
            try:
                text = read_source(spec)
            except FileNotFoundError:
                text = spec
            self._t = parse_term(text, self.automaton.signature)
            self.inputs["term"] = str(self._t)
        return self._t

    def assignment(self, required=False):
        text = self.args.assign
        if text is None:
            if required:
                raise TreesepError("this command needs --assign")
            return {}
        gamma = parse_assignment(text, self.automaton.signature)
        self.inputs["assign"] = format_assignment(gamma)
        return gamma

    def varlist(self, name, required=True):
        text = getattr(self.args, name, None)
        if text is None:
            if required:
                raise TreesepError(f"this command needs --{name}")
            return None
        names = parse_varlist(text)
        self.inputs[name] = list(names)
        return names


def cmd_validate(ctx):
    if not ctx.args.automaton:
        raise TreesepError("this command needs an automaton (-a FILE)")
    ctx.inputs["automaton"] = ctx.args.automaton
    try:
        a = parse_automaton(read_source(ctx.args.automaton))
    except ValidationError as e:
        return {"valid": False, "violations": e.violations}
    return {
        "valid": True,
        "violations": [],
        "states": list(a.states),
        "constant_surjective": automaton.is_constant_surjective(a),
    }


def cmd_run(ctx):
    a, t = ctx.automaton, ctx.term
    gamma = ctx.assignment(required=True)
    res = automaton.run(a, gamma, t)
    rows = [
        {"path": ".".join(str(i) for i in path) or "root", "subterm": str(u), "state": res.per_subterm[path]}
        for path, u in postorder(t)
    ]
    return {"state": res.state, "accepted": res.state in a.finals, "per_subterm": rows}


def cmd_accept(ctx):
    w = automaton.acceptance_witness(ctx.automaton, ctx.term)
    return {"accepted": w is not None, "witness": _assign(w)}


def cmd_states(ctx):
    a, t = ctx.automaton, ctx.term
    states = automaton.state_set(a, t)
    return {
        "states": [q for q in a.states if q in states],
        "st": len(states),
        "compositional_bound": [q for q in a.states if q in automaton.compositional_state_set(a, t)],
    }


def cmd_ess(ctx):
    a, t = ctx.automaton, ctx.term
    ess = analysis.essential_set(a, t)
    witnesses = {}
    for x in sorted_vars(ess):
        g1, g2 = analysis.essential_witness(a, t, x)
        witnesses[x] = [_assign(g1), _assign(g2)]
    return {"essential": _vars(ess), "fictive": _vars(var_set(t) - ess), "witnesses": witnesses}


def cmd_sep(ctx):
    a, t = ctx.automaton, ctx.term
    Y = ctx.varlist("set")
    Z = ctx.varlist("wrt", required=False)
    if Z is None:
        Z = sorted_vars(analysis.essential_set(a, t) - set(Y))
    w = analysis.separating_assignment(a, t, Y, Z, strict=ctx.args.strict)
    return {"set": list(Y), "wrt": list(Z), "strict": ctx.args.strict, "separable": w is not None, "witness": _assign(w)}


def cmd_sepsets(ctx):
    rows = analysis.separability_report(ctx.automaton, ctx.term, ctx.args.max_size)
    ctx.inputs["max_size"] = ctx.args.max_size
    return {"rows": [{"set": _vars(Y), "separable": ok} for Y, ok in rows]}


def cmd_dis(ctx):
    Y = ctx.varlist("set")
    fam = analysis.distributive_family(ctx.automaton, ctx.term, Y)
    return {"set": list(Y), "distributive_family": _family(fam)}


def cmd_repsys(ctx):
    a, t = ctx.automaton, ctx.term
    Y = ctx.varlist("set")
    fam = analysis.distributive_family(a, t, Y)
    systems = analysis.representative_systems(fam) if fam else []
    return {
        "set": list(Y),
        "distributive_family": _family(fam),
        "representative_systems": [
            {"system": _vars(Z), "union_separable": analysis.is_separable(a, t, set(Y) | Z)} for Z in systems
        ],
    }


def cmd_comp(ctx):
    a, t = ctx.automaton, ctx.term
    table = reduction.complexity_table(a, t)
    rows = []
    seen = set()
    for _, u in postorder(t):
        if u not in seen:
            seen.add(u)
            rows.append({"subterm": str(u), "st": table[u][0], "comp": table[u][1]})
    return {"complexity": table[t][1], "subterms": rows}


def cmd_simplify(ctx):
    a, t = ctx.automaton, ctx.term
    start = apply_assignment(ctx.assignment(), t)
    trace = reduction.reduction_trace(a, start)
    out = trace[-1][1] if trace else start
    return {
        "input": str(start),
        "result": str(out),
        "steps": [{"kind": kind, "term": str(u)} for kind, u in trace],
        "complexity_before": reduction.complexity(a, start),
        "complexity_after": reduction.complexity(a, out),
        "tree": ascii_tree(out),
    }


def cmd_distribute(ctx):
    a, t = ctx.automaton, ctx.term
    Z = ctx.varlist("via", required=False) or ()
    plan = reduction.distribution_plan(a, t, Z)
    classes = [
        {
            "class": format_assignment(dict(zip(plan.dispatch_vars, key))) or "-",
            "residual": str(s),
            "cost": plan.per_class_cost[key],
            "tree": ascii_tree(s),
        }
        for key, s in plan.classes.items()
    ]
    return {
        "dispatch_vars": list(plan.dispatch_vars),
        "classes": classes,
        "dispatch_cost": plan.dispatch_cost,
        "max_class_cost": max(plan.per_class_cost.values()),
        "worst_case_cost": plan.worst_case_cost,
        "original_cost": plan.original_cost,
    }


def cmd_gen(ctx):
    args = ctx.args
    ops = []
    for decl in filter(None, (s.strip() for s in args.ops.split(","))):
        name, _, k = decl.partition("/")
        if not k.isdigit():
            raise ParseError(f"operator spec {decl!r} is not name/arity")
        ops.append((name, int(k)))
    params = FixtureParams(
        num_states=args.states,
        num_constants=args.constants,
        ops=tuple(ops),
        num_vars=args.vars,
        max_depth=args.depth,
    )
    ctx.inputs.update(seed=args.seed, states=args.states, constants=args.constants, ops=args.ops,
                      vars=args.vars, depth=args.depth)
    a, t = gen_fixture(args.seed, params)
    return {"automaton": serialize_automaton(a), "term": str(t)}


COMMANDS = {
    "validate": (cmd_validate, "check an automaton for completeness"),
    "run": (cmd_run, "run the automaton on a term under a total assignment"),
    "accept": (cmd_accept, "decide acceptance, with the first witnessing assignment"),
    "states": (cmd_states, "reachable state set St(t)"),
    "ess": (cmd_ess, "essential and fictive variables"),
    "sep": (cmd_sep, "separability of a variable set"),
    "sepsets": (cmd_sepsets, "separability of all small essential-variable sets"),
    "dis": (cmd_dis, "distributive family of a variable set"),
    "repsys": (cmd_repsys, "representative systems of the distributive family"),
    "comp": (cmd_comp, "run complexity with per-subterm breakdown"),
    "simplify": (cmd_simplify, "reduce a term while preserving every run"),
    "distribute": (cmd_distribute, "dispatch plan over assignments of --via variables"),
    "gen": (cmd_gen, "generate a seeded random automaton and term"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-a", dest="automaton", metavar="FILE", help=".tfa automaton file")
    common.add_argument("-t", dest="term", metavar="FILE|EXPR", help=".trm file or term expression")
    common.add_argument("--assign", metavar="x1=c,...")
    common.add_argument("--set", metavar="x2,x3,...")
    common.add_argument("--wrt", metavar="x1,...")
    common.add_argument("--via", metavar="x1,...", help="dispatch variables")
    common.add_argument("--strict", action="store_true", help="separability requires Y == Ess")
    common.add_argument("--max-size", type=int, default=2)
    common.add_argument("--budget", type=int, help="max assignments per enumeration")
    common.add_argument("--json", action="store_true", help="emit the canonical JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--states", type=int, default=3)
    common.add_argument("--constants", type=int, default=3)
    common.add_argument("--ops", default="f/1,g/2")
    common.add_argument("--vars", type=int, default=4)
    common.add_argument("--depth", type=int, default=3)

    parser = argparse.ArgumentParser(prog="treesep", description="Tree automata and separable sets of input variables.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(key, value, pad: str) -> list[str]:
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k in sorted(value):
            out += _emit(k, value[k], pad + "  ")
        return out
    if isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        out = [f"{pad}{key}:"]
        for v in value:
            if isinstance(v, dict):
                item = []
                for k in sorted(v):
                    item += _emit(k, v[k], pad + "    ")
                item[0] = pad + "  - " + item[0][len(pad) + 4:]
                out += item
            else:
                out.append(f"{pad}  - {_scalar(v)}")
        return out
    if isinstance(value, str) and "\n" in value:
        return [f"{pad}{key}: |"] + [f"{pad}  {row}" for row in value.rstrip("\n").split("\n")]
    return [f"{pad}{key}: {_scalar(value)}"]


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for section in ("inputs", "result", "error"):
        if section in report:
            lines += _emit(section, report[section], "")
    return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if isinstance(v, list):
        return "{" + ", ".join(_scalar(x) for x in v) + "}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def run_command(argv, stdout=None, stderr=None) -> tuple[int, dict]:
    """Parse ``argv``, execute, print the report and return ``(exit_code, report)``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0), {}
    ctx = _Context(args)
    report = {"command": args.command, "inputs": ctx.inputs}
    func = COMMANDS[args.command][0]
    old_budget = automaton.get_budget()
    code = EXIT_OK
    try:
        if args.budget is not None:
            automaton.set_budget(args.budget)
        report["result"] = func(ctx)
    except ParseError as e:
        code, kind = EXIT_PARSE, "parse"
        report["error"] = {"kind": kind, "message": str(e)}
    except BudgetExceededError as e:
        code = EXIT_BUDGET
        report["error"] = {"kind": "budget", "message": str(e)}
    except (TreesepError, FileNotFoundError, ValueError) as e:
        code = EXIT_INPUT
        msg = f"file not found: {e}" if isinstance(e, FileNotFoundError) else str(e)
        report["error"] = {"kind": "input", "message": msg}
    finally:
        automaton.set_budget(old_budget)
    if "error" in report:
        print(f"treesep: {report['error']['message']}", file=stderr)
    if args.json:
        stdout.write(render_json(report))
    elif "result" in report:
        if args.command == "gen":
            stdout.write(report["result"]["automaton"] + "# term: " + report["result"]["term"] + "\n")
        else:
            stdout.write(render_text(report))
    return code, report


def main(argv=None) -> int:
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
