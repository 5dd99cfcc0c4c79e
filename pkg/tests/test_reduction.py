import pytest

import oracles
from treesep.automaton import run
from treesep.errors import PreconditionError, UnboundVariableError
from treesep.fixtures import fixture_suite
from treesep.reduction import (
    collapse_step,
    complexity,
    complexity_table,
    distribution_plan,
    eliminate_fictive,
    equivalent_terms,
    evaluate_plan,
    reduction_trace,
    simplify,
)
from treesep.terms import Const, Var, apply_assignment, var_set


def test_equivalent_terms(A, T):
    assert equivalent_terms(A, Var("x2"), T("g(f0(0),x2)"))
    assert equivalent_terms(A, Const("0"), T("g(f1(0),0)"))
    assert not equivalent_terms(A, Const("0"), Const("1"))


def test_eliminate_fictive(A, T, t_ex):
    t = apply_assignment({"x1": "0"}, t_ex)
    assert eliminate_fictive(A, t) == T("h(g(f0(0),x2),g(f1(0),0),g(f2(0),0),x5)")
    assert eliminate_fictive(A, t_ex) is t_ex
    assert eliminate_fictive(A, Var("x1")) == Var("x1")


def test_collapse_step(A, T):
    # post-order reaches f1(0) ~ 0 before the enclosing g(f1(0),0)
    assert collapse_step(A, T("h(x2,g(f1(0),0),g(f2(0),0),x5)")) == T("h(x2,g(0,0),g(f2(0),0),x5)")
    assert collapse_step(A, T("g(f0(0),x2)")) == Var("x2")
    assert collapse_step(A, T("h(x2,0,0,x5)")) is None
    assert collapse_step(A, Var("x1")) is None


def test_collapse_prefers_smallest_inner(A, T):
    # g(f0(1),0) is equivalent to both f0(1) and 0; the leaf wins
    assert collapse_step(A, T("g(f0(1),0)")) == Const("0")


def test_simplify(A, T, t_ex):
    assert simplify(A, apply_assignment({"x1": "0"}, t_ex)) == T("h(x2,0,0,x5)")
    assert simplify(A, apply_assignment({"x1": "1"}, t_ex)) == T("h(0,x3,0,x5)")
    assert simplify(A, apply_assignment({"x1": "2"}, t_ex)) == T("h(0,0,x4,x5)")
    assert simplify(A, Const("2")) == Const("2")
    assert simplify(A, T("g(f0(0),x2)")) == Var("x2")


def test_complexity(A, T, t_ex):
    assert complexity(A, t_ex) == 129
    assert complexity(A, T("h(x2,0,0,x5)")) == 17
    assert complexity(A, Var("x1")) == 3
    assert complexity(A, Const("0")) == 1
    table = complexity_table(A, t_ex)
    for i in range(3):
        assert table[T(f"f{i}(x1)")] == (2, 6)
        assert table[T(f"g(f{i}(x1),x{i + 2})")] == (3, 15)
    assert table[Var("x5")] == (3, 3)


def test_distribution_plan_example(A, T, t_ex):
    plan = distribution_plan(A, t_ex, ["x1"])
    assert plan.classes == {
        ("0",): T("h(x2,0,0,x5)"),
        ("1",): T("h(0,x3,0,x5)"),
        ("2",): T("h(0,0,x4,x5)"),
    }
    assert set(plan.per_class_cost.values()) == {17}
    assert plan.dispatch_cost == 3
    assert plan.worst_case_cost == 20
    assert plan.original_cost == 129


def test_distribution_plan_two_vars(A, t_ex):
    plan = distribution_plan(A, t_ex, ["x5", "x1"])
    assert plan.dispatch_vars == ("x1", "x5")
    assert len(plan.classes) == 9
    assert plan.dispatch_cost == 6
    assert plan.worst_case_cost == 6 + max(plan.per_class_cost.values())
    for s in plan.classes.values():
        assert not var_set(s) & {"x1", "x5"}


def test_distribution_plan_empty_dispatch(A, t_ex):
    plan = distribution_plan(A, t_ex, [])
    assert plan.classes == {(): simplify(A, t_ex)}
    assert plan.dispatch_cost == 0
    g = dict.fromkeys(["x1", "x2", "x3", "x4", "x5"], "1")
    assert evaluate_plan(plan, A, g) == run(A, g, plan.classes[()]).state


def test_distribution_plan_errors(A, t_ex):
    with pytest.raises(PreconditionError):
        distribution_plan(A, t_ex, ["x9"])
    plan = distribution_plan(A, t_ex, ["x1"])
    with pytest.raises(UnboundVariableError):
        evaluate_plan(plan, A, {"x1": "0"})


def test_custom_dispatch_cost(A, t_ex):
    plan = distribution_plan(A, t_ex, ["x1"], dispatch_cost=lambda n, k: n * (k - 1))
    assert plan.worst_case_cost == 2 + 17


def test_evaluate_plan_routes_by_class(A, t_ex):
    plan = distribution_plan(A, t_ex, ["x1"])
    g = {"x1": "0", "x2": "2", "x3": "1", "x4": "1", "x5": "2"}
    assert plan.class_of(g) == ("0",)
    assert evaluate_plan(plan, A, g) == run(A, g, plan.classes[("0",)]).state == run(A, g, t_ex).state


def test_reduction_on_fixtures():
    for a, t in fixture_suite(50, seed=8):
        s = simplify(a, t)
        assert oracles.equivalent(a, t, s)
        assert simplify(a, s) == s
        assert var_set(s) == oracles.essential(a, s)
        for u in oracles.subterm_occurrences(s):
            for v in oracles.subterm_occurrences(u):
                if v != u:
                    assert not oracles.equivalent(a, u, v)
        prev = complexity(a, t)
        assert prev == oracles.comp(a, t)
        for _, u in reduction_trace(a, t):
            cur = complexity(a, u)
            assert cur <= prev
            prev = cur
