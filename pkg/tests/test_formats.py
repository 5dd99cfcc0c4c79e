import pytest

from treesep.errors import ParseError, SignatureError, ValidationError
from treesep.fixtures import FixtureParams, fixture_suite, gen_fixture
from treesep.formats import (
    ascii_tree,
    bundled_text,
    format_assignment,
    parse_assignment,
    parse_automaton,
    parse_term,
    parse_varlist,
    serialize_automaton,
    serialize_term,
)
from treesep.terms import Const, Node, Var, depth, var_set

SMALL = """\
signature:
  const a b
  op f/1 g/2
states: p q
final: q
delta:
  a -> p
  b -> q
  f(p) -> q
  f(q) -> p
  g(q,q) -> q
  g(_,_) -> p
"""


def test_bundled_example(A):
    assert A.states == ("q0", "q1", "q2")
    assert A.finals == {"q1"}
    assert A.signature.constants == ("0", "1", "2")
    assert A.delta["h"][("q1", "q2", "q2", "q0")] == "q2"
    assert A.delta["g"][("q2", "q2")] == "q1"
    assert A.delta["f1"][("q1",)] == "q1"


def test_wildcards_first_match():
    a = parse_automaton(SMALL)
    assert a.delta["g"] == {("p", "p"): "p", ("p", "q"): "p", ("q", "p"): "p", ("q", "q"): "q"}


def test_incomplete_automaton():
    text = bundled_text("example1.tfa").replace("  g(q2,q2) -> q1\n", "")
    with pytest.raises(ValidationError) as e:
        parse_automaton(text)
    assert "incomplete: g at (q2,q2)" in e.value.violations


def test_undeclared_state():
    with pytest.raises(ValidationError, match="q7"):
        parse_automaton(SMALL.replace("f(q) -> p", "f(q) -> q7"))
    with pytest.raises(ValidationError, match="q7"):
        parse_automaton(SMALL.replace("f(q) -> p", "f(q7) -> p"))


def test_duplicate_rule():
    with pytest.raises(ParseError, match="duplicate"):
        parse_automaton(SMALL.replace("f(q) -> p", "f(q) -> p\n  f(q) -> q"))
    with pytest.raises(ParseError, match="duplicate"):
        parse_automaton(SMALL.replace("b -> q", "b -> q\n  b -> p"))


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as e:
        parse_automaton(SMALL.replace("f(p) -> q", "f(p) => q"))
    assert e.value.line == 9


def test_empty_constants():
    with pytest.raises(SignatureError):
        parse_automaton(SMALL.replace("const a b", "const"))


def test_parse_term(A, t_ex):
    assert parse_term("h(g(f0(x1),x2),g(f1(x1),x3),g(f2(x1),x4),x5)", A.signature) == t_ex
    assert parse_term(" h( g(f0(x1), x2),\n g(f1(x1),x3), g(f2(x1),x4), x5 ) # note", A.signature) == t_ex
    assert parse_term("f0(0)", A.signature) == Node("f0", (Const("0"),))
    assert parse_term("x12", A.signature) == Var("x12")


@pytest.mark.parametrize(
    "text, msg",
    [
        ("g(x1)", "arity"),
        ("g", "arity"),
        ("k(x1)", "unknown"),
        ("y1", "unknown"),
        ("0(x1)", "no arguments"),
        ("g(x1,x2", "expected"),
        ("g(x1,x2))", "trailing"),
        ("g(x1;x2)", "unexpected"),
        ("", "empty"),
    ],
)
def test_parse_term_errors(A, text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_term(text, A.signature)


def test_assignment_literals(A):
    assert parse_assignment("x1=0,x2=1", A.signature) == {"x1": "0", "x2": "1"}
    assert parse_assignment(" x2 = 1 , x1=0 ", A.signature) == {"x1": "0", "x2": "1"}
    assert format_assignment({"x10": "0", "x2": "1"}) == "x2=1,x10=0"
    with pytest.raises(ParseError):
        parse_assignment("x1=0,x1=1", A.signature)
    with pytest.raises(ParseError):
        parse_assignment("x1", A.signature)
    with pytest.raises(SignatureError):
        parse_assignment("x1=7", A.signature)
    assert parse_varlist("x3, x1") == ("x1", "x3")
    with pytest.raises(ParseError):
        parse_varlist("x1,x1")


def test_round_trip():
    for a, t in fixture_suite(50, seed=3):
        assert parse_automaton(serialize_automaton(a)) == a
        assert parse_term(serialize_term(t), a.signature) == t


def test_round_trip_example(A, t_ex):
    assert parse_automaton(serialize_automaton(A)) == A
    assert parse_term(serialize_term(t_ex), A.signature) == t_ex


def test_ascii_tree(T):
    assert ascii_tree(T("g(f0(x1),0)")) == "g\n  f0\n    x1\n  0"


def test_gen_fixture_deterministic():
    params = FixtureParams(num_states=3, num_constants=2, ops=(("f", 1), ("g", 3)), num_vars=3, max_depth=3)
    a1, t1 = gen_fixture(1, params)
    a2, t2 = gen_fixture(1, params)
    assert a1 == a2 and t1 == t2
    assert serialize_automaton(a1) == serialize_automaton(a2)


def test_gen_fixture_shape():
    for seed in range(50):
        params = FixtureParams(num_vars=2, max_depth=2)
        a, t = gen_fixture(seed, params)
        assert depth(t) <= 2
        assert var_set(t) <= {"x1", "x2"}
        a.signature.check(t)


def test_gen_fixture_infeasible():
    from treesep.fixtures import InfeasibleParams

    with pytest.raises(InfeasibleParams):
        gen_fixture(0, FixtureParams(num_states=0))
    with pytest.raises(InfeasibleParams):
        gen_fixture(0, FixtureParams(ops=(), max_depth=2))
    with pytest.raises(InfeasibleParams):
        gen_fixture(0, FixtureParams(num_states=30, ops=(("f", 4),)))
