import pytest

from treesep.formats import bundled_text, parse_automaton, parse_term


@pytest.fixture(scope="session")
def A():
    return parse_automaton(bundled_text("example1.tfa"))


@pytest.fixture(scope="session")
def T(A):
    """Parse a term over the bundled example signature."""
    return lambda text: parse_term(text, A.signature)


@pytest.fixture(scope="session")
def t_ex(T):
    return T("h(g(f0(x1),x2),g(f1(x1),x3),g(f2(x1),x4),x5)")


def pytest_terminal_summary(terminalreporter, config):
    from test_acceptance import ACCEPTANCE_KEY

    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
