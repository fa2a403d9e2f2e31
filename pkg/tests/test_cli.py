"""
Tests de la grammaire des sessions, de l'exécution, de la commande `euler`
et du shell interactif
"""

import io
from pathlib import Path

import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from eulerclass import config
from eulerclass.__main__ import main
from eulerclass.cli.parser import (
    Assertion,
    Command,
    IdealDecl,
    PointDecl,
    RingDecl,
    Term,
    parse_session,
    parse_statement,
    print_statement,
    split_statements,
)
from eulerclass.cli.commands import CommandRegistry
from eulerclass.cli.session import Session, SessionFlags, execute
from eulerclass.cli.shell import EulerShell
from eulerclass.exceptions import (
    AssertionFailedError,
    EquationViolated,
    NameResolutionError,
    ParseError,
    UnknownCommand,
)
from eulerclass.expr import BinOp, Neg, Num, Pow, Var

SESSIONS = Path(__file__).resolve().parent.parent / 'sessions'

COMPOSE = """\
ring A = QQ[x, y];
point v : Q4(A) = ([x, y], [0, 0], 0);
point w : Q4(A) = ([x - 1, y], [0, 0], 0);
compose h = v * w;
"""

UNKNOWN = """\
ring A = QQ[x];
point v : Q2(A) = ([x], [1 - x], x);
point w : Q2(A) = ([x - 1], [-x], 1 - x);
assert equal v w;
"""

STATEMENTS = [
    "ring A = QQ[x, y];",
    "ring S = QQ[x, y, z] / (x^2 + y^2 + z^2 - 1) order lex;",
    "ring B = F5[u];",
    "ideal I = (x, y) in A;",
    "point v : Q4(A) = ([x, y], [0, 0], 0);",
    "row r = (x, y, 1 + x) in A;",
    "assert equal v w;",
    "assert valid v;",
    "assert ideal v = I;",
    "validate v;",
    "ideal-of I = v;",
    "orient O = I, [x, y];",
    "segre s = O;",
    "move m = v avoid I, J;",
    "move m = v;",
    "compose h = v * w;",
    "inverse u = v;",
    "equal? v, w;",
    "euler-reduce E = 2*O1 - O2 + O3;",
    "segre-hom h = -O1;",
    "weak-class W = O1 + O2;",
    "phi F = r;",
    "relation R = lift O;",
    "relation R = elementary O (1, 2, x - 1);",
    "merge M = O1 + O2;",
    "split P, Q = M by I * J;",
    "fold-map F = 2 over F3;",
    "jouanolou D = 1;",
]


def run_cli(tmp_path, text, command, *options):
    path = tmp_path / 'session.euler'
    path.write_text(text, encoding='utf-8')
    return CliRunner().invoke(main, [command, str(path), '--no-color', *options])


# ==================== GRAMMAR ====================

@pytest.mark.parametrize("text", STATEMENTS)
def test_canonical_printing(text):
    statement = parse_statement(text)
    assert print_statement(statement) == text
    assert parse_statement(print_statement(statement)) == statement


def test_statement_structure():
    assert parse_statement("ring A = QQ[x, y]") == RingDecl('A', 'QQ', ('x', 'y'))
    assert parse_statement("assert ideal v = I") == Assertion('ideal', ('v', 'I'))
    command = parse_statement("euler-reduce E = 2*O1 - O2")
    assert command == Command('euler-reduce', ('E',), (Term(2, 'O1'), Term(-1, 'O2')))


names = st.sampled_from(['v', 'w', 'h1', 'P'])
leaves = st.one_of(st.builds(Num, st.integers(0, 20)), st.builds(Var, st.sampled_from(['x', 'y', 'z'])))
expressions = st.recursive(
    leaves,
    lambda children: st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(['+', '-', '*']), children, children),
        st.builds(Pow, children, st.integers(0, 3)),
    ),
    max_leaves=5,
)


@st.composite
def points(draw):
    n = draw(st.integers(1, 3))
    vector = st.lists(expressions, min_size=n, max_size=n).map(tuple)
    return PointDecl(draw(names), n, draw(names), draw(vector), draw(vector), draw(expressions))


@pytest.mark.slow
@settings(max_examples=1000, deadline=None)
@given(st.one_of(points(), st.builds(IdealDecl, names, st.lists(expressions, min_size=1, max_size=3).map(tuple), names)))
def test_printed_statements_parse_back(statement):
    assert parse_statement(print_statement(statement)) == statement


def test_statements_span_lines():
    text = "# comment\nring A = QQ[x, y]\n\nideal I = (x,\n  y) in A; point v : Q4(A) =\n ([x, y], [0, 0], 0)\n"
    pieces = split_statements(text)
    assert [line for _, line, _ in pieces] == [2, 4, 5]
    assert [s.line for s in parse_session(text)] == [2, 4, 5]


def test_parse_error_positions():
    with pytest.raises(ParseError) as info:
        parse_session("ring A = QQ[x, y")
    assert (info.value.line, info.value.column) == (1, 17)
    assert info.value.expected == "']'"

    with pytest.raises(ParseError) as info:
        parse_session("ring A = QQ[x, y];\npoint v : Q4(A) = ([x, y], [0, 0] 0);")
    assert (info.value.line, info.value.column) == (2, 35)
    assert info.value.expected == "','"


def test_unknown_command():
    with pytest.raises(ParseError) as info:
        parse_statement("twist h = v")
    assert "twist" in str(info.value)


def test_registry_rejects_unknown_verb():
    with pytest.raises(UnknownCommand) as info:
        CommandRegistry().execute(Session(), Command('twist', ('h',), ()), None)
    assert str(info.value) == "[UNKNOWN_COMMAND] Unknown command 'twist'"
    assert info.value.exit_status == 2


# ==================== SESSIONS ====================

def test_transcript():
    transcript = execute(COMPOSE)
    lines = transcript.splitlines()
    assert lines[0] == "A = QQ[x, y], dimension 2"
    assert lines[1] == "v = ([x, y], [0, 0], 0) on Q4"
    assert "  ideal(h) = (x^2 - x, y)" in lines


def test_failed_assertion_carries_statement():
    with pytest.raises(AssertionFailedError) as info:
        execute(UNKNOWN)
    assert info.value.line == 4
    assert info.value.statement == "assert equal v w;"
    assert info.value.exit_status == 1


def test_undefined_name():
    with pytest.raises(NameResolutionError):
        execute("ring A = QQ[x];\ncompose h = v * w;")


def test_invalid_point_is_rejected():
    session = Session()
    with pytest.raises(EquationViolated) as info:
        session.run("ring A = QQ[x];\npoint v : Q2(A) = ([x], [1], x);", lambda line: None)
    assert info.value.line == 2
    assert 'v' not in session.namespace


def test_accepted_statements_are_canonical():
    session = Session()
    session.run("ring A = QQ[x,y]\nideal I = (x,y) in A", lambda line: None)
    assert session.accepted == ["ring A = QQ[x, y];", "ideal I = (x, y) in A;"]


def test_flags_from_config():
    flags = SessionFlags.from_config(config, seed=9, degree_cap=None)
    assert flags.seed == 9
    assert flags.degree_cap == config.get('degree_cap')


@pytest.mark.slow
@pytest.mark.parametrize("path", sorted(SESSIONS.glob('*.euler')), ids=lambda p: p.name)
def test_example_sessions_are_deterministic(path):
    text = path.read_text(encoding='utf-8')
    flags = SessionFlags(seed=7, witnesses=True)
    assert execute(text, flags) == execute(text, flags)


# ==================== COMMAND LINE ====================

def test_run_success(tmp_path):
    result = run_cli(tmp_path, COMPOSE, 'run')
    assert result.exit_code == 0, result.output
    assert "ideal(h) = (x^2 - x, y)" in result.output


def test_run_failed_assertion(tmp_path):
    result = run_cli(tmp_path, UNKNOWN, 'run')
    assert result.exit_code == 1
    assert "equality not certified" in result.output
    assert "line 4" in result.output


def test_run_parse_error(tmp_path):
    result = run_cli(tmp_path, "ring A = QQ[x, y", 'run')
    assert result.exit_code == 2
    assert "line 1, column 17" in result.output


def test_run_construction_failure(tmp_path):
    result = run_cli(tmp_path, "ring A = F2[x];", 'run')
    assert result.exit_code == 3



def test_run_non_prime_field(tmp_path):
    result = run_cli(tmp_path, "ring A = F9[x];", 'run')
    assert result.exit_code == 3
    assert "[NON_PRIME_CHARACTERISTIC]" in result.output


def test_run_unknown_field(tmp_path):
    result = run_cli(tmp_path, "fold-map F = 1 over RR;", 'run')
    assert result.exit_code == 2
    assert "[UNKNOWN_FIELD]" in result.output
    assert "line 1: fold-map F = 1 over RR;" in result.output


def test_check(tmp_path):
    result = run_cli(tmp_path, COMPOSE, 'check')
    assert result.exit_code == 0
    assert result.output.strip().endswith("4 statements")


def test_run_is_deterministic(tmp_path):
    first = run_cli(tmp_path, COMPOSE + "inverse u = v;\n", 'run', '--seed', '7', '--witnesses')
    second = run_cli(tmp_path, COMPOSE + "inverse u = v;\n", 'run', '--seed', '7', '--witnesses')
    assert first.exit_code == 0, first.output
    assert first.output == second.output


def test_version():
    result = CliRunner().invoke(main, ['--version'])
    assert result.exit_code == 0
    assert "euler" in result.output


# ==================== SHELL ====================

@pytest.fixture
def shell(tmp_path):
    previous = config.get('base_dir')
    config.set('base_dir', tmp_path)
    out = io.StringIO()
    yield EulerShell(SessionFlags(), stdout=out), out
    config.set('base_dir', previous)


def test_shell_executes_statements(shell):
    sh, out = shell
    sh.onecmd("ring A = QQ[x, y];")
    sh.onecmd("point v : Q4(A) = ([x, y], [0, 0], 0)")
    assert "A = QQ[x, y], dimension 2" in out.getvalue()
    assert "v = ([x, y], [0, 0], 0) on Q4" in out.getvalue()


def test_shell_names_table(shell):
    sh, out = shell
    sh.onecmd("ring A = QQ[x]")
    sh.onecmd(".names")
    assert "ring" in out.getvalue()
    assert "QQ[x]" in out.getvalue()


def test_shell_reports_errors(shell, capsys):
    sh, out = shell
    sh.onecmd("compose h = v * w")
    assert "Error" in capsys.readouterr().err
    assert sh.onecmd("exit")


def test_shell_save(shell, tmp_path):
    sh, out = shell
    sh.onecmd("ring A = QQ[x,y]")
    target = tmp_path / 'saved.euler'
    sh.onecmd(f"save {target}")
    assert target.read_text(encoding='utf-8') == "ring A = QQ[x, y];\n"
    assert "saved 1 statements" in out.getvalue()
