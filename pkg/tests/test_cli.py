"""
Tests for the observa command line
"""

import pytest

from automata import observability
from main import EXIT_ASSERTION, EXIT_BOUNDS, EXIT_FORMAT, EXIT_OK, EXIT_USAGE, main

M1_TEXT = """\
alphabet: a,b
states: s,f,r
initial: s
final: f
s a f
s b f
f a f
f b r
r a r
r b r
"""

UNION_TABLE_TEXT = """\
alphabet: a,b
states: q0,q1,q2,q3,q4
initial: q0
final: q1,q2,q3
q0 a q1
q0 b q1
q1 a q2
q1 b q3
q2 a q2
q2 b q4
q3 a q4
q3 b q3
q4 a q4
q4 b q4
"""


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ('OBSERVA_RUN_LOG', 'OBSERVA_VERBOSE', 'OBSERVA_WORKERS', 'OBSERVA_MAX_ENUM_LENGTH'):
        monkeypatch.delenv(name, raising=False)


class TestCommands:
    """Successful runs and their exact output"""

    def write_m1(self, tmp_path) -> str:
        path = tmp_path / 'm1.dfa'
        path.write_text(M1_TEXT)
        return str(path)

    def test_analyze(self, tmp_path, capsys):
        assert main(['analyze', self.write_m1(tmp_path)]) == EXIT_OK
        assert capsys.readouterr().out == (
            "states: 3\n"
            "minimal_states: 3\n"
            "so_count: 1\n"
            "so_index: 1\n"
            "observable_language: false\n"
            "minimal_alphabet: a,b\n"
            "non_observable_count: 1\n"
            "state s: observable\n"
            "state f: semi-observable\n"
            "state r: non-observable\n"
        )

    def test_analyze_json(self, capsys):
        assert main(['analyze', '-e', 'a+b+', '-a', 'a,b', '--json']) == EXIT_OK
        assert '"so_index": 2' in capsys.readouterr().out

    def test_op_union(self, capsys):
        code = main(['op', 'union', '-e', '(a|b)a*', '-e', '(a|b)b*', '-a', 'a,b'])
        assert code == EXIT_OK
        assert capsys.readouterr().out == UNION_TABLE_TEXT

    def test_op_writes_file(self, tmp_path, capsys):
        out = tmp_path / 'union.dfa'
        main(['op', 'union', '-e', '(a|b)a*', '-e', '(a|b)b*', '-a', 'a,b', '-o', str(out)])
        assert capsys.readouterr().out == ''
        assert out.read_text() == UNION_TABLE_TEXT

    def test_plus_without_minimization_shows_subsets(self, tmp_path, capsys):
        assert main(['op', 'plus', '--no-min', self.write_m1(tmp_path)]) == EXIT_OK
        assert capsys.readouterr().out == (
            "alphabet: a,b\n"
            "states: q0,q1,q2\n"
            "initial: q0\n"
            "final: q1,q2\n"
            "q0 a q1\n"
            "q0 b q1\n"
            "q1 a q1\n"
            "q1 b q2\n"
            "q2 a q2\n"
            "q2 b q2\n"
            "# subset q0 = {s}\n"
            "# subset q1 = {f}\n"
            "# subset q2 = {f,r}\n"
        )

    def test_op_invhom(self, tmp_path, capsys):
        hom = tmp_path / 'h.txt'
        hom.write_text("a -> a\nb -> ab\n")
        assert main(['op', 'invhom', self.write_m1(tmp_path), '-m', str(hom)]) == EXIT_OK
        assert capsys.readouterr().out == (
            "alphabet: a,b\n"
            "states: q0,q1,q2\n"
            "initial: q0\n"
            "final: q1\n"
            "q0 a q1\n"
            "q0 b q2\n"
            "q1 a q1\n"
            "q1 b q2\n"
            "q2 a q2\n"
            "q2 b q2\n"
        )

    def test_eq(self, tmp_path, capsys):
        assert main(['eq', self.write_m1(tmp_path), '-e', '(a|b)a*', '-a', 'a,b']) == EXIT_OK
        assert capsys.readouterr().out == "equivalent: true\n"
        assert main(['eq', '-e', '(a|b)a*', '-e', '(a|b)b*', '-a', 'a,b']) == EXIT_OK
        assert capsys.readouterr().out == "equivalent: false\n"

    def test_enum(self, capsys):
        assert main(['enum', '-e', '(a|b)a*', '-a', 'a,b', '-n', '2']) == EXIT_OK
        assert capsys.readouterr().out == "a\nb\naa\nba\n"

    def test_enum_shows_lambda(self, capsys):
        main(['enum', '-e', '_|a', '-a', 'a', '-n', '1'])
        assert capsys.readouterr().out == "_\na\n"

    def test_min_and_show(self, tmp_path, capsys):
        assert main(['min', self.write_m1(tmp_path)]) == EXIT_OK
        minimal = capsys.readouterr().out
        assert main(['show', self.write_m1(tmp_path)]) == EXIT_OK
        assert capsys.readouterr().out == minimal

    def test_embed(self, capsys):
        assert main(['embed', '-e', 'a+', '-a', 'a', '--to', 'a,b']) == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[:2] == ['alphabet: a,b', 'states: q0,q1,q2']

    def test_gen_hierarchy(self, capsys):
        assert main(['gen-hierarchy', '-k', '0']) == EXIT_OK
        assert capsys.readouterr().out == (
            "alphabet: a,b\n"
            "states: q0,q1\n"
            "initial: q0\n"
            "final: q1\n"
            "q0 a q1\n"
            "q0 b q1\n"
            "q1 a q1\n"
            "q1 b q1\n"
        )

    def test_gen_hierarchy_k2_is_union_table(self, capsys):
        main(['gen-hierarchy', '-k', '2'])
        assert capsys.readouterr().out == UNION_TABLE_TEXT

    def test_witness_writes_directory(self, tmp_path, capsys):
        out = tmp_path / 'witness'
        code = main(['witness', 'T1-hom', '--max-states', '1', '--max-image', '2', '--out', str(out)])
        assert code == EXIT_OK
        report = capsys.readouterr().out
        assert report.startswith("claim: T1-hom\n")
        assert (out / 'witness.txt').read_text() == report
        assert (out / 'homomorphism.txt').read_text() == "a -> aa\nb -> bb\n"
        assert (out / 'input_1.dfa').exists()
        assert (out / 'result.dfa').exists()

    def test_suite_step(self, capsys):
        assert main(['suite', '--steps', 'union']) == EXIT_OK
        assert capsys.readouterr().out.endswith("summary: passed 7, failed 0, skipped-at-scale 0, finding 0\n")

    def test_help(self, capsys):
        assert main(['--help']) == EXIT_OK
        assert 'gen-hierarchy' in capsys.readouterr().out


class TestExitCodes:
    """Errors map to exit codes with a message on stderr"""

    def test_no_command(self, capsys):
        assert main([]) == EXIT_USAGE
        assert capsys.readouterr().err.startswith('error: ')

    def test_unknown_operation(self, capsys):
        assert main(['op', 'shuffle', '-e', 'a', '-a', 'a']) == EXIT_USAGE

    def test_expression_without_alphabet(self, capsys):
        assert main(['analyze', '-e', 'a']) == EXIT_USAGE
        assert '-e needs -a' in capsys.readouterr().err

    def test_wrong_operand_count(self, capsys):
        assert main(['op', 'union', '-e', 'a', '-a', 'a']) == EXIT_USAGE

    def test_enumeration_guard(self, capsys):
        assert main(['enum', '-e', 'a*', '-a', 'a', '-n', '20']) == EXIT_USAGE

    def test_format_error(self, tmp_path, capsys):
        path = tmp_path / 'bad.dfa'
        path.write_text("alphabet: a\nstates: s\ninitial: t\nfinal:\ns a s\n")
        assert main(['analyze', str(path)]) == EXIT_FORMAT
        assert capsys.readouterr().err == f"error: {path}:3: unknown initial state 't'\n"

    def test_missing_file(self, tmp_path, capsys):
        assert main(['analyze', str(tmp_path / 'absent.dfa')]) == EXIT_FORMAT

    def test_regex_error(self, capsys):
        assert main(['analyze', '-e', 'a|', '-a', 'a']) == EXIT_FORMAT
        assert capsys.readouterr().err == "error: <regex>: offset 2: expected an expression\n"

    def test_operands_over_different_alphabets(self, tmp_path, capsys):
        narrow = tmp_path / 'a.dfa'
        narrow.write_text("alphabet: a\nstates: s\ninitial: s\nfinal: s\ns a s\n")
        assert main(['op', 'union', str(narrow), '-e', 'b', '-a', 'a,b']) == EXIT_FORMAT
        assert 'different alphabets' in capsys.readouterr().err

    def test_bounds_exhausted(self, capsys):
        assert main(['witness', 'T1-hom', '--max-states', '1', '--max-image', '1']) == EXIT_BOUNDS
        assert 'bounds exhausted after 8 candidate(s)' in capsys.readouterr().err

    def test_failed_suite_assertion(self, monkeypatch, capsys):
        real = observability.so_count
        monkeypatch.setattr(observability, 'so_count', lambda dfa: real(dfa) + 1)
        assert main(['suite', '--steps', 'union']) == EXIT_ASSERTION
        captured = capsys.readouterr()
        assert captured.out.startswith('FAILED M1 so_index: expected 1, actual 2\n')
        assert 'suite assertion failed: M1 so_index' in captured.err


class TestRunLog:
    """'observa log' over OBSERVA_RUN_LOG"""

    def test_disabled(self, capsys):
        assert main(['log']) == EXIT_USAGE

    def test_witness_runs_are_logged(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv('OBSERVA_RUN_LOG', str(tmp_path / 'runs.db'))
        main(['witness', 'T1-hom', '--max-states', '1', '--max-image', '1'])
        main(['witness', 'T1-hom', '--max-states', '1', '--max-image', '2'])
        capsys.readouterr()

        assert main(['log', '--tail', '5']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        assert lines[0].endswith('witness success after_index 2')
        assert ' witness exhausted ' in lines[1]

    def test_stats(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv('OBSERVA_RUN_LOG', str(tmp_path / 'runs.db'))
        main(['witness', 'T1-hom', '--max-states', '1', '--max-image', '1'])
        main(['witness', 'T1-hom', '--max-states', '1', '--max-image', '2'])
        capsys.readouterr()

        assert main(['log', '--stats']) == EXIT_OK
        assert capsys.readouterr().out == (
            "total_runs: 2\n"
            "successful: 1\n"
            "exhausted: 1\n"
            "failed: 0\n"
            "command witness: 2\n"
        )
