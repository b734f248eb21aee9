import subprocess
import sys

from finsums.cli import main
from finsums.fileio import format_coloring, format_solution, parse_coloring, parse_solution
from finsums.coloring import mod_rule, set_rule
from finsums.numerics import ApartSet, FiniteSet


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSolve:
    def test_found_exit_zero(self, capsys, tmp_path):
        out_file = tmp_path / "sol.txt"
        code, out, _ = run_cli(
            ["solve", "--principle", "HT", "--len", "<=2", "--colors", "2",
             "--rule", "mod 2 0 1", "--size", "3", "--max-exp", "10",
             "--max-nodes", "50000", "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        assert "status found" in out
        sol, _ = parse_solution(out_file.read_text())
        assert isinstance(sol, ApartSet)

    def test_exhausted_exit_one(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--principle", "HT", "--len", "<=1", "--colors", "2",
             "--rule", "mod 2 0 1", "--size", "9", "--max-exp", "3",
             "--max-nodes", "5000"],
            capsys,
        )
        assert code == 1
        assert "status exhausted" in out

    def test_malformed_len_exit_two(self, capsys):
        code, _, err = run_cli(
            ["solve", "--principle", "HT", "--len", "squiggle", "--rule", "constant 0"],
            capsys,
        )
        assert code == 2

    def test_constant_rule(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--principle", "HT", "--len", "<=2", "--rule", "constant 0",
             "--size", "4", "--max-exp", "12", "--max-nodes", "1000"],
            capsys,
        )
        assert code == 0
        assert "members 1 2 4 8" in out


class TestVerify:
    def test_valid_exit_zero(self, capsys, tmp_path):
        inst = tmp_path / "inst.txt"
        sol = tmp_path / "sol.txt"
        inst.write_text(format_coloring(mod_rule(2, (0, 1))))
        sol.write_text(format_solution(ApartSet(2, (2, 4))))
        code, out, _ = run_cli(
            ["verify", "--principle", "HT", "--len", "<=1", "--apart", "2",
             "--in", str(inst), "--solution", str(sol)],
            capsys,
        )
        assert code == 0 and "valid with color 0" in out

    def test_invalid_exit_one_with_witness(self, capsys, tmp_path):
        inst = tmp_path / "inst.txt"
        sol = tmp_path / "sol.txt"
        inst.write_text(format_coloring(mod_rule(2, (0, 1))))
        sol.write_text(format_solution(FiniteSet({1, 2, 4})))
        code, out, _ = run_cli(
            ["verify", "--principle", "HT", "--len", "<=1",
             "--in", str(inst), "--solution", str(sol)],
            capsys,
        )
        assert code == 1
        assert "sum (1, (1,)) has color 1 but sum (2, (2,)) has color 0" in out

    def test_shape_mismatch_exit_two(self, capsys, tmp_path):
        inst = tmp_path / "inst.txt"
        sol = tmp_path / "sol.txt"
        inst.write_text(format_coloring(mod_rule(2, (0, 1))))
        sol.write_text("solution v1 polarized\npart 1 2\npart 4 8\n")
        code, _, err = run_cli(
            ["verify", "--principle", "HT", "--len", "<=1",
             "--in", str(inst), "--solution", str(sol)],
            capsys,
        )
        assert code == 2


class TestReducePullback:
    def test_reduce_writes_instance(self, capsys, tmp_path):
        inst = tmp_path / "pairs.txt"
        out_file = tmp_path / "nat.txt"
        from finsums.coloring import pair_rule

        inst.write_text(format_coloring(pair_rule("pair-sum", 2, (0, 1))))
        code, out, _ = run_cli(
            ["reduce", "--step", "ipt-from-ht-eq2", "--in", str(inst), "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        forward = parse_coloring(out_file.read_text())
        assert forward.arity == "nat"
        assert forward(12) == 1

    def test_pullback_auto_verifies(self, capsys, tmp_path):
        inst = tmp_path / "pairs.txt"
        sol = tmp_path / "target.txt"
        back = tmp_path / "back.txt"
        from finsums.coloring import pair_rule

        inst.write_text(format_coloring(pair_rule("pair-sum", 2, (0, 1))))
        sol.write_text(format_solution(ApartSet(2, (2, 8, 32, 128))))
        code, out, _ = run_cli(
            ["pullback", "--step", "ipt-from-ht-eq2", "--in", str(inst),
             "--solution", str(sol), "--out", str(back)],
            capsys,
        )
        assert code == 0 and "verify valid" in out
        sol_back, _ = parse_solution(back.read_text())
        assert tuple(map(tuple, sol_back.parts)) == ((1, 5), (3, 7))

    def test_unknown_step_exit_two(self, capsys, tmp_path):
        inst = tmp_path / "inst.txt"
        inst.write_text(format_coloring(mod_rule(2, (0, 1))))
        code, _, _ = run_cli(
            ["pullback", "--step", "no-such-step", "--in", str(inst), "--solution", str(inst)],
            capsys,
        )
        assert code == 2


class TestCertify:
    def test_divide_sum_passes(self, capsys):
        code, out, _ = run_cli(
            ["certify", "--step", "divide-sum", "--len", "=2", "--target-len", "=4",
             "--count", "6", "--size", "8", "--max-exp", "12", "--max-nodes", "30000"],
            capsys,
        )
        assert code == 0
        assert "0 failed" in out

    def test_broken_fixture_fails_with_counterexample(self, capsys):
        code, out, _ = run_cli(
            ["certify", "--step", "broken-divide-sum", "--len", "=2", "--target-len", "=4",
             "--count", "8", "--size", "8", "--max-exp", "12", "--max-nodes", "30000"],
            capsys,
        )
        assert code == 1
        assert "first counterexample" in out

    def test_zero_count_is_flagged_vacuous(self, capsys):
        code, out, _ = run_cli(
            ["certify", "--step", "divide-sum", "--len", "=2", "--target-len", "=4",
             "--count", "0", "--size", "8", "--max-exp", "9", "--max-nodes", "1000"],
            capsys,
        )
        assert code == 0
        assert "vacuous" in out


class TestDecode:
    def test_le2_agreement(self, capsys):
        code, out, _ = run_cli(
            ["decode", "--mode", "le2", "--injection", "shift-10", "--x", "3",
             "--size", "12", "--max-exp", "18", "--max-nodes", "100000"],
            capsys,
        )
        assert code == 0
        assert "verdict not-in-range" in out
        assert "agreement yes" in out

    def test_eq3_agreement(self, capsys):
        code, out, _ = run_cli(
            ["decode", "--mode", "eq3", "--injection", "shift-10", "--x", "5",
             "--size", "12", "--max-exp", "18", "--max-nodes", "100000"],
            capsys,
        )
        assert code == 0
        assert "agreement yes" in out

    def test_inconclusive_exit_zero(self, capsys):
        code, out, _ = run_cli(
            ["decode", "--mode", "le2", "--injection", "identity", "--x", "300",
             "--size", "6", "--max-exp", "10", "--max-nodes", "50000"],
            capsys,
        )
        assert code == 0
        assert "verdict inconclusive" in out


class TestCatalogAndNumber:
    def test_catalog_lists_steps(self, capsys):
        code, out, _ = run_cli(["catalog"], capsys)
        assert code == 0
        assert "step ipt-from-ht-eq2" in out
        assert "broken-divide-sum" not in out
        code, out, _ = run_cli(["catalog", "--fixtures"], capsys)
        assert "broken-divide-sum" in out

    def test_witness_number(self, capsys):
        code, out, _ = run_cli(
            ["number", "--len", "<=1", "--colors", "2", "--size", "2"], capsys
        )
        assert code == 0
        assert "witness-number 4" in out


class TestDeterminism:
    def test_reports_byte_identical(self, tmp_path):
        args = [sys.executable, "-m", "finsums.cli", "solve", "--principle", "HT",
                "--len", "<=2", "--rule", "mod 3 0 1 0", "--size", "3",
                "--max-exp", "10", "--max-nodes", "50000"]
        runs = [subprocess.run(args, capture_output=True, text=True) for _ in range(2)]
        assert runs[0].stdout == runs[1].stdout
        assert runs[0].returncode == runs[1].returncode == 0

    def test_emitted_files_reparse_equal(self, capsys, tmp_path):
        inst = tmp_path / "inst.txt"
        inst.write_text(format_coloring(set_rule("set-size", 2, (0, 1))))
        out_file = tmp_path / "fwd.txt"
        code, _, _ = run_cli(
            ["reduce", "--step", "fut-from-ht", "--len", "<=2", "--apart", "2",
             "--in", str(inst), "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        text = out_file.read_text()
        assert format_coloring(parse_coloring(text)) == text
