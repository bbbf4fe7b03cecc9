import json

from superlie.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def json_lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


class TestExitCodes:
    def test_pass_is_zero(self, capsys):
        code, out = run(capsys, "table1", "--family", "W", "--m", "1",
                        "--n", "2")
        assert code == 0
        recs = json_lines(out)
        assert recs[-1]["summary"]["pass"] == 1
        assert recs[0]["status"] == "pass"
        assert recs[0]["witnesses"] == []

    def test_fail_is_one(self, capsys):
        code, out = run(capsys, "table1", "--family", "W", "--m", "1",
                        "--n", "2", "--corrupt")
        assert code == 1
        recs = json_lines(out)
        assert recs[0]["status"] == "fail"
        assert recs[0]["witnesses"]

    def test_usage_error_is_two(self, capsys):
        assert main(["table1", "--family", "NOPE", "--m", "1", "--n", "2"]) == 2
        capsys.readouterr()

    def test_unknown_flag_is_two(self, capsys):
        assert main(["table1", "--family", "W", "--m", "1", "--n", "2",
                     "--wat"]) == 2
        capsys.readouterr()


class TestDeterminism:
    def test_byte_identical_canonical_reports(self, capsys):
        args = ["conformal-axioms", "--N", "3", "--samples", "40",
                "--seed", "7", "--canonical"]
        _, out1 = run(capsys, *args)
        _, out2 = run(capsys, *args)
        assert out1 == out2
        for rec in json_lines(out1)[:-1]:
            assert rec["elapsed_ms"] == 0
            assert rec["seed"] == 7


class TestSubcommands:
    def test_forms_count(self, capsys):
        code, out = run(capsys, "forms", "count", "--family", "H", "--n", "5")
        assert code == 0
        assert json_lines(out)[0]["actual"] == "3"

    def test_forms_signature(self, capsys):
        code, out = run(capsys, "forms", "signature", "--q",
                        "gram:[[0,1],[1,0]]")
        assert code == 0
        assert json_lines(out)[0]["actual"] == "(1,1)"

    def test_hodge(self, capsys):
        code, out = run(capsys, "hodge", "--N", "4", "--q", "diag:2,1,1,1")
        assert code == 0
        code, _ = run(capsys, "hodge", "--N", "4", "--q", "diag:2,1,1,1",
                      "--corrupt")
        assert code == 1

    def test_jacobi_corrupt_fails_not_errors(self, capsys):
        code, out = run(capsys, "jacobi", "--bracket", "vf", "--m", "1",
                        "--n", "2", "--samples", "5", "--corrupt")
        assert code == 1
        assert json_lines(out)[0]["status"] == "fail"

    def test_subalgebra(self, capsys):
        code, out = run(capsys, "subalgebra", "--family", "SKO", "--m", "2",
                        "--n", "3", "--beta", "2", "--jmax", "1")
        assert code == 0
        assert "codim=(2, 3)" in json_lines(out)[0]["actual"]

    def test_annihilation_compare(self, capsys):
        code, out = run(capsys, "annihilation-compare", "--N", "2",
                        "--dmin", "-2", "--dmax", "1")
        assert code == 0

    def test_pullback(self, capsys):
        code, _ = run(capsys, "pullback-check", "--lams", "2,-3,1/5")
        assert code == 0

    def test_invalid_family_params_error(self, capsys):
        # excluded family parameters are usage errors: exit 2, no report
        code, out = run(capsys, "table1", "--family", "S", "--m", "1",
                        "--n", "1")
        assert code == 2
        assert out.strip() == ""

    def test_text_output(self, capsys):
        code, out = run(capsys, "forms", "count", "--family", "K", "--n", "4",
                        "--out", "text")
        assert code == 0
        assert out.startswith("PASS")
