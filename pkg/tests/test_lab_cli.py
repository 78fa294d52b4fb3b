import io
import json

import pytest

from polymoments import cli, lab
from polymoments.errors import NoConvergenceError
from polymoments.lab import GeneratorConfig, generate_corpus, read_report, run_sweep, summary_csv, write_report
from polymoments.polynomial import ComplexRational, Polynomial, parse_poly

from conftest import HALF, X

P = Polynomial


class TestCorpus:
    def test_deterministic(self):
        cfg = GeneratorConfig(seed=2024, count=20, allow_complex=True)
        assert generate_corpus(cfg) == generate_corpus(cfg)
        assert generate_corpus(cfg) != generate_corpus(GeneratorConfig(seed=2025, count=20, allow_complex=True))

    def test_empty_and_exact_degree(self):
        assert generate_corpus(GeneratorConfig(count=0)) == []
        corpus = generate_corpus(GeneratorConfig(seed=1, degree_range=(2, 2), count=5))
        assert len(corpus) == 5 and all(f.degree() == 2 for f in corpus)

    def test_pool_bounds(self):
        cfg = GeneratorConfig(seed=3, count=50, numerator_bound=2, denominator_bound=3)
        pool = set(cfg.pool())
        for f in generate_corpus(cfg):
            assert not f.is_zero() and f.is_real()
            assert all(c.re in pool for c in f.coefficients)
            assert 1 <= f.degree() <= 5

    def test_bad_range(self):
        with pytest.raises(ValueError):
            generate_corpus(GeneratorConfig(degree_range=(3, 1)))


class TestSweep:
    def test_known_corpus(self):
        recs = run_sweep([X, X - HALF, X * (1 - X)], 200)
        assert len(recs) == 3
        for r in recs:
            assert r.error is None and r.bound_holds and r.conjecture_holds
            assert abs(r.conjecture_gap) <= 0.05 * r.max_modulus_S
            assert parse_poly(r.poly_text) == parse_poly(r.poly_text)
            assert r.first_nonzero_after == 1 or r.poly_text == "-1/2,1"
        assert recs[1].first_nonzero_after == 2

    def test_empty(self):
        assert run_sweep([], 200) == []
        buf = io.StringIO()
        write_report([], buf)
        header, rows = read_report(io.StringIO(buf.getvalue()))
        assert rows == [] and header["records"] == 0

    def test_constant(self):
        (r,) = run_sweep([P([ComplexRational(-3, 4)])], 60)
        assert r.estimate.estimate == pytest.approx(5, rel=1e-12)
        assert r.max_modulus_S == pytest.approx(5)
        assert r.conjecture_gap == pytest.approx(0, abs=1e-12)

    def test_n_max_floor(self):
        with pytest.raises(ValueError):
            run_sweep([X], 39)

    def test_record_round_trip_and_consistency(self):
        recs = run_sweep(GeneratorConfig(seed=5, count=6, allow_complex=True), 80)
        for r in recs:
            assert parse_poly(r.poly_text).to_text() == r.poly_text
            assert r.seed == 5 and r.n_max == 80
            if r.error is None:
                assert r.bound_holds == (r.estimate.estimate <= r.max_modulus_S * 1.05)
                assert r.bound_slack == pytest.approx(r.max_modulus_S - r.estimate.estimate)

    def test_robust_to_pathological_entries(self, monkeypatch):
        base = generate_corpus(GeneratorConfig(seed=9, count=4))
        clean = run_sweep(base, 60)
        bad = X**3 - 3 * X  # stand-in that we force to fail below
        real_cs = lab.critical_set

        def flaky(f):
            if f == bad:
                raise NoConvergenceError("injected")
            return real_cs(f)

        monkeypatch.setattr(lab, "critical_set", flaky)
        recs = run_sweep(base[:2] + [P(), bad] + base[2:], 60)
        assert "InsufficientDataError" in recs[2].error
        assert "NoConvergenceError" in recs[3].error
        assert [r.to_dict() for r in recs[:2] + recs[4:]] == [r.to_dict() for r in clean]

    def test_resource_cap_is_a_record(self):
        (r,) = run_sweep([P([ComplexRational(7, 3), 5, 9])], 200, bit_cap=64)
        assert r.error.startswith("ResourceLimitError")

    def test_parallel_matches_serial(self):
        cfg = GeneratorConfig(seed=21, count=4)
        serial = [r.to_dict() for r in run_sweep(cfg, 60)]
        assert [r.to_dict() for r in run_sweep(cfg, 60, jobs=2)] == serial

    def test_csv(self):
        text = summary_csv(run_sweep([X, P()], 60))
        lines = text.splitlines()
        assert lines[0].startswith("index,poly_text,degree,estimate")
        assert len(lines) == 3 and "InsufficientDataError" in lines[2]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_moments(self, capsys):
        code, out, _ = run(capsys, "moments", "--poly", "-1/2,1", "--n-max", "3")
        assert code == 0
        assert out.splitlines()[2] == "2\t1/12\t0/1"
        code, out, _ = run(capsys, "moments", "--poly", "0,1", "--n-max", "2", "--out", "csv")
        assert code == 0 and out.splitlines()[0] == "n,re,im,abs,abs_nth_root"

    def test_critical_set(self, capsys):
        code, out, _ = run(capsys, "critical-set", "--poly", "0,1,-1")
        data = json.loads(out)
        assert code == 0 and data["max_modulus"] == pytest.approx(0.25)

    def test_growth(self, capsys):
        code, out, _ = run(capsys, "growth", "--poly", "0,1,-1", "--n-max", "200", "--method", "rootmax")
        data = json.loads(out)
        assert code == 0 and data["bound_holds"] is True
        assert data["estimate"]["method"] == "windowed-root-max"

    @pytest.mark.parametrize("method", ["series", "quadrature", "pf"])
    def test_eval_f(self, capsys, method):
        code, out, _ = run(capsys, "eval-f", "--poly", "0,1", "--t", "0.5,0", "--method", method)
        assert code == 0
        assert json.loads(out)["value"][0] == pytest.approx(1.3862943611198906, abs=1e-9)

    def test_trace(self, capsys, tmp_path):
        dump = tmp_path / "trace.jsonl"
        code, out, _ = run(capsys, "trace", "--poly", "0,0,1", "--tau-start", "4,0", "--tau-end", "-4,0.5",
                           "--dump", str(dump))
        assert code == 0
        data = json.loads(out)
        assert data["permutation"] is None and data["convention"] == "ccw-arc-radius-2c"
        assert dump.read_text().count("\n") == data["steps"] + 2

    def test_sweep_deterministic(self, capsys, tmp_path):
        outs = []
        for k in range(2):
            path = tmp_path / f"r{k}.jsonl"
            code, _, err = run(capsys, "sweep", "--seed", "17", "--count", "3", "--degree", "1,3",
                               "--n-max", "60", "--complex", "--out", str(path))
            assert code == 0 and "3 records" in err
            lines = path.read_text().splitlines()
            head = json.loads(lines[0])["header"]
            head.pop("timestamp")
            outs.append((head, lines[1:], path.with_suffix(".csv").read_text()))
        assert outs[0] == outs[1]

    @pytest.mark.parametrize(
        "argv, code",
        [
            (["moments", "--poly", "1,,2"], 2),
            (["moments"], 2),
            (["bogus"], 2),
            (["eval-f", "--poly", "0,1", "--t", "2,0", "--method", "quadrature"], 3),
            (["eval-f", "--poly", "0,1", "--t", "5,0", "--method", "series"], 2),
            (["trace", "--poly", "0,1", "--tau-start", "4,0", "--tau-end", "1,0"], 3),
            (["moments", "--poly", "7/3,5,9", "--bit-cap", "64"], 4),
        ],
    )
    def test_exit_codes(self, capsys, argv, code):
        assert run(capsys, *argv)[0] == code

    def test_syntax_error_offset(self, capsys):
        _, _, err = run(capsys, "moments", "--poly", "1,,2")
        assert "2" in err
