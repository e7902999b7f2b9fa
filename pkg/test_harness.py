#!/usr/bin/env python3
"""
Tests for the corpus generator, the property suites and the invol CLI
"""

import json
import sys
import time
from pathlib import Path

import pytest
import yaml

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import utils.config as config_module
from algebra.endo import IDENTITY
from api.commands import run_command
from services.corpus_service import CorpusService, DeterministicRng
from services.suite_service import Report, SuiteService
from utils.config import Config, CorpusConfig
from utils.errors import JCCandidate, UnknownSuite


class TestCorpus:
    def test_same_seed_same_corpus(self, small_params):
        first = CorpusService(small_params).random_tame()
        second = CorpusService(small_params).random_tame()
        assert [e.endo for e in first] == [e.endo for e in second]
        assert [e.ground_truth for e in first] == [e.ground_truth for e in second]

    def test_seed_changes_corpus(self, small_params):
        other = small_params.model_copy(update={"seed": small_params.seed + 1})
        first = CorpusService(small_params).random_tame()
        second = CorpusService(other).random_tame()
        assert [e.endo for e in first] != [e.endo for e in second]

    def test_entries_reproduce_alone(self, small_params, small_corpus):
        service = CorpusService(small_params)
        for entry in small_corpus:
            assert entry.seed_path == (small_params.seed, entry.index)
            assert service.entry(entry.index).endo == entry.endo
            assert entry.ground_truth.to_endo() == entry.endo

    def test_no_factors_gives_identity(self, small_params):
        params = small_params.model_copy(update={"max_factors": 0})
        assert all(e.endo == IDENTITY for e in CorpusService(params).random_tame(3))

    def test_rng(self):
        a, b = DeterministicRng(11, 2), DeterministicRng(11, 2)
        draws = [a.randint(-3, 3) for _ in range(50)]
        assert draws == [b.randint(-3, 3) for _ in range(50)]
        assert all(-3 <= d <= 3 for d in draws)
        assert DeterministicRng(11, 3).next_u64() != DeterministicRng(11, 2).next_u64()
        assert all(DeterministicRng(5).nonzero(2) != 0 for _ in range(10))
        with pytest.raises(ValueError):
            a.randint(1, 0)

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            CorpusConfig(count=0)
        with pytest.raises(ValueError):
            CorpusConfig(seed=-1)


class TestSuites:
    @pytest.mark.parametrize("name", ["poly", "parity", "tame", "membership", "tfae", "conditions"])
    def test_suite_passes(self, small_config, name):
        report = SuiteService(small_config).run_suite(name)
        assert report.properties
        assert report.ok, [(p.name, p.counterexamples) for p in report.properties if not p.ok]
        assert all(p.passed > 0 for p in report.properties)

    def test_unknown_suite(self, small_config):
        with pytest.raises(UnknownSuite) as info:
            SuiteService(small_config).run_suite("bogus")
        assert info.value.exit_code == 2

    def test_failures_are_recorded(self, small_config):
        service = SuiteService(small_config)
        report = Report(suite="poly", seed=0)
        service._check(report, "division", lambda: 1 / 0, lambda: "case 7")
        service._check(report, "division", lambda: True, lambda: "case 8")
        result = report.property("division")
        assert (result.passed, result.failed) == (1, 1)
        assert result.counterexamples == ["case 7 (ZeroDivisionError: division by zero)"]
        assert not report.ok and report.failures == 1
        assert report.to_table().row_count == 1
        assert len(result.case_seconds) == 2
        assert result.max_case_seconds == max(result.case_seconds)
        assert result.seconds == pytest.approx(sum(result.case_seconds))

    def test_jc_candidate_stops_the_run(self, small_config):
        def stalled():
            raise JCCandidate("stalled")

        with pytest.raises(JCCandidate):
            SuiteService(small_config)._check(Report(suite="tame", seed=0), "stall", stalled, lambda: "f")

    def test_tame_suite_traces_reduction(self, small_config):
        report = SuiteService(small_config).run_suite("tame")
        result = report.property("tame.reduction_degrees_decrease")
        assert result.passed == small_config.corpus.count
        assert len(result.case_seconds) == result.passed


# Wall-clock budgets at the default corpus and suite sizes
SUITE_BUDGETS = {"parity": 30, "tame": 60, "tfae": 60, "membership": 120, "conditions": 90}


@pytest.mark.slow
class TestDefaultSizes:
    @pytest.mark.parametrize("name, budget", SUITE_BUDGETS.items())
    def test_suite_within_budget(self, name, budget):
        start = time.perf_counter()
        report = SuiteService(Config()).run_suite(name)
        elapsed = time.perf_counter() - start
        assert report.ok, [(p.name, p.counterexamples) for p in report.properties if not p.ok]
        slowest = max(report.properties, key=lambda p: p.max_case_seconds)
        assert elapsed < budget, f"{slowest.name} took {slowest.max_case_seconds:.1f}s in one case"

    def test_wang_within_budget(self):
        report = SuiteService(Config()).run_suite("membership")
        assert report.property("membership.wang_recovers_h").seconds < 10

    def test_conditions_parts_within_budget(self):
        report = SuiteService(Config()).run_suite("conditions")
        classification = sum(report.property(name).seconds for name in (
            "conditions.alpha_conjugates_classified", "conditions.fixed_involutions_classified"))
        assert classification < 30
        theorem_paths = sum(p.seconds for p in report.properties) - classification
        assert theorem_paths < 60


@pytest.fixture
def invol(tmp_path, capsys):
    """Run the CLI against a small config; returns (status, stdout, stderr)"""
    (tmp_path / "invol.yaml").write_text(yaml.safe_dump({
        "corpus": {"count": 4, "max_factors": 2, "max_tri_degree": 2, "coeff_height": 3},
        "suite": {"parity_max_exponent": 2, "random_pairs": 5, "random_degree": 3, "wang_pairs": 5},
    }))

    def run(*argv):
        status = run_command(["--config-dir", str(tmp_path), *argv])
        captured = capsys.readouterr()
        return status, captured.out, captured.err

    return run


class TestCli:
    def test_jac(self, invol):
        assert invol("jac", "x+y^2", "y") == (0, "1\n", "")

    def test_parse(self, invol):
        assert invol("parse", "2*x*y^2 - 1/2 + x^2")[:2] == (0, "x^2 + 2*x*y^2 - 1/2\n")
        assert invol("parse", "--endo", "alpha")[:2] == (0, "P = y; Q = x\n")

    def test_invert_and_decompose(self, invol):
        assert invol("invert", "P = x+y^2; Q = y")[:2] == (0, "P = x - y^2; Q = y\n")
        assert invol("decompose", "P = x+y^2; Q = y")[:2] == (0, "triangular: P = x + y^2; Q = y\n")

    def test_decompose_non_automorphism(self, invol):
        status, _, err = invol("decompose", "P = x^2; Q = y")
        assert status == 1
        assert "NotAnAutomorphism" in err

    def test_membership(self, invol):
        assert invol("member", "x", "--in", "x+y^2", "y")[:2] == (0, "u - v^2\n")
        assert invol("member", "x", "--in", "x^2", "y")[:2] == (1, "not a member\n")
        assert invol("wang", "x + y", "3*x^2 + 6*x*y + 3*y^2 - x - y + 2")[:2] == (0, "3*t^2 - t + 2\n")

    def test_classify(self, invol):
        status, out, _ = invol("classify-involution", "P = -x + y^2; Q = -y")
        assert status == 0
        assert out.splitlines()[0] == "MinusIdentity"
        assert invol("classify-involution", "P = x + 1; Q = y")[0] == 1

    def test_checks(self, invol):
        assert invol("check", "generalized", "P = x+y^2; Q = y")[:2] == (0, "Q-branch\n")
        assert invol("check", "symmetry", "P = x+y^2; Q = y")[:2] == (1, "no symmetry\n")
        assert invol("check", "symmetry", "P = x+y; Q = y", "--eps", "beta")[:2] == (0, "Q-skew\n")

    def test_invert_via_generalized(self, invol):
        status, out, _ = invol("invert-via", "generalized", "P = x+y^2; Q = y")
        lines = out.splitlines()
        assert status == 0
        assert lines[0] == "P = x - y^2; Q = y"
        assert lines[1] == "branch: Q-branch; a = 1; b = -1"
        assert "H(t) = t^2" in lines

    def test_json_output(self, invol):
        status, out, _ = invol("--json", "jac", "x+y^2", "y")
        assert status == 0
        assert json.loads(out) == {"text": "1", "terms": {"0,0": "1"}}
        status, out, _ = invol("invert-via", "generalized", "P = x+y^2; Q = y", "--json")
        certificate = json.loads(out)["certificate"]
        assert certificate["branch"] == "Q-branch"
        assert certificate["phiQ"] == "u - v^2"

    def test_syntax_error_is_a_usage_error(self, invol):
        status, out, err = invol("jac", "x +", "y")
        assert status == 2
        assert out == ""
        assert "at position 3" in err

    def test_degree_cap_on_input_is_a_usage_error(self, invol):
        status, out, err = invol("parse", "x^70000")
        assert status == 2
        assert out == ""
        assert "degree cap" in err
        assert invol("invert", "P = x + y^70000; Q = y")[0] == 2

    def test_configured_degree_cap(self, tmp_path, capsys, monkeypatch):
        # the process-wide config comes back after the test
        monkeypatch.setattr(config_module, "_config_instance", None)
        (tmp_path / "invol.yaml").write_text(yaml.safe_dump({"algebra": {"degree_cap": 10}}))
        assert run_command(["--config-dir", str(tmp_path), "parse", "x^10"]) == 0
        assert run_command(["--config-dir", str(tmp_path), "jac", "x^11", "y"]) == 2
        assert "degree cap 10" in capsys.readouterr().err

    def test_compose_is_ring_map_composition(self, invol):
        # x -> shear(alpha(x)) = shear(y) = y
        assert invol("compose", "P = x+y^2; Q = y", "alpha")[:2] == (0, "P = y; Q = x + y^2\n")
        status, out, _ = invol("compose", "--help")
        assert status == 0
        assert "OUTER(INNER(p))" in out

    def test_errors_as_json(self, invol):
        status, out, _ = invol("--json", "suite", "bogus")
        assert status == 2
        error = json.loads(out)
        assert error["error"] == "UnknownSuite"
        assert error["exit_code"] == 2

    def test_corpus(self, invol):
        status, out, _ = invol("corpus", "--count", "2", "--seed", "3")
        lines = out.splitlines()
        assert status == 0
        assert [line.split(" ")[0] for line in lines] == ["#0", "#1"]
        again = invol("corpus", "--count", "2", "--seed", "3")[1]
        assert again == out

    def test_suite(self, invol):
        status, out, _ = invol("suite", "parity", "--json")
        assert status == 0
        report = json.loads(out)
        assert report["suite"] == "parity"
        assert all(p["failed"] == 0 for p in report["properties"])
