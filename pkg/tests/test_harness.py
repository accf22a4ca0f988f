import json
import math

import numpy as np
import pytest

import nuctrace.harness as harness
from nuctrace import (
    DecayProfile,
    Exponent,
    ExperimentConfig,
    NuclearRep,
    Tolerances,
    config_from_json,
    config_to_json,
    conjugate_tag,
    generate_family,
    lp,
    lp_norm,
    run_factorization_suite,
    run_ladder_suite,
    run_trace_suite,
    Vector,
)


def small_config(tmp_path, **overrides):
    base = dict(
        p=Exponent(2),
        family="random_unit",
        decay=DecayProfile(exponent_multiplier=1.1, term_count=6),
        ladder=(4, 6, 8),
        seed=20260808,
        tolerances=Tolerances(),
        out_dir=str(tmp_path),
        cases_per_level=2,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_roundtrip(self, tmp_path):
        cfg = small_config(tmp_path)
        assert config_from_json(config_to_json(cfg)) == cfg
        assert config_from_json(json.loads(json.dumps(config_to_json(cfg)))) == cfg

    def test_defaults_fill_in(self):
        cfg = config_from_json(
            {
                "p": "inf",
                "family": "diagonal",
                "decay": {"exponent_multiplier": 1.0, "term_count": 4},
                "ladder": [4, 8],
                "seed": 1,
            }
        )
        assert cfg.tolerances == Tolerances(1e-10, 1e-10)
        assert cfg.cases_per_level == 25
        assert cfg.out_dir == "."

    def test_validation_errors(self, tmp_path):
        with pytest.raises(ValueError, match="ladder"):
            small_config(tmp_path, ladder=())
        with pytest.raises(ValueError, match="increasing"):
            small_config(tmp_path, ladder=(8, 8))
        with pytest.raises(ValueError, match="term_count"):
            small_config(tmp_path, decay=DecayProfile(1.1, 100))
        with pytest.raises(ValueError, match="family"):
            small_config(tmp_path, family="fancy")
        with pytest.raises(ValueError, match="seed"):
            small_config(tmp_path, seed=-1)
        with pytest.raises(ValueError, match="4096"):
            small_config(tmp_path, ladder=(4, 8, 5000))
        with pytest.raises(ValueError):
            DecayProfile(0.5, 4)
        with pytest.raises(ValueError):
            Tolerances(reconstruction=0.0)
        with pytest.raises(ValueError, match="missing"):
            config_from_json({"p": "2"})


class TestGenerateFamily:
    def test_diagonal_harmonic_weights(self, tmp_path):
        cfg = small_config(
            tmp_path, family="diagonal", decay=DecayProfile(1.0, 4), ladder=(4,)
        )
        rep = generate_family(cfg, 4)
        assert np.allclose(rep.mu, [1.0, 0.5, 1 / 3, 0.25], rtol=1e-15)
        assert np.array_equal(rep.vectors, np.eye(4))
        assert np.array_equal(rep.functionals, np.eye(4))

    def test_determinism(self, tmp_path):
        cfg = small_config(tmp_path, family="shared_functional_rotations")
        a = generate_family(cfg, 8)
        b = generate_family(cfg, 8)
        assert np.array_equal(a.mu, b.mu)
        assert np.array_equal(a.vectors, b.vectors)
        assert np.array_equal(a.functionals, b.functionals)

    def test_seed_changes_draws(self, tmp_path):
        a = generate_family(small_config(tmp_path, seed=1), 8)
        b = generate_family(small_config(tmp_path, seed=2), 8)
        assert not np.array_equal(a.vectors, b.vectors)

    def test_random_unit_norms(self, tmp_path):
        cfg = small_config(
            tmp_path, p=Exponent(4), decay=DecayProfile(1.1, 16), ladder=(4, 8, 16)
        )
        rep = generate_family(cfg, 16)
        conj = conjugate_tag(rep.ambient)
        assert str(conj.p) == "4/3"
        for k in range(len(rep)):
            assert abs(lp_norm(Vector(rep.vectors[k], rep.ambient)) - 1) <= 1e-12
            assert abs(lp_norm(Vector(rep.functionals[k], conj)) - 1) <= 1e-12

    def test_shared_functional_rotations_family(self, tmp_path):
        # rotations redistribute weights but keep the rep well formed
        cfg = small_config(tmp_path, family="shared_functional_rotations")
        rep = generate_family(cfg, 8)
        assert 2 <= len(rep) <= cfg.decay.term_count
        assert np.all(rep.mu > 0)
        assert list(rep.mu) == sorted(rep.mu, reverse=True)

    def test_level_bounds(self, tmp_path):
        with pytest.raises(ValueError):
            generate_family(small_config(tmp_path), 0)
        with pytest.raises(ValueError):
            generate_family(small_config(tmp_path), 5000)

    def test_term_count_caps_terms(self, tmp_path):
        cfg = small_config(tmp_path, decay=DecayProfile(1.1, 3))
        assert len(generate_family(cfg, 8)) == 3
        assert len(generate_family(cfg, 2)) == 2


class TestTraceSuite:
    def test_all_cases_pass(self, tmp_path):
        report = run_trace_suite(small_config(tmp_path))
        assert report.suite == "trace"
        assert report.failed == 0
        assert report.passed == len(report.cases) == 6
        assert (tmp_path / "trace_report.json").exists()
        assert (tmp_path / "trace_meta.json").exists()

    def test_seed_change_same_counts_different_data(self, tmp_path):
        r1 = run_trace_suite(small_config(tmp_path / "a", seed=11))
        r2 = run_trace_suite(small_config(tmp_path / "b", seed=12))
        assert r1.passed == r2.passed
        assert [c["trace"] for c in r1.cases] != [c["trace"] for c in r2.cases]

    def test_report_data_excludes_timing(self, tmp_path):
        run_trace_suite(small_config(tmp_path))
        data = json.loads((tmp_path / "trace_report.json").read_text())
        assert "duration" not in json.dumps(data)
        meta = json.loads((tmp_path / "trace_meta.json").read_text())
        assert meta["duration_seconds"] >= 0


class TestFactorizationSuite:
    def test_p1_reduces_to_sup(self, tmp_path):
        report = run_factorization_suite(small_config(tmp_path, p=Exponent(1)))
        assert report.failed == 0
        for case in report.cases:
            assert case["p"] == "1"
            assert case["built_on_p"] == "inf"
            assert [c["exponent"] for c in case["certificates"]] == ["2", "2", "inf"]

    def test_grid_of_p_values(self, tmp_path):
        for p in (Exponent(2), Exponent(3), Exponent(4)):
            report = run_factorization_suite(small_config(tmp_path / str(p), p=p))
            assert report.failed == 0
            assert all(c["chain_exact"] for c in report.cases)

    def test_degenerate_case_skipped_not_failed(self, tmp_path, monkeypatch):
        def empty_family(config, n):
            return NuclearRep(lp(config.p, n), [])

        monkeypatch.setattr(harness, "generate_family", empty_family)
        report = run_factorization_suite(small_config(tmp_path))
        assert report.failed == 0
        assert all(c["status"] == "skipped-degenerate" for c in report.cases)
        assert report.passed == len(report.cases)


class TestLadderSuite:
    def test_needs_three_levels(self, tmp_path):
        with pytest.raises(ValueError, match="three"):
            run_ladder_suite(small_config(tmp_path, ladder=(32,), decay=DecayProfile(1.1, 6)))

    def test_diagonal_closed_form(self, tmp_path):
        cfg = small_config(
            tmp_path,
            family="diagonal",
            decay=DecayProfile(1.1, 64),
            ladder=(16, 32, 64),
        )
        report = run_ladder_suite(cfg)
        assert report.failed == 0
        rows = [c for c in report.cases if "level" in c]
        for row in rows:
            oracle = math.fsum(k ** -1.1 for k in range(1, row["level"] + 1))
            assert row["abs_sum"] == pytest.approx(oracle, rel=1e-10)
        gap_row = next(c for c in report.cases if c.get("check") == "gap_shrinkage")
        assert gap_row["status"] == "pass"
        assert (tmp_path / "ladder.csv").read_text().startswith(
            "level,abs_sum,tail_fraction,residual\n"
        )


class TestDeterminismAndParallelism:
    def test_byte_identical_reports(self, tmp_path):
        cfg_a = small_config(tmp_path / "a")
        cfg_b = small_config(tmp_path / "b")
        for runner in (run_trace_suite, run_factorization_suite):
            runner(cfg_a)
            runner(cfg_b)
        run_ladder_suite(small_config(tmp_path / "a", decay=DecayProfile(1.1, 6)))
        run_ladder_suite(small_config(tmp_path / "b", decay=DecayProfile(1.1, 6)))
        for name in ("trace_report.json", "factorize_report.json", "ladder_report.json", "ladder.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_parallel_equals_serial(self, tmp_path, monkeypatch):
        serial = run_trace_suite(small_config(tmp_path / "serial"))
        monkeypatch.setenv("GLT_THREADS", "4")
        parallel = run_trace_suite(small_config(tmp_path / "parallel"))
        assert serial.cases == parallel.cases
        assert (tmp_path / "serial" / "trace_report.json").read_bytes() == (
            tmp_path / "parallel" / "trace_report.json"
        ).read_bytes()

    def test_invalid_thread_env_rejected(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GLT_THREADS", "zero")
        with pytest.raises(ValueError, match="GLT_THREADS"):
            run_trace_suite(small_config(tmp_path))
        monkeypatch.setenv("GLT_THREADS", "0")
        with pytest.raises(ValueError, match="GLT_THREADS"):
            run_trace_suite(small_config(tmp_path))

    def test_suite_order_does_not_matter(self, tmp_path):
        cfg1 = small_config(tmp_path / "fwd")
        run_trace_suite(cfg1)
        run_factorization_suite(cfg1)
        cfg2 = small_config(tmp_path / "rev")
        run_factorization_suite(cfg2)
        run_trace_suite(cfg2)
        for name in ("trace_report.json", "factorize_report.json"):
            assert (tmp_path / "fwd" / name).read_bytes() == (
                tmp_path / "rev" / name
            ).read_bytes()
