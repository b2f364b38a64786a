import pytest

from jrsched.experiment import (
    CSV_FIELDS,
    ConfigError,
    ExperimentConfig,
    SUMMARY_HEADER,
    records_to_csv,
    run_experiment,
    summarize,
    validate_config,
)
from jrsched.generators import GenKind
from jrsched.model import validate_instance
from jrsched.offline import threshold_dp_opt


def test_csv_header_is_pinned():
    assert ",".join(CSV_FIELDS) == (
        "instance_id,kind,n,p_or_beta,K,seed,alg_cost,alg_q,opt_cost,opt_q,"
        "opt_method,ratio,runtime_ms"
    )
    assert SUMMARY_HEADER == "kind,n,p_or_beta,K,count,mean_ratio,min_ratio,max_ratio"


def _strip_runtime(csv_text: str) -> list[str]:
    return [line.rsplit(",", 1)[0] for line in csv_text.splitlines()]


class TestDeterminism:
    def test_rows_invariant_under_worker_count(self):
        base = dict(
            kind=GenKind.GEOMETRIC,
            n_values=(30,),
            K=1,
            beta_values=(0.05,),
            replication=6,
            master_seed=99,
        )
        serial = records_to_csv(run_experiment(ExperimentConfig(**base, jobs=1)))
        parallel = records_to_csv(run_experiment(ExperimentConfig(**base, jobs=3)))
        # every column but the wall-clock runtime is byte-stable
        assert _strip_runtime(serial) == _strip_runtime(parallel)

    def test_repeat_run_identical_modulo_runtime(self):
        cfg = ExperimentConfig(
            kind=GenKind.PBOUNDED_UNIFORM,
            n_values=(5, 9),
            K=2,
            p_values=(3,),
            replication=4,
            master_seed=1,
        )
        a = records_to_csv(run_experiment(cfg))
        b = records_to_csv(run_experiment(cfg))
        assert _strip_runtime(a) == _strip_runtime(b)

    def test_different_seed_changes_instances(self):
        base = dict(kind=GenKind.GEOMETRIC, n_values=(10,), K=1, beta_values=(0.3,), replication=3)
        a = run_experiment(ExperimentConfig(**base, master_seed=1))
        b = run_experiment(ExperimentConfig(**base, master_seed=2))
        assert [r.seed for r in a] != [r.seed for r in b]


class TestRecords:
    def test_spread_out_ratio_closed_form(self):
        cfg = ExperimentConfig(
            kind=GenKind.SPARSE, n_values=(1, 4, 9), K=3, replication=1, master_seed=0
        )
        for rec in run_experiment(cfg):
            assert rec.alg_cost == 2 * 3 * rec.n
            assert rec.opt_lo == rec.opt_hi == 3 * rec.n + 1
            assert rec.ratio_lo == rec.alg_cost / (3 * rec.n + 1)

    def test_even_spacing_uses_closed_form(self):
        cfg = ExperimentConfig(
            kind=GenKind.PREGULAR, n_values=(12,), K=2, p_values=(2,), replication=1
        )
        (rec,) = run_experiment(cfg)
        assert rec.opt_method == "closed_form"
        inst = validate_instance(tuple(range(0, 24, 2)), 2)
        assert rec.opt_lo == threshold_dp_opt(inst).cost

    def test_auto_picks_exact_solvers_by_size(self):
        cfg = ExperimentConfig(
            kind=GenKind.GEOMETRIC, n_values=(6, 20), K=1, beta_values=(0.5,), replication=1
        )
        by_n = {r.n: r for r in run_experiment(cfg)}
        assert by_n[6].opt_method == "brute_force"
        assert by_n[20].opt_method == "threshold_dp"

    def test_bracket_rows_bound_the_exact_value(self):
        cfg = ExperimentConfig(
            kind=GenKind.GEOMETRIC,
            n_values=(25,),
            K=2,
            beta_values=(0.2,),
            replication=4,
            master_seed=5,
            opt_method="bracket",
        )
        exact_cfg = ExperimentConfig(
            kind=GenKind.GEOMETRIC,
            n_values=(25,),
            K=2,
            beta_values=(0.2,),
            replication=4,
            master_seed=5,
            opt_method="threshold_dp",
        )
        for rec, exact in zip(run_experiment(cfg), run_experiment(exact_cfg)):
            assert rec.opt_method == "bracket_bound"
            assert rec.opt_lo <= exact.opt_lo <= rec.opt_hi
            row = rec.csv_row()
            assert ":" in row[CSV_FIELDS.index("opt_cost")]
            assert ":" in row[CSV_FIELDS.index("ratio")]

    def test_csv_shape(self):
        cfg = ExperimentConfig(
            kind=GenKind.REGULAR, n_values=(5,), K=1, replication=2, master_seed=3
        )
        text = records_to_csv(run_experiment(cfg))
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_FIELDS)
        assert len(lines) == 3
        assert all(len(line.split(",")) == len(CSV_FIELDS) for line in lines)


class TestSummary:
    def test_summary_matches_recomputation(self):
        cfg = ExperimentConfig(
            kind=GenKind.GEOMETRIC,
            n_values=(8, 12),
            K=1,
            beta_values=(0.4, 0.6),
            replication=5,
            master_seed=11,
        )
        records = run_experiment(cfg)
        rows = summarize(records)
        assert len(rows) == 4
        for row in rows:
            cell = [
                r
                for r in records
                if (r.kind, r.n, r.p_or_beta, r.K) == (row.kind, row.n, row.p_or_beta, row.K)
            ]
            ratios = [r.ratio_lo for r in cell]
            assert row.count == len(cell)
            assert row.mean_lo == pytest.approx(sum(ratios) / len(ratios))
            assert row.min_lo == min(ratios)
            assert row.max_hi == max(r.ratio_hi for r in cell)


class TestConfigValidation:
    def test_geometric_needs_beta(self):
        with pytest.raises(ConfigError):
            validate_config(ExperimentConfig(kind=GenKind.GEOMETRIC, n_values=(5,)))

    def test_beta_range(self):
        with pytest.raises(ConfigError):
            validate_config(
                ExperimentConfig(kind=GenKind.GEOMETRIC, n_values=(5,), beta_values=(1.5,))
            )

    def test_closed_form_only_for_even_spacing(self):
        with pytest.raises(ConfigError):
            validate_config(
                ExperimentConfig(
                    kind=GenKind.GEOMETRIC,
                    n_values=(5,),
                    beta_values=(0.5,),
                    opt_method="closed_form",
                )
            )

    def test_rejected_before_any_work(self):
        with pytest.raises(ConfigError):
            run_experiment(
                ExperimentConfig(kind=GenKind.REGULAR, n_values=(0,), replication=1)
            )
