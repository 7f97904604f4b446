import json

import numpy as np
import pytest

from sbmrobust import BlockModel, read_model, write_model
from sbmrobust.cli import main
from sbmrobust.config import RunConfig
from sbmrobust.moo import OptConfig


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def single(tmp_path):
    # Poisson parameter c = 2, whose random-removal robustness is 0.49096
    path = tmp_path / "single.json"
    write_model(BlockModel.single(2.0 / -np.expm1(-2.0)), path)
    return path


def write_config(path, **kw):
    base = dict(B=3, kappa=2.5, population_size=8, max_evaluations=30, seed=1, archive_interval=10, grid_size=21)
    opt = {k: v for k, v in base.items()}
    opt.update({k: v for k, v in kw.items() if k in OptConfig.__dataclass_fields__})
    own = {k: v for k, v in kw.items() if k not in OptConfig.__dataclass_fields__}
    RunConfig(OptConfig(**opt), **own).write(path)
    return path


class TestRobustness:
    def test_single_block(self, capsys, single, tmp_path):
        code, out, _ = run(capsys, "robustness", "--model", single, "--out", tmp_path / "o")
        assert code == 0
        R = float(out.strip().removeprefix("R="))
        assert R == pytest.approx(0.4909586621, abs=1e-6)
        lines = (tmp_path / "o" / "s_curve.csv").read_text().splitlines()
        assert lines[0] == "q,S" and len(lines) == 202
        rob = (tmp_path / "o" / "robustness.csv").read_text().splitlines()
        assert rob[0] == "R_targeted,R_random"
        assert float(rob[1].split(",")[1]) == R

    def test_subcritical(self, capsys, tmp_path):
        path = tmp_path / "sub.json"
        write_model(BlockModel.single(1.3), path)
        code, out, _ = run(capsys, "robustness", "--model", path, "--schedule", "targeted", "--out", tmp_path)
        assert code == 0
        assert float(out.strip().removeprefix("R=")) == pytest.approx(0.0, abs=1e-9)

    def test_malformed_names_field(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"B": 2, "n": [0.5, 0.5]}))
        code, _, err = run(capsys, "robustness", "--model", path)
        assert code == 2
        assert "'e'" in err

    def test_invalid_model_reports_violations(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"B": 2, "n": [0.5, 0.6], "e": [[1.0, 0.2], [0.2, 1.0]]}))
        code, _, err = run(capsys, "robustness", "--model", path)
        assert code == 2
        assert "sum of n" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "robustness", "--model", tmp_path / "nope.json")[0] == 2

    def test_usage_errors(self, capsys, single):
        assert run(capsys, "robustness")[0] == 1
        assert run(capsys, "robustness", "--model", single, "--schedule", "sideways")[0] == 1
        assert run(capsys, "robustness", "--model", single, "--grid", "200")[0] == 1
        assert run(capsys, "frobnicate")[0] == 1


class TestOptimize:
    def test_layout_and_determinism(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        a = run(capsys, "optimize", "--config", cfg, "--out", tmp_path / "a")
        b = run(capsys, "optimize", "--config", cfg, "--out", tmp_path / "b")
        assert a[0] == b[0] == 0
        ra, rb = tmp_path / "a" / "1", tmp_path / "b" / "1"
        assert (ra / "front.csv").read_bytes() == (rb / "front.csv").read_bytes()
        for gen in ("gen0", "gen10", "gen20", "gen30"):
            assert (ra / gen / "front.csv").exists()
        assert (ra / "checkpoint.json").exists()
        written = RunConfig.read(ra / "config.json")
        assert written.optimizer == RunConfig.read(cfg).optimizer
        assert written.out == str(tmp_path / "a")
        ids = [line.split(",")[2] for line in (ra / "front.csv").read_text().splitlines()[1:]]
        for mid in ids:
            assert mid == "infeasible" or (ra / "models" / f"{mid}.json").exists()

    def test_seed_flag(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", max_evaluations=0)
        assert run(capsys, "optimize", "--config", cfg, "--seed", 7, "--out", tmp_path)[0] == 0
        assert RunConfig.read(tmp_path / "7" / "config.json").optimizer.seed == 7

    def test_budget_zero(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", max_evaluations=0)
        assert run(capsys, "optimize", "--config", cfg, "--out", tmp_path / "r")[0] == 0
        run_dir = tmp_path / "r" / "1"
        assert sorted(p.name for p in run_dir.glob("gen*")) == ["gen0"]
        state = json.loads((run_dir / "checkpoint.json").read_text())
        assert state["step"] == 0

    def test_resume_completes_identically(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        run(capsys, "optimize", "--config", cfg, "--out", tmp_path / "full")
        # an interrupted run leaves the checkpoint of its last snapshot behind
        short = write_config(tmp_path / "short.json", max_evaluations=30, out=str(tmp_path / "part"))
        run(capsys, "optimize", "--config", short)
        ckpt = tmp_path / "part" / "1" / "checkpoint.json"
        state = json.loads(ckpt.read_text())
        snap = state["archive"][1]
        assert snap["step"] == 10
        # rewind by resuming from a checkpoint written at step 10
        from sbmrobust.moo import SMSEMOA

        opt = SMSEMOA(OptConfig.from_dict(state["config"]))
        opt.initialize()
        for _ in range(10):
            opt.step()
        ckpt.write_text(json.dumps(opt.checkpoint()))
        assert run(capsys, "optimize", "--config", short)[0] == 0
        assert (tmp_path / "part" / "1" / "front.csv").read_bytes() == (tmp_path / "full" / "1" / "front.csv").read_bytes()

    def test_corrupt_checkpoint(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", max_evaluations=0)
        run_dir = tmp_path / "r" / "1"
        run_dir.mkdir(parents=True)
        (run_dir / "checkpoint.json").write_text("{not json")
        code, _, err = run(capsys, "optimize", "--config", cfg, "--out", tmp_path / "r")
        assert code == 2
        assert "checkpoint" in err

    def test_checkpoint_of_other_config(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", max_evaluations=0)
        run(capsys, "optimize", "--config", cfg, "--out", tmp_path / "r")
        other = write_config(tmp_path / "other.json", max_evaluations=0, population_size=9)
        code, _, err = run(capsys, "optimize", "--config", other, "--out", tmp_path / "r")
        assert code == 2

    def test_bad_config(self, capsys, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"B": 2, "kappa": 2.5, "colour": "red"}))
        code, _, err = run(capsys, "optimize", "--config", path)
        assert code == 2
        assert "colour" in err

    def test_constrained_target_zero(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", B=2, mode="constrained", target=0.0, max_evaluations=40)
        code, out, _ = run(capsys, "optimize", "--config", cfg, "--out", tmp_path)
        assert code == 0
        assert (tmp_path / "1" / "constrained_model.json").exists()
        header, row = (tmp_path / "1" / "constrained.csv").read_text().splitlines()
        assert header == "found,target,R_targeted,R_random,fitness"


class TestReduceValidate:
    def test_reduce_duplicate_split(self, capsys, tmp_path):
        path = tmp_path / "split.json"
        write_model(BlockModel([0.5, 0.5], np.full((2, 2), 2.5 / 4)), path)
        code, out, _ = run(capsys, "reduce", "--model", path, "--out", tmp_path / "o")
        assert code == 0 and "2 -> 1" in out
        reduced = read_model(tmp_path / "o" / "reduced_model.json")
        assert reduced.B == 1 and reduced.kappa == pytest.approx(2.5)
        report = json.loads((tmp_path / "o" / "reduction_report.json").read_text())
        assert report["reduced_B"] == 1 and len(report["merges"]) == 1

    def test_reduce_keeps_bipartite(self, capsys, tmp_path):
        path = tmp_path / "bip.json"
        write_model(BlockModel([0.5, 0.5], [[0, 1.25], [1.25, 0]]), path)
        assert run(capsys, "reduce", "--model", path, "--out", tmp_path)[1].strip() == "B=2 -> 2"

    def test_validate(self, capsys, single, tmp_path):
        code, out, _ = run(
            capsys, "validate", "--model", single, "--nodes", 5000, "--trials", 2, "--grid", 5, "--out", tmp_path
        )
        assert code == 0 and out.startswith("R_analytic=")
        lines = (tmp_path / "validation.csv").read_text().splitlines()
        assert lines[0] == "q,S_analytic,S_mc,stderr" and lines[-1].startswith("R,")

    def test_validate_too_small(self, capsys, single):
        assert run(capsys, "validate", "--model", single, "--nodes", 10)[0] == 1


class TestFrontReport:
    def test_tables(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        run(capsys, "optimize", "--config", cfg, "--out", tmp_path)
        code, out, _ = run(capsys, "front-report", tmp_path / "1", "--out", tmp_path / "rep")
        assert code == 0
        names = sorted(p.name for p in (tmp_path / "rep").iterdir())
        assert names == ["block_degrees.csv", "block_sizes.csv", "edge_matrix.csv", "tradeoff.csv"]
        trade = (tmp_path / "rep" / "tradeoff.csv").read_text().splitlines()
        rts = [float(r.split(",")[0]) for r in trade[1:]]
        assert rts == sorted(rts)
        for row in (tmp_path / "rep" / "block_degrees.csv").read_text().splitlines()[1:]:
            k = [float(x) for x in row.split(",")[1:] if x]
            assert k == sorted(k, reverse=True)

    def test_empty_run(self, capsys, tmp_path):
        (tmp_path / "front.csv").write_text("R_targeted,R_random,model_id\n")
        assert run(capsys, "front-report", tmp_path, "--out", tmp_path / "rep")[0] == 0
        assert (tmp_path / "rep" / "tradeoff.csv").read_text() == "R_targeted,R_random,B\n"
        assert (tmp_path / "rep" / "edge_matrix.csv").read_text() == "R_targeted\n"

    def test_missing_artifacts(self, capsys, tmp_path):
        assert run(capsys, "front-report", tmp_path)[0] == 2
        (tmp_path / "front.csv").write_text("R_targeted,R_random,model_id\n0.1,0.2,m000\n")
        code, _, err = run(capsys, "front-report", tmp_path)
        assert code == 2 and "m000" in err


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "sbmrobust", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "front-report" in res.stdout
