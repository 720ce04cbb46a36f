import json
import subprocess
import sys
from pathlib import Path

import pytest

from atrules import pipeline
from atrules.cli import main
from atrules.pipeline import ConfigError, RunConfig

ARTIFACTS = ["alignments.txt", "phrases.txt", "templates.txt", "discards.json", "rules.txt", "rules.report.txt",
             "rules.json", "translation.txt", "stats.json", "evaluation.json", "sweep.json"]


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("fx")
    assert main(["fixture", str(d), "--size", "300", "--dev-size", "60", "--test-size", "80", "--seed", "3"]) == 0
    return d


def _cli(fixture_dir, out, *args):
    return main([*args, "-c", str(fixture_dir / "config.yaml"), "-o", str(out), "--set", "resamples=100"])


def test_fixture_files(fixture_dir):
    for name in ["train.src", "train.tgt", "dev.src", "test.tgt", "bidix.xml", "config.yaml"]:
        assert (fixture_dir / name).exists()
    cfg = RunConfig.load(fixture_dir / "config.yaml")
    assert Path(cfg.source).is_absolute() and cfg.thresholds == list(range(1, 11))


def test_steps_compose_to_run(fixture_dir, tmp_path, capsys):
    whole, steps = tmp_path / "whole", tmp_path / "steps"
    assert _cli(fixture_dir, whole, "run") == 0
    for cmd in ["align", "extract", "learn", "sweep", "translate", "evaluate"]:
        assert _cli(fixture_dir, steps, cmd) == 0, cmd
    for name in ARTIFACTS:
        assert (whole / name).read_bytes() == (steps / name).read_bytes(), name
    out = capsys.readouterr().out
    assert "TER" in out and "BLEU" in out


def test_artifacts_carry_headers(fixture_dir, tmp_path):
    assert _cli(fixture_dir, tmp_path, "run") == 0
    cfg = RunConfig.load(fixture_dir / "config.yaml", {"resamples": 100, "output_dir": str(tmp_path)})
    for name in ["alignments.txt", "phrases.txt", "templates.txt", "translation.txt"]:
        first = (tmp_path / name).read_text(encoding="utf-8").split("\n", 1)[0]
        assert first.startswith("#atrules ") and f"config={cfg.config_hash()}" in first
    rules = (tmp_path / "rules.txt").read_text(encoding="utf-8")
    assert rules.startswith("#atrules-rules 1\n") and f"#meta config {cfg.config_hash()}" in rules
    sweep = json.loads((tmp_path / "sweep.json").read_text())
    assert [row["threshold"] for row in sweep["table"]] == list(range(1, 11))
    assert f"#meta threshold {sweep['best_threshold']:g}" in rules


def test_genrules_per_threshold(fixture_dir, tmp_path):
    for cmd in ["align", "extract", "learn"]:
        assert _cli(fixture_dir, tmp_path, cmd) == 0
    assert _cli(fixture_dir, tmp_path, "genrules", "--set", "thresholds=[2, 5]") == 0
    assert (tmp_path / "rules-t2.txt").exists() and (tmp_path / "rules-t5.txt").exists()


def test_single_element_sweep(fixture_dir, tmp_path):
    for cmd in ["align", "extract", "learn"]:
        assert _cli(fixture_dir, tmp_path, cmd) == 0
    assert _cli(fixture_dir, tmp_path, "sweep", "--set", "thresholds=[4]") == 0
    assert json.loads((tmp_path / "sweep.json").read_text())["best_threshold"] == 4


def test_empty_sweep_is_config_error(fixture_dir, tmp_path):
    assert _cli(fixture_dir, tmp_path, "sweep", "--set", "thresholds=[]") == 1
    with pytest.raises(ConfigError):
        RunConfig(thresholds=[])


def test_dev_equal_to_train_rejected(fixture_dir, tmp_path):
    cfg = RunConfig.load(fixture_dir / "config.yaml", {"output_dir": str(tmp_path)})
    with pytest.raises(ConfigError):
        pipeline.cmd_sweep(cfg.replace(dev_source=cfg.source, dev_target=cfg.target))


def test_exit_codes(fixture_dir, tmp_path, capsys):
    assert main(["align", "--set", "bogus_key=1"]) == 1
    assert main(["align", "--set", "symmetrization=sideways", "-c", str(fixture_dir / "config.yaml")]) == 1
    assert main(["align"]) == 1  # no source configured
    bad = tmp_path / "bad.src"
    bad.write_text("^a<n>$\n^b$\n", encoding="utf-8")
    assert _cli(fixture_dir, tmp_path, "align", "--set", f"source={bad}") == 2
    assert _cli(fixture_dir, tmp_path, "align", "--set", f"source={tmp_path / 'missing'}") == 2
    assert _cli(fixture_dir, tmp_path / "empty", "extract") == 2  # alignments not produced yet
    with pytest.raises(SystemExit) as err:
        main(["nonsense"])
    assert err.value.code == 1


def test_evaluate_length_mismatch(fixture_dir, tmp_path):
    hyp = tmp_path / "h"
    hyp.write_text("a b\n", encoding="utf-8")
    assert _cli(fixture_dir, tmp_path, "evaluate", "--hyp", str(hyp)) == 2


def test_translate_explicit_paths_and_trace(fixture_dir, tmp_path):
    assert _cli(fixture_dir, tmp_path, "run") == 0
    out = tmp_path / "x.txt"
    assert _cli(fixture_dir, tmp_path, "translate", "-i", str(fixture_dir / "dev.src"), "--output", str(out),
                "--set", "trace=true", "--set", "workers=3") == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 61  # header + 60 sentences
    assert "candidate" in (tmp_path / "trace.txt").read_text(encoding="utf-8")


def test_module_entry_point(fixture_dir, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "atrules.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "atrules" in proc.stdout
