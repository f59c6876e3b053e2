import csv
import json
import os

from boltzlab.cli import RunConfig, build_parser, main


def test_no_command_is_usage_error():
    assert main([]) == 2


def test_bad_config_path_is_usage_error(tmp_path):
    assert main(["--config", str(tmp_path / "missing.ini"), "evalq"]) == 2


def test_run_config_from_ini(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[run]\ngamma = -0.5\ns = 0.25\nseed = 7\nfast = yes\n")
    cfg = RunConfig.from_ini(str(path))
    assert cfg.gamma == -0.5 and cfg.s == 0.25
    assert cfg.seed == 7 and cfg.fast is True


def test_run_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[run]\nnot_a_key = 1\n")
    assert main(["--config", str(path), "evalq"]) == 2


def test_cli_overrides_config(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[run]\ngamma = -0.5\n")
    parser = build_parser()
    args = parser.parse_args(["--config", str(path), "--gamma", "-1.0",
                              "verify"])
    cfg = RunConfig.from_ini(args.config)
    cfg.apply_overrides(args)
    assert cfg.gamma == -1.0


def test_evalq_writes_csv(tmp_path):
    out = tmp_path / "q.csv"
    code = main(["evalq", "--method", "carleman", "--point", "0.5,0.2,-0.1",
                 "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert float(rows[0]["Q_carleman"]) != 0.0


def test_verify_unknown_suite_is_usage_error():
    assert main(["verify", "--suite", "bogus"]) == 2


def test_verify_single_suite_json_and_report(tmp_path):
    out = tmp_path / "rep.json"
    code = main(["verify", "--suite", "equilibrium", "--fast",
                 "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        data = json.load(fh)
    assert data["suite"] == "equilibrium" and data["passed"]
    assert os.path.exists(str(out) + ".meta.json")
    # wall time only in the sidecar, never in the main JSON
    assert "wall_time" not in json.dumps(data)
    png = tmp_path / "rep.png"
    # report on a single-suite file: wrap into a list form it understands
    listed = tmp_path / "list.json"
    listed.write_text(json.dumps([data]))
    assert main(["report", "--input", str(listed), "--out", str(png)]) == 0
    assert png.stat().st_size > 0


def test_report_missing_input_is_usage_error(tmp_path):
    assert main(["report", "--input", str(tmp_path / "nope.json")]) == 2
