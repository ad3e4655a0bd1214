"""Command-line interface: config validation, outputs, exit codes, determinism."""

import csv
import json
from pathlib import Path

import pytest

from opuclab.cli import exit_code_from_verdicts, load_config, run, _sanitize
from opuclab.errors import ConfigError

REPO_CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def basic_config(**overrides):
    cfg = {
        "weights": [
            {"id": "one", "variant": "rational", "num": [1.0]},
        ],
        "nu": {"family": "exponential", "R": 1.5},
        "N": 16,
        "quadrature": "auto",
    }
    cfg.update(overrides)
    return cfg


class TestConfigLoading:
    def test_missing_file(self):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config("/nonexistent/path.json")

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(str(p))

    def test_duplicate_weight_id(self, tmp_path):
        cfg = basic_config()
        cfg["weights"].append(dict(cfg["weights"][0]))
        with pytest.raises(ConfigError, match="'one' defined more than once"):
            load_config(write_config(tmp_path, cfg))

    def test_undefined_pair_id(self, tmp_path):
        cfg = basic_config(pairs=[["one", "ghost"]])
        with pytest.raises(ConfigError, match="'ghost'"):
            load_config(write_config(tmp_path, cfg))

    def test_truncation_cap(self, tmp_path):
        cfg = basic_config(N=5000)
        with pytest.raises(ConfigError, match="N must lie"):
            load_config(write_config(tmp_path, cfg))

    def test_quadrature_power_of_two(self, tmp_path):
        cfg = basic_config(quadrature=1000)
        with pytest.raises(ConfigError, match="power of two"):
            load_config(write_config(tmp_path, cfg))

    def test_window_parsing(self, tmp_path):
        cfg = basic_config(window="8:40")
        loaded = load_config(write_config(tmp_path, cfg))
        assert loaded.window == (8, 40)
        assert loaded.sha256  # canonical hash computed

    def test_bad_window(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, basic_config(window="40")))


class TestExitCodes:
    def test_aggregation(self):
        assert exit_code_from_verdicts(["pass", "pass"]) == 0
        assert exit_code_from_verdicts(["pass", "fail"]) == 2
        assert exit_code_from_verdicts(["inconclusive", "fail"]) == 2
        assert exit_code_from_verdicts(["pass", "inconclusive"]) == 3
        assert exit_code_from_verdicts(["not_applicable", "pass"]) == 0
        assert exit_code_from_verdicts([]) == 0

    def test_config_error_is_exit_1(self, tmp_path, capsys):
        code = run(["moments", "--config", str(tmp_path / "missing.json")])
        assert code == 1
        assert "config error" in capsys.readouterr().err

    def test_undefined_id_diagnostic_names_it(self, tmp_path, capsys):
        cfg = basic_config(pairs=[["one", "ghost"]])
        code = run(["product-check", "--config", write_config(tmp_path, cfg),
                    "--out", str(tmp_path / "out")])
        assert code == 1
        assert "ghost" in capsys.readouterr().err


class TestVerblunskyCommand:
    def test_free_weight_sixteen_zero_rows(self, tmp_path):
        cfg = write_config(tmp_path, basic_config())
        out = tmp_path / "out"
        assert run(["verblunsky", "--config", cfg, "--out", str(out)]) == 0
        with open(out / "verblunsky_one.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["n", "re", "im", "abs"]
        assert len(rows) == 17  # header + 16
        assert all(float(r[3]) == 0.0 for r in rows[1:])
        payload = json.loads((out / "verblunsky_one.json").read_text())
        assert payload["meta"]["N"] == 16
        assert payload["meta"]["config_sha256"]

    def test_n_override(self, tmp_path):
        cfg = write_config(tmp_path, basic_config())
        out = tmp_path / "out"
        assert run(["verblunsky", "--config", cfg, "--out", str(out),
                    "--n", "4"]) == 0
        payload = json.loads((out / "verblunsky_one.json").read_text())
        assert len(payload["alpha"]["re"]) == 4


class TestMomentsCommand:
    def test_embeds_hash_and_parameters(self, tmp_path):
        cfg_payload = basic_config(quadrature=256)
        cfg = write_config(tmp_path, cfg_payload)
        out = tmp_path / "out"
        assert run(["moments", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "moments_one.json").read_text())
        assert payload["re"][0] == pytest.approx(1.0)
        meta = payload["meta"]
        assert meta["M"] == 256 and meta["N"] == 16
        assert len(meta["config_sha256"]) == 64


class TestScatteringCommand:
    def test_csv_matches_module_computation(self, tmp_path):
        cfg = write_config(tmp_path, basic_config(
            weights=[{"id": "bs", "variant": "rational", "num": [1.0],
                      "den": [1.0, -0.5]}],
            N=12, quadrature=1024))
        out = tmp_path / "out"
        assert run(["scattering", "--config", cfg, "--out", str(out)]) == 0
        with open(out / "scattering_bs.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["n", "abs_alpha", "abs_alpha_tilde", "abs_err"]
        assert float(rows[1][1]) == pytest.approx(0.5, abs=1e-10)
        assert float(rows[1][3]) < 1e-12  # prediction exact for this family
        payload = json.loads((out / "scattering_bs.json").read_text())
        assert payload["S"]["role"] == "S"
        assert payload["f_plus"]["role"] == "f_plus"


class TestBaxterCommands:
    def test_baxter_check_pass(self, tmp_path):
        cfg = write_config(tmp_path, basic_config(
            weights=[{"id": "bs", "variant": "rational", "num": [1.0],
                      "den": [1.0, -0.5]}],
            N=32, window=[6, 28]))
        out = tmp_path / "out"
        assert run(["baxter-check", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "baxter_bs.json").read_text())
        assert payload["verdicts"]["crucial"] == "pass"
        with open(out / "baxter_bs.csv") as fh:
            header = fh.readline().strip().split(",")
        assert header == ["n", "abs_alpha", "abs_d", "abs_err"]

    def test_inconclusive_window_gives_exit_3(self, tmp_path):
        # three usable points inside the window: insufficient -> inconclusive
        cfg = write_config(tmp_path, basic_config(
            weights=[{"id": "r2", "variant": "rational",
                      "num": [1.0, 0.5], "den": [1.0, -0.5]}],
            N=32, window=[8, 10]))
        out = tmp_path / "out"
        assert run(["baxter-check", "--config", cfg, "--out", str(out)]) == 3

    def test_product_check_pass(self, tmp_path):
        cfg = write_config(tmp_path, basic_config(
            weights=[
                {"id": "a", "variant": "rational", "num": [1.0],
                 "den": [1.0, -0.5]},
                {"id": "b", "variant": "rational", "num": [1.0],
                 "den": [1.0, 0.5]},
            ],
            N=32, window=[6, 28], pairs=[["a", "b"]]))
        out = tmp_path / "out"
        assert run(["product-check", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "product_a_b.json").read_text())
        assert payload["verdicts"]["product"] == "pass"

    def test_extend_demo_config(self, tmp_path):
        out = tmp_path / "out"
        code = run(["extend", "--config",
                    str(REPO_CONFIGS / "bernstein_szego_demo.json"),
                    "--out", str(out)])
        assert code == 0
        payload = json.loads((out / "extend_bs_half.json").read_text())
        assert payload["verdicts"]["extended"] == "pass"
        p = payload["p"]
        assert p[0][0] == pytest.approx(-2.0, abs=1e-8)
        assert p[1][0] == pytest.approx(1.0, abs=1e-12)
        assert payload["zeros"][0]["residual"] <= 1e-8

    def test_threads_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OPUC_THREADS", "1")
        cfg = write_config(tmp_path, basic_config())
        assert run(["moments", "--config", cfg, "--out",
                    str(tmp_path / "out")]) == 0

    def test_extend_boundary_zero_exits_3(self, tmp_path):
        # inverse weight vanishes exactly on |z| = R = 3: inconclusive
        cfg = write_config(tmp_path, basic_config(
            weights=[{"id": "edge", "variant": "rational", "num": [1.0],
                      "den": [1.0, -1.0 / 3.0]}],
            nu={"family": "exponential", "R": 3.0}, N=32, window=[4, 28]))
        out = tmp_path / "out"
        assert run(["extend", "--config", cfg, "--out", str(out)]) == 3
        payload = json.loads((out / "extend_edge.json").read_text())
        assert payload["verdicts"]["extended"] == "inconclusive"

    def test_missing_subcommand_is_error_exit(self, capsys):
        assert run([]) == 1
        capsys.readouterr()


class TestDeterminism:
    def test_identical_config_byte_identical_output(self, tmp_path):
        cfg = write_config(tmp_path, basic_config(
            weights=[{"id": "bs", "variant": "rational", "num": [1.0],
                      "den": [1.0, -0.5]}],
            N=24, window=[4, 20]))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run(["baxter-check", "--config", cfg, "--out", str(out1)]) == 0
        assert run(["baxter-check", "--config", cfg, "--out", str(out2)]) == 0
        for name in ("baxter_bs.json", "baxter_bs.csv", "summary_baxter-check.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_sanitize_nonfinite(self):
        out = _sanitize({"a": float("inf"), "b": float("nan"),
                         "c": [1.0, float("-inf")], "d": 1 + 2j})
        assert out == {"a": "inf", "b": "nan", "c": [1.0, "-inf"],
                       "d": [1.0, 2.0]}

    def test_json_outputs_are_standard(self, tmp_path):
        # implied R = inf sentinels must serialize as strings, not Infinity
        cfg = write_config(tmp_path, basic_config(N=24, window=[4, 20]))
        out = tmp_path / "out"
        assert run(["baxter-check", "--config", cfg, "--out", str(out)]) == 0
        text = (out / "baxter_one.json").read_text()
        assert "Infinity" not in text
        json.loads(text)  # strict parse succeeds
