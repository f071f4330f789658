"""
CLI 测试

通过 CliRunner 调用各子命令，检查输出与退出码（0 yes，1 no，2 错误，3 unknown）。
"""

import json
import re
from pathlib import Path

import click
import pytest
from click.testing import CliRunner

from surface_immersions.cli import cli, run
from surface_immersions.file_formats import curve_to_json, graph_to_json


def _json(output):
    """从输出中第一个 { 或 [ 开始解析 JSON"""
    starts = [i for i in (output.find("{"), output.find("[")) if i >= 0]
    return json.loads(output[min(starts):])


@pytest.fixture
def files(write_json, square_curve, clockwise_square, bowtie_curve, torus_bouquet):
    return {
        "torus": write_json("torus.json", {"sides": "abAB"}),
        "square": write_json("square.json", curve_to_json(square_curve)),
        "clockwise": write_json("clockwise.json", curve_to_json(clockwise_square)),
        "bowtie": write_json("bowtie.json", curve_to_json(bowtie_curve)),
        "bouquet": write_json("bouquet.json", graph_to_json(torus_bouquet)),
    }


class TestCLIBasic:
    """CLI 基本功能"""

    def setup_method(self):
        self.runner = CliRunner()

    def test_help(self):
        result = self.runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        assert "regular homotopy" in result.output
        for command in ("schema", "invariants", "decide-circle", "decide-graph", "word", "moves"):
            assert command in result.output

    def test_every_help_is_english(self):
        def command_paths(group, prefix):
            for name, command in group.commands.items():
                yield prefix + [name]
                if isinstance(command, click.Group):
                    yield from command_paths(command, prefix + [name])

        for path in command_paths(cli, []):
            result = self.runner.invoke(cli, path + ["--help"])
            assert result.exit_code == 0, path
            assert not re.search("[\u4e00-\u9fff]", result.output), path

    def test_version(self):
        result = self.runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_missing_config(self, files):
        result = self.runner.invoke(
            cli, ["--config", "/nonexistent/config.yaml", "schema", "info", files["torus"]]
        )
        assert result.exit_code == 2
        assert "Configuration error" in result.output

    def test_config_file(self, files, tmp_path):
        config = tmp_path / "config.yaml"
        config.write_text("log_level: ERROR\nseed: 3\n", encoding="utf-8")
        result = self.runner.invoke(
            cli, ["--config", str(config), "schema", "info", files["torus"], "--json"]
        )
        assert result.exit_code == 0
        assert _json(result.output)["kind"] == "Torus"


class TestSchemaCommand:
    """schema info"""

    def setup_method(self):
        self.runner = CliRunner()

    def test_info_text(self, files):
        result = self.runner.invoke(cli, ["--log-level", "ERROR", "schema", "info", files["torus"]])
        assert result.exit_code == 0
        assert "Kind: Torus" in result.output
        assert "Euler characteristic: 0" in result.output
        assert "Orientable: yes" in result.output

    def test_info_json(self, files):
        result = self.runner.invoke(
            cli, ["--log-level", "ERROR", "schema", "info", files["torus"], "--json"]
        )
        assert result.exit_code == 0
        info = _json(result.output)
        assert info["sides"] == "abAB"
        assert info["euler_characteristic"] == 0
        assert info["orientable"] is True
        assert len(info["relators"]) == 1

    def test_malformed_word(self, write_json):
        path = write_json("bad.json", {"sides": "abc"})
        result = self.runner.invoke(cli, ["--log-level", "ERROR", "schema", "info", path])
        assert result.exit_code == 2
        assert "Error" in result.output

    def test_missing_file(self, tmp_path):
        result = self.runner.invoke(
            cli, ["--log-level", "ERROR", "schema", "info", str(tmp_path / "none.json")]
        )
        assert result.exit_code == 2
        assert "File not found" in result.output


class TestCurveCommands:
    """invariants 与 decide-circle"""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli, ["--log-level", "ERROR", *args])

    def test_invariants_text(self, files):
        result = self.invoke("invariants", files["torus"], files["square"])
        assert result.exit_code == 0
        assert "s: 1" in result.output
        assert "w1: +1" in result.output
        assert "T (integer): 1" in result.output

    def test_invariants_json(self, files):
        result = self.invoke("invariants", files["torus"], files["bowtie"], "--json")
        assert result.exit_code == 0
        data = _json(result.output)
        assert data["s"] == 0
        assert data["w1nu"] == 1
        assert data["turning"] == {"kind": "integer", "value": 0, "frame": 1}

    def test_invariants_svg(self, files, tmp_path):
        svg = tmp_path / "square.svg"
        result = self.invoke("invariants", files["torus"], files["square"], "--svg", str(svg))
        assert result.exit_code == 0
        assert "<svg" in svg.read_text(encoding="utf-8")

    def test_decide_yes(self, files):
        result = self.invoke("decide-circle", files["torus"], files["square"], files["square"])
        assert result.exit_code == 0
        assert "verdict: yes" in result.output

    def test_decide_no(self, files):
        result = self.invoke(
            "decide-circle", files["torus"], files["square"], files["clockwise"], "--json"
        )
        assert result.exit_code == 1
        verdict = _json(result.output)
        assert verdict["verdict"] == "no"
        assert set(verdict) == {"verdict", "reason", "invariants"}

    def test_decide_bad_curve(self, files, write_json):
        bad = write_json("bad.json", {"strands": []})
        result = self.invoke("decide-circle", files["torus"], files["square"], bad)
        assert result.exit_code == 2

    def test_develop_json(self, files):
        result = self.invoke("develop", files["torus"], files["square"], "--json")
        assert result.exit_code == 0
        data = _json(result.output)
        assert data["geometry"] == "euclidean"
        assert data["points"][0] == pytest.approx([0.25, 0.25])


class TestWordCommands:
    """word 子命令"""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli, ["--log-level", "ERROR", "word", *args])

    def test_reduce(self, files):
        result = self.invoke("reduce", files["torus"], "ba")
        assert result.exit_code == 0
        assert result.output.strip() == "ab"

    def test_reduce_trivial(self, files):
        result = self.invoke("reduce", files["torus"], "abAB")
        assert result.exit_code == 0
        assert result.output.strip() == "1"

    def test_conjugate(self, write_json):
        genus_two = write_json("genus2.json", {"sides": "abABcdCD"})
        result = self.invoke("conjugate", genus_two, "ab", "ba")
        assert result.exit_code == 0
        assert "witness: B" in result.output

    def test_not_conjugate(self, files):
        result = self.invoke("conjugate", files["torus"], "b", "B")
        assert result.exit_code == 1
        assert "not conjugate" in result.output

    def test_root(self, files):
        result = self.invoke("root", files["torus"], "aabb")
        assert result.exit_code == 0
        assert result.output.strip() == "ab 2"

    def test_malformed_word(self, files):
        result = self.invoke("reduce", files["torus"], "a1")
        assert result.exit_code == 2


class TestGraphCommands:
    """decide-graph 与 graph-invariant"""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli, ["--log-level", "ERROR", *args])

    def test_decide_graph_yes(self, files):
        result = self.invoke(
            "decide-graph", files["torus"], files["bouquet"], files["bouquet"], "--json"
        )
        assert result.exit_code == 0
        assert _json(result.output)["verdict"] == "yes"

    def test_decide_graph_no(self, files, write_json, swapped_bouquet):
        swapped = write_json("swapped.json", graph_to_json(swapped_bouquet))
        result = self.invoke("decide-graph", files["torus"], files["bouquet"], swapped)
        assert result.exit_code == 1

    def test_graph_invariant(self, files):
        result = self.invoke("graph-invariant", files["torus"], files["bouquet"])
        assert result.exit_code == 0
        assert _json(result.output)["classes"] == ["A", "b"]


class TestMoveCommands:
    """moves 子命令"""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli, ["--log-level", "ERROR", *args])

    def test_fuzz_keeps_class(self, files, tmp_path):
        out = tmp_path / "fuzzed.json"
        record = tmp_path / "moves.json"
        result = self.invoke(
            "moves", "fuzz", files["torus"], files["square"],
            "-n", "4", "--seed", "3", "-o", str(out), "--record", str(record),
        )
        assert result.exit_code == 0
        assert out.exists()
        assert isinstance(json.loads(record.read_text(encoding="utf-8")), list)

        result = self.invoke("decide-circle", files["torus"], files["square"], str(out))
        assert result.exit_code == 0

    def test_apply_replays_record(self, files, tmp_path):
        out = tmp_path / "fuzzed.json"
        record = tmp_path / "moves.json"
        self.invoke(
            "moves", "fuzz", files["torus"], files["square"],
            "-n", "4", "--seed", "3", "-o", str(out), "--record", str(record),
        )
        result = self.invoke("moves", "apply", files["torus"], files["square"], str(record))
        assert result.exit_code == 0
        assert _json(result.output) == json.loads(out.read_text(encoding="utf-8"))

    def test_apply_bad_moves(self, files, write_json):
        moves = write_json("moves.json", [{"kind": "Teleport"}])
        result = self.invoke("moves", "apply", files["torus"], files["square"], moves)
        assert result.exit_code == 2


class TestBatchCommand:
    """batch"""

    def setup_method(self):
        self.runner = CliRunner()

    def write_manifest(self, files, pairs):
        base = Path(files["torus"]).parent
        lines = ["schema: torus.json", "pairs:"]
        for f, g in pairs:
            lines += [f"  - f: {f}", f"    g: {g}"]
        path = base / "manifest.yaml"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    def test_worst_exit_code(self, files):
        manifest = self.write_manifest(
            files, [("square.json", "square.json"), ("square.json", "clockwise.json")]
        )
        result = self.runner.invoke(cli, ["--log-level", "ERROR", "batch", manifest, "-j", "2"])
        assert result.exit_code == 1
        results = _json(result.output)
        assert [r["verdict"] for r in results] == ["yes", "no"]
        assert [r["exit_code"] for r in results] == [0, 1]

    def test_errors_are_reported(self, files):
        manifest = self.write_manifest(files, [("square.json", "missing.json")])
        result = self.runner.invoke(cli, ["--log-level", "ERROR", "batch", manifest])
        assert result.exit_code == 2
        (entry,) = _json(result.output)
        assert "File not found" in entry["error"]


class TestRun:
    """run() 返回退出码而不退出进程"""

    def test_run_exit_codes(self, files):
        assert run(["--log-level", "ERROR", "word", "reduce", files["torus"], "ba"]) == 0
        assert run(["--log-level", "ERROR", "word", "conjugate", files["torus"], "b", "B"]) == 1

    def test_run_usage_error(self):
        assert run(["no-such-command"]) == 2
