"""
Command-line interface for Surface Immersions.

退出码：0 成功 / yes，1 no，2 输入或计算错误，3 unknown。
"""

import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import click

from . import __version__
from .classify import circle_invariants, decide_circle, decide_via_difference
from .config_manager import ConfigManager, RunConfig, Tolerances
from .errors import SurfaceImmersionError
from .file_formats import (
    curve_to_json,
    load_curve,
    load_graph,
    load_manifest,
    load_moves,
    load_path,
    load_schema,
    move_to_json,
    save_json,
)
from .geometry import develop_path, realize
from .graphs import decide_graph, graph_full_invariant
from .logging_config import setup_logging
from .models import Answer, Verdict
from .moves import apply_all, random_regular_homotopy
from .render import render_curve, render_developed
from .schema import describe, parse_word
from .words import conjugate_and_witness, primitive_root, reduce

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.environ.get("SURFACE_IMMERSIONS_CONFIG")

# 批处理的退出码按严重程度排序：错误最严重
EXIT_SEVERITY = {0: 0, 1: 1, 3: 2, 2: 3}


def _fail(e: Exception) -> None:
    """
    打印错误并以对应退出码退出

    Args:
        e: 捕获的异常；非本包异常按错误（2）处理
    """
    click.echo(f"✗ Error: {e}", err=True)
    logger.error(f"{type(e).__name__}: {e}")
    sys.exit(e.exit_code if isinstance(e, SurfaceImmersionError) else 2)


def _tolerances(ctx) -> Tolerances:
    return ctx.obj["run_config"].tolerances


def _echo_json(data: Any) -> None:
    click.echo(json.dumps(data, indent=2, sort_keys=True, default=str))


def _echo_verdict(verdict: Verdict, as_json: bool) -> None:
    if as_json:
        _echo_json(verdict.to_dict())
        return
    marker = {Answer.YES: "✓", Answer.NO: "✗", Answer.UNKNOWN: "?"}[verdict.answer]
    click.echo(f"{marker} verdict: {verdict.answer.value}")
    click.echo(f"  reason: {verdict.reason}")
    for key, value in verdict.details.items():
        click.echo(f"  {key}: {json.dumps(value, sort_keys=True, default=str)}")


def _write_svg(svg: str, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(svg)
    except OSError as e:
        raise IOError(f"Failed to write {path}: {e}")
    click.echo(f"✓ SVG written to {path}")


@click.group()
@click.version_option(version=__version__, prog_name="surface-immersions")
@click.option("--config", "-c", default=DEFAULT_CONFIG_PATH, help="Run configuration file (YAML)")
@click.option("--log-level", default=None, help="Log level (DEBUG, INFO, WARN, ERROR)")
@click.option("--log-file", default=None, help="Write logs to this file as well")
@click.pass_context
def cli(ctx, config, log_level, log_file):
    """Surface Immersions - regular homotopy of immersed circles and graphs on surfaces."""
    ctx.ensure_object(dict)
    try:
        run_config = ConfigManager(config).load_config() if config else RunConfig()
        setup_logging(
            log_file=log_file or run_config.log_file,
            log_level=log_level or run_config.log_level,
        )
    except (FileNotFoundError, ValueError, IOError) as e:
        click.echo(f"✗ Configuration error: {e}", err=True)
        sys.exit(2)
    ctx.obj["run_config"] = run_config


# ==================== 粘合 schema ====================


@cli.group()
def schema():
    """Inspect polygon gluing schemas."""


@schema.command("info")
@click.argument("schema_file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
def schema_info(schema_file, as_json):
    """Print kind, Euler characteristic, orientability and presentation."""
    try:
        info = describe(load_schema(schema_file))
    except SurfaceImmersionError as e:
        _fail(e)
    if as_json:
        _echo_json(info)
        return
    click.echo(f"Schema: {info['sides']}")
    click.echo(f"  Kind: {info['kind']}")
    click.echo(f"  Euler characteristic: {info['euler_characteristic']}")
    click.echo(f"  Orientable: {'yes' if info['orientable'] else 'no'}")
    if info["genus"] is not None:
        click.echo(f"  Genus: {info['genus']}")
    relators = ", ".join(info["relators"]) or "none"
    click.echo(f"  Presentation: <{', '.join(info['generators'])} | {relators}>")
    if info["punctures"]:
        click.echo(f"  Free sides: {info['punctures']}")


# ==================== 浸入圆周 ====================


@cli.command()
@click.argument("schema_file", type=click.Path())
@click.argument("curve_file", type=click.Path())
@click.option("--frame", type=click.Choice(["1", "-1"]), default="1", help="Basepoint frame")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.option("--svg", "svg_path", type=click.Path(), help="Write a diagram of the curve")
@click.pass_context
def invariants(ctx, schema_file, curve_file, frame, as_json, svg_path):
    """Print s, the edge word, w1 and (when defined) the turning number T."""
    try:
        surface = load_schema(schema_file)
        curve = load_curve(curve_file)
        result = circle_invariants(curve, surface, int(frame), _tolerances(ctx))
        if svg_path:
            _write_svg(render_curve(curve, surface), svg_path)
    except (SurfaceImmersionError, IOError) as e:
        _fail(e)
    logger.info(f"Invariants of {curve_file}: {result.to_dict()}")
    if as_json:
        _echo_json(result.to_dict())
        return
    click.echo(f"s: {result.s_parity}")
    click.echo(f"edge word: {result.homotopy_class.letters or '(empty)'}")
    click.echo(f"reduced: {result.homotopy_class.reduced or '1'}")
    click.echo(f"w1: {result.w1nu:+d}")
    turning = result.turning
    if turning.value is None:
        click.echo(f"T: undefined ({turning.reason})")
    else:
        click.echo(f"T ({turning.kind.value}): {turning.value}")


@cli.command("decide-circle")
@click.argument("schema_file", type=click.Path())
@click.argument("curve_a", type=click.Path())
@click.argument("curve_b", type=click.Path())
@click.option("--path", "path_file", type=click.Path(), help="Decide through the difference curve")
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON verdict")
@click.pass_context
def decide_circle_command(ctx, schema_file, curve_a, curve_b, path_file, as_json):
    """Decide whether two immersed circles are regularly homotopic."""
    try:
        surface = load_schema(schema_file)
        f, g = load_curve(curve_a), load_curve(curve_b)
        if path_file:
            verdict = decide_via_difference(f, g, load_path(path_file), surface, _tolerances(ctx))
        else:
            verdict = decide_circle(f, g, surface, _tolerances(ctx))
    except SurfaceImmersionError as e:
        _fail(e)
    if verdict.answer == Answer.UNKNOWN:
        logger.warning(f"Undecided: {verdict.reason}")
    else:
        logger.info(f"decide-circle {curve_a} {curve_b}: {verdict.answer.value}")
    _echo_verdict(verdict, as_json)
    sys.exit(verdict.answer.exit_code)


@cli.command()
@click.argument("schema_file", type=click.Path())
@click.argument("curve_file", type=click.Path())
@click.option("--svg", "svg_path", type=click.Path(), help="Write the developed picture")
@click.option("--json", "as_json", is_flag=True, help="Emit the developed points as JSON")
@click.pass_context
def develop(ctx, schema_file, curve_file, svg_path, as_json):
    """Develop one traversal of a curve into the chart of the universal cover."""
    try:
        surface = load_schema(schema_file)
        curve = load_curve(curve_file)
        hol = realize(surface, _tolerances(ctx))
        points, _ = develop_path(curve, surface, hol)
        if svg_path:
            _write_svg(render_developed(curve, surface, _tolerances(ctx)), svg_path)
    except (SurfaceImmersionError, IOError) as e:
        _fail(e)
    if as_json:
        _echo_json({"geometry": hol.geometry, "points": points.tolist()})
    elif not svg_path:
        click.echo(f"geometry: {hol.geometry}")
        for x, y in points:
            click.echo(f"  {x:.6f} {y:.6f}")


# ==================== 图浸入 ====================


@cli.command("decide-graph")
@click.argument("schema_file", type=click.Path())
@click.argument("graph_a", type=click.Path())
@click.argument("graph_b", type=click.Path())
@click.option("--conjugator", default=None, help="Word c with c·g_i·c⁻¹ = f_i for all cycles")
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON verdict")
@click.pass_context
def decide_graph_command(ctx, schema_file, graph_a, graph_b, conjugator, as_json):
    """Decide whether two graph immersions are regularly homotopic."""
    try:
        surface = load_schema(schema_file)
        c = parse_word(conjugator) if conjugator is not None else None
        verdict = decide_graph(
            load_graph(graph_a), load_graph(graph_b), surface, c, _tolerances(ctx)
        )
    except SurfaceImmersionError as e:
        _fail(e)
    logger.info(f"decide-graph {graph_a} {graph_b}: {verdict.answer.value}")
    _echo_verdict(verdict, as_json)
    sys.exit(verdict.answer.exit_code)


@cli.command("graph-invariant")
@click.argument("schema_file", type=click.Path())
@click.argument("graph_file", type=click.Path())
@click.pass_context
def graph_invariant_command(ctx, schema_file, graph_file):
    """Print the full invariant record of a graph immersion as JSON."""
    try:
        record = graph_full_invariant(
            load_graph(graph_file), load_schema(schema_file), _tolerances(ctx)
        )
    except SurfaceImmersionError as e:
        _fail(e)
    _echo_json(record)


# ==================== 曲面群的字 ====================


@cli.group()
def word():
    """Word problem, conjugacy and primitive roots in the surface group."""


@word.command("reduce")
@click.argument("schema_file", type=click.Path())
@click.argument("w")
@click.option("--cyclic", is_flag=True, help="Reduce as a conjugacy class")
def word_reduce(schema_file, w, cyclic):
    """Print the reduced form of a word."""
    try:
        result = reduce(parse_word(w), load_schema(schema_file), basepointed=not cyclic)
    except SurfaceImmersionError as e:
        _fail(e)
    click.echo(result.reduced or "1")


@word.command("conjugate")
@click.argument("schema_file", type=click.Path())
@click.argument("u")
@click.argument("v")
def word_conjugate(schema_file, u, v):
    """Decide whether u and v are conjugate and print a witness c with c·v·c⁻¹ = u."""
    try:
        result = conjugate_and_witness(parse_word(u), parse_word(v), load_schema(schema_file))
    except SurfaceImmersionError as e:
        _fail(e)
    if result.conjugate:
        click.echo(f"✓ conjugate, witness: {result.witness or '1'}")
        sys.exit(0)
    click.echo("✗ not conjugate")
    sys.exit(1)


@word.command("root")
@click.argument("schema_file", type=click.Path())
@click.argument("w")
def word_root(schema_file, w):
    """Print the primitive root u and the exponent n with w conjugate to u^n."""
    try:
        root, n = primitive_root(parse_word(w), load_schema(schema_file))
    except SurfaceImmersionError as e:
        _fail(e)
    click.echo(f"{root.reduced} {n}")


# ==================== 正则同伦移动 ====================


@cli.group()
def moves():
    """Apply regular-homotopy moves to curves."""


def _save_curve(curve, output: Optional[str]) -> None:
    if output:
        save_json(curve_to_json(curve), output)
        click.echo(f"✓ Curve written to {output}")
    else:
        _echo_json(curve_to_json(curve))


@moves.command("apply")
@click.argument("schema_file", type=click.Path())
@click.argument("curve_file", type=click.Path())
@click.argument("moves_file", type=click.Path())
@click.option("--output", "-o", type=click.Path(), help="Write the resulting curve here")
def moves_apply(schema_file, curve_file, moves_file, output):
    """Apply a recorded move sequence to a curve."""
    try:
        surface = load_schema(schema_file)
        sequence = load_moves(moves_file)
        result = apply_all(load_curve(curve_file), sequence, surface)
        _save_curve(result, output)
    except (SurfaceImmersionError, IOError) as e:
        _fail(e)
    logger.info(f"Applied {len(sequence)} moves to {curve_file}")


@moves.command("fuzz")
@click.argument("schema_file", type=click.Path())
@click.argument("curve_file", type=click.Path())
@click.option("-n", "count", type=int, default=100, show_default=True, help="Number of steps")
@click.option("--seed", type=int, default=None, help="Random seed (defaults to the config seed)")
@click.option("--output", "-o", type=click.Path(), help="Write the resulting curve here")
@click.option("--record", type=click.Path(), help="Write the applied moves here")
@click.pass_context
def moves_fuzz(ctx, schema_file, curve_file, count, seed, output, record):
    """Apply a seeded random regular homotopy to a curve."""
    seed = ctx.obj["run_config"].seed if seed is None else seed
    applied: List = []
    try:
        surface = load_schema(schema_file)
        result = random_regular_homotopy(load_curve(curve_file), count, seed, surface, applied)
        _save_curve(result, output)
        if record:
            save_json([move_to_json(m) for m in applied], record)
    except (SurfaceImmersionError, IOError) as e:
        _fail(e)
    logger.info(f"Fuzzed {curve_file} with {len(applied)} moves (seed {seed})")


# ==================== 批量判定 ====================


def _decide_pair(surface, pair, tolerances: Tolerances) -> Dict[str, Any]:
    """
    判定清单中的一个曲线对

    Args:
        surface: 粘合 schema
        pair: 清单条目，给出 path 时走差曲线判定
        tolerances: 数值容差

    Returns:
        Dict[str, Any]: 判定结果；出错时记录错误信息与退出码而不抛出
    """
    try:
        f, g = load_curve(pair.f), load_curve(pair.g)
        if pair.path:
            verdict = decide_via_difference(f, g, load_path(pair.path), surface, tolerances)
        else:
            verdict = decide_circle(f, g, surface, tolerances)
    except SurfaceImmersionError as e:
        logger.error(f"{pair.f} vs {pair.g}: {e}")
        return {"f": pair.f, "g": pair.g, "error": str(e), "exit_code": e.exit_code}
    result = verdict.to_dict()
    result.update({"f": pair.f, "g": pair.g, "exit_code": verdict.answer.exit_code})
    return result


@cli.command()
@click.argument("manifest_file", type=click.Path())
@click.option("--jobs", "-j", type=int, default=None, help="Number of worker threads")
@click.pass_context
def batch(ctx, manifest_file, jobs):
    """Decide every curve pair listed in a YAML manifest."""
    run_config: RunConfig = ctx.obj["run_config"]
    try:
        manifest = load_manifest(manifest_file)
        surface = load_schema(manifest.schema_file)
    except SurfaceImmersionError as e:
        _fail(e)
    workers = jobs or manifest.jobs or run_config.jobs
    if workers < 1:
        click.echo(f"✗ Error: --jobs must be positive, got {workers}", err=True)
        sys.exit(2)

    click.echo(f"Deciding {len(manifest.pairs)} pair(s) with {workers} worker(s)...")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(
            pool.map(lambda p: _decide_pair(surface, p, run_config.tolerances), manifest.pairs)
        )
    _echo_json(results)
    worst = max((r["exit_code"] for r in results), key=lambda c: EXIT_SEVERITY[c])
    logger.info(f"Batch {manifest_file}: worst exit code {worst}")
    sys.exit(worst)


def run(argv: Sequence[str]) -> int:
    """
    以参数列表运行 CLI

    Args:
        argv: 命令行参数（不含程序名）

    Returns:
        int: 退出码（yes 0、no 1、错误 2、未知 3）
    """
    try:
        cli.main(args=list(argv), prog_name="surface-immersions", standalone_mode=False, obj={})
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except click.exceptions.Abort:
        return 2
    except click.ClickException as e:
        e.show()
        return 2
    return 0


def main():
    """Main entry point for CLI."""
    cli(obj={})


if __name__ == "__main__":
    main()
