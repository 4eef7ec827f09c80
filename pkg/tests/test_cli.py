from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from mapfdc import cli
from mapfdc.graphs import Graph, complete_graph
from mapfdc.model import (
    Instance,
    Schedule,
    parse_instance,
    parse_schedule,
    serialize_instance,
    serialize_schedule,
    validate_schedule,
)


def _write_instance(path: Path, inst: Instance) -> None:
    path.write_text(serialize_instance(inst))


def _swap_on_an_edge() -> Instance:
    return Instance(Graph(2, [(0, 1)]), (0, 1), (1, 0))


# --- solve --------------------------------------------------------------------


def test_solve_then_validate_round_trip(tmp_path, capsys) -> None:
    ipath = tmp_path / "inst.mapf"
    spath = tmp_path / "out.sched"
    assert (
        cli.main(
            [
                "generate",
                "random",
                "--vertices",
                "6",
                "--dc",
                "1",
                "--agents",
                "3",
                "--seed",
                "4",
                "-o",
                str(ipath),
            ]
        )
        == 0
    )
    assert cli.main(["solve", str(ipath), "-o", str(spath)]) == 0
    assert cli.main(["validate", str(ipath), str(spath)]) == 0
    err = capsys.readouterr().err
    assert "valid, makespan" in err


def test_solve_auto_uses_the_clique_algorithm_on_complete_graphs(
    tmp_path, capsys
) -> None:
    ipath = tmp_path / "k5.mapf"
    _write_instance(ipath, Instance(complete_graph(5), (0, 1, 2), (1, 0, 2)))
    spath = tmp_path / "k5.sched"
    assert cli.main(["solve", str(ipath), "-o", str(spath)]) == 0
    err = capsys.readouterr().err
    assert "\tclique\t" in err
    inst = parse_instance(ipath.read_text())
    sched = parse_schedule(spath.read_text(), inst)
    assert validate_schedule(inst, sched).ok
    assert sched.makespan == 2


def test_solve_reports_infeasible_with_exit_one(tmp_path, capsys) -> None:
    ipath = tmp_path / "edge.mapf"
    _write_instance(ipath, _swap_on_an_edge())
    assert cli.main(["solve", str(ipath), "--algo", "oracle"]) == 1
    assert "infeasible" in capsys.readouterr().err


def test_solve_honors_the_instance_makespan_limit(tmp_path, capsys) -> None:
    # the optimum is 2 turns; a limit of 1 makes the instance infeasible
    ipath = tmp_path / "tight.mapf"
    _write_instance(
        ipath, Instance(complete_graph(4), (0, 1), (1, 0), makespan_limit=1)
    )
    for algo in ("oracle", "clique", "fpt"):
        assert cli.main(["solve", str(ipath), "--algo", algo]) == 1
    capsys.readouterr()


def test_solve_state_guard_exit_code(tmp_path, capsys) -> None:
    ipath = tmp_path / "guard.mapf"
    _write_instance(
        ipath,
        Instance(Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]), (0, 2), (4, 0)),
    )
    assert (
        cli.main(["solve", str(ipath), "--algo", "oracle", "--state-guard", "2"])
        == 3
    )
    assert "resource limit" in capsys.readouterr().err


def test_solve_rejects_colored_instances(tmp_path, capsys) -> None:
    ipath = tmp_path / "colored.cmapf"
    text = cli_colored_text(tmp_path)
    ipath.write_text(text)
    assert cli.main(["solve", str(ipath)]) == 2
    assert "plain instances only" in capsys.readouterr().err


def cli_colored_text(tmp_path: Path) -> str:
    from mapfdc.gadgets import build_colored_pancake_instance
    from mapfdc.model import serialize_colored_instance

    inst, _ = build_colored_pancake_instance("01", "10", 1)
    return serialize_colored_instance(inst)


# --- validate -----------------------------------------------------------------


def test_validate_flags_a_swap(tmp_path, capsys) -> None:
    ipath = tmp_path / "inst.mapf"
    spath = tmp_path / "swap.sched"
    inst = _swap_on_an_edge()
    _write_instance(ipath, inst)
    spath.write_text(serialize_schedule(Schedule(((1, 0),))))
    assert cli.main(["validate", str(ipath), str(spath)]) == 1
    err = capsys.readouterr().err
    assert "invalid" in err
    assert "exchange" in err


def test_validate_usage_error_on_truncated_schedule(tmp_path, capsys) -> None:
    ipath = tmp_path / "inst.mapf"
    spath = tmp_path / "short.sched"
    _write_instance(ipath, Instance(complete_graph(3), (0, 1), (1, 0)))
    spath.write_text("sched 2 1\nturn 1 2\n")
    assert cli.main(["validate", str(ipath), str(spath)]) == 2
    assert "parse error" in capsys.readouterr().err


def test_validate_accepts_the_empty_schedule_at_home(tmp_path, capsys) -> None:
    ipath = tmp_path / "home.mapf"
    spath = tmp_path / "home.sched"
    _write_instance(ipath, Instance(complete_graph(3), (0, 2), (0, 2)))
    spath.write_text(serialize_schedule(Schedule(())))
    assert cli.main(["validate", str(ipath), str(spath)]) == 0
    assert "makespan 0" in capsys.readouterr().err


# --- generate -----------------------------------------------------------------


def test_generate_random_is_deterministic(tmp_path) -> None:
    a = tmp_path / "a.mapf"
    b = tmp_path / "b.mapf"
    argv = ["generate", "random", "--vertices", "7", "--dc", "2", "--agents", "3"]
    assert cli.main(argv + ["--seed", "9", "-o", str(a)]) == 0
    assert cli.main(argv + ["--seed", "9", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.mapf"
    assert cli.main(argv + ["--seed", "10", "-o", str(c)]) == 0
    assert a.read_bytes() != c.read_bytes()


def test_generate_pancake_with_witness(tmp_path, capsys) -> None:
    ipath = tmp_path / "pan.mapf"
    wpath = tmp_path / "pan.wit"
    rpath = tmp_path / "pan.names"
    assert (
        cli.main(
            [
                "generate",
                "pancake",
                "--perm",
                "2",
                "1",
                "--flips",
                "1",
                "--flip-seq",
                "2",
                "-o",
                str(ipath),
                "--witness",
                str(wpath),
                "--registry",
                str(rpath),
            ]
        )
        == 0
    )
    err = capsys.readouterr().err
    assert "limit 12" in err
    assert "witness: makespan 12" in err
    assert rpath.read_text().startswith("name ")
    assert cli.main(["validate", str(ipath), str(wpath)]) == 0


def test_generate_pancake_default_witness_path(tmp_path) -> None:
    ipath = tmp_path / "pan.mapf"
    argv = [
        "generate", "pancake", "--perm", "1", "2", "--flips", "1",
        "--flip-seq", "1", "-o", str(ipath),
    ]
    assert cli.main(argv) == 0
    assert (tmp_path / "pan.mapf.witness").exists()


def test_generate_witness_to_stdout_requires_a_witness_path(capsys) -> None:
    argv = [
        "generate", "pancake", "--perm", "2", "1", "--flips", "1",
        "--flip-seq", "2",
    ]
    assert cli.main(argv) == 2
    assert "--witness is required" in capsys.readouterr().err


def test_generate_three_partition_with_witness(tmp_path, capsys) -> None:
    ipath = tmp_path / "tp.mapf"
    wpath = tmp_path / "tp.wit"
    assert (
        cli.main(
            [
                "generate",
                "three-partition",
                "--betas",
                "1", "1", "1", "1", "1", "1",
                "--partition",
                "1,2,3",
                "4,5,6",
                "-o",
                str(ipath),
                "--witness",
                str(wpath),
            ]
        )
        == 0
    )
    err = capsys.readouterr().err
    assert "3063 vertices" in err
    assert "limit 258" in err
    assert "witness: makespan 258" in err
    assert cli.main(["validate", str(ipath), str(wpath)]) == 0


def test_generate_colored_with_witness(tmp_path, capsys) -> None:
    ipath = tmp_path / "col.cmapf"
    wpath = tmp_path / "col.wit"
    assert (
        cli.main(
            [
                "generate",
                "colored",
                "--alpha",
                "01",
                "--beta",
                "10",
                "--flips",
                "1",
                "--flip-seq",
                "2",
                "-o",
                str(ipath),
                "--witness",
                str(wpath),
            ]
        )
        == 0
    )
    capsys.readouterr()
    assert ipath.read_text().startswith("cmapf")
    assert cli.main(["validate", str(ipath), str(wpath)]) == 0


def test_generate_rejects_bad_symbol_strings(capsys) -> None:
    argv = [
        "generate", "colored", "--alpha", "02", "--beta", "20", "--flips", "1",
    ]
    assert cli.main(argv) == 2
    assert "0s and 1s" in capsys.readouterr().err


def test_generate_rejects_unbalanced_partition_items(capsys) -> None:
    argv = ["generate", "three-partition", "--betas", "1", "1", "1"]
    assert cli.main(argv) == 2
    capsys.readouterr()


# --- bench --------------------------------------------------------------------


def test_bench_reports_agreement(tmp_path, capsys) -> None:
    for seed in (3, 5):
        inst = cli_random(6, 1, 2, seed)
        (tmp_path / f"r{seed}.mapf").write_text(serialize_instance(inst))
    assert cli.main(["bench", str(tmp_path)]) == 0
    captured = capsys.readouterr()
    lines = captured.out.strip().splitlines()
    assert lines[0] == "\t".join(
        ("instance", "algo", "feasible", "makespan", "states", "ms")
    )
    assert len(lines) == 1 + 2 * 2
    algos = [line.split("\t")[1] for line in lines[1:]]
    assert algos == ["oracle", "fpt", "oracle", "fpt"]
    assert "agree everywhere" in captured.err


def cli_random(vertices: int, dc: int, agents: int, seed: int):
    from mapfdc.gadgets import random_instance

    return random_instance(vertices, dc, agents, seed)


def test_bench_empty_directory_prints_only_the_header(tmp_path, capsys) -> None:
    assert cli.main(["bench", str(tmp_path)]) == 0
    captured = capsys.readouterr()
    assert captured.out.strip().splitlines() == [
        "\t".join(("instance", "algo", "feasible", "makespan", "states", "ms"))
    ]
    assert "no .mapf instances" in captured.err


# --- entry points ----------------------------------------------------------------


def test_main_requires_a_subcommand() -> None:
    with pytest.raises(SystemExit) as err:
        cli.main([])
    assert err.value.code == 2


def test_module_entry_point(tmp_path) -> None:
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "mapfdc.cli",
            "generate",
            "random",
            "--vertices",
            "5",
            "--dc",
            "1",
            "--agents",
            "2",
            "--seed",
            "1",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    inst = parse_instance(proc.stdout)
    assert inst.graph.n == 5
    assert inst.n_agents == 2
