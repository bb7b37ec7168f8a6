#!/usr/bin/env python3
"""End-to-end checks of the kymh binary: exit codes, report schema, determinism."""

import argparse
import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

EXPECTED_EXIT = {
    "vortex.json": 0,
    "gravitating.json": 0,
    "gravitating_obstructed.json": 2,
    "eb.json": 0,
    "futaki.json": 2,
    "futaki_balanced.json": 0,
    "stability.json": 0,
    "quiver_a2.json": 0,
    "sweep.json": 0,
}

failures = []


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def run(binary, config, out, *extra, env=None):
    cmd = [binary, "--config", str(config), "--out", str(out), *extra]
    return subprocess.run(cmd, capture_output=True, text=True, env=env)


def strip_timing(node):
    if isinstance(node, dict):
        return {k: strip_timing(v) for k, v in node.items() if k != "wall_time_seconds"}
    if isinstance(node, list):
        return [strip_timing(v) for v in node]
    return node


def outputs(directory):
    return {p.name: p.read_bytes() for p in sorted(Path(directory).iterdir())}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--binary", required=True)
    ap.add_argument("--configs", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--work", required=True)
    args = ap.parse_args()

    work = Path(args.work)
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    schema = json.loads(Path(args.schema).read_text())
    validator = jsonschema.Draft202012Validator(schema)

    for name, code in EXPECTED_EXIT.items():
        cfg = Path(args.configs) / name
        first, second = work / (name + ".a"), work / (name + ".b")
        r1 = run(args.binary, cfg, first)
        r2 = run(args.binary, cfg, second)
        check(r1.returncode == code, f"{name}: exit {r1.returncode}, expected {code}\n{r1.stderr}")
        report = json.loads((first / "report.json").read_text())
        errors = sorted(validator.iter_errors(report), key=str)
        check(not errors, f"{name}: schema violations {[e.message for e in errors]}")
        check(report["exit_code"] == code, f"{name}: report exit_code {report['exit_code']}")
        again = json.loads((second / "report.json").read_text())
        check(strip_timing(report) == strip_timing(again), f"{name}: reports differ between runs")
        a, b = outputs(first), outputs(second)
        a.pop("report.json"), b.pop("report.json")
        check(a == b, f"{name}: CSV outputs differ between runs")
        check(not any(".tmp." in f for f in outputs(first)), f"{name}: leftover temp file")

    obstructed = json.loads((work / "gravitating_obstructed.json.a" / "report.json").read_text())
    check("If φ has only one zero" in obstructed["message"], "obstructed run does not quote the single-zero message")
    check(obstructed["results"].get("newton_iterations") == 0, "obstructed run took Newton steps")
    r = run(args.binary, Path(args.configs) / "gravitating_obstructed.json", work / "override", "--override-obstruction")
    check(r.returncode in (0, 3), f"override run: exit {r.returncode}")

    # The scalar reference path and the vector path give identical numbers.
    env = dict(os.environ, KYMH_SIMD="scalar")
    r = run(args.binary, Path(args.configs) / "vortex.json", work / "scalar", env=env)
    check(r.returncode == 0, "scalar run failed")
    scalar_report = json.loads((work / "scalar" / "report.json").read_text())
    vector_report = json.loads((work / "vortex.json.a" / "report.json").read_text())
    check(scalar_report["simd"] == "scalar", "KYMH_SIMD=scalar not honoured")
    for rep in (scalar_report, vector_report):
        rep.pop("simd")
    check(strip_timing(scalar_report) == strip_timing(vector_report), "scalar and vector reports differ")
    check(outputs(work / "scalar")["profile.csv"] == outputs(work / "vortex.json.a")["profile.csv"],
          "scalar and vector profiles differ")

    bad = work / "bad.json"
    bad.write_text('{"command": "solve-vortex", "degrees": [1], "exponents": [0], "tau": -1, "n": 128, "bogus": 1}')
    r = run(args.binary, bad, work / "bad_out")
    check(r.returncode == 1, f"invalid config: exit {r.returncode}")
    for needle in ("unknown key 'bogus'", "tau must be positive", "n must be odd"):
        check(needle in r.stderr, f"invalid config: missing '{needle}' in stderr")

    r = run(args.binary, work / "does_not_exist.json", work / "x")
    check(r.returncode == 4, f"missing config: exit {r.returncode}")
    blocker = work / "blocker"
    blocker.write_text("x")
    r = run(args.binary, Path(args.configs) / "futaki_balanced.json", blocker / "sub")
    check(r.returncode == 4, f"unwritable output: exit {r.returncode}")

    r = run(args.binary, Path(args.configs) / "vortex.json", work / "res", "--resolution", "65")
    rep = json.loads((work / "res" / "report.json").read_text())
    check(r.returncode == 0 and rep["config"]["n"] == 65, "--resolution not applied")
    r = run(args.binary, Path(args.configs) / "vortex.json", work / "res2", "--resolution", "64")
    check(r.returncode == 1, f"even --resolution: exit {r.returncode}")

    env = dict(os.environ, KYMH_OUT_DIR=str(work / "from_env"))
    r = subprocess.run([args.binary, "--config", str(Path(args.configs) / "futaki_balanced.json")],
                       capture_output=True, text=True, env=env, cwd=work)
    check((work / "from_env" / "report.json").exists(), "KYMH_OUT_DIR not honoured")

    sweep = json.loads((work / "sweep.json.a" / "report.json").read_text())
    summary = (work / "sweep.json.a" / "summary.csv").read_text().splitlines()
    check(len(summary) == 1 + sweep["results"]["member_count"], "sweep summary row count")
    check([m["index"] for m in sweep["results"]["members"]] == list(range(sweep["results"]["member_count"])),
          "sweep members out of order")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
