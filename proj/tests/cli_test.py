"""CLI smoke test: exit codes, deterministic output and JSON schema conformance."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([cli, *args], capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def validate(name, doc):
    schema = json.loads((schema_dir / f"{name}.json").read_text())
    try:
        jsonschema.Draft202012Validator(schema).validate(doc)
        check(True, f"{name} output matches its schema")
    except jsonschema.ValidationError as e:
        check(False, f"{name} output matches its schema: {e.message} at {list(e.absolute_path)}")


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    quick = ["--steps", "200000", "--stride", "1000"]
    sink = ["--r", "10"]

    cases = {
        "simulate": ["simulate", *sink, *quick],
        "fixed-points": ["fixed-points", "--r", "4+9i"],
        "eigen": ["eigen", "--r", "5", "--dt", "0.005"],
        "lyapunov": ["lyapunov", *sink, *quick],
        "classify": ["classify", *sink, *quick],
        "ensemble": ["ensemble", *sink, *quick, "--members", "(1,0,0);(-1,0,0)", "--random", "2"],
    }
    for name, args in cases.items():
        out = tmp / name
        p = run(*args, "--out", str(out), "--format", "json")
        check(p.returncode == 0, f"{name} exits 0 (got {p.returncode}: {p.stderr.strip()})")
        if p.returncode == 0:
            doc = json.loads(p.stdout)
            validate(name, doc)
            saved = out / f"{name}.json"
            check(saved.exists() and json.loads(saved.read_text()) == doc, f"{name} writes {saved.name}")

    a = run("simulate", *sink, *quick, "--out", str(tmp / "d1"), "--format", "csv")
    b = run("simulate", *sink, *quick, "--out", str(tmp / "d2"), "--format", "csv")
    o1 = sorted((tmp / "d1").rglob("*.csv"))
    o2 = sorted((tmp / "d2").rglob("*.csv"))
    check(len(o1) > 0 and [f.read_bytes() for f in o1] == [f.read_bytes() for f in o2],
          "simulate output is byte-identical across runs")
    check(a.stdout == b.stdout, "simulate stdout is identical across runs")

    p = run("simulate", *sink, *quick, "--plot", "three_d", "--out", str(tmp / "plot"))
    check(p.returncode == 0 and len(list((tmp / "plot").rglob("*_re.csv"))) == 1, "simulate --plot three_d")

    suite = tmp / "mini.suite"
    suite.write_text("id=sink\na=10\nb=8/3\nr=10\ndt=0.0005\nx0=0.1\ny0=0.3\nz0=0.5\n"
                     "steps=200000\nexpected=converges_to\n\n"
                     "id=wrong\na=10\nb=8/3\nr=10\ndt=0.0005\nx0=0.1\ny0=0.3\nz0=0.5\n"
                     "steps=200000\nexpected=chaotic\n")
    p = run("reproduce", "--suite", str(suite), "--out", str(tmp / "rep"), "--format", "json")
    check(p.returncode == 2, f"reproduce with a mismatch exits 2 (got {p.returncode})")
    validate("reproduce-summary", json.loads(p.stdout))
    validate("report", json.loads((tmp / "rep" / "report.json").read_text()))
    check((tmp / "rep" / "summary.txt").exists(), "reproduce writes summary.txt")

    suite.write_text("id=sink\na=10\nb=8/3\nr=10\ndt=0.0005\nx0=0.1\ny0=0.3\nz0=0.5\n"
                     "steps=200000\nexpected=converges_to\n")
    p = run("reproduce", "--suite", str(suite), "--out", str(tmp / "rep2"))
    check(p.returncode == 0, f"reproduce with all matches exits 0 (got {p.returncode})")

    p = run("simulate", "--r", "-1-5i", "--steps", "2000000", "--out", str(tmp / "div"))
    check(p.returncode == 3, f"divergent simulate exits 3 (got {p.returncode})")

    p = run("fixed-points", "--dt", "-0.1")
    check(p.returncode == 1 and "dt must be positive" in p.stderr, f"negative dt exits 1 naming dt (got {p.returncode})")
    p = run("fixed-points", "--r", "4+9j")
    check(p.returncode == 1 and "'r'" in p.stderr, f"malformed r exits 1 naming r (got {p.returncode})")
    p = run("eigen", "--r", "1", "--fixed-point", "7")
    check(p.returncode == 1, f"bad fixed-point index exits 1 (got {p.returncode})")
    p = run("--help")
    check(p.returncode == 0 and "reproduce" in p.stdout, "--help exits 0 and lists subcommands")
    p = run("frobnicate")
    check(p.returncode == 1, f"unknown subcommand exits 1 (got {p.returncode})")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
