"""End-to-end checks of the command-line tool: schemas, exit codes, determinism."""

import hashlib
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

CLI = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

resources = {}
for path in SCHEMAS.glob("*.schema.json"):
    resources[path.name] = Resource.from_contents(json.loads(path.read_text()))
registry = Registry().with_resources(resources.items())
failures = []


def validate(doc_path, schema_name):
    schema = resources[schema_name].contents
    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    errors = list(validator.iter_errors(json.loads(pathlib.Path(doc_path).read_text())))
    if errors:
        failures.append(f"{doc_path} vs {schema_name}: {errors[0].message}")


def cli(*args, expect):
    proc = subprocess.run([CLI, "--quiet", *map(str, args)], capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{args}: exit {proc.returncode}, wanted {expect}; {proc.stderr.strip()}")
    return proc


def check(cond, message):
    if not cond:
        failures.append(message)


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    cli("ground-state", "--n", 511, "--rmax", 40, "--seed-profile", "sech", "--out", tmp / "gs" / "q.json", expect=0)
    validate(tmp / "gs" / "q.json", "ground_state.schema.json")
    validate(tmp / "gs" / "manifest.json", "manifest.schema.json")

    evolve = {"command": "evolve", "grid": {"n_points": 255, "r_max": 20.0}, "params": {"mass": 1.0},
              "u0": {"kind": "gaussian", "amplitude": 1.0, "width": 1.0, "mass": 1.0},
              "controls": {"dt0": 0.01, "t_end": 0.5, "snapshot_stride": 10}}
    (tmp / "evolve.json").write_text(json.dumps(evolve))
    for run in ("a", "b"):
        cli("--config", tmp / "evolve.json", "--out-dir", tmp / run, "evolve", expect=0)
    ma = json.loads((tmp / "a" / "manifest.json").read_text())
    mb = json.loads((tmp / "b" / "manifest.json").read_text())
    check(ma["outputs"] == mb["outputs"], "repeated evolve produced different digests")
    for name, digest in ma["outputs"].items():
        check(hashlib.sha256((tmp / "a" / name).read_bytes()).hexdigest() == digest, f"digest mismatch for {name}")
    validate(tmp / "a" / "trajectory.json", "trajectory.schema.json")
    validate(tmp / "a" / "manifest.json", "manifest.schema.json")
    header = (tmp / "a" / "trajectory.csv").read_text().splitlines()[0]
    check(header == "t,dt,mass,energy,h_half,boundary_mass", f"unexpected csv header {header}")

    echo = tmp / "echo.json"
    echo.write_text(json.dumps(ma["config"]))
    cli("--config", echo, "--out-dir", tmp / "c", "run", expect=0)
    mc = json.loads((tmp / "c" / "manifest.json").read_text())
    check(mc["outputs"] == ma["outputs"], "config echo did not reproduce the run")

    zero = dict(evolve, controls={"t_end": 0.0})
    (tmp / "zero.json").write_text(json.dumps(zero))
    cli("--config", tmp / "zero.json", "--out-dir", tmp / "z", "evolve", expect=0)
    traj = json.loads((tmp / "z" / "trajectory.json").read_text())
    check(len(traj["snapshots"]) == 1 and traj["termination"] == "HorizonReached", "t_end = 0 run is not degenerate")

    cli("diagnose", "--trajectory", tmp / "a" / "trajectory.json", "--ground-state", tmp / "gs" / "q.json",
        "--checks", "propagation,newton,blowup_measure,tightness,h_minus1", "--out", tmp / "d" / "report.json", expect=0)
    validate(tmp / "d" / "report.json", "report.schema.json")

    proc = cli("operator-check", "--suite", "ims", "--n", 64, "--out", tmp / "lab" / "report.json", expect=0)
    validate(tmp / "lab" / "report.json", "report.schema.json")

    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"ground_state": {"tol": -1.0}}))
    proc = cli("--config", bad, "ground-state", expect=2)
    check("tol" in proc.stderr, "negative tol not named in the error")
    bad.write_text(json.dumps({"unknown_key": 1}))
    proc = cli("--config", bad, "ground-state", expect=2)
    check("unknown_key" in proc.stderr, "unknown key not named in the error")
    bad.write_text("{not json")
    cli("--config", bad, "ground-state", expect=2)
    cli("ground-state", "--n", 255, "--rmax", 20, "--max-iter", 2, "--out", tmp / "nc" / "q.json", expect=3)
    cli("operator-check", "--n", 63, expect=2)
    cli("diagnose", "--trajectory", tmp / "a" / "trajectory.json", "--ground-state", tmp / "gs" / "q.json",
        "--checks", "concentration", "--out", tmp / "d2" / "report.json", expect=0)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli checks passed")
