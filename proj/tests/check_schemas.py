"""Runs the CLI and checks its JSON against the shipped schemas, plus exit codes,
CSV round-tripping, manifests and byte-identical reruns.

usage: check_schemas.py <aimdfluid> <schema-dir>
"""

import csv
import hashlib
import io
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

failures = []


def check(ok, what):
    if not ok:
        failures.append(what)
        print("FAIL:", what)


def run(exe, *args):
    return subprocess.run([exe, *args], capture_output=True, text=True)


def main():
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items())

    def validator(name):
        cls = jsonschema.validators.validator_for(schemas[name])
        cls.check_schema(schemas[name])
        return cls(schemas[name], registry=registry)

    report = validator("classification_report.schema.json")
    sim = validator("sim_result.schema.json")
    manifest = validator("run_manifest.schema.json")

    def valid(v, doc, what):
        errors = list(v.iter_errors(doc))
        check(not errors, f"{what}: {errors[0].message if errors else ''}")

    classify_cases = [
        ["--beta", "0.5", "--q", "0.9", "--b", "0.3"],
        ["--beta", "0.5", "--q", "0.9", "--b", "0.7"],
        ["--beta", "0.5", "--q", "0.9", "--b", "0.05"],
        ["--beta", "0.5", "--q", "0.35", "--b", "0.01"],
        ["--beta", "0.3", "--q", "4.0", "--b", "0.0"],
        ["--beta", "0.5", "--mu", "1000", "--rtt", "0.1", "--m", "10", "--buffer", "3",
         "--unit", "bits"],
    ]
    for args in classify_cases:
        r = run(exe, "classify", *args)
        check(r.returncode == 0, f"classify {args} exit {r.returncode}: {r.stderr}")
        if r.returncode == 0:
            valid(report, json.loads(r.stdout), f"classify {args}")

    doc = json.loads(run(exe, "classify", "--beta", "0.5", "--q", "0.9", "--b", "0.3").stdout)
    check([c["order"] for c in doc["cycles"]] == [1, 2], "coexistence at b=0.3")
    doc = json.loads(run(exe, "classify", "--beta", "0.5", "--q", "0.9", "--b", "0.7").stdout)
    check(doc["single_jump_only"] and doc["single_jump_condition"] == "a", "condition (a) at b=0.7")

    # Physical input equals the normalized invocation it maps to.
    phys = json.loads(run(exe, "classify", "--beta", "0.5", "--mu", "90", "--rtt", "0.1",
                          "--m", "10", "--buffer", "3").stdout)
    norm = json.loads(run(exe, "classify", "--beta", "0.5", "--q", "0.9", "--b", "0.3").stdout)
    check(phys["constants"] == norm["constants"] and phys["cycles"] == norm["cycles"],
          "physical and normalized classify agree")

    for args, code in [
        (["classify", "--beta", "0.5", "--q", "0.9", "--b", "-1"], 2),
        (["classify", "--beta", "0.995", "--q", "0.9", "--b", "0.1"], 2),
        (["classify", "--beta", "0.5", "--q", "0.9", "--b", "0.1", "--mu", "3"], 2),
        (["classify", "--beta", "0.5", "--q", "0.9"], 2),
        (["pareto", "--mu", "1000", "--rtt", "0.1", "--m", "10", "--beta", "0.5",
          "--b-min", "0", "--b-max", "50", "--points", "0"], 2),
        (["pareto", "--mu", "1000", "--rtt", "0.1", "--m", "10", "--beta", "0.5",
          "--b-min", "0", "--b-max", "20", "--points", "5", "--constraint", "gbar>=1mu"], 3),
        (["pareto", "--mu", "1000", "--rtt", "0.1", "--m", "10", "--beta", "0.5",
          "--b-min", "0", "--b-max", "20", "--points", "5", "--constraint", "bogus"], 2),
    ]:
        r = run(exe, *args)
        check(r.returncode == code, f"{args} exit {r.returncode}, expected {code}")
        try:
            err = json.loads(r.stderr.strip().splitlines()[-1])
            check("error" in err and "message" in err, f"{args} error JSON fields")
        except (ValueError, IndexError):
            check(False, f"{args} stderr is not JSON: {r.stderr!r}")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        out, trace, man = tmp / "sim.json", tmp / "trace.csv", tmp / "man.json"
        for b in ["0.05", "0.0616570415871291", "0.3", "0.7"]:
            args = ["simulate", "--beta", "0.5", "--q", "0.9", "--b", b, "--trace", str(trace),
                    "-o", str(out), "--manifest", str(man), "--seed", "7"]
            r = run(exe, *args)
            check(r.returncode == 0, f"simulate b={b} exit {r.returncode}: {r.stderr}")
            if r.returncode:
                continue
            valid(sim, json.loads(out.read_text()), f"simulate b={b}")
            m = json.loads(man.read_text())
            valid(manifest, m, f"simulate manifest b={b}")
            digests = {o["path"]: o["sha256"] for o in m["outputs"]}
            for p in (out, trace):
                check(digests.get(str(p)) == hashlib.sha256(p.read_bytes()).hexdigest(),
                      f"manifest digest for {p.name}")
            rows = list(csv.DictReader(io.StringIO(trace.read_text())))
            check(rows and all(float(r["y"]) >= -1e-12 for r in rows), "trace y >= 0")
            if b == "0.05":
                check(any(r["event"] == "slide_end" for r in rows), "clipped trace slides")
            first = out.read_bytes()
            run(exe, *args)
            check(out.read_bytes() == first, f"simulate b={b} is byte-identical on rerun")

        pargs = ["pareto", "--mu", "1000", "--rtt", "0.1", "--m", "10", "--beta", "0.5",
                 "--b-min", "0", "--b-max", "200", "--points", "21", "--constraint",
                 "gbar>=0.95mu", "-o", str(tmp / "p.csv"), "--manifest", str(man)]
        r = run(exe, *pargs)
        check(r.returncode == 0, f"pareto exit {r.returncode}: {r.stderr}")
        valid(manifest, json.loads(man.read_text()), "pareto manifest")
        text = (tmp / "p.csv").read_text()
        rows = list(csv.DictReader(io.StringIO(text)))
        check(rows[0].keys() >= {"B", "lambda_bar", "g_bar", "x_bar", "T_cycle", "regime"},
              "pareto columns")
        check(sum(r["tag"] == "knee" for r in rows) == 1, "one knee row")
        opt = [r for r in rows if r["tag"] == "optimum"]
        check(len(opt) == 1 and abs(float(opt[0]["g_bar"]) - 950) < 1e-6, "optimum at 0.95 mu")
        # 12 significant digits round-trip through float and back.
        for r in rows:
            for k in ("B", "g_bar", "x_bar"):
                check(float("%.12g" % float(r[k])) == float(r[k]), f"lossless {k}")
        run(exe, *pargs)
        check((tmp / "p.csv").read_text() == text, "pareto is byte-identical on rerun")

        r = run(exe, "bmin", "--mu", "6000", "--rtt", "0.1", "--beta", "0.5", "--m-range",
                "0.01:20000", "--samples", "50", "-o", str(tmp / "b.csv"), "--manifest", str(man))
        check(r.returncode == 0, f"bmin exit {r.returncode}: {r.stderr}")
        valid(manifest, json.loads(man.read_text()), "bmin manifest")
        rows = list(csv.DictReader(io.StringIO((tmp / "b.csv").read_text())))
        check(594 <= float(rows[0]["B0"]) <= 600, "bmin approaches mu T for small m")
        for r in rows:
            m = float(r["m"])
            check(abs(float(r["envelope"]) - 0.125 * 600 ** 2 / m) <= 1e-9 * float(r["envelope"]),
                  "envelope column")

    print("schema and CLI checks:", "FAILED" if failures else "ok", f"({len(failures)} failures)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
