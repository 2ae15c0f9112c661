#!/usr/bin/env python3
"""Smoke test for the copson_lab extension module.

Builds the cdylib with cargo if needed, loads it, runs each exported
function once, and validates every JSON document against the shipped
schemas.
"""

import json
import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

import jsonschema

ROOT = pathlib.Path(__file__).resolve().parent.parent
SCHEMAS = ROOT / "schemas"


def load_module():
    lib = ROOT / "target" / "debug" / "libcopson_lab.so"
    if not lib.exists():
        subprocess.run(
            ["cargo", "build", "-p", "copson-py"], cwd=ROOT, check=True
        )
    staging = pathlib.Path(tempfile.mkdtemp(prefix="copson-lab-"))
    shutil.copy(lib, staging / "copson_lab.so")
    sys.path.insert(0, str(staging))
    import copson_lab

    return copson_lab


def schema(name):
    with open(SCHEMAS / f"{name}.schema.json") as fh:
        return json.load(fh)


def validated(doc_text, schema_name):
    doc = json.loads(doc_text)
    jsonschema.validate(doc, schema(schema_name))
    return doc


def main():
    lab = load_module()
    checks = 0

    # critical exponent: closed form at p = 2 is 2 - sqrt(5)
    c0 = lab.solve_c0(2.0)
    assert abs(c0 - (2.0 - math.sqrt(5.0))) < 1e-12, c0
    checks += 1

    # scalar endpoint function vanishes at x = 0
    assert lab.scalar_eval("F_LEMMA", 2.0, 0.0, 0.0) == 0.0
    checks += 1

    doc = validated(
        lab.check_condition("LEMMA21", 2.0, -0.5, grid=4096), "scalar_check"
    )
    assert doc["verdict"] == "FAIL" and doc["witness"]["x"] == 1.0
    checks += 1

    doc = validated(
        lab.verify("C2", 2.0, 0.0, "const:1", "unit:1", 100), "truncation_report"
    )
    assert doc["verdict"] == "HOLDS" and doc["ratio"] == 0.25
    checks += 1

    doc = validated(
        lab.certify("copson-tail", 2.0, -0.2, "const:1", 2000), "weight_certificate"
    )
    assert doc["verdict"] == "CERT_PASS"
    checks += 1

    doc = validated(
        lab.ratio_scan("C1", 2.0, 2.0, [0.5, 0.2], 100000), "ratio_scan"
    )
    ratios = [e["ratio"] for e in doc["entries"]]
    assert ratios[0] < ratios[1] < 4.0, ratios
    checks += 1

    # 2x2 averaging-matrix oracle: sqrt((1.5 + sqrt(1.25)) / 2)
    est = lab.dual_norm("C2_DUAL", 2.0, 2.0, "const:1", 2)
    assert abs(est - math.sqrt((1.5 + math.sqrt(1.25)) / 2.0)) < 1e-6, est
    checks += 1

    doc = validated(
        lab.region_map("pc", [1.5, 2.0], [-0.2, 0.0], n=200), "region_map"
    )
    assert len(doc["cells"]) == 4 and len(doc["overlay"]) == 2
    checks += 1

    doc = validated(
        lab.search("C1", 2.0, 2.0, "const:1", 128, 500, seed=3), "search_result"
    )
    assert not doc["counterexample"] and doc["best_ratio"] < 1.0
    checks += 1

    # determinism: identical seeds give identical documents
    again = lab.search("C1", 2.0, 2.0, "const:1", 128, 500, seed=3)
    assert json.loads(again) == doc
    checks += 1

    print(f"smoke test passed: {checks} checks")


if __name__ == "__main__":
    main()
