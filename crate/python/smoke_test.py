"""Smoke test for the osculant extension module.

Build and install it first:

    pip install --no-build-isolation -e crates/py
    python python/smoke_test.py
"""

import json
import math
import pathlib
import sys

import osculant

ROOT = pathlib.Path(__file__).resolve().parent.parent


def check(label, ok, detail=""):
    print(f"{'ok  ' if ok else 'FAIL'} {label} {detail}".rstrip())
    return ok


def main():
    results = []

    cat = osculant.catalog()
    ids = {row[0] for row in cat["surfaces"]}
    results.append(check("catalog", {"sphere", "helicoid", "catenoid"} <= ids, f"{len(ids)} surfaces"))

    p, q = 1.0, 0.5
    delta, du, dv = osculant.dilation("sphere-stereographic", p, q)
    results.append(check("stereographic dilation", abs(delta - (1 + p * p + q * q) / 2) < 1e-12 and abs(du - p) < 1e-12))

    cls = osculant.classify("scale", params=[2.0], base="sphere")
    results.append(check("classification", cls == "homothety(2)", cls))

    rows = osculant.geodesic("sphere", (math.pi / 2, 0.0), (0.0, 1.0), 2 * math.pi, step=1e-3)
    s, u, v, _, _ = rows[-1]
    results.append(check("equator geodesic", abs(s - 2 * math.pi) < 1e-12 and abs(v - 2 * math.pi) < 1e-9, f"{len(rows)} samples"))

    report = json.loads(osculant.verify_files([str(ROOT / "scenarios" / "exp-plane.toml")]))
    summary = report["summary"]
    results.append(check("exp-plane scenario", summary["fail"] == 0 and summary["pass"] == 6, str(summary)))

    try:
        osculant.verify('name = "x"\nchecks = ["christofel"]\n[correspondence]\nid = "exp-plane"\n')
        results.append(check("misspelled check rejected", False))
    except ValueError as e:
        results.append(check("misspelled check rejected", "christoffel" in str(e)))

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
