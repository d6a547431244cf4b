"""Smoke test for the Python extension.

Build and install it first:

    pip install --no-build-isolation ./crates/python
"""

import math
import os
import sys

import edm_cluster as ec

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "crates", "core", "tests", "data")


def check(name, ok):
    print(f"{'ok' if ok else 'FAILED'}  {name}")
    return ok


def main():
    results = []

    results.append(check("scalar_min without fusion term", ec.scalar_min(2.0, 0.0) == 2.0))
    results.append(check("scalar_min clamps to zero", ec.scalar_min(-1.0, 0.5) == 0.0))

    points = [[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]
    d = ec.edm_from_points(points)
    results.append(check("edm_from_points", d[1][2] == 25.0))
    back = ec.edm_from_points(ec.cmds_embed(d, 2))
    err = max(abs(back[i][j] - d[i][j]) for i in range(3) for j in range(3))
    results.append(check("cmds round trip", err < 1e-9))

    a = [[1.0, 2.0, -1.0], [2.0, 0.0, 3.0], [-1.0, 3.0, 2.0]]
    x = ec.project_cone(a, 1)
    y = ec.project_cone(x, 1)
    err = max(abs(x[i][j] - y[i][j]) for i in range(3) for j in range(3))
    results.append(check("project_cone idempotent", err < 1e-9))

    results.append(check("rand_index", math.isclose(ec.rand_index([1, 1, 2], [1, 2, 2]), 1 / 3)))
    results.append(check("nmi identical", ec.nmi([1, 1, 2, 3], [5, 5, 6, 7]) == 1.0))

    config = ec.SolverConfig(gamma=2.0, rho=3.0, rank=2, knn=3, phi=0.5)
    pts, labels = ec.load_csv(os.path.join(DATA, "three_groups.csv"), label_column="group")
    report = ec.cluster(pts, config, labels=labels)
    results.append(check("three groups recovered", report["num_clusters"] == 3 and report["ri"] == 1.0))
    results.append(check("trace length", len(report["objective_trace"]) == report["iterations"] + 1))

    blob_points, blob_labels = ec.generate_blobs(seed=1)
    results.append(check("blob sample shape", len(blob_points) == 250 and len(set(blob_labels)) == 5))

    try:
        ec.cluster(pts, ec.SolverConfig(1.0, 1.0, 2, 20, 1.0))
        results.append(check("invalid knn rejected", False))
    except ValueError:
        results.append(check("invalid knn rejected", True))

    print(f"{sum(results)}/{len(results)} checks passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
