"""Independent oracles (exact polyhedra, a double-loop energy) and the acceptance line recorder."""

import math

import numpy as np

ACCEPTANCE_LINES = []


def record_criterion(k, ok, detail=""):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def octahedron():
    e = np.eye(3)
    return np.vstack([e, -e])


def icosahedron():
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            pts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    pts = np.array(pts)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def tetrahedron():
    pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return pts / math.sqrt(3)


def pairwise_log_energy(y):
    """Plain double loop; an independent oracle for the vectorized code."""
    total = 0.0
    for i in range(len(y)):
        for j in range(len(y)):
            if i != j:
                total -= math.log(math.dist(y[i], y[j]))
    return total


KNOWN_MINIMA = {
    2: -2 * math.log(2),
    3: -3 * math.log(3),
    4: -6 * math.log(8 / 3),
    6: pairwise_log_energy(octahedron()),
    12: pairwise_log_energy(icosahedron()),
}


def random_sphere(rng, n):
    y = rng.standard_normal((n, 3))
    return y / np.linalg.norm(y, axis=1, keepdims=True)
