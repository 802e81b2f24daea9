"""Writes the discrete test fixtures under tests/fixtures/."""
import argparse
import json
import random
from fractions import Fraction
from pathlib import Path

D1 = [  # x, z, y, mass
    (0, 0, 0, "0.10"), (0, 1, 0, "0.05"),
    (1, 0, 1, "0.08"), (1, 1, 0, "0.12"), (1, 0, 0, "0.05"),
    (2, 1, 1, "0.15"), (2, 0, 0, "0.05"),
    (3, 0, 1, "0.10"), (3, 1, 1, "0.12"), (3, 1, 0, "0.03"),
    (4, 0, 1, "0.05"), (4, 1, 0, "0.10"),
]


def d1():
    pts = [{"x": [float(x)], "z": [z], "y": y, "mass": float(Fraction(m))} for x, z, y, m in D1]
    return {"cardinalities": [2], "points": pts}


def random_fixture(seed, n_points, n_x, dim):
    rng = random.Random(seed)
    while True:
        xs = set()
        while len(xs) < n_x:
            xs.add(tuple(float(rng.randint(0, 9 if dim == 1 else 4)) for _ in range(dim)))
        xs = sorted(xs)
        keys = set()
        # every x appears and every (z, y) cell is populated
        for i, x in enumerate(xs):
            keys.add((x, rng.randint(0, 1), rng.randint(0, 1)))
        while len(keys) < n_points:
            keys.add((rng.choice(xs), rng.randint(0, 1), rng.randint(0, 1)))
        if {(z, y) for _, z, y in keys} == {(0, 0), (0, 1), (1, 0), (1, 1)}:
            break
    keys = sorted(keys)
    weights = [rng.randint(1, 20) for _ in keys]
    total = sum(weights)
    pts = [{"x": list(x), "z": [z], "y": y, "mass": w / total} for (x, z, y), w in zip(keys, weights)]
    return {"cardinalities": [2], "points": pts}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fixtures = {"d1": d1()}
    specs = [(11, 10, 6, 1), (12, 12, 8, 2), (13, 9, 5, 2), (14, 12, 10, 2), (15, 11, 7, 1)]
    for k, (seed, n, nx, dim) in enumerate(specs, start=2):
        fixtures[f"d{k}"] = random_fixture(seed, n, nx, dim)
    for name, fx in fixtures.items():
        (out / f"{name}.json").write_text(json.dumps(fx, indent=1) + "\n")


if __name__ == "__main__":
    main()
