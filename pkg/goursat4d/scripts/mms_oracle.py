"""Script to write golden tables of phi_1122 = V_{1,1,2,2} u for the manufactured cases

Works from sympy expressions only, so the tables check the package's own
derivative bundles and operator instead of repeating them.

Usage: python -m goursat4d.scripts.mms_oracle [out_dir] [nodes]
"""
import csv
import itertools
import sys
from pathlib import Path
from typing import Dict, Tuple

import sympy as sy

x1, x2, x3, x4 = COORDS = sy.symbols("x1 x2 x3 x4", real=True)
ORDERS = (1, 1, 2, 2)
DIGITS = 30

# (u, constant coefficient of every non-dominant term)
CASES: Dict[str, Tuple[sy.Expr, sy.Rational]] = {
    "poly-const-coef": (x1 * x2 * x3 ** 2 * x4 ** 2 / 4, sy.Integer(1)),
    "trig": (sy.sin(x1) * sy.sin(x2) * sy.sin(x3) * sy.sin(x4), sy.Rational(1, 2)),
}


def phi_dominant(u: sy.Expr, a: sy.Expr) -> sy.Expr:
    """D1 D2 D3^2 D4^2 u + a * sum of every other D^i u, i inside the order profile"""
    total = sy.Integer(0)
    for index in itertools.product(*(range(m + 1) for m in ORDERS)):
        derivative = u
        for x, order in zip(COORDS, index):
            if order:
                derivative = sy.diff(derivative, x, order)
        total += derivative if index == ORDERS else a * derivative
    return sy.simplify(total)


def write_table(path: Path, expr: sy.Expr, nodes: int) -> Path:
    """One row per node of the unit grid, last axis fastest, 17 significant digits"""
    points = [sy.Rational(j, nodes - 1) for j in range(nodes)]
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["x1", "x2", "x3", "x4", "value"])
        for point in itertools.product(points, repeat=4):
            value = expr.evalf(DIGITS, subs=dict(zip(COORDS, point)))
            writer.writerow([format(float(c), ".17g") for c in point] + [format(float(value), ".17g")])
    return path


def write_all(out_dir: str = "tests/golden", nodes: int = 3) -> int:
    written = 0
    for name, (u, a) in CASES.items():
        expr = phi_dominant(u, a)
        path = write_table(Path(out_dir) / f"{name}_phi_dominant.csv", expr, nodes)
        print(f"✓ {name}: phi_1122 = {expr} -> {path}")
        written += 1
    return written


if __name__ == "__main__":
    write_all(*(sys.argv[1:2] or ["tests/golden"]), *(int(n) for n in sys.argv[2:3]))
