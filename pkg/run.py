"""
Quick start script: seeds the example problems and solves one of them
"""
import sys

from goursat4d.main import configure_logging, run_cli
from goursat4d.scripts.seed_problems import seed_all


def main():
    """Write example problems, then solve the polynomial one"""
    configure_logging()
    print("Seeding example problems into examples_out/ ...")
    seed_all("examples_out", counts=9)
    print("\nSolving examples_out/poly-const-coef-nonclassical/problem.json\n")
    sys.exit(run_cli(["solve", "examples_out/poly-const-coef-nonclassical/problem.json", "--out-dir", "out"]))


if __name__ == "__main__":
    main()
