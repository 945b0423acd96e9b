#!/usr/bin/env python3
"""
Real fraction of a cluster_y fragment spectrum as kappa/J grows.

Writes one CSV row per ratio: ratio, f_r, eccentricity.
"""
import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from errors import LindfragError
from fragments import fragment_of
from effective import restrict
from models import builtin, to_tilde
from pauli import PauliString
from spectra import sweep_real_fraction

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def fragment_factory(n: int, seed: str):
    """Effective generator of the seed's fragment, built fresh for each ratio."""
    seed_string = PauliString.from_text(seed)

    def build(ratio: float):
        model = to_tilde(builtin("cluster_y", n, J=1.0, kappa=ratio))
        return restrict(model, fragment_of(model, seed_string))

    return build


def main():
    parser = argparse.ArgumentParser(description="Sweep kappa/J and record the real fraction")
    parser.add_argument("--n", type=int, default=10, help="Number of qubits")
    parser.add_argument("--seed", default=None, help="Tilde seed string (default I X...X I)")
    parser.add_argument("--ratios", type=float, nargs="+", default=None)
    parser.add_argument("-o", "--out", default=None, help="CSV file (default stdout)")
    args = parser.parse_args()

    seed = args.seed or "I" + "X" * (args.n - 2) + "I"
    ratios = args.ratios or list(np.round(np.linspace(0.0, 2.0, 21), 3))
    logger.info(f"Sweeping {len(ratios)} ratios on cluster_y n={args.n}, seed {seed}")

    try:
        points = sweep_real_fraction(fragment_factory(args.n, seed), ratios)
    except LindfragError as e:
        logger.error(f"Sweep failed: {e}")
        sys.exit(1)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["ratio", "f_r", "eccentricity"])
        for p in points:
            writer.writerow([p.parameter, p.f_r, "" if p.eccentricity is None else p.eccentricity])
    finally:
        if args.out:
            out.close()
    logger.info("Done")


if __name__ == "__main__":
    main()
