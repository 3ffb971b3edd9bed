"""Decide [pi, pi] = 0 for complex bivectors by two routes and compare.

Runs over the corpus bivectors and, optionally, random bivectors with
sparse affine complex entries.
"""
import argparse
import random
from pathlib import Path

from cxalgebroid import io
from cxalgebroid.algebroid import CheckConfig, random_polynomial
from cxalgebroid.constructions import check_complex_poisson
from cxalgebroid.errors import InternalInconsistency
from cxalgebroid.geometry import Bivector

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def random_bivector(rng: random.Random, chart) -> Bivector:
    comps = {}
    for j in range(len(chart)):
        for k in range(j + 1, len(chart)):
            if rng.random() < 0.7:
                comps[(j, k)] = random_polynomial(chart, rng, 1, 2, True)
    return Bivector(chart, comps)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=0, metavar="N", help="also test N random bivectors")
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=10)
    args = ap.parse_args(argv)

    config = CheckConfig(seed=args.seed, trials=args.trials)
    cases = [(p.stem, io.load_bivector(p)) for p in sorted((CORPUS / "bivectors").glob("*.json"))]
    rng = random.Random(args.seed)
    chart = tuple(f"x{k + 1}" for k in range(args.dim))
    cases += [(f"random_{k}", random_bivector(rng, chart)) for k in range(args.random)]

    disagreements = poisson = 0
    for name, pi in cases:
        try:
            v = check_complex_poisson(pi, config)
        except InternalInconsistency as exc:
            disagreements += 1
            print(f"{name:<20} DISAGREE  {exc}")
            continue
        poisson += v.is_poisson
        print(f"{name:<20} {'Poisson' if v.is_poisson else 'not Poisson':<12} {pi}")
    print(f"{len(cases)} bivectors, {poisson} Poisson, {disagreements} disagreements")
    return 1 if disagreements else 0


if __name__ == "__main__":
    raise SystemExit(main())
