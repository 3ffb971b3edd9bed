"""Classify every corpus algebroid and list its pointwise strata."""
import argparse
import json
from pathlib import Path

from cxalgebroid import io
from cxalgebroid.algebroid import CheckConfig, classify_algebroid
from cxalgebroid.invariants import scan_grid

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def report(path: Path, config: CheckConfig) -> dict:
    data = io.load_json(path)
    A = io.algebroid_from_json(data, str(path))
    scan = scan_grid(A, data.get("expected", {}).get("grid", ""))
    return {
        "name": path.stem,
        "rank": A.rank,
        "dim": A.dim,
        "scalars": A.scalars,
        "classification": classify_algebroid(A, config).classification,
        # stratum key: (real rank, type, class, order)
        "strata": {str(k): len(v) for k, v in sorted(scan.strata.items())},
        "identities_hold": scan.identities_hold,
        "cr_on_sample": scan.cr_on_sample,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", type=Path, default=CORPUS / "algebroids")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--json", action="store_true", help="emit one JSON document")
    args = ap.parse_args(argv)

    config = CheckConfig(seed=args.seed, trials=args.trials)
    rows = [report(p, config) for p in sorted(args.corpus.glob("*.json"))]
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return 0
    for r in rows:
        strata = ", ".join(f"{k} x{n}" for k, n in r["strata"].items())
        cr = " CR" if r["cr_on_sample"] else ""
        print(f"{r['name']:<18} {r['scalars']:<7} r={r['rank']} n={r['dim']}  {r['classification']:<15}{cr}  {strata}")
    return 0 if all(r["identities_hold"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
