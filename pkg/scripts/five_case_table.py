"""Print the vector-field case table for the five model fields on R^2.

For each field Z = X_1 + i X_2 the real rank of the rank-one algebroid
spanned by Z is computed twice: from the case analysis of (X_1, X_2) and
from the kernel of the realified anchor. The two columns must agree.
"""
import argparse
from collections import Counter

from cxalgebroid.constructions import classify_vf_at, vector_field_algebroid
from cxalgebroid.geometry import parse_vector_field
from cxalgebroid.invariants import parse_grid, real_elements_at

FIELDS = ["dx + i*dy", "dx", "i*dy", "x*dx + i*x*dx", "0"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", default="x=-2..2:1,y=-2..2:1")
    ap.add_argument("--field", action="append", help="extra field, e.g. 'x*dx + i*dy'")
    args = ap.parse_args(argv)

    chart = ("x", "y")
    grid = parse_grid(args.grid, chart)
    mismatches = 0
    print(f"{'field':<18} {'case':<12} {'real rank':>9} {'dim A^real':>10} {'points':>6}")
    for text in FIELDS + (args.field or []):
        Z = parse_vector_field(text, chart)
        A = vector_field_algebroid(Z)
        rows = Counter()
        for p in grid:
            case = classify_vf_at(Z, p)
            dim = real_elements_at(A, p).dim
            mismatches += dim != case.real_rank
            rows[(case.case_id, case.real_rank, dim)] += 1
        for (case_id, rr, dim), count in sorted(rows.items()):
            print(f"{text:<18} {case_id:<12} {rr:>9} {dim:>10} {count:>6}")
    print(f"grid points: {len(grid)}, mismatches: {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
