#!/usr/bin/env python3
"""Run the full exact-verification battery over a parameter grid.

Prints one line per (point, suite) with pass/fail and timing, then a
summary.  Sizes are adjustable so the battery can be pushed harder than
the defaults used by `biorth verify-all`.
"""

import argparse
import sys
import time
from fractions import Fraction

from biorth import (
    AWParams,
    bimoment_block,
    biorthogonality_check,
    check_defining_relations,
    det_bimoment,
    monomial_expansion_check,
    polys_from_inverse,
    polys_from_recurrence,
    rep_rational,
    verify_algebra,
    verify_aw_match,
    verify_boundary,
    verify_ldu,
    verify_uchiyama_algebra,
)
from biorth.bimoment import check_recurrences, check_transpose_symmetry
from biorth.core import ZeroParameter

GRID = (
    ("1", "1/2", "-1/3", "-1/4", "1/2"),
    ("1/2", "1/3", "-1/5", "-1/7", "1/3"),
    ("2", "2/5", "-1/2", "-1/5", "1/4"),
    ("3/2", "3/4", "-1/6", "-1/8", "2/5"),
    ("2/3", "2/3", "-1/3", "-1/3", "1/2"),
    ("1", "1/2", "0", "0", "1/2"),
    ("7/2", "3/5", "-5/7", "-7/10", "1/2"),
)


def run_point(p: AWParams, n_ldu: int, n_det: int, n_poly: int, n_rep: int, trials: int):
    yield "bimoment", lambda: (
        bimoment_block(p, 8, fill="columns").entries == bimoment_block(p, 8, fill="rows").entries
        and check_transpose_symmetry(p, 8)
        and check_recurrences(p, 8)
    )
    yield "ldu", lambda: verify_ldu(p, n_ldu).passed
    yield "determinants", lambda: len(set(det_bimoment(p, n_det))) == 1
    yield "biortho", lambda: (
        biorthogonality_check(p, n_poly).passed
        and monomial_expansion_check(p, n_poly)
        and all(
            polys_from_inverse(p, n_poly, v) == polys_from_recurrence(p, n_poly, v)
            for v in "de"
        )
    )
    yield "functional", lambda: check_defining_relations(p, max_len=8, trials=trials).passed

    def rep_suite():
        dop, eop = rep_rational(p, n_rep)
        ok = verify_algebra(dop, eop, p.q).passed and verify_boundary(dop, eop, p).passed
        ok = ok and verify_uchiyama_algebra(p, n_rep).passed
        try:
            ok = ok and verify_aw_match(p, n_rep // 2).passed
        except ZeroParameter:
            pass  # c = d = 0 point: normalized recurrence route undefined
        return ok

    yield "representation", rep_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-ldu", type=int, default=16)
    ap.add_argument("--n-det", type=int, default=12)
    ap.add_argument("--n-poly", type=int, default=10)
    ap.add_argument("--n-rep", type=int, default=32)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args()

    failures = 0
    for point in GRID:
        p = AWParams(*(Fraction(x) for x in point))
        label = "(" + ", ".join(point) + ")"
        for name, task in run_point(p, args.n_ldu, args.n_det, args.n_poly, args.n_rep, args.trials):
            start = time.perf_counter()
            ok = task()
            elapsed = time.perf_counter() - start
            status = "ok" if ok else "FAIL"
            print(f"{label:34s} {name:15s} {status:4s} {elapsed:7.2f}s")
            failures += not ok
    print(f"\n{failures} failing suite(s)" if failures else "\nall suites passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
