"""Run every entry of the validation matrix and summarize the reports.

    python3 -u scripts/validation_matrix.py [--json out.json] [--points N]
"""

import argparse
import json
import time
from dataclasses import dataclass

from esp import verify
from esp.catalog import FamilyId


@dataclass
class Config:
    grid_points: int = None
    ortho_levels: int = 4
    iso_levels: int = 5


def run(cfg: Config):
    results = []
    for entry in verify.VALIDATION_MATRIX:
        rep = verify.verify_family(entry.family, entry.params, entry.levels,
                                   grid_points=cfg.grid_points)
        results.append(rep)
        worst = max((r.rel_err for r in rep.rows if r.rel_err is not None), default=None)
        print(f"{entry.family.value:16s} {json.dumps(entry.params):45s} levels={entry.levels} "
              f"pass={rep.passed!s:5s} max_rel={worst:.2e} t={rep.wall_time:.2f}s")

    print("\northonormality (level-independent families)")
    for entry in verify.VALIDATION_MATRIX:
        o = verify.verify_orthonormality(entry.family, entry.params, cfg.ortho_levels)
        if o.matrix is None:
            continue
        print(f"  {entry.family.value:16s} {json.dumps(entry.params):45s} "
              f"offdiag={o.max_offdiag:.1e} diag={o.max_diag_dev:.1e}")

    print("\nisospectral partners")
    for fid, p in ((FamilyId.EXT_OSCILLATOR, {"omega": 2.0, "ell": 0, "dim": 3}),
                   (FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5})):
        iso = verify.verify_isospectral(fid, p, cfg.iso_levels, grid_points=cfg.grid_points)
        print(f"  {iso.ext_family} vs {iso.std_family}: analytic rel {iso.analytic_max_rel:.1e}, "
              f"numeric rel {iso.numeric_max_rel:.1e}, pass={iso.passed}")
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", help="write all spectrum reports to this file")
    ap.add_argument("--points", type=int, default=None, help="solver grid points")
    args = ap.parse_args()
    t0 = time.perf_counter()
    reports = run(Config(grid_points=args.points))
    print(f"\n{sum(r.passed for r in reports)}/{len(reports)} reports pass "
          f"in {time.perf_counter() - t0:.1f} s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
