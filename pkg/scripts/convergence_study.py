"""Observed convergence orders of the two eigensolvers.

The square well has exact levels, so both error sequences are clean. The
same refinement is then repeated on the extended Scarf I well, where the
closed-form energies serve as reference.

    python3 -u scripts/convergence_study.py [--level 21]
"""

import argparse
from dataclasses import dataclass

import numpy as np

from esp import catalog, numsolve, verify


@dataclass
class Config:
    level: int = 21
    points: tuple = (501, 1001, 2001, 4001)
    scarf: tuple = (2.0, 0.5)
    scarf_level: int = 3


def square_well(cfg):
    st = verify.square_well_convergence(cfg.level, cfg.points)
    print(f"square well, level {cfg.level}, exact E = {st.exact:.10g}")
    print(f"{'points':>7} {'h':>10} {'FD rel err':>12} {'Numerov rel err':>16}")
    for n, h, a, b in zip(st.points, st.h, st.fd_err, st.numerov_err):
        print(f"{n:7d} {h:10.2e} {a:12.3e} {b:16.3e}")
    print(f"fitted orders: FD {st.fd_order:.3f}, Numerov {st.numerov_order:.3f}\n")


def scarf(cfg):
    A, B = cfg.scarf
    model = catalog.build_model("ext-scarf1", {"A": A, "B": B})
    prob = numsolve.reduce(model, 0, levels=cfg.scarf_level + 1)
    E = model.energy(cfg.scarf_level)
    hs, fd_err, nv_err = [], [], []
    print(f"extended Scarf I (A={A}, B={B}), level m={cfg.scarf_level}, E = {E}")
    print(f"{'points':>7} {'FD rel err':>12} {'FD+Richardson':>14} {'Numerov rel err':>16}")
    for n in cfg.points:
        grid = numsolve.default_grid(prob, n)
        fd = numsolve.fd_spectrum(prob, grid, cfg.scarf_level + 2)
        ex, _ = numsolve.fd_spectrum_richardson(prob, grid, cfg.scarf_level + 2)
        sol = numsolve.solve_level(prob, grid, cfg.scarf_level, (ex, ex))
        hs.append(grid.h)
        fd_err.append(abs(fd[cfg.scarf_level] - E) / E)
        nv_err.append(abs(sol.numerov.E - E) / E)
        rich = abs(ex[cfg.scarf_level] - E) / E
        print(f"{n:7d} {fd_err[-1]:12.3e} {rich:14.3e} {nv_err[-1]:16.3e}")
    slope = lambda e: np.polyfit(np.log(hs), np.log(e), 1)[0]  # noqa: E731
    print(f"fitted orders: FD {slope(fd_err):.3f}, Numerov {slope(nv_err):.3f}")
    print("(the inverse-square walls at both ends lower the observed Numerov rate here)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, default=21)
    args = ap.parse_args()
    cfg = Config(level=args.level)
    square_well(cfg)
    scarf(cfg)


if __name__ == "__main__":
    main()
