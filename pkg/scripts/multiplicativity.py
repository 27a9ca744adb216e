"""Check (f * g)^ = f^ g^ on H_1 with a tabulated direct convolution.

    python3 scripts/multiplicativity.py [--resolution 32] [--grid-points 81]
"""
import argparse
from dataclasses import dataclass

import numpy as np

from htype.biradial import convolve_table, named_profile, tabulated
from htype.gelfand import gelfand_transform, parse_grid
from htype.group import make_heisenberg


@dataclass
class Config:
    f: str = "gaussian"
    g: str = "bump"
    grid: str = "nu=1;l=0,1;mu=1"
    r_max: float = 7.0
    rho_max: float = 12.0
    grid_points: int = 81
    resolution: int = 32


def run(cfg: Config):
    h1 = make_heisenberg(1)
    f, g = named_profile(cfg.f, h1), named_profile(cfg.g, h1)
    r = np.linspace(0, cfg.r_max, cfg.grid_points)
    rho = np.linspace(0, cfg.rho_max, cfg.grid_points)
    conv = tabulated(h1, r, rho, convolve_table(f, g, r, rho, resolution=cfg.resolution),
                     interp="cubic")
    rows = []
    for p in parse_grid(cfg.grid):
        lhs = gelfand_transform(conv, p, tol=1e-9).value
        rhs = gelfand_transform(f, p).value * gelfand_transform(g, p).value
        rows.append((p, lhs, rhs, abs(lhs - rhs) / abs(rhs)))
        print(f"{str(p):28s} (f*g)^ = {lhs:.10f}  f^ g^ = {rhs:.10f}  rel err {rows[-1][3]:.1e}")
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolution", type=int, default=Config.resolution)
    ap.add_argument("--grid-points", type=int, default=Config.grid_points)
    ap.add_argument("--grid", default=Config.grid)
    args = ap.parse_args()
    run(Config(resolution=args.resolution, grid_points=args.grid_points, grid=args.grid))
