"""Compare the printed and corrected closed forms of the Poisson-kernel transform
with the brute-force oracle.

    python3 scripts/erratum_report.py [--group heisenberg:1] [--a 1] [--out erratum.json]
"""
import argparse
import json
from dataclasses import dataclass

from htype.group import group_from_descriptor
from htype.poisson import PoissonKernel, erratum_report


@dataclass
class Config:
    group: str = "heisenberg:1"
    a: float = 1.0
    nus: tuple = (0.5, 1.0, 2.0)
    ls: tuple = tuple(range(6))
    mus: tuple = (0.5, 1.0, 2.0)
    out: str = "erratum.json"


def run(cfg: Config) -> dict:
    kernel = PoissonKernel.build(group_from_descriptor(cfg.group), cfg.a)
    rep = erratum_report(kernel, nus=cfg.nus, ls=cfg.ls, mus=cfg.mus)
    with open(cfg.out, "w") as fh:
        json.dump(rep, fh, indent=2)
    print(f"group {rep['group']}, a = {rep['a']:g}")
    print(f"{'nu':>5} {'l':>2} {'oracle':>13} {'corrected':>13} {'printed':>13}")
    for r in rep["laguerre"]:
        print(f"{r['nu']:5g} {r['l']:2d} {r['oracle']:13.6e} {r['corrected']:13.6e} {r['paper']:13.6e}")
    print("printed sign pattern by l:", rep["paper_variant_sign_pattern"])
    print("oracle sign pattern by l: ", rep["oracle_sign_pattern"])
    print(f"corrected max rel err {rep['oracle_max_rel_err']:.1e}, "
          f"Bessel max rel err {rep['bessel_oracle_max_rel_err']:.1e}")
    for variant, info in rep["line_marginal_exponent"].items():
        print(f"line-marginal exponent ({variant}): {info}")
    return rep


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--group", default=Config.group)
    p.add_argument("--a", type=float, default=Config.a)
    p.add_argument("--out", default=Config.out)
    args = p.parse_args()
    run(Config(group=args.group, a=args.a, out=args.out))
