"""Bounded spherical functions and the Gelfand transform of biradial functions.

The spectrum has two branches: Laguerre points (nu > 0, l in N) and Bessel
points (mu >= 0).  Bessel points are characters trivial on the centre.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .biradial import BiradialProfile, radial_integral
from .group import GroupElement, HTypeGroup
from .quadrature import QuadResult
from .special import bessel_gen, laguerre


@dataclass(frozen=True)
class SpectrumPoint:
    branch: str
    nu: float = 0.0
    l: int = 0
    mu: float = 0.0

    def __post_init__(self):
        if self.branch == "laguerre":
            if not self.nu > 0:
                raise ValueError("Laguerre-branch points need nu > 0")
            if int(self.l) != self.l or self.l < 0:
                raise ValueError("l must be a nonnegative integer")
        elif self.branch == "bessel":
            if not self.mu >= 0:
                raise ValueError("Bessel-branch points need mu >= 0")
        else:
            raise ValueError(f"unknown branch {self.branch!r}")

    @classmethod
    def laguerre(cls, nu: float, l: int) -> SpectrumPoint:
        return cls("laguerre", nu=float(nu), l=int(l))

    @classmethod
    def bessel(cls, mu: float) -> SpectrumPoint:
        return cls("bessel", mu=float(mu))

    @property
    def parameter(self) -> float:
        """nu on the Laguerre branch, mu on the Bessel branch."""
        return self.nu if self.branch == "laguerre" else self.mu

    def __str__(self):
        if self.branch == "laguerre":
            return f"laguerre(nu={self.nu:g}, l={self.l})"
        return f"bessel(mu={self.mu:g})"


def log_binom(n: float, k: float) -> float:
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def spherical_factors(group: HTypeGroup, p: SpectrumPoint):
    """(phi_X, phi_Z) with phi_p(X, Z) = phi_X(|X|) * phi_Z(|Z|)."""
    m, k = group.m, group.k
    if p.branch == "bessel":
        mu = p.mu

        def phi_x(r):
            return bessel_gen(m - 1, mu * np.asarray(r))

        def phi_z(rho):
            return np.ones_like(np.asarray(rho, dtype=float))

        return phi_x, phi_z

    nu, l = p.nu, p.l
    norm = np.exp(-log_binom(l + m - 1, l))

    def phi_x(r):
        r2 = np.asarray(r, dtype=float) ** 2
        return np.exp(-0.25 * nu * r2) * laguerre(l, m - 1, 0.5 * nu * r2) * norm

    def phi_z(rho):
        return bessel_gen(0.5 * (k - 2), nu * np.asarray(rho))

    return phi_x, phi_z


def spherical_profile(group: HTypeGroup, p: SpectrumPoint, r, rho):
    phi_x, phi_z = spherical_factors(group, p)
    return phi_x(r) * phi_z(rho)


def spherical_fn(group: HTypeGroup, p: SpectrumPoint, n: GroupElement) -> float:
    n.check(group)
    return float(spherical_profile(group, p, np.linalg.norm(n.X), np.linalg.norm(n.Z)))


def gelfand_transform(f: BiradialProfile, p: SpectrumPoint, tol: float = 1e-10) -> QuadResult:
    """f^(p) = int_N f(n) phi_p(n) dn, reduced to a 2-D radial integral."""
    group = f.group
    phi_x, phi_z = spherical_factors(group, p)
    if f.decay.kind == "compact":
        box = dict(r_max=f.decay.r_scale, rho_max=f.decay.rho_scale)
    else:
        r_scale = f.decay.r_scale
        if p.branch == "laguerre":
            # the Gaussian factor of phi_X sets a length 2 / sqrt(nu)
            r_scale = min(r_scale, 2.0 / np.sqrt(p.nu))
        box = dict(r_scale=r_scale, rho_scale=f.decay.rho_scale)
    return radial_integral(group, f, tol=tol, r_weight=phi_x, rho_weight=phi_z, **box)


def transform_grid(f: BiradialProfile, points, tol: float = 1e-10) -> list[QuadResult]:
    return [gelfand_transform(f, p, tol=tol) for p in points]


def parse_grid(text: str) -> list[SpectrumPoint]:
    """Parse ``nu=0.5,1,2;l=0..5;mu=0,1`` into spectrum points.

    Laguerre points are the product nu x l (l defaults to 0); Bessel points
    come from ``mu``.  Ranges ``a..b`` are inclusive integer ranges for l and
    ``a:b:n`` gives n evenly spaced real values.
    """
    fields: dict[str, list[float]] = {}
    for part in filter(None, (s.strip() for s in text.split(";"))):
        key, _, vals = part.partition("=")
        key = key.strip()
        if key not in ("nu", "l", "mu"):
            raise ValueError(f"unknown grid key {key!r}")
        out: list[float] = []
        for item in vals.split(","):
            item = item.strip()
            if ".." in item:
                lo, hi = item.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif item.count(":") == 2:
                lo, hi, n = item.split(":")
                out.extend(np.linspace(float(lo), float(hi), int(n)).tolist())
            elif item:
                out.append(float(item))
        fields[key] = out
    points = []
    for nu in fields.get("nu", []):
        for l in fields.get("l", [0]):
            points.append(SpectrumPoint.laguerre(nu, int(l)))
    points.extend(SpectrumPoint.bessel(mu) for mu in fields.get("mu", []))
    if not points:
        raise ValueError(f"grid {text!r} contains no spectrum points")
    return points
