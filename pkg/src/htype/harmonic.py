"""Poisson extension of boundary data, Laplace-Beltrami residuals and the
tangential-limit experiment, plus the classical upper half-plane as a check.

u(n, a) = (phi * P_a)(n) = int phi(n') P_a(n'^{-1} n) dn'.

Two quadratures are used on H_1, both with nodes that do not depend on
(n, a), so the discrete u is itself a finite combination of translates of
P_a and finite differences of it see no quadrature noise:

* "support": phi = alpha + psi with psi compactly supported.  Nodes cover
  the support of psi and u = alpha + sum_j w_j psi(n_j) P_a(n_j^{-1} n).
* "recentered": substitute n' = n delta_a(m)^{-1}, giving
  u = int phi(n delta_a(m)^{-1}) P_1(m) dm over a fixed rule for P_1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .biradial import BiradialProfile, UnsupportedGroupError, bump, radial_integral
from .group import DomainPoint, GroupElement, HTypeGroup, bracket_arrays, gauge, na_mul_arrays
from .poisson import PoissonKernel
from .quadrature import QuadResult, gauss_legendre, halfline_rule, integrate_finite, line_rule

DEFAULT_RESOLUTION = 24
MAX_RESOLUTION = 96


# -- boundary data ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundaryDatum:
    """Bounded boundary function phi on N.

    phi = alpha + perturbation when ``perturbation`` is a biradial profile;
    otherwise ``fn`` is a general handle taking (X, Z) arrays.  ``alpha`` is
    the declared value at infinity, and |phi - alpha| <= tail_bound for gauge
    beyond tail_radius.
    """

    group: HTypeGroup
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    sup_bound: float
    alpha: float | None = None
    tail_radius: float | None = None
    tail_bound: float = 0.0
    perturbation: BiradialProfile | None = field(default=None, repr=False)
    offset: float = 0.0
    constant: bool = False
    name: str = "boundary"

    def __post_init__(self):
        if not self.sup_bound >= 0:
            raise ValueError("sup_bound must be nonnegative")
        if self.alpha is not None and self.tail_radius is None:
            raise ValueError("a declared limit needs a tail_radius")
        self.check()

    @property
    def kind(self) -> str:
        return "biradial" if self.constant or self.perturbation is not None else "function"

    def __call__(self, X, Z):
        return np.asarray(self.fn(np.asarray(X, float), np.asarray(Z, float)), dtype=float)

    def check(self, samples: int = 400, seed: int = 0):
        """Sampled check of the sup bound and the declared tail bound."""
        rng = np.random.default_rng(seed)
        g = self.group
        scale = max(self.tail_radius or 1.0, 1.0)
        X = rng.standard_normal((samples, g.dim_v)) * scale
        Z = rng.standard_normal((samples, g.k)) * scale**2
        vals = self(X, Z)
        top = float(np.abs(vals).max())
        if top > self.sup_bound * (1 + 1e-12) + 1e-300:
            raise ValueError(f"{self.name}: sampled |phi| = {top:.3g} exceeds sup_bound")
        if self.alpha is not None:
            far = gauge(X, Z) >= self.tail_radius
            if np.any(far):
                dev = float(np.abs(vals[far] - self.alpha).max())
                if dev > self.tail_bound + 1e-12:
                    raise ValueError(f"{self.name}: |phi - alpha| = {dev:.3g} beyond tail radius "
                                     f"exceeds tail bound {self.tail_bound:.3g}")


def constant_datum(group: HTypeGroup, c: float) -> BoundaryDatum:
    def fn(X, Z):
        return np.full(np.broadcast_shapes(np.shape(X)[:-1], np.shape(Z)[:-1]), float(c))

    return BoundaryDatum(group, fn, abs(c), alpha=c, tail_radius=0.0, offset=float(c),
                         constant=True, name=f"constant({c:g})")


def profile_datum(profile: BiradialProfile, alpha: float = 0.0) -> BoundaryDatum:
    """phi = alpha + profile, with the tail read off the profile's decay box."""
    rr, rz = profile.decay.truncation(1e-12)
    tail_radius = float(gauge(np.array([rr]), np.array([rz])))
    if profile.decay.kind == "compact":
        tail_bound = 0.0
    else:
        tail_bound = 1e-12

    def fn(X, Z):
        return alpha + profile.at(X, Z)

    return BoundaryDatum(profile.group, fn, abs(alpha) + profile.decay.bound, alpha=alpha,
                         tail_radius=tail_radius, tail_bound=tail_bound,
                         perturbation=profile, offset=float(alpha),
                         name=f"{alpha:g}+{profile.name}")


def bump_datum(group: HTypeGroup, alpha: float, radius: float = 1.0,
               height: float = 1.0) -> BoundaryDatum:
    return profile_datum(bump(group, radius=radius, height=height), alpha)


def function_datum(group: HTypeGroup, fn, sup_bound: float, alpha: float | None = None,
                   tail_radius: float | None = None, tail_bound: float = 0.0,
                   name: str = "function") -> BoundaryDatum:
    return BoundaryDatum(group, fn, sup_bound, alpha=alpha, tail_radius=tail_radius,
                         tail_bound=tail_bound, name=name)


# -- quadrature rules --------------------------------------------------------------

def _require_h1(group: HTypeGroup):
    if group.dim > 3:
        raise UnsupportedGroupError(
            f"extension of general boundary data needs a 3-dimensional group, got {group.dim}"
        )


def _polar_x(r_nodes, r_weights, n_theta):
    """Nodes X in R^2 and weights r dr dtheta; trapezoid in theta is spectral."""
    theta = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
    c, s = np.cos(theta), np.sin(theta)
    X = np.stack([np.outer(r_nodes, c).ravel(), np.outer(r_nodes, s).ravel()], axis=-1)
    w = np.repeat(r_weights * r_nodes, n_theta) * (2 * np.pi / n_theta)
    return X, w


def _tensor(X, wx, z_nodes, z_weights):
    nx, nz = len(wx), len(z_nodes)
    Xs = np.repeat(X, nz, axis=0)
    Zs = np.tile(z_nodes, nx)[:, None]
    return Xs, Zs, np.repeat(wx, nz) * np.tile(z_weights, nx)


def support_rule(profile: BiradialProfile, resolution: int):
    """Nodes and weights psi(n_j) w_j over the support box of a biradial psi on H_1."""
    _require_h1(profile.group)
    rr, rz = profile.decay.truncation(1e-14)
    rq = gauss_legendre(resolution, 0.0, rr)
    zq = gauss_legendre(resolution, -rz, rz)
    X, wx = _polar_x(rq.nodes, rq.weights, resolution + 8)
    Xs, Zs, w = _tensor(X, wx, zq.nodes, zq.weights)
    pw = w * profile.at(Xs, Zs)
    keep = pw != 0
    return Xs[keep], Zs[keep], pw[keep]


def recentered_rule(kernel: PoissonKernel, resolution: int):
    """Nodes m_j and weights w_j P_1(m_j) for int g(m) P_1(m) dm over all of H_1."""
    _require_h1(kernel.group)
    unit = PoissonKernel(kernel.group, 1.0, kernel.c_norm)
    rq = halfline_rule(2 * resolution, scale=2.0)
    zq = line_rule(2 * resolution, scale=1.0)
    X, wx = _polar_x(rq.nodes, rq.weights, resolution + 8)
    Xs, Zs, w = _tensor(X, wx, zq.nodes, zq.weights)
    return Xs, Zs, w * unit.at(Xs, Zs)


# -- the extension -----------------------------------------------------------------

@dataclass
class ExtensionField:
    """u(n, a) = (phi * P_a)(n) with a fixed quadrature rule."""

    group: HTypeGroup
    boundary: BoundaryDatum
    heights: list = field(default_factory=lambda: [1.0])
    method: str = "auto"
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if self.method == "auto":
            b = self.boundary
            if b.constant:
                self.method = "constant"
            elif b.perturbation is not None and b.perturbation.decay.kind in ("compact", "gaussian"):
                self.method = "support"
            else:
                self.method = "recentered"
        if self.method not in ("constant", "support", "recentered"):
            raise ValueError(f"unknown extension method {self.method!r}")
        self._kernel = PoissonKernel.build(self.group, 1.0)
        self._rules = {}

    def _rule(self, resolution):
        if resolution not in self._rules:
            if self.method == "support":
                self._rules[resolution] = support_rule(self.boundary.perturbation, resolution)
            else:
                self._rules[resolution] = recentered_rule(self._kernel, resolution)
        return self._rules[resolution]

    def deviation(self, X, Z, a, resolution: int | None = None) -> np.ndarray:
        """u - alpha for the support method (accurate far out), u otherwise."""
        X = np.atleast_2d(np.asarray(X, float))
        Z = np.atleast_2d(np.asarray(Z, float))
        a = np.broadcast_to(np.asarray(a, float), (len(X),))
        if np.any(a <= 0):
            raise ValueError("height a must be positive")
        if self.method == "constant":
            return np.zeros(len(X))
        res = resolution or self.resolution
        Xm, Zm, pw = self._rule(res)
        out = np.empty(len(X))
        chunk = max(1, 2_000_000 // len(pw))
        for i in range(0, len(X), chunk):
            Xi, Zi, ai = X[i:i + chunk, None, :], Z[i:i + chunk, None, :], a[i:i + chunk, None]
            if self.method == "support":
                # P_a(m^{-1} n) with m^{-1} n = (X - Xm, Z - Zm - [Xm, X] / 2)
                Xd = Xi - Xm[None]
                Zd = Zi - Zm[None] - 0.5 * bracket_arrays(self.group, Xm[None], Xi)
                A = ai + 0.25 * np.sum(Xd**2, axis=-1)
                vals = self._kernel.c_norm * ai**self.group.Q / (A * A + np.sum(Zd**2, axis=-1)) ** self.group.Q
                out[i:i + chunk] = vals @ pw
            else:
                ra = np.sqrt(ai)[..., None]
                # n delta_a(m)^{-1} = (X - sqrt(a) Xm, Z - a Zm - sqrt(a) [X, Xm] / 2)
                Xd = Xi - ra * Xm[None]
                Zd = Zi - ai[..., None] * Zm[None] - 0.5 * ra * bracket_arrays(self.group, Xi, Xm[None])
                out[i:i + chunk] = self.boundary(Xd, Zd) @ pw
        return out

    @property
    def base(self) -> float:
        return self.boundary.offset if self.method in ("constant", "support") else 0.0

    def values(self, X, Z, a, resolution: int | None = None) -> np.ndarray:
        return self.base + self.deviation(X, Z, a, resolution)

    def evaluate(self, X, Z, a) -> QuadResult:
        """Vector of u values with the max difference from half resolution as error."""
        fine = self.deviation(X, Z, a)
        coarse = self.deviation(X, Z, a, max(self.resolution // 2, 4))
        return QuadResult(self.base + fine, float(np.max(np.abs(fine - coarse))))

    def __call__(self, p: DomainPoint) -> float:
        p.element.check(self.group)
        return float(self.values(p.element.X, p.element.Z, p.a)[0])

    def contraction_check(self, samples: int = 100, seed: int = 0) -> dict:
        """Sampled sup |u| against the declared sup |phi|."""
        rng = np.random.default_rng(seed)
        X = 2.0 * rng.standard_normal((samples, self.group.dim_v))
        Z = 2.0 * rng.standard_normal((samples, self.group.k))
        a = np.exp(rng.uniform(np.log(0.1), np.log(4.0), samples))
        res = self.evaluate(X, Z, a)
        top = float(np.abs(res.value).max())
        return {"sup_u": top, "sup_phi": self.boundary.sup_bound, "error": res.error,
                "ok": bool(top <= self.boundary.sup_bound + res.error + 1e-12)}


def extend(boundary: BoundaryDatum, a: float, n: GroupElement, tol: float = 1e-8,
           method: str = "auto") -> QuadResult:
    """(phi * P_a)(n) with an error estimate, refining until it is below ``tol``.

    Biradial data evaluated at the identity reduce to a radial integral and
    work on any H-type group; everything else needs H_1.
    """
    group = boundary.group
    n.check(group)
    if not a > 0:
        raise ValueError("height a must be positive")
    at_identity = not np.any(n.X) and not np.any(n.Z)
    if group.dim > 3:
        if boundary.constant:
            return QuadResult(boundary.offset, 0.0)
        if boundary.perturbation is None or not at_identity:
            _require_h1(group)
        kernel = PoissonKernel.build(group, a)
        psi = boundary.perturbation
        res = radial_integral(group, lambda r, rho: psi(r, rho) * kernel(r, rho), tol=tol,
                              r_scale=min(psi.decay.r_scale, 2 * np.sqrt(a)),
                              rho_scale=min(psi.decay.rho_scale, a))
        return QuadResult(boundary.offset + res.value, res.error)
    resolution = DEFAULT_RESOLUTION
    while True:
        fld = ExtensionField(group, boundary, [a], method=method, resolution=resolution)
        res = fld.evaluate(n.X, n.Z, a)
        if res.error <= tol or resolution >= MAX_RESOLUTION:
            return QuadResult(float(res.value[0]), res.error)
        resolution *= 2


# -- Laplace-Beltrami residual ----------------------------------------------------------

def _basis(group: HTypeGroup):
    """Directions (X', Z') of the left-invariant fields E_1 .. E_{2m+k}."""
    out = []
    for i in range(group.dim_v):
        X = np.zeros(group.dim_v)
        X[i] = 1.0
        out.append((X, np.zeros(group.k)))
    for j in range(group.k):
        Z = np.zeros(group.k)
        Z[j] = 1.0
        out.append((np.zeros(group.dim_v), Z))
    return out


def lb_stencil(group: HTypeGroup, p: DomainPoint, h: float):
    """Points p exp(tE) for t in {-h, +h} and every direction, plus p itself.

    Returned as (X, Z, a) arrays; row 0 is p, then pairs (+h, -h) for each
    E_i, and last the pair for E_0 (which scales a by e^{+-h}).
    """
    X0, Z0, a0 = p.element.X, p.element.Z, p.a
    Xs, Zs, As = [X0], [Z0], [a0]
    for dX, dZ in _basis(group):
        for t in (h, -h):
            X, Z, a = na_mul_arrays(group, X0, Z0, a0, t * dX, t * dZ, 1.0)
            Xs.append(X)
            Zs.append(Z)
            As.append(a)
    for t in (h, -h):
        X, Z, a = na_mul_arrays(group, X0, Z0, a0, np.zeros(group.dim_v), np.zeros(group.k),
                                np.exp(t))
        Xs.append(X)
        Zs.append(Z)
        As.append(a)
    return np.array(Xs), np.array(Zs), np.array(As, dtype=float)


def lb_apply(group: HTypeGroup, values: np.ndarray, h: float) -> float:
    """sum E_i^2 u + E_0^2 u - Q E_0 u from stencil values (see lb_stencil)."""
    u0 = values[0]
    pairs = values[1:].reshape(-1, 2)
    second = (pairs[:, 0] - 2 * u0 + pairs[:, 1]) / (h * h)
    first0 = (pairs[-1, 0] - pairs[-1, 1]) / (2 * h)
    return float(second.sum() - group.Q * first0)


def lb_residual(field: ExtensionField | Callable, p: DomainPoint, h: float,
                group: HTypeGroup | None = None) -> float:
    """L u(p) by symmetric differences along the group product.

    ``field`` is an ExtensionField or any vectorised u(X, Z, a).
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    if isinstance(field, ExtensionField):
        group = field.group
        fn = field.deviation
    else:
        fn = field
    if group is None:
        raise ValueError("group is required for a plain callable")
    X, Z, a = lb_stencil(group, p, h)
    return lb_apply(group, np.asarray(fn(X, Z, a), dtype=float), h)


def lb_noise_floor(field: ExtensionField, p: DomainPoint, h: float) -> float:
    """Rounding floor of the difference quotient: eps * sum|terms| / h^2."""
    X, Z, a = lb_stencil(field.group, p, h)
    vals = np.abs(field.deviation(X, Z, a))
    return float(8 * np.finfo(float).eps * (vals.sum() + vals[0] * len(vals)) / (h * h))


@dataclass
class ResidualStudy:
    point: tuple
    hs: list
    residuals: list
    noise: list
    ratios: list
    resolved: list

    def to_rows(self) -> list[dict]:
        rows = []
        for i, h in enumerate(self.hs):
            rows.append({"h": h, "residual": self.residuals[i], "noise_floor": self.noise[i],
                         "ratio": self.ratios[i - 1] if i > 0 else float("nan"),
                         "resolved": self.resolved[i]})
        return rows


def lb_residual_study(field: ExtensionField, p: DomainPoint, hs=(0.2, 0.1, 0.05)) -> ResidualStudy:
    """Residuals at successive steps and the Richardson ratios r(h_i) / r(h_{i+1}).

    A step whose residual is within 10x the rounding floor is marked unresolved.
    """
    res = [lb_residual(field, p, h) for h in hs]
    noise = [lb_noise_floor(field, p, h) for h in hs]
    resolved = [abs(r) > 10 * nz for r, nz in zip(res, noise)]
    ratios = [abs(res[i]) / abs(res[i + 1]) if res[i + 1] != 0 else float("inf")
              for i in range(len(hs) - 1)]
    pt = (tuple(p.element.X.tolist()), tuple(p.element.Z.tolist()), p.a)
    return ResidualStudy(pt, list(hs), res, noise, ratios, resolved)


# -- tangential limit ---------------------------------------------------------------

def shell_points(group: HTypeGroup, R: float, n_radii: int = 5, n_polar: int = 9,
                 n_azimuth: int = 4):
    """Deterministic points with homogeneous gauge in [R, 2R].

    Gauge g is split as |X|^2 / 4 = g^2 sin(psi), Z = g^2 cos(psi) e_1 with
    psi in [0, pi]; X turns through n_azimuth directions in the first plane.
    """
    gs = np.linspace(R, 2 * R, n_radii)
    psi = np.linspace(0.0, np.pi, n_polar)
    az = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    G, P, T = np.meshgrid(gs, psi, az, indexing="ij")
    G, P, T = G.ravel(), P.ravel(), T.ravel()
    rX = 2 * G * np.sqrt(np.sin(P))
    X = np.zeros((len(G), group.dim_v))
    X[:, 0] = rX * np.cos(T)
    X[:, 1] = rX * np.sin(T)
    Z = np.zeros((len(G), group.k))
    Z[:, 0] = G**2 * np.cos(P)
    return X, Z


@dataclass
class TangentialTable:
    alpha: float
    heights: list
    radii: list
    sup_dev: np.ndarray      # [height, radius]: sup over the shell of |u - alpha|
    quad_err: np.ndarray     # [height, radius]
    limit: np.ndarray        # [height]: mean of u over the last shell
    limit_err: np.ndarray    # [height]: quadrature error plus spread over the last shell

    def decreasing(self) -> list[bool]:
        return [bool(np.all(np.diff(row) < 0)) for row in self.sup_dev]

    def heights_agree(self) -> bool:
        """Limit estimates for every pair of heights agree within 2x their combined error."""
        n = len(self.heights)
        return all(abs(self.limit[i] - self.limit[j]) <= 2 * (self.limit_err[i] + self.limit_err[j])
                   for i in range(n) for j in range(i + 1, n))

    def to_rows(self) -> list[dict]:
        rows = []
        for i, a in enumerate(self.heights):
            for j, R in enumerate(self.radii):
                rows.append({"a": a, "R": R, "sup_abs_u_minus_alpha": float(self.sup_dev[i, j]),
                             "err_estimate": float(self.quad_err[i, j])})
        return rows


def tangential_demo(boundary: BoundaryDatum, heights=(0.5, 1.0, 2.0), radii=(4.0, 8.0, 16.0),
                    resolution: int = DEFAULT_RESOLUTION) -> TangentialTable:
    """sup_{R <= |n| <= 2R} |u(n, a) - alpha| on sampled shells for each (a, R)."""
    if boundary.alpha is None:
        raise ValueError("tangential_demo needs a boundary datum with a declared limit")
    heights, radii = list(heights), list(radii)
    fld = ExtensionField(boundary.group, boundary, heights, resolution=resolution)
    alpha = boundary.alpha
    sup_dev = np.zeros((len(heights), len(radii)))
    qerr = np.zeros_like(sup_dev)
    limit = np.zeros(len(heights))
    limit_err = np.zeros(len(heights))
    for i, a in enumerate(heights):
        for j, R in enumerate(radii):
            X, Z = shell_points(boundary.group, R)
            fine = fld.deviation(X, Z, a)
            coarse = fld.deviation(X, Z, a, max(resolution // 2, 4))
            dev = fine + fld.base - alpha
            sup_dev[i, j] = np.abs(dev).max()
            qerr[i, j] = np.abs(fine - coarse).max()
        limit[i] = alpha + float(np.mean(dev))
        limit_err[i] = qerr[i, -1] + float(dev.max() - dev.min())
    return TangentialTable(alpha, heights, radii, sup_dev, qerr, limit, limit_err)


# -- the classical upper half-plane --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundaryDatum1D:
    """Bounded phi on R with limit alpha at +-infinity and known jump points."""

    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    alpha: float = 0.0
    breakpoints: tuple = ()
    closed_form: Callable[[float, float], float] | None = field(default=None, repr=False)
    name: str = "boundary1d"


def indicator_datum(lo: float = -1.0, hi: float = 1.0) -> BoundaryDatum1D:
    def fn(t):
        return ((t >= lo) & (t <= hi)).astype(float)

    def closed(x, y):
        return (np.arctan((hi - x) / y) - np.arctan((lo - x) / y)) / np.pi

    return BoundaryDatum1D(fn, 0.0, (lo, hi), closed, name=f"indicator[{lo:g},{hi:g}]")


def halfplane_extend(phi: BoundaryDatum1D, x: float, y: float, tol: float = 1e-12) -> QuadResult:
    """u(x, y) = int phi(t) (y / pi) / ((x - t)^2 + y^2) dt, via t = x + y tan(theta)."""
    if not y > 0:
        raise ValueError("y must be positive")
    cuts = [float(np.arctan((b - x) / y)) for b in phi.breakpoints]
    lim = 0.5 * np.pi

    def g(theta):
        return phi.fn(x + y * np.tan(theta)) / np.pi

    return integrate_finite(g, -lim, lim, tol=tol, breakpoints=cuts)


def halfplane_oracle(phi: BoundaryDatum1D, y_values, x_values, tol: float = 1e-12) -> list[dict]:
    """Table of u(x, y), |u - alpha| and (if known) the closed-form error."""
    rows = []
    for y in y_values:
        for x in x_values:
            res = halfplane_extend(phi, x, y, tol=tol)
            row = {"y": float(y), "x": float(x), "u": float(res.value),
                   "abs_u_minus_alpha": abs(float(res.value) - phi.alpha),
                   "err_estimate": float(res.error)}
            if phi.closed_form is not None:
                exact = float(phi.closed_form(x, y))
                row["closed_form"] = exact
                row["closed_form_err"] = abs(float(res.value) - exact)
            rows.append(row)
    return rows
