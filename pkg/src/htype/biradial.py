"""Biradial functions f(X, Z) = f0(|X|, |Z|) on an H-type group."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .group import GroupElement, HTypeGroup, bracket_arrays
from .quadrature import (
    QuadResult,
    gauss_legendre,
    integrate_finite,
    integrate_halfline,
)


class DecayError(ValueError):
    """A profile exceeds its declared decay majorant."""


class UnsupportedGroupError(ValueError):
    pass


@dataclass(frozen=True)
class Decay:
    """Majorant |f0(r, rho)| <= bound * g(r / r_scale, rho / rho_scale).

    kind "compact":    g = 1 on [0, 1]^2, 0 outside
    kind "gaussian":   g = exp(-x^2 - y^2)
    kind "polynomial": g = (1 + x^r_power + y^2)^(-degree / 2)
    """

    kind: str
    r_scale: float = 1.0
    rho_scale: float = 1.0
    degree: float = 0.0
    bound: float = 1.0
    r_power: float = 2.0

    def __post_init__(self):
        if self.kind not in ("compact", "gaussian", "polynomial"):
            raise ValueError(f"unknown decay kind {self.kind!r}")
        if self.kind == "polynomial" and self.degree <= 0:
            raise ValueError("polynomial decay needs a positive degree")

    def majorant(self, r, rho):
        x = np.asarray(r) / self.r_scale
        y = np.asarray(rho) / self.rho_scale
        if self.kind == "compact":
            return np.where((x <= 1) & (y <= 1), self.bound, 0.0)
        if self.kind == "gaussian":
            return self.bound * np.exp(-x * x - y * y)
        return self.bound * (1 + x**self.r_power + y * y) ** (-self.degree / 2)

    def truncation(self, tol: float) -> tuple[float, float]:
        """Box [0, R_r] x [0, R_rho] outside which the majorant is below tol / 10."""
        if self.kind == "compact":
            return self.r_scale, self.rho_scale
        ratio = max(10.0 * self.bound / tol, 1.0 + 1e-12)
        if self.kind == "gaussian":
            t = np.sqrt(np.log(ratio))
            return float(t * self.r_scale), float(t * self.rho_scale)
        t2 = ratio ** (2.0 / self.degree) - 1.0
        return float(t2 ** (1.0 / self.r_power) * self.r_scale), float(np.sqrt(t2) * self.rho_scale)

    def dilated(self, a: float, Q: int) -> Decay:
        """Majorant of a^Q f0(a^{1/2} r, a rho) given one of f0."""
        return replace(self, r_scale=self.r_scale / np.sqrt(a), rho_scale=self.rho_scale / a,
                       bound=self.bound * a**Q)


@dataclass(frozen=True, eq=False)
class BiradialProfile:
    group: HTypeGroup
    f0: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    decay: Decay
    name: str = "profile"
    check_decay: bool = True

    def __post_init__(self):
        if self.check_decay:
            _check_majorant(self)

    def __call__(self, r, rho):
        r, rho = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(rho, dtype=float))
        return np.asarray(self.f0(r, rho), dtype=float)

    def at(self, X, Z):
        """Values at arrays of group coordinates (last axis = coordinates)."""
        return self(np.linalg.norm(X, axis=-1), np.linalg.norm(Z, axis=-1))


def _check_majorant(f: BiradialProfile, tol: float = 1e-8):
    rr, rz = f.decay.truncation(tol)
    edge = np.linspace(0.0, 1.0, 9)
    # boundary of the truncation box and a ring further out
    pts = []
    for scale in (1.0, 1.5):
        pts.append((scale * rr * np.ones_like(edge), scale * rz * edge))
        pts.append((scale * rr * edge, scale * rz * np.ones_like(edge)))
    r = np.concatenate([p[0] for p in pts])
    rho = np.concatenate([p[1] for p in pts])
    vals = np.abs(f(r, rho))
    bound = f.decay.majorant(r, rho)
    bad = vals > bound * (1 + 1e-9) + 1e-300
    if np.any(bad):
        i = int(np.argmax(bad))
        raise DecayError(
            f"{f.name}: |f0({r[i]:.3g}, {rho[i]:.3g})| = {vals[i]:.3g} exceeds declared decay "
            f"{bound[i]:.3g}"
        )


def measure_constant(group: HTypeGroup) -> float:
    """c_{m,k} = area(S^{2m-1}) * area(S^{k-1}); area(S^0) = 2 folds the line for k = 1."""
    m, k = group.m, group.k
    log_v = np.log(2.0) + m * np.log(np.pi) - gammaln(m)
    log_z = np.log(2.0) + 0.5 * k * np.log(np.pi) - gammaln(0.5 * k)
    return float(np.exp(log_v + log_z))


def radial_integral(
    group: HTypeGroup,
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    tol: float = 1e-10,
    r_scale: float = 1.0,
    rho_scale: float = 1.0,
    r_max: float | None = None,
    rho_max: float | None = None,
    r_weight: Callable[[np.ndarray], np.ndarray] | None = None,
    rho_weight: Callable[[np.ndarray], np.ndarray] | None = None,
) -> QuadResult:
    """c_{m,k} * int_0^inf int_0^inf g(r, rho) w_r(r) w_rho(rho) r^{2m-1} rho^{k-1} drho dr.

    The inner rho-integrals for all outer nodes of a refinement step are
    computed as one vector-valued adaptive integral.  Finite ``r_max`` /
    ``rho_max`` restrict to compact support.
    """
    m, k = group.m, group.k
    inner_tol = tol * 1e-2

    def rho_factor(rho):
        out = rho ** (k - 1) if k > 1 else np.ones_like(rho)
        if rho_weight is not None:
            out = out * rho_weight(rho)
        return out

    def inner(r):
        def h(rho):
            return g(r[None, :], rho[:, None]) * rho_factor(rho)[:, None]

        if rho_max is None:
            res = integrate_halfline(h, tol=inner_tol, scale=rho_scale)
        else:
            res = integrate_finite(h, 0.0, rho_max, tol=inner_tol)
        return res.value

    def outer(r):
        vals = inner(r) * r ** (2 * m - 1)
        if r_weight is not None:
            vals = vals * r_weight(r)
        return vals

    if r_max is None:
        res = integrate_halfline(outer, tol=tol, scale=r_scale)
    else:
        res = integrate_finite(outer, 0.0, r_max, tol=tol)
    c = measure_constant(group)
    return QuadResult(c * float(res.value), c * res.error)


def _integration_box(f: BiradialProfile):
    if f.decay.kind == "compact":
        return dict(r_max=f.decay.r_scale, rho_max=f.decay.rho_scale)
    return dict(r_scale=f.decay.r_scale, rho_scale=f.decay.rho_scale)


def l1_norm(f: BiradialProfile, tol: float = 1e-10) -> float:
    """Integral of |f| over N with Haar measure dX dZ."""
    return float(radial_integral(f.group, lambda r, rho: np.abs(f(r, rho)), tol=tol,
                                 **_integration_box(f)).value)


def integral(f: BiradialProfile, tol: float = 1e-10) -> QuadResult:
    return radial_integral(f.group, f, tol=tol, **_integration_box(f))


def evaluate(f: BiradialProfile, n: GroupElement) -> float:
    n.check(f.group)
    return float(f(np.linalg.norm(n.X), np.linalg.norm(n.Z)))


def dilate_fn(a: float, f: BiradialProfile) -> BiradialProfile:
    """(delta_a f)(X, Z) = a^Q f(a^{1/2} X, a Z); preserves the L^1 norm."""
    if not a > 0:
        raise ValueError("dilation parameter must be positive")
    Q = f.group.Q
    ra = np.sqrt(a)
    f0 = f.f0

    def g0(r, rho):
        return a**Q * f0(ra * r, a * rho)

    return BiradialProfile(f.group, g0, f.decay.dilated(a, Q), name=f"dilate({a:g},{f.name})",
                           check_decay=False)


# -- named profiles ---------------------------------------------------------

def gaussian(group: HTypeGroup, width: float = 1.0, height: float = 1.0) -> BiradialProfile:
    """height * exp(-(r^2 + rho^2) / width^2)."""
    def f0(r, rho):
        return height * np.exp(-(r * r + rho * rho) / width**2)

    return BiradialProfile(group, f0, Decay("gaussian", width, width, bound=abs(height)),
                           name="gaussian")


def bump(group: HTypeGroup, radius: float = 1.0, height: float = 1.0) -> BiradialProfile:
    """Smooth bump height * exp(1 - 1 / (1 - t^2)), t = sqrt(r^2 + rho^2) / radius."""
    def f0(r, rho):
        t2 = (r * r + rho * rho) / radius**2
        inside = t2 < 1.0
        out = np.zeros(np.broadcast(r, rho).shape)
        out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - t2[inside]))
        return out

    return BiradialProfile(group, f0, Decay("compact", radius, radius, bound=abs(height)),
                           name="bump")


def normalized(f: BiradialProfile, tol: float = 1e-12) -> BiradialProfile:
    """Scale f to unit integral."""
    total = float(integral(f, tol=tol).value)
    f0 = f.f0

    def g0(r, rho):
        return f0(r, rho) / total

    return BiradialProfile(f.group, g0, replace(f.decay, bound=f.decay.bound / abs(total)),
                           name=f"normalized({f.name})", check_decay=False)


def named_profile(name: str, group: HTypeGroup, **params) -> BiradialProfile:
    if name == "gaussian":
        return gaussian(group, **params)
    if name == "bump":
        return bump(group, **params)
    if name == "poisson":
        from .poisson import PoissonKernel

        return PoissonKernel.build(group, params.get("a", 1.0)).profile()
    raise ValueError(f"unknown profile {name!r}; expected gaussian, bump or poisson")


# -- tabulated profiles -----------------------------------------------------

def tabulated(group: HTypeGroup, r: np.ndarray, rho: np.ndarray, values: np.ndarray,
              interp: str = "linear", name: str = "tabulated") -> BiradialProfile:
    """Profile from samples on a rectangular (r, rho) grid; zero outside the grid.

    Linear interpolation is the documented default and is accurate to O(h^2);
    ``interp="cubic"`` uses a bicubic spline.
    """
    from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator

    r = np.asarray(r, dtype=float)
    rho = np.asarray(rho, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape != (len(r), len(rho)):
        raise ValueError("values must have shape (len(r), len(rho))")
    r_hi, rho_hi = float(r[-1]), float(rho[-1])
    if interp == "linear":
        fn = RegularGridInterpolator((r, rho), values, bounds_error=False, fill_value=0.0)

        def f0(x, y):
            x, y = np.broadcast_arrays(x, y)
            return fn(np.stack([x.ravel(), y.ravel()], axis=-1)).reshape(x.shape)
    elif interp == "cubic":
        spline = RectBivariateSpline(r, rho, values, kx=3, ky=3)

        def f0(x, y):
            x, y = np.broadcast_arrays(x, y)
            out = spline.ev(x.ravel(), y.ravel()).reshape(x.shape)
            return np.where((x <= r_hi) & (y <= rho_hi), out, 0.0)
    else:
        raise ValueError("interp must be 'linear' or 'cubic'")
    bound = float(np.abs(values).max()) * (1.5 if interp == "cubic" else 1.0)
    return BiradialProfile(group, f0, Decay("compact", r_hi, rho_hi, bound=bound), name=name)


def read_profile_csv(path, group: HTypeGroup, interp: str = "linear") -> BiradialProfile:
    """Read a tabulated profile from CSV with header ``r,rho,value``."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != ["r", "rho", "value"]:
            raise ValueError(f"{path}: expected header r,rho,value")
        for row in reader:
            rows.append((float(row["r"]), float(row["rho"]), float(row["value"])))
    data = np.array(rows)
    r = np.unique(data[:, 0])
    rho = np.unique(data[:, 1])
    if len(r) * len(rho) != len(data):
        raise ValueError(f"{path}: samples must form a full rectangular grid")
    values = np.zeros((len(r), len(rho)))
    values[np.searchsorted(r, data[:, 0]), np.searchsorted(rho, data[:, 1])] = data[:, 2]
    return tabulated(group, r, rho, values, interp=interp, name=str(path))


def write_profile_csv(path, r, rho, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "rho", "value"])
        for i, ri in enumerate(r):
            for j, pj in enumerate(rho):
                w.writerow([repr(float(ri)), repr(float(pj)), repr(float(values[i, j]))])


# -- direct convolution on H_1 ----------------------------------------------

def _require_h1(group: HTypeGroup):
    if group.dim > 3:
        raise UnsupportedGroupError(
            f"direct convolution is limited to 3-dimensional groups, got dimension {group.dim}"
        )


def _box_rule(g: BiradialProfile, resolution: int, tol: float):
    rx, rz = g.decay.truncation(tol)
    panels = 1 if g.decay.kind == "compact" else 2
    xs = gauss_legendre(resolution, -rx, rx)
    zs = gauss_legendre(resolution, -rz, rz)
    if panels > 1:
        from .quadrature import composite_gauss_legendre

        xs = composite_gauss_legendre(resolution // panels, -rx, rx, panels)
        zs = composite_gauss_legendre(resolution // panels, -rz, rz, panels)
    X1, X2, Z = np.meshgrid(xs.nodes, xs.nodes, zs.nodes, indexing="ij")
    W = (xs.weights[:, None, None] * xs.weights[None, :, None] * zs.weights[None, None, :])
    X = np.stack([X1.ravel(), X2.ravel()], axis=-1)
    Zc = Z.reshape(-1, 1)
    gw = W.ravel() * g.at(X, Zc)
    keep = gw != 0
    return X[keep], Zc[keep], gw[keep]


def _convolve_points(f, g, Xn, Zn, resolution, tol):
    group = f.group
    Xm, Zm, gw = _box_rule(g, resolution, tol)
    out = np.empty(len(Xn))
    chunk = max(1, 4_000_000 // max(len(gw), 1))
    for i in range(0, len(Xn), chunk):
        X = Xn[i:i + chunk, None, :]
        Z = Zn[i:i + chunk, None, :]
        # n m^{-1} = (X - Xm, Z - Zm - [X, Xm] / 2)
        Xd = X - Xm[None]
        Zd = Z - Zm[None] - 0.5 * bracket_arrays(group, X, Xm[None])
        out[i:i + chunk] = f.at(Xd, Zd) @ gw
    return out


def convolve_direct(f: BiradialProfile, g: BiradialProfile, n: GroupElement,
                    resolution: int = 32, tol: float = 1e-10) -> QuadResult:
    """(f * g)(n) = int f(n') g(n'^{-1} n) dn' = int f(n m^{-1}) g(m) dm.

    Tensor Gauss-Legendre over the truncation box of g; the error estimate is
    the difference from the same rule at half resolution.
    """
    _require_h1(f.group)
    n.check(f.group)
    Xn = n.X[None, :]
    Zn = n.Z[None, :]
    fine = _convolve_points(f, g, Xn, Zn, resolution, tol)[0]
    coarse = _convolve_points(f, g, Xn, Zn, max(resolution // 2, 4), tol)[0]
    return QuadResult(float(fine), float(abs(fine - coarse)))


def convolve_table(f: BiradialProfile, g: BiradialProfile, r: np.ndarray, rho: np.ndarray,
                   resolution: int = 32, tol: float = 1e-10) -> np.ndarray:
    """(f * g) sampled at (X, Z) = (r e_1, rho e_1) on a grid; shape (len(r), len(rho))."""
    _require_h1(f.group)
    R, P = np.meshgrid(np.asarray(r, float), np.asarray(rho, float), indexing="ij")
    Xn = np.zeros((R.size, f.group.dim_v))
    Xn[:, 0] = R.ravel()
    Zn = np.zeros((R.size, f.group.k))
    Zn[:, 0] = P.ravel()
    return _convolve_points(f, g, Xn, Zn, resolution, tol).reshape(R.shape)
