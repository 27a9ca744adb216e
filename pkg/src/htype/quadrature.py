"""Adaptive and fixed quadrature used by every other module.

Integrands are vectorised: they take a 1-D array of nodes and return an array
whose leading axis matches the nodes (trailing axes are allowed, so a batch of
integrals sharing one variable can be refined together).

Error estimates come from comparing an n-point Gauss-Legendre panel with the
sum over its two halves; the halves' sum is kept as the panel value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

DEFAULT_ORDER = 15
DEFAULT_MAX_PANELS = 4000
MIN_PANELS = 64

_budget = {"max_panels": DEFAULT_MAX_PANELS}


def set_panel_budget(max_panels: int) -> int:
    """Set the default panel budget for adaptive rules; returns the previous one."""
    if max_panels < MIN_PANELS:
        raise ValueError(f"panel budget must be at least {MIN_PANELS}")
    old = _budget["max_panels"]
    _budget["max_panels"] = int(max_panels)
    return old


class QuadResult(NamedTuple):
    value: float | np.ndarray
    error: float


class QuadratureError(RuntimeError):
    """Adaptive refinement exhausted its panel budget."""

    def __init__(self, message: str, value, error: float):
        super().__init__(f"{message} (partial value={value!r}, error estimate={error:.3g})")
        self.value = value
        self.error = error


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: str
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def apply(self, f: Callable[[np.ndarray], np.ndarray]):
        vals = np.asarray(f(self.nodes))
        return np.tensordot(self.weights, vals, axes=(0, 0))


@lru_cache(maxsize=64)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(order: int, lo: float = -1.0, hi: float = 1.0) -> QuadratureRule:
    x, w = _leggauss(order)
    half = 0.5 * (hi - lo)
    return QuadratureRule("gauss-legendre", order, lo + half * (x + 1.0), half * w)


def composite_gauss_legendre(order: int, lo: float, hi: float, panels: int) -> QuadratureRule:
    edges = np.linspace(lo, hi, panels + 1)
    x, w = _leggauss(order)
    half = 0.5 * np.diff(edges)
    nodes = (edges[:-1, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureRule("gauss-legendre", order * panels, nodes, weights)


def halfline_rule(order: int, scale: float = 1.0, lo: float = 0.0) -> QuadratureRule:
    """Fixed rule for [lo, inf) through x = lo + scale * u / (1 - u)."""
    u, w = _leggauss(order)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    x = lo + scale * u / (1.0 - u)
    return QuadratureRule("halfline", order, x, w * scale / (1.0 - u) ** 2)


def line_rule(order: int, scale: float = 1.0) -> QuadratureRule:
    """Fixed rule for the real line through x = scale * tan(pi * u / 2).

    Cauchy-type decay (1 + x^2)^-p becomes a smooth integrand under this map.
    """
    u, w = _leggauss(order)
    theta = 0.5 * np.pi * u
    x = scale * np.tan(theta)
    return QuadratureRule("line", order, x, w * scale * 0.5 * np.pi / np.cos(theta) ** 2)


def _panel_sums(f, lefts: np.ndarray, rights: np.ndarray, order: int):
    """Whole-panel and two-half-panel Gauss sums for a batch of panels."""
    x, w = _leggauss(order)
    mids = 0.5 * (lefts + rights)
    # three sub-rules per panel: whole, left half, right half
    a = np.stack([lefts, lefts, mids], axis=1)
    b = np.stack([rights, mids, rights], axis=1)
    half = 0.5 * (b - a)
    nodes = a[..., None] + half[..., None] * (x + 1.0)
    vals = np.asarray(f(nodes.ravel()), dtype=float)
    tail = vals.shape[1:]
    vals = vals.reshape(nodes.shape + tail)
    sums = np.einsum("j,pqj...->pq...", w, vals) * half.reshape(half.shape + (1,) * len(tail))
    whole = sums[:, 0]
    halves = sums[:, 1] + sums[:, 2]
    diff = np.abs(whole - halves)
    err = diff.reshape(len(lefts), -1).max(axis=1) if tail else diff
    return halves, err


def integrate_finite(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    rtol: float = 0.0,
    order: int = DEFAULT_ORDER,
    max_panels: int | None = None,
    initial_panels: int = 1,
    breakpoints=(),
) -> QuadResult:
    """Adaptive Gauss-Legendre integration of ``f`` over ``[lo, hi]``.

    Stops when the summed panel error is below ``max(tol, rtol * |I|)``.
    Refinement order is fixed, so results are reproducible bit for bit.
    """
    if not tol > 0 and not rtol > 0:
        raise ValueError("tol or rtol must be positive")
    if max_panels is None:
        max_panels = _budget["max_panels"]
    if hi == lo:
        return QuadResult(0.0 * np.asarray(f(np.array([lo])))[0], 0.0)
    sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0

    cuts = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
    edges = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        edges.extend(np.linspace(a, b, initial_panels + 1)[:-1])
    lefts = np.array(edges)
    rights = np.append(lefts[1:], hi)
    values, errors = _panel_sums(f, lefts, rights, order)

    while True:
        total = values.sum(axis=0)
        err = float(errors.sum())
        target = max(tol, rtol * float(np.max(np.abs(total))))
        if err <= target:
            return QuadResult(sign * total, err)
        if len(lefts) >= max_panels:
            raise QuadratureError("panel budget exhausted", sign * total, err)
        # split every panel carrying more than its fair share of the budget
        share = target / len(lefts)
        pick = errors > share
        pick[np.argmax(errors)] = True
        idx = np.flatnonzero(pick)
        room = (max_panels - len(lefts))
        if len(idx) > room:
            idx = idx[np.argsort(-errors[idx], kind="stable")[:max(room, 1)]]
            idx.sort()
        mids = 0.5 * (lefts[idx] + rights[idx])
        new_l = np.concatenate([lefts[idx], mids])
        new_r = np.concatenate([mids, rights[idx]])
        new_v, new_e = _panel_sums(f, new_l, new_r, order)
        keep = np.ones(len(lefts), dtype=bool)
        keep[idx] = False
        lefts = np.concatenate([lefts[keep], new_l])
        rights = np.concatenate([rights[keep], new_r])
        values = np.concatenate([values[keep], new_v])
        errors = np.concatenate([errors[keep], new_e])
        order_idx = np.argsort(lefts, kind="stable")
        lefts, rights = lefts[order_idx], rights[order_idx]
        values, errors = values[order_idx], errors[order_idx]


def integrate_halfline(
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-10,
    rtol: float = 0.0,
    scale: float = 1.0,
    lo: float = 0.0,
    **kwargs,
) -> QuadResult:
    """Integrate over ``[lo, inf)`` via x = lo + scale * u / (1 - u), u in [0, 1).

    ``scale`` should be the length over which the integrand varies (its
    decay length or peak location); the map is exact for any positive value
    but converges fastest when it is about right.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")

    def g(u):
        one_minus = 1.0 - u
        x = lo + scale * u / one_minus
        jac = scale / one_minus**2
        vals = np.asarray(f(x), dtype=float)
        return vals * jac.reshape(jac.shape + (1,) * (vals.ndim - 1))

    return integrate_finite(g, 0.0, 1.0, tol=tol, rtol=rtol, **kwargs)


def integrate_line(
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-10,
    rtol: float = 0.0,
    scale: float = 1.0,
    **kwargs,
) -> QuadResult:
    """Integrate over the whole real line as two half-lines split at 0."""
    right = integrate_halfline(f, tol=tol / 2, rtol=rtol, scale=scale, **kwargs)
    left = integrate_halfline(lambda x: f(-x), tol=tol / 2, rtol=rtol, scale=scale, **kwargs)
    return QuadResult(right.value + left.value, right.error + left.error)


def fourier_halfline(
    f: Callable[[np.ndarray], np.ndarray],
    omega: float,
    kind: str = "cos",
    tol: float = 1e-12,
    limit: int = 200,
) -> QuadResult:
    """int_0^inf f(x) cos(omega x) dx (or sin) for slowly decaying smooth f.

    Uses QUADPACK's QAWF (cycle-by-cycle integration with epsilon-algorithm
    extrapolation), which handles oscillatory tails that defeat plain
    adaptive subdivision.  ``f`` is vectorised as elsewhere in this module.
    """
    from scipy.integrate import quad

    if kind not in ("cos", "sin"):
        raise ValueError("kind must be 'cos' or 'sin'")

    def scalar(x):
        return float(np.asarray(f(np.array([x])))[0])

    if omega == 0.0:
        if kind == "sin":
            return QuadResult(0.0, 0.0)
        return integrate_halfline(f, tol=tol)
    val, err = quad(scalar, 0.0, np.inf, weight=kind, wvar=omega, epsabs=tol, limlst=limit)
    return QuadResult(val, err)
