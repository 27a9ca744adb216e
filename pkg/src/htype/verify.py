"""Consistency suite behind ``htype poisson verify`` and ``htype report``.

Each check returns a dict with at least ``name``, ``ok``, ``value`` and
``tol``; the suite stops after the axiom check if the group is not H-type,
since nothing downstream is meaningful then.
"""
from __future__ import annotations

import numpy as np

from .biradial import l1_norm
from .gelfand import SpectrumPoint
from .group import HTypeGroup, validate_htype
from .poisson import (
    PoissonKernel,
    direct_z_fourier,
    laplace_representation,
    nonvanishing_report,
    poisson_hat,
    poisson_hat_oracle,
    reduced_z_fourier,
)

BESSEL_RTOL = 1e-4
LAGUERRE_RTOL = 1e-3


def _check(name, value, tol, ok=None, **extra):
    if ok is None:
        ok = bool(value <= tol)
    return {"name": name, "ok": bool(ok), "value": float(value), "tol": tol, **extra}


def check_axioms(group: HTypeGroup, samples: int = 100, seed: int = 0) -> dict:
    rep = validate_htype(group, samples=samples, seed=seed)
    worst = max(rep.skew_residual, rep.htype_residual, rep.compat_residual)
    return _check("htype_axioms", worst, rep.tol, ok=rep.passed,
                  failed_axioms=rep.failed_axioms(), residuals=rep.to_dict()["residuals"])


def check_normalization(group: HTypeGroup, heights=(0.5, 1.0, 2.0), tol: float = 1e-10) -> dict:
    errs = [abs(l1_norm(PoissonKernel.build(group, a).profile(), tol=tol) - 1.0) for a in heights]
    return _check("unit_mass", max(errs), 1e-6, heights=list(heights))


def check_bessel_origin(group: HTypeGroup, a: float = 1.0, quad_tol: float = 1e-11) -> dict:
    kernel = PoissonKernel.build(group, a)
    p = SpectrumPoint.bessel(0.0)
    closed = poisson_hat(kernel, p)
    oracle = poisson_hat_oracle(kernel, p, tol=quad_tol).value
    return _check("bessel_at_zero", abs(oracle - 1.0), BESSEL_RTOL, ok=closed == 1.0 and
                  abs(oracle - 1.0) <= BESSEL_RTOL, closed_form=closed, oracle=oracle)


def check_z_fourier(group: HTypeGroup, a: float = 1.0, tol: float = 1e-8) -> dict:
    """Direct k-dimensional and reduced one-dimensional Z-Fourier transforms agree."""
    kernel = PoissonKernel.build(group, a)
    w = np.zeros(group.k)
    w[0] = 1.0
    worst = 0.0
    for x0 in (0.0, 1.0):
        X = np.zeros(group.dim_v)
        X[0] = x0
        for nu in (0.0, 0.5, 2.0):
            d = direct_z_fourier(kernel, X, nu, w, tol=1e-11)
            r = reduced_z_fourier(kernel, X, nu, tol=1e-11)
            worst = max(worst, abs(d - r) / max(1.0, abs(r)))
    return _check("z_fourier_routes", worst, tol)


def check_laplace(tol: float = 1e-10) -> dict:
    worst = 0.0
    for A, rho, r in ((1.0, 0.0, 1), (1.3, 0.7, 2), (0.6, 2.5, 3)):
        got = laplace_representation(A, rho, r)
        worst = max(worst, abs(got - (A + 1j * rho) ** -(r + 1)) / abs((A + 1j * rho) ** -(r + 1)))
    return _check("laplace_representation", worst, tol)


def check_closed_forms(group: HTypeGroup, a: float = 1.0, nus=(0.5, 1.0, 2.0), ls=(0, 1, 2),
                       mus=(0.5, 1.0, 2.0), quad_tol: float = 1e-11) -> list[dict]:
    kernel = PoissonKernel.build(group, a)
    out = []
    for branch, points, rtol in (
        ("bessel", [SpectrumPoint.bessel(mu) for mu in mus], BESSEL_RTOL),
        ("laguerre", [SpectrumPoint.laguerre(nu, l) for nu in nus for l in ls], LAGUERRE_RTOL),
    ):
        worst = 0.0
        for p in points:
            oracle = poisson_hat_oracle(kernel, p, tol=quad_tol).value
            worst = max(worst, abs(poisson_hat(kernel, p) - oracle) / abs(oracle))
        out.append(_check(f"closed_form_{branch}", worst, rtol, a=a, points=len(points)))
    return out


def check_nonvanishing(group: HTypeGroup, heights=(0.5, 1.0, 2.0), nus=(0.5, 1.0, 2.0),
                       ls=range(6), mus=(0.5, 1.0, 2.0), threshold: float = 1e-6) -> dict:
    points = [SpectrumPoint.laguerre(nu, l) for nu in nus for l in ls]
    points += [SpectrumPoint.bessel(mu) for mu in mus]
    worst, where = np.inf, ""
    for a in heights:
        rep = nonvanishing_report(PoissonKernel.build(group, a), points, threshold=threshold,
                                  crosscheck_every=len(points) + 1)
        if rep.min_abs < worst:
            worst, where = rep.min_abs, f"a={a:g}, {rep.argmin}"
    return _check("nonvanishing", worst, threshold, ok=worst > threshold, argmin=where)


def run_suite(group: HTypeGroup, samples: int = 100, seed: int = 0,
              quad_tol: float = 1e-11) -> dict:
    checks = [check_axioms(group, samples=samples, seed=seed)]
    if checks[0]["ok"]:
        checks += [
            check_normalization(group),
            check_bessel_origin(group, quad_tol=quad_tol),
            check_z_fourier(group),
            check_laplace(),
            *check_closed_forms(group, quad_tol=quad_tol),
            check_nonvanishing(group),
        ]
    failed = [c["name"] for c in checks if not c["ok"]]
    return {"group": group.label(), "passed": not failed, "failed": failed, "checks": checks}
