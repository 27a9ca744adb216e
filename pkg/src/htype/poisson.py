"""The Poisson kernel of the Siegel domain and its Gelfand transform.

    P_a(X, Z) = C a^Q / ((a + |X|^2/4)^2 + |Z|^2)^Q,   ||P_a||_1 = 1.

Closed forms for the transform are one-dimensional Laplace-type integrals in
an auxiliary variable beta.  Every printed multiplicative constant is
replaced by one pinned from an exact anchor (unit mass, or agreement with a
direct quadrature at a single point), so only the shape of each formula is
trusted.

Exponents used by the closed forms (Q = m + k):

* Z-marginal on a line:   (A^2 + t^2)^(-(2m + k + 1)/2),  A = a + |X|^2/4
* Bessel branch:          int exp(-mu^2/(2 beta) - 2 a beta) beta^(Q-1) dbeta
* Laguerre branch:        int exp(-(2 beta + nu) a) (beta + nu)^((k-1)/2 - l)
                              beta^((2m+k-1)/2 + l) dbeta

The "paper" variants keep the exponents and signs as printed; they exist so
the discrepancy can be measured, not to be used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space
from scipy.special import gammaln

from .biradial import BiradialProfile, Decay, radial_integral
from .gelfand import SpectrumPoint, gelfand_transform
from .group import GroupElement, HTypeGroup
from .quadrature import QuadResult, fourier_halfline, integrate_halfline

PIN_NU = 0.5


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagree beyond tolerance."""

    def __init__(self, message: str, first, second):
        super().__init__(f"{message}: {first!r} vs {second!r}")
        self.first = first
        self.second = second


def _unnormalized(group: HTypeGroup, a: float, r, rho):
    A = a + 0.25 * np.asarray(r) ** 2
    return a**group.Q / (A * A + np.asarray(rho) ** 2) ** group.Q


@lru_cache(maxsize=32)
def normalization_constant(group: HTypeGroup, tol: float = 1e-13) -> float:
    """C with ||P_1||_1 = 1, from the reduced radial integral of the unnormalised kernel.

    Since P_a is the L^1-preserving dilation of P_1, the same C normalises
    every height.
    """
    res = radial_integral(group, lambda r, rho: _unnormalized(group, 1.0, r, rho),
                          tol=tol, r_scale=2.0, rho_scale=1.0)
    return 1.0 / float(res.value)


@dataclass(frozen=True)
class PoissonKernel:
    group: HTypeGroup
    a: float
    c_norm: float = field(compare=False)

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("height a must be positive")
        if not self.c_norm > 0:
            raise ValueError("normalisation constant must be positive")

    @classmethod
    def build(cls, group: HTypeGroup, a: float, tol: float = 1e-13) -> PoissonKernel:
        return cls(group, float(a), normalization_constant(group, tol))

    def __call__(self, r, rho):
        return self.c_norm * _unnormalized(self.group, self.a, r, rho)

    def at(self, X, Z):
        return self(np.linalg.norm(X, axis=-1), np.linalg.norm(Z, axis=-1))

    def profile(self) -> BiradialProfile:
        a, Q = self.a, self.group.Q
        decay = Decay("polynomial", r_scale=2.0 * np.sqrt(a), rho_scale=a, degree=2 * Q,
                      bound=self.c_norm * a ** (-Q), r_power=4)
        return BiradialProfile(self.group, self, decay, name=f"poisson(a={a:g})")


def poisson_eval(kernel: PoissonKernel, n: GroupElement) -> float:
    n.check(kernel.group)
    return float(kernel.at(n.X, n.Z))


# -- Fourier transform in the central variable --------------------------------

def line_exponent(group: HTypeGroup, variant: str = "corrected") -> float:
    """Exponent p of the Z-marginal along a line, (A^2 + t^2)^(-p)."""
    if variant == "corrected":
        return 0.5 * (2 * group.m + group.k + 1)
    if variant == "paper":
        return 0.5 * (group.m + group.k + 1)
    raise ValueError("variant must be 'corrected' or 'paper'")


def _unit(w, k: int) -> np.ndarray:
    w = np.asarray(w, dtype=float).reshape(k)
    nrm = np.linalg.norm(w)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError("direction w must be a unit vector")
    return w


def direct_z_fourier(kernel: PoissonKernel, X, nu: float, w, tol: float = 1e-11) -> complex:
    """int_z exp(-i nu <Z, w>) P_a(X, Z) dZ with Z = t w + Z', Z' in w-perp in polar form."""
    group = kernel.group
    k = group.k
    w = _unit(w, k)
    X = np.asarray(X, dtype=float)
    A = kernel.a + 0.25 * float(X @ X)
    if k > 1:
        perp = null_space(w[None, :])[:, 0]
        sphere = np.exp(np.log(2.0) + 0.5 * (k - 1) * np.log(np.pi) - gammaln(0.5 * (k - 1)))

    def marginal(t):
        if k == 1:
            Z = t[:, None] * w[None, :]
            return kernel.at(np.broadcast_to(X, (len(t), len(X))), Z)

        def h(q):
            Z = t[None, :, None] * w + q[:, None, None] * perp
            return kernel(np.sqrt(X @ X), np.linalg.norm(Z, axis=-1)) * q[:, None] ** (k - 2)

        return sphere * integrate_halfline(h, tol=tol * 1e-2, scale=A).value

    def along(sign):
        # marginal evaluated on the actual vectors Z = sign * t * w (+ Z')
        return lambda t: marginal(sign * t)

    return _fourier_pair(along(1.0), along(-1.0), nu, tol)


def _fourier_pair(g_plus, g_minus, nu: float, tol: float) -> complex:
    """int_R exp(-i nu t) g(t) dt given g on the positive and negative half-lines."""
    re = fourier_halfline(g_plus, nu, "cos", tol / 2).value + \
        fourier_halfline(g_minus, nu, "cos", tol / 2).value
    im = -(fourier_halfline(g_plus, nu, "sin", tol / 2).value
           - fourier_halfline(g_minus, nu, "sin", tol / 2).value)
    return complex(re, im)


def _reduced_line_integral(A: float, nu: float, p: float, tol: float) -> complex:
    def base(t):
        return (A * A + t * t) ** (-p)

    return _fourier_pair(base, base, nu, tol * A ** (-2 * p + 1))


@lru_cache(maxsize=128)
def _line_constant(kernel: PoissonKernel, variant: str, tol: float) -> float:
    """C' pinned so the reduced form equals the direct integral at X = 0, nu = 0."""
    p = line_exponent(kernel.group, variant)
    w = np.zeros(kernel.group.k)
    w[0] = 1.0
    direct = direct_z_fourier(kernel, np.zeros(kernel.group.dim_v), 0.0, w, tol=tol)
    reduced = _reduced_line_integral(kernel.a, 0.0, p, tol)
    return direct.real / (kernel.a**kernel.group.Q * reduced.real)


def reduced_z_fourier(kernel: PoissonKernel, X, nu: float, variant: str = "corrected",
                      tol: float = 1e-11) -> complex:
    """C' a^Q int exp(-i nu t) (A^2 + t^2)^(-p) dt with C' pinned at X = 0, nu = 0."""
    p = line_exponent(kernel.group, variant)
    X = np.asarray(X, dtype=float)
    A = kernel.a + 0.25 * float(X @ X)
    c_line = _line_constant(kernel, variant, tol)
    return c_line * kernel.a**kernel.group.Q * _reduced_line_integral(A, nu, p, tol)


def partial_fourier_z(kernel: PoissonKernel, X, nu: float, w, tol: float = 1e-8,
                      variant: str = "corrected") -> complex:
    """Fourier transform of P_a(X, .) at nu * w, cross-checked between two routes.

    Returns the reduced one-dimensional form; raises ConsistencyError if the
    direct k-dimensional integral disagrees by more than ``tol`` (relative to
    max(1, |value|)).
    """
    if not nu >= 0:
        raise ValueError("nu must be nonnegative")
    qtol = min(tol * 1e-3, 1e-11)
    direct = direct_z_fourier(kernel, X, nu, w, tol=qtol)
    reduced = reduced_z_fourier(kernel, X, nu, variant=variant, tol=qtol)
    if abs(direct - reduced) > tol * max(1.0, abs(reduced)):
        raise ConsistencyError(f"Z-Fourier routes disagree ({variant} exponent)", direct, reduced)
    return reduced


def _laplace_shape(kernel: PoissonKernel, A: float, nu: float, variant: str, tol: float) -> float:
    p = line_exponent(kernel.group, variant)
    e = p - 1.0

    def integrand(b):
        return np.exp(-(2 * b + nu) * A + e * (np.log(b) + np.log(b + nu)))

    return float(integrate_halfline(integrand, tol=1e-300, rtol=tol,
                                    scale=max(e, 0.5) / A).value)


def z_fourier_laplace(kernel: PoissonKernel, X, nu: float, variant: str = "corrected",
                      tol: float = 1e-12, pin_nu: float = PIN_NU) -> float:
    """beta-integral form of the Z-Fourier transform:

        K int_0^inf exp(-(2 beta + nu) A) (beta + nu)^e beta^e dbeta,  e = p - 1,

    with K pinned against the direct transform at |X| = 0, nu = pin_nu.
    """
    group = kernel.group
    X = np.asarray(X, dtype=float)
    A = kernel.a + 0.25 * float(X @ X)
    K = _laplace_pin(kernel, variant, pin_nu)
    return K * _laplace_shape(kernel, A, nu, variant, tol)


@lru_cache(maxsize=128)
def _laplace_pin(kernel: PoissonKernel, variant: str, pin_nu: float) -> float:
    w = np.zeros(kernel.group.k)
    w[0] = 1.0
    ref = direct_z_fourier(kernel, np.zeros(kernel.group.dim_v), pin_nu, w, tol=1e-12).real
    return ref / _laplace_shape(kernel, kernel.a, pin_nu, variant, 1e-13)


def laplace_representation(A: float, rho: float, r: float, tol: float = 1e-12,
                           printed: bool = False) -> complex:
    """(1/r!) int_0^inf exp(-alpha (A + i rho)) alpha^r dalpha  =  (A + i rho)^-(r+1).

    ``printed=True`` multiplies the integrand by the extra exp(i alpha rho)
    that appears in the source formula, which cancels the imaginary part and
    no longer represents the left-hand side.
    """
    def integrand(al):
        phase = -al * rho + (al * rho if printed else 0.0)
        mag = np.exp(-al * A + r * np.log(al) - gammaln(r + 1))
        return np.stack([mag * np.cos(phase), mag * np.sin(phase)], axis=-1)

    res = integrate_halfline(integrand, tol=tol * A ** (-(r + 1)), scale=max(r, 1.0) / A)
    return complex(res.value[0], res.value[1])


# -- closed forms of the Gelfand transform -------------------------------------

def _log_unit_mass_constant(group: HTypeGroup, a: float) -> float:
    # log of (2a)^Q / Gamma(Q) = 1 / int exp(-2 a beta) beta^(Q-1) dbeta
    Q = group.Q
    return Q * np.log(2 * a) - gammaln(Q)


def _beta_integral(log_integrand, scale: float, rtol: float) -> QuadResult:
    return integrate_halfline(lambda b: np.exp(log_integrand(b)), tol=1e-300, rtol=rtol,
                              scale=scale)


def poisson_hat_bessel(kernel: PoissonKernel, mu: float, tol: float = 1e-12) -> float:
    """P_a^(mu) = K int exp(-mu^2/(2 beta)) exp(-2 a beta) beta^(Q-1) dbeta, K from P^(0) = 1."""
    if not mu >= 0:
        raise ValueError("mu must be nonnegative")
    if mu == 0:
        return 1.0
    a, Q = kernel.a, kernel.group.Q
    logK = _log_unit_mass_constant(kernel.group, a)
    peak = ((Q - 1) + np.sqrt((Q - 1) ** 2 + 4 * a * mu * mu)) / (4 * a)

    def log_integrand(b):
        return logK - 0.5 * mu * mu / b - 2 * a * b + (Q - 1) * np.log(b)

    return float(_beta_integral(log_integrand, peak, tol).value)


def laguerre_exponents(group: HTypeGroup, l: int, variant: str = "corrected"):
    """Exponents (of beta + nu, of beta) in the Laguerre-branch beta-integral."""
    m, k = group.m, group.k
    if variant == "corrected":
        return 0.5 * (k - 1) - l, 0.5 * (2 * m + k - 1) + l
    if variant == "paper":
        s = 0.5 * (m + k - 1)
        return s, s
    raise ValueError("variant must be 'corrected' or 'paper'")


def _laguerre_shape(kernel: PoissonKernel, nu: float, l: int, variant: str, tol: float) -> float:
    a, Q = kernel.a, kernel.group.Q
    e1, e2 = laguerre_exponents(kernel.group, l, variant)
    logK = _log_unit_mass_constant(kernel.group, a)

    def log_integrand(b):
        return logK - (2 * b + nu) * a + e1 * np.log(b + nu) + e2 * np.log(b)

    return float(_beta_integral(log_integrand, max(Q - 1, 1) / (2 * a), tol).value)


def poisson_hat_laguerre(kernel: PoissonKernel, nu: float, l: int, variant: str = "corrected",
                         tol: float = 1e-12, pin_nu: float = PIN_NU) -> float:
    """Closed form of P_a^(nu, l).

    corrected: K int exp(-(2b+nu)a) (b+nu)^((k-1)/2 - l) b^((2m+k-1)/2 + l) db with
    K = (2a)^Q / Gamma(Q), the constant making the nu -> 0, l = 0 limit equal 1.

    paper: (-1)^l nu^(-m) int exp(-(2b+nu)a) (b+nu)^s b^s db, s = (m+k-1)/2, scaled
    to agree with the corrected variant at (pin_nu, l = 0).
    """
    if not nu > 0:
        raise ValueError("nu must be positive on the Laguerre branch")
    if l < 0:
        raise ValueError("l must be nonnegative")
    if variant == "corrected":
        return _laguerre_shape(kernel, nu, l, "corrected", tol)
    shape = _laguerre_shape(kernel, nu, l, "paper", tol) * nu ** (-kernel.group.m)
    return (-1) ** l * _paper_pin(kernel, pin_nu, tol) * shape


@lru_cache(maxsize=128)
def _paper_pin(kernel: PoissonKernel, pin_nu: float, tol: float) -> float:
    target = _laguerre_shape(kernel, pin_nu, 0, "corrected", tol)
    return target / (_laguerre_shape(kernel, pin_nu, 0, "paper", tol) * pin_nu ** (-kernel.group.m))


def poisson_hat(kernel: PoissonKernel, p: SpectrumPoint, variant: str = "corrected",
                tol: float = 1e-12) -> float:
    if p.branch == "bessel":
        return poisson_hat_bessel(kernel, p.mu, tol=tol)
    return poisson_hat_laguerre(kernel, p.nu, p.l, variant=variant, tol=tol)


def poisson_hat_oracle(kernel: PoissonKernel, p: SpectrumPoint, tol: float = 1e-11) -> QuadResult:
    """Direct radial quadrature of int P_a phi_p dn."""
    return gelfand_transform(kernel.profile(), p, tol=tol)


# -- nonvanishing ---------------------------------------------------------------

ORACLE_RTOL = {"laguerre": 1e-3, "bessel": 1e-4}


@dataclass
class NonvanishingReport:
    group: str
    a: float
    min_abs: float
    argmin: str
    flagged: list = field(default_factory=list)
    crosschecks: list = field(default_factory=list)
    threshold: float = 1e-8

    @property
    def verified(self) -> bool:
        return all(c["ok"] for c in self.crosschecks)

    @property
    def nonvanishing(self) -> bool:
        return not self.flagged

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "a": self.a,
            "min_abs": self.min_abs,
            "argmin": self.argmin,
            "threshold": self.threshold,
            "flagged": self.flagged,
            "nonvanishing": self.nonvanishing,
            "verified": self.verified,
            "crosschecks": self.crosschecks,
        }


def nonvanishing_report(kernel: PoissonKernel, points, threshold: float = 1e-8,
                        crosscheck_every: int = 10, oracle_tol: float = 1e-11) -> NonvanishingReport:
    """Minimum |P_a^| over ``points`` via the closed forms.

    Every ``crosscheck_every``-th point (starting with the first) is also
    computed by direct quadrature; a disagreement marks the report unverified.
    """
    points = list(points)
    values = [poisson_hat(kernel, p) for p in points]
    mags = np.abs(values)
    i = int(np.argmin(mags))
    rep = NonvanishingReport(kernel.group.label(), kernel.a, float(mags[i]), str(points[i]),
                             threshold=threshold)
    rep.flagged = [str(p) for p, v in zip(points, mags) if v < threshold]
    for j in range(0, len(points), crosscheck_every):
        p = points[j]
        oracle = poisson_hat_oracle(kernel, p, tol=oracle_tol).value
        rel = abs(values[j] - oracle) / abs(oracle)
        rep.crosschecks.append({"point": str(p), "closed_form": values[j], "oracle": oracle,
                                "rel_err": rel, "ok": bool(rel <= ORACLE_RTOL[p.branch])})
    return rep


# -- comparison of printed and corrected formulas ----------------------------------

def erratum_report(kernel: PoissonKernel, nus=(0.5, 1.0, 2.0), ls=range(6), mus=(0.5, 1.0, 2.0),
                   oracle_tol: float = 1e-11) -> dict:
    """Compare the corrected and printed Laguerre-branch formulas with direct quadrature."""
    rows = []
    for nu in nus:
        for l in ls:
            p = SpectrumPoint.laguerre(nu, l)
            oracle = poisson_hat_oracle(kernel, p, tol=oracle_tol)
            corr = poisson_hat_laguerre(kernel, nu, l, "corrected")
            paper = poisson_hat_laguerre(kernel, nu, l, "paper", pin_nu=min(nus))
            rows.append({
                "nu": nu, "l": l, "oracle": oracle.value, "oracle_err": oracle.error,
                "corrected": corr, "paper": paper,
                "corrected_rel_err": abs(corr - oracle.value) / abs(oracle.value),
                "paper_rel_err": abs(paper - oracle.value) / abs(oracle.value),
            })
    bessel_rows = []
    for mu in mus:
        oracle = poisson_hat_oracle(kernel, SpectrumPoint.bessel(mu), tol=oracle_tol)
        closed = poisson_hat_bessel(kernel, mu)
        bessel_rows.append({"mu": mu, "oracle": oracle.value, "closed_form": closed,
                            "rel_err": abs(closed - oracle.value) / abs(oracle.value)})

    def signs(key):
        out = []
        for l in ls:
            vals = [r[key] for r in rows if r["l"] == l]
            out.append("+" if all(v > 0 for v in vals) else "-" if all(v < 0 for v in vals) else "?")
        return "".join(out)

    paper_l0 = [r["paper_rel_err"] for r in rows if r["l"] == 0]
    line = {}
    for variant in ("corrected", "paper"):
        w = np.zeros(kernel.group.k)
        w[0] = 1.0
        X = np.zeros(kernel.group.dim_v)
        X[0] = 1.0
        d = direct_z_fourier(kernel, X, 1.0, w, tol=1e-12)
        rz = reduced_z_fourier(kernel, X, 1.0, variant=variant, tol=1e-12)
        line[variant] = {"exponent": line_exponent(kernel.group, variant),
                         "abs_diff_at_X1_nu1": abs(d - rz)}
    return {
        "group": kernel.group.label(),
        "a": kernel.a,
        "paper_variant_sign_pattern": signs("paper"),
        "oracle_sign_pattern": signs("oracle"),
        "corrected_variant_min_abs": min(abs(r["corrected"]) for r in rows),
        "oracle_max_rel_err": max(r["corrected_rel_err"] for r in rows),
        "bessel_oracle_max_rel_err": max(r["rel_err"] for r in bessel_rows),
        "paper_variant_max_rel_err_at_l0": max(paper_l0),
        "paper_variant_max_rel_err": max(r["paper_rel_err"] for r in rows),
        "line_marginal_exponent": line,
        "laguerre": rows,
        "bessel": bessel_rows,
    }
