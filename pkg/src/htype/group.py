"""H-type groups: construction, axiom checks, group law, dilations.

Elements are stored as (X, Z) with X in v = R^{2m} and Z in z = R^k.  The
``*_arrays`` helpers broadcast over leading axes and are what the quadrature
code uses; the GroupElement functions are thin wrappers for single points.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

AXIOM_TOL = 1e-10


class StructuralError(ValueError):
    """J-maps with inconsistent shapes, or elements of the wrong size."""


@dataclass(frozen=True, eq=False)
class HTypeGroup:
    m: int
    k: int
    j_maps: np.ndarray = field(repr=False)
    family: str = "custom"
    param: int | None = None

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise StructuralError("m and k must be positive")
        j = np.array(self.j_maps, dtype=float)
        if j.shape != (self.k, 2 * self.m, 2 * self.m):
            raise StructuralError(
                f"expected j_maps of shape {(self.k, 2 * self.m, 2 * self.m)}, got {j.shape}"
            )
        j.setflags(write=False)
        object.__setattr__(self, "j_maps", j)

    @property
    def Q(self) -> int:
        """Homogeneous dimension m + k."""
        return self.m + self.k

    @property
    def s(self) -> Fraction:
        return Fraction(self.m + self.k - 1, 2)

    @property
    def dim_v(self) -> int:
        return 2 * self.m

    @property
    def dim(self) -> int:
        return 2 * self.m + self.k

    @property
    def key(self) -> tuple:
        return (self.m, self.k, self.j_maps.tobytes())

    def __eq__(self, other):
        return isinstance(other, HTypeGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def j_of(self, Z) -> np.ndarray:
        """J_Z assembled by linearity from the basis maps."""
        return np.tensordot(np.asarray(Z, dtype=float), self.j_maps, axes=(-1, 0))

    def identity(self) -> GroupElement:
        return GroupElement(np.zeros(self.dim_v), np.zeros(self.k))

    def to_descriptor(self) -> dict:
        if self.family == "heisenberg":
            return {"family": "heisenberg", "r": self.param}
        if self.family == "quaternionic":
            return {"family": "quaternionic", "n": self.param}
        return {"family": "custom", "m": self.m, "k": self.k, "j_maps": self.j_maps.tolist()}

    def label(self) -> str:
        if self.family == "heisenberg":
            return f"heisenberg:{self.param}"
        if self.family == "quaternionic":
            return f"quaternionic:{self.param}"
        return f"custom(m={self.m},k={self.k})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    X: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", np.asarray(self.X, dtype=float))
        object.__setattr__(self, "Z", np.asarray(self.Z, dtype=float))

    def check(self, group: HTypeGroup) -> GroupElement:
        if self.X.shape != (group.dim_v,) or self.Z.shape != (group.k,):
            raise StructuralError(
                f"element shapes {self.X.shape}, {self.Z.shape} do not fit {group.label()}"
            )
        return self


@dataclass(frozen=True, eq=False)
class DomainPoint:
    """A point (X, Z, a) of the solvable extension S = NA (Siegel domain model)."""

    element: GroupElement
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("height a must be positive")


def make_heisenberg(r: int) -> HTypeGroup:
    if r < 1:
        raise ValueError("Heisenberg rank r must be >= 1")
    j = np.zeros((1, 2 * r, 2 * r))
    for b in range(r):
        j[0, 2 * b + 1, 2 * b] = 1.0
        j[0, 2 * b, 2 * b + 1] = -1.0
    return HTypeGroup(r, 1, j, family="heisenberg", param=r)


# left multiplication by i, j, k on a quaternion (a, b, c, d) = a + bi + cj + dk
_QI = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
_QJ = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
_QK = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)


def make_quaternionic(n: int) -> HTypeGroup:
    if n < 1:
        raise ValueError("quaternionic rank n must be >= 1")
    eye = np.eye(n)
    j = np.stack([np.kron(eye, q) for q in (_QI, _QJ, _QK)])
    return HTypeGroup(2 * n, 3, j, family="quaternionic", param=n)


def group_from_descriptor(desc) -> HTypeGroup:
    """Build a group from a JSON descriptor (dict or JSON text) or ``family:param``."""
    if isinstance(desc, str):
        text = desc.strip()
        if text.startswith("{"):
            desc = json.loads(text)
        else:
            family, _, param = text.partition(":")
            desc = {"family": family, ("n" if family == "quaternionic" else "r"): int(param or 1)}
    family = desc.get("family")
    if family == "heisenberg":
        return make_heisenberg(int(desc["r"]))
    if family == "quaternionic":
        return make_quaternionic(int(desc["n"]))
    if family == "custom":
        return HTypeGroup(int(desc["m"]), int(desc["k"]), np.asarray(desc["j_maps"], dtype=float))
    raise ValueError(f"unknown group family {family!r}")


@dataclass
class ValidationReport:
    group: str
    skew_residual: float
    htype_residual: float
    compat_residual: float
    tol: float = AXIOM_TOL
    samples: int = 100

    @property
    def passed(self) -> bool:
        return self.failed_axioms() == []

    def failed_axioms(self) -> list[str]:
        res = {"skew": self.skew_residual, "htype": self.htype_residual,
               "compatibility": self.compat_residual}
        return [name for name, val in res.items() if not val <= self.tol]

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "passed": self.passed,
            "failed_axioms": self.failed_axioms(),
            "residuals": {
                "skew": self.skew_residual,
                "htype": self.htype_residual,
                "compatibility": self.compat_residual,
            },
            "tol": self.tol,
            "samples": self.samples,
        }


def validate_htype(group: HTypeGroup, samples: int = 100, seed: int = 0,
                   tol: float = AXIOM_TOL) -> ValidationReport:
    """Check skewness, J_Z^2 = -|Z|^2 I and <J_Z X, Y> = <[X, Y], Z> on random samples."""
    j = group.j_maps
    if j.ndim != 3 or j.shape[1] != j.shape[2] or j.shape[0] != group.k:
        raise StructuralError("j_maps must be a stack of k square matrices")
    rng = np.random.default_rng(seed)
    skew = float(np.abs(j + np.swapaxes(j, 1, 2)).max())

    Z = rng.standard_normal((samples, group.k))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    JZ = group.j_of(Z)
    sq = JZ @ JZ + (np.sum(Z**2, axis=1)[:, None, None] * np.eye(group.dim_v))
    htype = float(np.abs(sq).max())

    X = rng.standard_normal((samples, group.dim_v))
    Y = rng.standard_normal((samples, group.dim_v))
    lhs = np.einsum("nab,nb,na->n", JZ, X, Y)
    rhs = np.einsum("nk,nk->n", bracket_arrays(group, X, Y), Z)
    compat = float(np.abs(lhs - rhs).max())
    return ValidationReport(group.label(), skew, htype, compat, tol=tol, samples=samples)


def bracket_arrays(group: HTypeGroup, X, Y):
    """[X, Y]_i = <J_{e_i} X, Y>, broadcast over leading axes."""
    return np.einsum("kab,...b,...a->...k", group.j_maps, X, Y)


def mul_arrays(group: HTypeGroup, X1, Z1, X2, Z2):
    """(X1, Z1)(X2, Z2) = (X1 + X2, Z1 + Z2 + [X1, X2] / 2)."""
    return X1 + X2, Z1 + Z2 + 0.5 * bracket_arrays(group, X1, X2)


def bracket(group: HTypeGroup, X, Y) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape[-1] != group.dim_v or Y.shape[-1] != group.dim_v:
        raise StructuralError("bracket arguments must lie in v")
    return bracket_arrays(group, X, Y)


def group_mul(group: HTypeGroup, n1: GroupElement, n2: GroupElement) -> GroupElement:
    n1.check(group)
    n2.check(group)
    return GroupElement(*mul_arrays(group, n1.X, n1.Z, n2.X, n2.Z))


def group_inv(group: HTypeGroup, n: GroupElement) -> GroupElement:
    n.check(group)
    return GroupElement(-n.X, -n.Z)


def dilate(group: HTypeGroup, a: float, n: GroupElement) -> GroupElement:
    """delta_a (X, Z) = (a^{1/2} X, a Z)."""
    if not a > 0:
        raise ValueError("dilation parameter must be positive")
    n.check(group)
    return GroupElement(np.sqrt(a) * n.X, a * n.Z)


def na_mul_arrays(group: HTypeGroup, X, Z, a, X2, Z2, a2):
    """Product law of S = NA:
    (X, Z, a)(X', Z', a') = (X + a^{1/2} X', Z + a Z' + a^{1/2} [X, X'] / 2, a a')."""
    a = np.asarray(a, dtype=float)
    ra = np.sqrt(a)[..., None]
    return (
        X + ra * X2,
        Z + a[..., None] * Z2 + 0.5 * ra * bracket_arrays(group, X, X2),
        a * a2,
    )


def na_mul(group: HTypeGroup, p: DomainPoint, q: DomainPoint) -> DomainPoint:
    X, Z, a = na_mul_arrays(group, p.element.X, p.element.Z, p.a, q.element.X, q.element.Z, q.a)
    return DomainPoint(GroupElement(X, Z), float(a))


def gauge(X, Z):
    """Homogeneous gauge ((|X|^2/4)^2 + |Z|^2)^{1/4}; delta_a scales it by a^{1/2}."""
    x2 = np.sum(np.asarray(X) ** 2, axis=-1)
    z2 = np.sum(np.asarray(Z) ** 2, axis=-1)
    return ((x2 / 4) ** 2 + z2) ** 0.25
