"""Exact symbolic layer for the four-parameter elliptic family.

The family is y^2 = 4 t0 (x - t1)^3 - t2 (x - t1) - t3 with discriminant
t0 (27 t0 t3^2 - t2^3).  This module holds the connection matrices A_i of
the differential system on the periods, the right action of the Borel
group on parameters, the j function, and the coordinate change to the
depressed-quartic parameter chart, all over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateCurve
from .mpoly import MPoly

NVARS = 4
T0, T1, T2, T3 = (MPoly.variable(i, NVARS) for i in range(NVARS))

TPoly = MPoly  # parameter-space polynomials are 4-variable MPoly values


def discriminant_poly() -> MPoly:
    return T0 * (27 * T0 * T3**2 - T2**3)


def discriminant(t):
    """Delta(t) = t0 (27 t0 t3^2 - t2^3); exact on rational input."""
    t0, t1, t2, t3 = t
    return t0 * (27 * t0 * t3**2 - t2**3)


@dataclass(frozen=True)
class ConnectionData:
    """The matrices A_i of the connection (sum A_i dt_i) / delta."""

    a0: tuple
    a1: tuple
    a2: tuple
    a3: tuple
    delta: MPoly

    def matrices(self):
        return (self.a0, self.a1, self.a2, self.a3)


@lru_cache(maxsize=1)
def gm_matrices() -> ConnectionData:
    h = Fraction(1, 2)
    q = Fraction(1, 4)
    a0 = (
        (3 * h * T0 * T1 * T2 * T3 - 9 * T0 * T3**2 + q * T2**3, -3 * h * T0 * T2 * T3),
        (
            3 * h * T0 * T1**2 * T2 * T3 + 9 * T0 * T1 * T3**2 - h * T1 * T2**3
            + Fraction(1, 8) * T2**2 * T3,
            -3 * h * T0 * T1 * T2 * T3 - 18 * T0 * T3**2 + 3 * q * T2**3,
        ),
    )
    zero = MPoly(NVARS, {})
    a1 = ((zero, zero), (27 * T0**2 * T3**2 - T0 * T2**3, zero))
    a2 = (
        (-9 * h * T0**2 * T1 * T3 + q * T0 * T2**2, 9 * h * T0**2 * T3),
        (
            -9 * h * T0**2 * T1**2 * T3 + h * T0 * T1 * T2**2 - 3 * Fraction(1, 8) * T0 * T2 * T3,
            9 * h * T0**2 * T1 * T3 - q * T0 * T2**2,
        ),
    )
    a3 = (
        (3 * T0**2 * T1 * T2 - 9 * h * T0**2 * T3, -3 * T0**2 * T2),
        (
            3 * T0**2 * T1**2 * T2 - 9 * T0**2 * T1 * T3 + q * T0 * T2**2,
            -3 * T0**2 * T1 * T2 + 9 * h * T0**2 * T3,
        ),
    )
    return ConnectionData(a0, a1, a2, a3, discriminant_poly())


def _mat_mul(x, y):
    return tuple(
        tuple(sum((x[i][k] * y[k][j] for k in range(2)), MPoly(NVARS, {})) for j in range(2))
        for i in range(2)
    )


def _mat_diff(x, i):
    return tuple(tuple(e.diff(i) for e in row) for row in x)


def _mat_scale(p, x):
    return tuple(tuple(p * e for e in row) for row in x)


def _mat_sub(x, y):
    return tuple(tuple(a - b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def flatness_pair(i: int, j: int, conn: ConnectionData | None = None) -> bool:
    """Integrability of the connection in the (t_i, t_j) direction pair.

    Checks delta*(dA_j/dt_i - dA_i/dt_j) - (d(delta)/dt_i A_j - d(delta)/dt_j A_i)
    = A_i A_j - A_j A_i as exact polynomial matrices.
    """
    conn = conn or gm_matrices()
    mats = conn.matrices()
    delta = conn.delta
    lhs = _mat_sub(
        _mat_scale(delta, _mat_sub(_mat_diff(mats[j], i), _mat_diff(mats[i], j))),
        _mat_sub(_mat_scale(delta.diff(i), mats[j]), _mat_scale(delta.diff(j), mats[i])),
    )
    rhs = _mat_sub(_mat_mul(mats[i], mats[j]), _mat_mul(mats[j], mats[i]))
    return all(lhs[r][c] == rhs[r][c] for r in range(2) for c in range(2))


def flatness_check(conn: ConnectionData | None = None) -> bool:
    """Exact flatness of the connection over all six coordinate pairs."""
    return all(flatness_pair(i, j, conn) for i in range(4) for j in range(i + 1, 4))


def _det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = MPoly(NVARS, {})
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def period_jacobian_matrix():
    """The 4x4 matrix whose i-th row is A_{i-1} flattened row-major.

    This row assembly (entries [a11, a12, a21, a22] of each A) is the one
    whose determinant equals (3/4) t0 delta^3; stacking the columns instead
    flips the sign of the determinant.
    """
    rows = []
    for a in gm_matrices().matrices():
        rows.append([a[0][0], a[0][1], a[1][0], a[1][1]])
    return rows


def detB_check() -> bool:
    """det(B) = (3/4) t0 delta^3, exactly."""
    b = period_jacobian_matrix()
    target = Fraction(3, 4) * T0 * discriminant_poly() ** 3
    return _det(b) == target


@dataclass(frozen=True)
class GroupElement:
    """Upper-triangular matrix [[k1, k3], [0, k2]] with k1 k2 invertible.

    Entries may be numbers or MPoly values (for symbolic identities); k1 and
    k2 must be invertible (nonzero numbers, or monomials).
    """

    k1: object
    k2: object
    k3: object

    def __post_init__(self):
        for k in (self.k1, self.k2):
            if isinstance(k, MPoly):
                if k.is_zero():
                    raise ValueError("k1 and k2 must be invertible")
            elif not k:
                raise ValueError("k1 and k2 must be invertible")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.k1 * other.k1,
            self.k2 * other.k2,
            self.k1 * other.k3 + self.k3 * other.k2,
        )

    def inverse(self) -> "GroupElement":
        det = self.k1 * self.k2
        return GroupElement(self.k2 / det, self.k1 / det, -self.k3 / det)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1, 1, 0)


def act(t, g: GroupElement):
    """Right action on parameters:
    t . g = (t0/(k1 k2), (t1 k2 + k3)/k1, t2 k2/k1^3, t3 k2^2/k1^4).

    Exact on exact inputs; works for numeric and symbolic entries alike.
    """
    t0, t1, t2, t3 = t
    k1, k2, k3 = g.k1, g.k2, g.k3
    return (
        t0 / (k1 * k2),
        (t1 * k2 + k3) / k1,
        t2 * k2 / k1**3,
        t3 * k2**2 / k1**4,
    )


def j_param(t):
    """j(t) = t2^3 / (27 t0 t3^2 - t2^3); invariant under the group action."""
    t0, t1, t2, t3 = t
    den = 27 * t0 * t3**2 - t2**3
    if not den:
        raise DegenerateCurve("j undefined: 27 t0 t3^2 = t2^3")
    return t2**3 / den


def alpha_map(t):
    """Coordinate change to y^2 = 4 t0 x^3 + t1 x^2 + t2 x + t3 parameters:
    (t0, t1, t2, t3) -> (t0, 12 t0 t1, -12 t0 t1^2 + t2, 4 t0 t1^3 - t2 t1 + t3).
    """
    t0, t1, t2, t3 = t
    return (
        t0,
        12 * t0 * t1,
        -12 * t0 * t1**2 + t2,
        4 * t0 * t1**3 - t2 * t1 + t3,
    )


def alpha_inverse(s):
    """Inverse of alpha_map; triangular back-substitution, needs s0 != 0."""
    s0, s1, s2, s3 = s
    if not s0:
        raise DegenerateCurve("alpha is not invertible at t0 = 0")
    t1 = s1 / (12 * s0)
    t2 = s2 + 12 * s0 * t1**2
    t3 = s3 - 4 * s0 * t1**3 + t2 * t1
    return (s0, t1, t2, t3)


def discriminant_second(s):
    """Discriminant (times t0) of the second family,
    t0 (432 t0^2 t3^2 + 72 t0 t1 t2 t3 - 16 t0 t2^3 + 4 t1^3 t3 - t1^2 t2^2).
    """
    s0, s1, s2, s3 = s
    return s0 * (
        432 * s0**2 * s3**2
        + 72 * s0 * s1 * s2 * s3
        - 16 * s0 * s2**3
        + 4 * s1**3 * s3
        - s1**2 * s2**2
    )


def _ramanujan_derive(p: MPoly) -> MPoly:
    # Derivation on C[t1, t2, t3] (3 variables) induced by the weight-raising
    # system t1' = t1^2 - t2/12, t2' = 4 t1 t2 - 6 t3, t3' = 6 t1 t3 - t2^2/3.
    x1 = MPoly.variable(0, 3)
    x2 = MPoly.variable(1, 3)
    x3 = MPoly.variable(2, 3)
    images = (
        x1**2 - x2 / 12,
        4 * x1 * x2 - 6 * x3,
        6 * x1 * x3 - x2**2 / 3,
    )
    total = MPoly(3, {})
    for i in range(3):
        total = total + p.diff(i) * images[i]
    return total


def vectorfield_pushforward_check() -> bool:
    """The weight-raising field pushes through alpha (on the t0 = 1 slice)
    to s1' = -s2, s2' = -6 s3, s3' = s1 s3 - s2^2 / 4, exactly.
    """
    x1 = MPoly.variable(0, 3)
    x2 = MPoly.variable(1, 3)
    x3 = MPoly.variable(2, 3)
    s1 = 12 * x1
    s2 = -12 * x1**2 + x2
    s3 = 4 * x1**3 - x2 * x1 + x3
    checks = (
        _ramanujan_derive(s1) == -s2,
        _ramanujan_derive(s2) == -6 * s3,
        _ramanujan_derive(s3) == s1 * s3 - s2**2 / 4,
    )
    return all(checks)
