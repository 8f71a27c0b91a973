"""Numerical periods of the elliptic family and the period-map machinery.

The period matrix of a curve in the family collects the integrals of dx/y
and x dx/y over a symplectic cycle basis, scaled by 1/sqrt(2*pi*i); its
inverse is expressed through Eisenstein values at the cycle ratio.  All
branch and sign freedoms in this file are pinned by the exact round trip
inverse_map(period_matrix(t)) = t; see the individual docstrings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BranchAmbiguity, DegenerateCurve, NotConvergent
from .forms import GEN_SCALE, QTAIL_GUARD, default_order
from .qseries import eisenstein

TWO_PI_I = 2j * math.pi

# Principal square root of 2*pi*i.  The matrix prefactor multiplies by a
# further i, i.e. the effective root is sqrt(2*pi)*exp(-i*pi/4): with the
# principal branch alone the round trip returns (-t0, t1, -t2, -t3).
SQRT_2PI_I = cmath.sqrt(TWO_PI_I)
PM_PREFACTOR = 1j / SQRT_2PI_I

# Lattice Eisenstein constants: g2 = (4 pi^4 / 3) E4(tau) / w2^4 and
# g3 = (8 pi^6 / 27) E6(tau) / w2^6 for the lattice Z w1 + Z w2.
_G2_LATTICE = 4 * math.pi**4 / 3
_G3_LATTICE = 8 * math.pi**6 / 27

_OMEGA3 = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class ParamPoint:
    """A parameter vector t with nonvanishing discriminant."""

    t0: complex
    t1: complex
    t2: complex
    t3: complex

    def __post_init__(self):
        if self.discriminant() == 0:
            raise DegenerateCurve("discriminant vanishes at %r" % (self.as_tuple(),))

    def discriminant(self) -> complex:
        return self.t0 * (27 * self.t0 * self.t3**2 - self.t2**3)

    def as_tuple(self):
        return (self.t0, self.t1, self.t2, self.t3)


@dataclass(frozen=True)
class PeriodPoint:
    """A 2x2 complex matrix [[x1, x2], [x3, x4]] with Im(x1 conj(x3)) > 0."""

    x1: complex
    x2: complex
    x3: complex
    x4: complex

    def __post_init__(self):
        if not (self.x1 * self.x3.conjugate()).imag > 0:
            raise ValueError("point is outside the period domain: Im(x1 conj x3) <= 0")

    def det(self) -> complex:
        return self.x1 * self.x4 - self.x2 * self.x3

    def as_tuple(self):
        return (self.x1, self.x2, self.x3, self.x4)

    def left_mul(self, A) -> "PeriodPoint":
        """Left action by an integer matrix ((a, b), (c, d))."""
        (a, b), (c, d) = A
        return PeriodPoint(
            a * self.x1 + b * self.x3,
            a * self.x2 + b * self.x4,
            c * self.x1 + d * self.x3,
            c * self.x2 + d * self.x4,
        )

    def right_mul(self, g) -> "PeriodPoint":
        """Right action by a group element [[k1, k3], [0, k2]]."""
        k1, k2, k3 = complex(g.k1), complex(g.k2), complex(g.k3)
        return PeriodPoint(
            self.x1 * k1,
            self.x1 * k3 + self.x2 * k2,
            self.x3 * k1,
            self.x3 * k3 + self.x4 * k2,
        )


def embed_upper_half(z: complex) -> PeriodPoint:
    """The standard embedding z -> [[z, -1], [1, 0]] of the upper half plane."""
    return PeriodPoint(z, -1.0, 1.0, 0.0)


def sl2z_reduce(z: complex):
    """Reduce z to the fundamental domain |Re| <= 1/2, |z| >= 1.

    Returns (A, z') with A integral of determinant 1 and z' = Az.  Boundary
    ties go to Re(z') >= 0: points with Re = -1/2 are translated, points on
    |z| = 1 with negative real part are inverted.
    """
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    a, b, c, d = 1, 0, 0, 1
    zz = complex(z)
    eps = 1e-12
    for _ in range(2000):
        n = math.floor(zz.real + 0.5)
        if n:
            a, b = a - n * c, b - n * d
            zz = complex(zz.real - n, zz.imag)
        if abs(zz) < 1 - eps:
            a, b, c, d = -c, -d, a, b
            zz = -1 / zz
        else:
            break
    else:  # pragma: no cover
        raise ArithmeticError("fundamental domain reduction did not terminate")
    if zz.real <= -0.5 + eps:
        a, b = a + c, b + d
        zz = complex(zz.real + 1, zz.imag)
    if abs(abs(zz) - 1) <= eps and zz.real < -eps:
        a, b, c, d = -c, -d, a, b
        zz = -1 / zz
    A = ((a, b), (c, d))
    return A, (a * z + b) / (c * z + d)


def agm(a: complex, b: complex) -> complex:
    """Optimal arithmetic-geometric mean for complex arguments.

    At each step the square root is chosen so that |a' - b'| <= |a' + b'|,
    with ties broken toward Im(b'/a') > 0; this keeps the iteration on the
    branch that yields an actual period.
    """
    if a == 0 or b == 0:
        return 0j
    if abs(a - b) > abs(a + b):
        b = -b
    for _ in range(200):
        a1 = (a + b) / 2
        b1 = cmath.sqrt(a * b)
        if abs(a1 - b1) > abs(a1 + b1):
            b1 = -b1
        elif abs(abs(a1 - b1) - abs(a1 + b1)) < 1e-14 * abs(a1 + b1):
            if (b1 / a1).imag < 0:
                b1 = -b1
        a, b = a1, b1
        if abs(a - b) <= 1e-17 * abs(a):
            break
    return (a + b) / 2


def _cubic_roots(g2c: complex, g3c: complex):
    """Roots of 4 w^3 - g2 w - g3 via Cardano with a stable branch choice."""
    p = -g2c / 4
    q = -g3c / 4
    r = cmath.sqrt(q * q / 4 + p**3 / 27)
    u3 = -q / 2 + r
    if abs(u3) < abs(-q / 2 - r):
        u3 = -q / 2 - r
    if u3 == 0:
        return [0j, 0j, 0j]
    u = u3 ** (1 / 3)
    roots = []
    for k in range(3):
        uk = u * _OMEGA3**k
        roots.append(uk - p / (3 * uk))
    return roots


@lru_cache(maxsize=None)
def _eis_float(k: int, order: int):
    return tuple(float(c) for c in eisenstein(k, order).coeffs)


def _check_tail(q: complex, order: int):
    if abs(q) ** order >= QTAIL_GUARD:
        raise NotConvergent("|q|=%g too large for series order %d" % (abs(q), order))


def _eis_value(k: int, tau: complex, order: int) -> complex:
    q = cmath.exp(TWO_PI_I * tau)
    _check_tail(q, order)
    acc = 0j
    for c in reversed(_eis_float(k, order)):
        acc = acc * q + c
    return acc


# u^(m/2) with u = 2 pi i / 12; generator values are u^k * scale_k * E_k.
_U = TWO_PI_I / 12


def _g_value(k: int, z: complex, order: int) -> complex:
    """Analytically normalized Eisenstein value of weight 2k at z."""
    return _U**k * GEN_SCALE[k] * _eis_value(k, z, order)


def _lattice_invariants(w1: complex, w2: complex, order: int):
    """(g2, g3) of the lattice Z w1 + Z w2, via series at the reduced ratio."""
    A, tau = sl2z_reduce(w1 / w2)
    (a, b), (c, d) = A
    w2r = c * w1 + d * w2
    g2l = _G2_LATTICE * _eis_value(2, tau, order) / w2r**4
    g3l = _G3_LATTICE * _eis_value(3, tau, order) / w2r**6
    return g2l, g3l


def _basis_matches(w1, w2, g2c, g3c, order, tol) -> bool:
    try:
        g2l, g3l = _lattice_invariants(w1, w2, order)
    except (NotConvergent, ValueError, ZeroDivisionError):
        return False
    scale = max(abs(g2c), abs(g3c), 1.0)
    return abs(g2l - g2c) <= tol * scale and abs(g3l - g3c) <= tol * scale


def _reduce_basis(w1, w2):
    A, _ = sl2z_reduce(w1 / w2)
    (a, b), (c, d) = A
    return a * w1 + b * w2, c * w1 + d * w2


def weierstrass_periods(g2c: complex, g3c: complex, order: int | None = None):
    """A period lattice basis (w1, w2) of dx/y on y^2 = 4x^3 - g2 x - g3.

    Computed by optimal-AGM iteration on the root differences; the returned
    basis has its ratio in the fundamental domain (so Im(w1/w2) > 0), and is
    certified by reproducing (g2, g3) through the lattice Eisenstein series.
    Quadrature between branch points backs the AGM up if no candidate pair
    certifies.
    """
    if order is None:
        order = default_order()
    if g2c**3 - 27 * g3c**2 == 0:
        raise DegenerateCurve("g2^3 - 27 g3^2 = 0: the cubic has a double root")
    g2c, g3c = complex(g2c), complex(g3c)
    e = _cubic_roots(g2c, g3c)
    cands = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        m = agm(cmath.sqrt(e[i] - e[j]), cmath.sqrt(e[i] - e[k]))
        if m != 0:
            cands.append(math.pi / m)
    tol = 1e-8
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            w1, w2 = cands[i], cands[j]
            ratio = w1 / w2
            if abs(ratio.imag) < 1e-12:
                continue
            if ratio.imag < 0:
                w1, w2 = w2, w1
            w1, w2 = _reduce_basis(w1, w2)
            if _basis_matches(w1, w2, g2c, g3c, order, tol):
                return w1, w2
    for w1, w2, _, _ in _quadrature_bases(g2c, g3c):
        w1, w2 = _reduce_basis(w1, w2)
        if _basis_matches(w1, w2, g2c, g3c, order, 1e-6):
            return w1, w2
    raise BranchAmbiguity("no certified period basis found for (%r, %r)" % (g2c, g3c))


def quasi_periods(w1: complex, w2: complex, order: int | None = None):
    """Quasi-periods (e1, e2) of the zeta function for the basis (w1, w2).

    e2 = (pi^2 / 3) E_1(w1/w2) / w2 on the normalized lattice, and e1 comes
    from the Legendre relation, whose sign for Im(w1/w2) > 0 is
    e1 w2 - e2 w1 = -2 pi i.
    """
    if order is None:
        order = default_order()
    tau = w1 / w2
    if not tau.imag > 0:
        raise ValueError("need Im(w1/w2) > 0")
    e2 = (math.pi**2 / 3) * _eis_value(1, tau, order) / w2
    e1 = (e2 * w1 - TWO_PI_I) / w2
    return e1, e2


# --- Gauss-Legendre quadrature (used as fallback and by test oracles) ----


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    """Nodes and weights on [-1, 1], by Newton iteration on P_n."""
    nodes, weights = [], []
    for i in range(1, n + 1):
        x = math.cos(math.pi * (i - 0.25) / (n + 0.5))
        for _ in range(100):
            p0, p1 = 1.0, x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < 1e-16:
                break
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def cycle_integrals(e_pair_base: complex, e_pair_end: complex, e_other: complex, n: int = 96):
    """Integrals of (dw/y, w dw/y) over the cycle around two branch points.

    The curve is y^2 = 4 (w - e1)(w - e2)(w - e3); the cycle encircles the
    segment from e_pair_base to e_pair_end.  The square-root branch is
    continued node to node, so the overall sign is a homology orientation
    choice (consistent between the two returned integrals).
    """
    nodes, weights = _gauss_legendre(n)
    span = e_pair_end - e_pair_base
    p_acc = 0j
    q_acc = 0j
    prev = None
    for x, wt in zip(nodes, weights):
        theta = (x + 1) * math.pi / 4  # map [-1, 1] -> [0, pi/2]
        s = math.sin(theta) ** 2
        w = e_pair_base + s * span
        r = cmath.sqrt(w - e_other)
        if prev is not None and (prev.conjugate() * r).real < 0:
            r = -r
        prev = r
        p_acc += wt / r
        q_acc += wt * w / r
    scale = -2j * math.pi / 4  # the -2i from the branch algebra, d(theta) measure
    return scale * p_acc, scale * q_acc


def quadrature_cycles(g2c: complex, g3c: complex, n: int = 160):
    """The two branch-point cycles best separated from the third root.

    Returns [(P, Q), (P, Q)] with P = integral of dw/y and Q = integral of
    w dw/y over each cycle; the classes of any two distinct cycles form a
    homology basis.  The cycle through the two outermost of three collinear
    roots is unusable (the branch continuation crosses the third root), so
    cycles are ranked by the third root's clearance from the segment.
    """
    e = _cubic_roots(g2c, g3c)
    ranked = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        mid = (e[j] + e[k]) / 2
        span = abs(e[k] - e[j])
        clearance = abs(e[i] - mid) / max(span, 1e-300)
        ranked.append((clearance, j, k, i))
    ranked.sort(reverse=True)
    out = []
    for _, j, k, i in ranked[:2]:
        out.append(cycle_integrals(e[j], e[k], e[i], n=n))
    return out


def _quadrature_bases(g2c: complex, g3c: complex):
    """Candidate (w1, w2, eta1, eta2) tuples from the quadrature cycles."""
    (p1, q1), (p2, q2) = quadrature_cycles(g2c, g3c)
    if abs((p1 / p2).imag) < 1e-9:
        return []
    if (p1 / p2).imag < 0:
        p1, p2, q1, q2 = p2, p1, q2, q1
    # periods of x dx/y are minus the zeta quasi-periods
    return [(p1, p2, -q1, -q2)]


# --- the period map and its inverse ---------------------------------------


def _as_param(t) -> ParamPoint:
    if isinstance(t, ParamPoint):
        return t
    return ParamPoint(*(complex(v) for v in t))


def _assemble(t: ParamPoint, c: complex, w1, w2, e1, e2) -> PeriodPoint:
    inv = 1 / c
    return PeriodPoint(
        PM_PREFACTOR * w1 * inv,
        PM_PREFACTOR * (t.t1 * w1 * inv - e1 * inv * inv),
        PM_PREFACTOR * w2 * inv,
        PM_PREFACTOR * (t.t1 * w2 * inv - e2 * inv * inv),
    )


def _roundtrip_residual(x: PeriodPoint, t: ParamPoint, order: int) -> float:
    try:
        back = inverse_map(x, order)
    except (NotConvergent, ValueError, ZeroDivisionError):
        return math.inf
    ts = t.as_tuple()
    bs = back.as_tuple()
    scale = max(1.0, max(abs(v) for v in ts))
    return max(abs(u - v) for u, v in zip(ts, bs)) / scale


def period_matrix(t, order: int | None = None) -> PeriodPoint:
    """The period point of the curve y^2 = 4 t0 (x-t1)^3 - t2 (x-t1) - t3.

    Reduction to Weierstrass form scales by a cube root of t0; the row basis
    is oriented so that Im(x1 conj x3) > 0, the columns are the integrals of
    dx/y and x dx/y, and everything is divided by the pinned branch of
    sqrt(2 pi i).  Each cube-root branch is accepted only if the round trip
    through inverse_map reproduces t; if all fail, direct quadrature of both
    differentials is used before giving up.
    """
    if order is None:
        order = default_order()
    t = _as_param(t)
    if t.t0 == 0:
        raise DegenerateCurve("t0 = 0")
    c0 = cmath.exp(cmath.log(t.t0) / 3)
    residuals = []
    for c in (c0, c0 * _OMEGA3, c0 * _OMEGA3**2):
        try:
            w1, w2 = weierstrass_periods(t.t2 / c, t.t3, order)
            e1, e2 = quasi_periods(w1, w2, order)
            x = _assemble(t, c, w1, w2, e1, e2)
        except (BranchAmbiguity, NotConvergent, DegenerateCurve, ValueError):
            continue
        res = _roundtrip_residual(x, t, order)
        residuals.append(res)
        if res < 1e-7:
            return x
    for w1, w2, e1, e2 in _quadrature_bases(t.t2 / c0, t.t3):
        try:
            x = _assemble(t, c0, w1, w2, e1, e2)
        except ValueError:
            continue
        if _roundtrip_residual(x, t, order) < 1e-6:
            return x
    raise BranchAmbiguity(
        "no cube-root branch nor quadrature passed the round trip at %r (residuals %r)"
        % (t.as_tuple(), residuals)
    )


def inverse_map(x, order: int | None = None) -> ParamPoint:
    """The inverse of the period map, through Eisenstein values.

    With z = x1/x3 reduced to the fundamental domain (the map is invariant
    under the left integral action) and d = det(x):

        t0 = 1/d,
        t1 = d g_1(z)/x3^2 + x4/x3,
        t2 = d g_2(z)/x3^4,
        t3 = d^2 g_3(z)/x3^6.

    The det exponents (i - 1, not 1 - i) are forced by equivariance under
    the right group action.
    """
    if order is None:
        order = default_order()
    if isinstance(x, PeriodPoint):
        x1, x2, x3, x4 = x.as_tuple()
    else:
        x1, x2, x3, x4 = (complex(v) for v in x)
    if x3 == 0:
        raise ValueError("inverse map needs x3 != 0")
    z = x1 / x3
    if not z.imag > 0:
        raise ValueError("x1/x3 must lie in the upper half plane")
    A, _ = sl2z_reduce(z)
    (a, b), (c, d) = A
    y1, y3 = a * x1 + b * x3, c * x1 + d * x3
    y2, y4 = a * x2 + b * x4, c * x2 + d * x4
    zr = y1 / y3
    det = y1 * y4 - y2 * y3
    g1v = _g_value(1, zr, order)
    g2v = _g_value(2, zr, order)
    g3v = _g_value(3, zr, order)
    return ParamPoint(
        1 / det,
        det * g1v / y3**2 + y4 / y3,
        det * g2v / y3**4,
        det * det * g3v / y3**6,
    )


def b_functions(x):
    """The invariant functions B1 = Im(x1 conj x3), B2 = Im(x2 conj x4),
    B3 = x1 conj(x4) - conj(x2) x3.

    The conjugation placement in B3 is the one under which all three
    transformation laws hold and |B3| = 1 on the slice {B2 = 0, det = 1}.
    """
    if isinstance(x, PeriodPoint):
        x1, x2, x3, x4 = x.as_tuple()
    else:
        x1, x2, x3, x4 = (complex(v) for v in x)
    b1 = (x1 * x3.conjugate()).imag
    b2 = (x2 * x4.conjugate()).imag
    b3 = x1 * x4.conjugate() - x2.conjugate() * x3
    return b1, b2, b3


def theorem2_check(z: complex, g, order: int | None = None):
    """Residual report for the coefficient-space B-function identities.

    At t = (1, g_1(z), g_2(z), g_3(z)): B1 = Im(z), B2 = 0, B3 = 1; and the
    three transformation laws under the right action by g.  Returns a dict
    of named absolute residuals.
    """
    if order is None:
        order = default_order()
    t = ParamPoint(
        1.0, _g_value(1, z, order), _g_value(2, z, order), _g_value(3, z, order)
    )
    b1, b2, b3 = b_functions(period_matrix(t, order))
    from .gaussmanin import act

    tg = _as_param(act(t.as_tuple(), g))
    c1, c2, c3 = b_functions(period_matrix(tg, order))
    k1, k2, k3 = complex(g.k1), complex(g.k2), complex(g.k3)
    return {
        "B1": abs(b1 - z.imag),
        "B2": abs(b2),
        "B3": abs(b3 - 1),
        "B1_law": abs(c1 - b1 * abs(k1) ** 2),
        "B2_law": abs(
            c2 - (b1 * abs(k3) ** 2 + b2 * abs(k2) ** 2 + (b3 * k3 * k2.conjugate()).imag)
        ),
        "B3_law": abs(c3 - (b3 * k1 * k2.conjugate() + 2j * k1 * k3.conjugate() * b1)),
    }


def i_ratio(t, order: int | None = None) -> complex:
    """The ratio of the x dx/y period to the dx/y period on the first cycle.

    The sqrt(2 pi i) prefactors cancel, so this is an intrinsic function of
    the curve (up to the cycle choice).
    """
    x = period_matrix(t, order)
    return x.x2 / x.x1
