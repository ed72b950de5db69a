"""Constitutive-set geometry: membership predicates and convex splittings.

Everything is phrased through the symmetric matrix

    M = m (x) m / rho - U + (p(rho) - q) I.

The constitutive set fixes M = 0 together with the rigid energy flux; the
relaxation replaces M = 0 by negative (semi)definiteness.  Eigenvalues are
never extracted: all classifications go through the polynomial trace/det
equivalences, which keeps every decision inside the quadratic tower.

The set W is the explicitly parameterized subset of the relaxed interior:
its flux freedom is the open polytope spanned by four flux vertices
f^j = (A^j / r^j) sigma^j, and points with one of those fluxes split along
a wave direction into two hull boundary points (the convex splitting used
by the oscillation construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .exactnum import XReal, adjoin_sqrt, as_xreal, sign, xmax
from .model import PHPoint, PressureLaw, pressure, pressure_potential

__all__ = [
    "MatrixM",
    "LambdaClass",
    "WDecomposition",
    "NotInV",
    "HypothesesViolated",
    "SIGMA",
    "matrix_M",
    "lambda_class",
    "in_K",
    "in_V",
    "A_j",
    "r_j",
    "f_j",
    "rigid_flux",
    "flux_deviation",
    "in_W",
    "split_flux_direction",
    "w_flux_vertices",
    "in_Kco_mU",
]


class NotInV(ValueError):
    """Point is not in the open relaxed set V (negative definiteness fails)."""


class HypothesesViolated(ValueError):
    """Inputs do not satisfy the splitting hypotheses."""


#: the four flux directions (diagonals of the square)
SIGMA: tuple[tuple[int, int], ...] = ((1, 1), (-1, -1), (1, -1), (-1, 1))


@dataclass(frozen=True)
class MatrixM:
    """Symmetric 2x2 matrix by entries (m11, m12, m22)."""

    m11: XReal
    m12: XReal
    m22: XReal

    def trace(self) -> XReal:
        return self.m11 + self.m22

    def det(self) -> XReal:
        return self.m11 * self.m22 - self.m12 * self.m12

    def quad_form(self, v: tuple[XReal, XReal]) -> XReal:
        return (self.m11 * v[0] * v[0] + 2 * self.m12 * v[0] * v[1]
                + self.m22 * v[1] * v[1])


class LambdaClass(Enum):
    NEG_DEF = "NegDef"
    NEG_SEMI_DEF_SINGULAR = "NegSemiDefSingular"
    POS_PART = "Indefinite/PosPart"


def matrix_M(law: PressureLaw, rho: XReal, z: PHPoint) -> MatrixM:
    """M = m (x) m / rho - U + (p(rho) - q) I for the phase point z."""
    rho = as_xreal(rho)
    p = pressure(law, rho)
    shift = p - z.q
    return MatrixM(
        m11=z.m[0] * z.m[0] / rho - z.u11 + shift,
        m12=z.m[0] * z.m[1] / rho - z.u12,
        m22=z.m[1] * z.m[1] / rho + z.u11 + shift,
    )


def lambda_class(M: MatrixM) -> LambdaClass:
    """Sign class of the largest eigenvalue, via trace/det only."""
    tr = sign(M.trace())
    dt = sign(M.det())
    if tr < 0 and dt > 0:
        return LambdaClass.NEG_DEF
    if tr <= 0 and dt == 0:
        return LambdaClass.NEG_SEMI_DEF_SINGULAR
    return LambdaClass.POS_PART


def rigid_flux(law: PressureLaw, rho: XReal, z: PHPoint) -> tuple[XReal, XReal]:
    """The energy flux forced on constitutive points: (q + P)/rho * m."""
    scale = (z.q + pressure_potential(law, rho)) / rho
    return (scale * z.m[0], scale * z.m[1])


def flux_deviation(law: PressureLaw, rho: XReal, z: PHPoint) -> tuple[XReal, XReal]:
    rf = rigid_flux(law, rho, z)
    return (z.F[0] - rf[0], z.F[1] - rf[1])


def in_K(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint) -> bool:
    """Membership in the constitutive set: exact nonlinearity plus q <= Q."""
    rho, Q = as_xreal(rho), as_xreal(Q)
    p = pressure(law, rho)
    # momentum-flux identity, componentwise
    if sign(z.u11 + z.q - (z.m[0] * z.m[0] / rho + p)) != 0:
        return False
    if sign(z.u12 - z.m[0] * z.m[1] / rho) != 0:
        return False
    if sign(-z.u11 + z.q - (z.m[1] * z.m[1] / rho + p)) != 0:
        return False
    dev = flux_deviation(law, rho, z)
    if sign(dev[0]) != 0 or sign(dev[1]) != 0:
        return False
    return sign(z.q - Q) <= 0


def in_V(law: PressureLaw, rho: XReal, Q: XReal,
         m: tuple[XReal, XReal], u11: XReal, u12: XReal, q: XReal) -> bool:
    """Open set V: M negative definite and q < Q."""
    z = PHPoint(m, u11, u12, q, (0, 0))
    if lambda_class(matrix_M(law, rho, z)) is not LambdaClass.NEG_DEF:
        return False
    return sign(as_xreal(Q) - as_xreal(q)) > 0


def _require_V(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint) -> MatrixM:
    M = matrix_M(law, rho, z)
    if lambda_class(M) is not LambdaClass.NEG_DEF:
        raise NotInV("matrix is not negative definite")
    if sign(as_xreal(Q) - z.q) <= 0:
        raise NotInV("q >= Q")
    return M


def A_j(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint, j: int) -> XReal:
    """det(M) over the negated quadratic form along sigma^j rotated by 90deg.

    Positive on V; equal in pairs A^1 = A^2 and A^3 = A^4.
    """
    M = _require_V(law, rho, Q, z)
    s1, s2 = SIGMA[j - 1]
    v = (as_xreal(s2), as_xreal(-s1))
    return M.det() / (-M.quad_form(v))


def r_j(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint, j: int) -> XReal:
    """Positive root of the flux-vertex quadratic; exact when the radicand
    admits a square root in the tower."""
    rho, Q = as_xreal(rho), as_xreal(Q)
    A = A_j(law, rho, Q, z, j)
    s1, s2 = SIGMA[j - 1]
    msig = z.m[0] * s1 + z.m[1] * s2
    gap = Q - z.q
    radicand = msig * msig + 4 * rho * A + 4 * rho * gap
    return (-msig + adjoin_sqrt(radicand)) / (2 * gap)


def f_j(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint, j: int) -> tuple[XReal, XReal]:
    """Flux vertex f^j = (A^j / r^j) sigma^j, a positive multiple of sigma^j."""
    A = A_j(law, rho, Q, z, j)
    r = r_j(law, rho, Q, z, j)
    s1, s2 = SIGMA[j - 1]
    c = A / r
    return (c * s1, c * s2)


@dataclass(frozen=True)
class WDecomposition:
    """Witness for W-membership: weights kappa_j > 0 summing to one with
    sum kappa_j f^j equal to the flux deviation."""

    kappa: tuple[XReal, XReal, XReal, XReal]
    vertices: tuple[tuple[XReal, XReal], ...]


def in_W(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint) -> tuple[bool, WDecomposition | None]:
    """W-membership with a constructive witness.

    In the diagonal flux coordinates a = (v1+v2)/2, b = (v1-v2)/2 and with
    vertex scales c_j = A^j/r^j, the polytope condition collapses to

        max(a/c1, -a/c2, 0) + max(b/c3, -b/c4, 0) < 1,

    and any s strictly inside the remaining interval yields strictly
    positive weights in closed form; we take the midpoint.
    """
    rho, Q = as_xreal(rho), as_xreal(Q)
    try:
        _require_V(law, rho, Q, z)
    except NotInV:
        return False, None
    cs = []
    for j in (1, 2, 3, 4):
        A = A_j(law, rho, Q, z, j)
        r = r_j(law, rho, Q, z, j)
        cs.append(A / r)
    c1, c2, c3, c4 = cs
    v = flux_deviation(law, rho, z)
    a = (v[0] + v[1]) / 2
    b = (v[0] - v[1]) / 2
    lo = xmax(a / c1, (-1) * a / c2, 0)
    hi = xmax(b / c3, (-1) * b / c4, 0)
    if sign(1 - lo - hi) <= 0:
        return False, None
    s = (lo + (1 - hi)) / 2
    k1 = (a + s * c2) / (c1 + c2)
    k2 = s - k1
    k3 = (b + (1 - s) * c4) / (c3 + c4)
    k4 = (1 - s) - k3
    vertices = tuple(f_j(law, rho, Q, z, j) for j in (1, 2, 3, 4))
    return True, WDecomposition(kappa=(k1, k2, k3, k4), vertices=vertices)


def split_flux_direction(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint,
                         j: int) -> tuple[XReal, PHPoint, XReal, PHPoint, PHPoint]:
    """Split a vertex-flux point into a convex pair of boundary points.

    Requires M(z) negative definite, q < Q and flux deviation exactly f^j.
    Returns (tau1, z1, tau2, z2, zhat) with z = tau1 z1 + tau2 z2,
    z_{1,2} = z + mu_{-,+} zhat, and both endpoints on the hull boundary
    with rigid flux; mu_+ equals Q - q.
    """
    rho, Q = as_xreal(rho), as_xreal(Q)
    M = matrix_M(law, rho, z)
    if lambda_class(M) is not LambdaClass.NEG_DEF:
        raise HypothesesViolated("matrix not negative definite")
    if sign(Q - z.q) <= 0:
        raise HypothesesViolated("q >= Q")
    dev = flux_deviation(law, rho, z)
    fv = f_j(law, rho, Q, z, j)
    if sign(dev[0] - fv[0]) != 0 or sign(dev[1] - fv[1]) != 0:
        raise HypothesesViolated(f"flux deviation is not f^{j}")

    A = A_j(law, rho, Q, z, j)
    r = r_j(law, rho, Q, z, j)
    s1, s2 = SIGMA[j - 1]
    msig = z.m[0] * s1 + z.m[1] * s2
    gap = Q - z.q
    base = rho / r - msig
    # the mu radicand 4 rho A + base^2 is the square of 2 r (Q-q) - base,
    # which the vertex quadratic makes nonnegative; no nested radical needed
    sqrt_term = 2 * r * gap - base
    mu_minus = (base - sqrt_term) / (2 * r)
    mu_plus = gap

    P = pressure_potential(law, rho)
    zhat = PHPoint(
        m=(r * s1, r * s2),
        u11=(z.m[0] * s1 - z.m[1] * s2) * r / rho,
        u12=as_xreal(s1 * s2),
        q=1,
        F=(z.m[0] / rho + ((z.q + P) / rho * r + base / rho) * s1,
           z.m[1] / rho + ((z.q + P) / rho * r + base / rho) * s2),
    )
    z1 = z + mu_minus * zhat
    z2 = z + mu_plus * zhat
    span = mu_plus - mu_minus
    tau1 = mu_plus / span
    tau2 = (-1) * mu_minus / span
    return tau1, z1, tau2, z2, zhat


def w_flux_vertices(law: PressureLaw, rho: XReal, Q: XReal, z: PHPoint) -> tuple[PHPoint, ...]:
    """The four vertex-flux companions of a W-point: same (m, U, q), flux
    moved to rigid + f^j.  Their kappa-weighted barycenter is z."""
    rho, Q = as_xreal(rho), as_xreal(Q)
    rf = rigid_flux(law, rho, z)
    out = []
    for j in (1, 2, 3, 4):
        fv = f_j(law, rho, Q, z, j)
        out.append(PHPoint(z.m, z.u11, z.u12, z.q, (rf[0] + fv[0], rf[1] + fv[1])))
    return tuple(out)


def in_Kco_mU(law: PressureLaw, rho: XReal, q: XReal,
              m: tuple[XReal, XReal], u11: XReal, u12: XReal) -> bool:
    """Hull membership in the (m, U) slice at fixed rho and q:
    lambda_max(M) <= 0, i.e. trace <= 0 and det >= 0."""
    z = PHPoint(m, u11, u12, q, (0, 0))
    M = matrix_M(law, as_xreal(rho), z)
    return sign(M.trace()) <= 0 and sign(M.det()) >= 0
