"""Exact real arithmetic for certified inequality checking.

Three carriers, all immutable:

* ``Rational`` -- arbitrary-precision fractions.
* ``QuadExt`` -- elements of a real quadratic tower Q(sqrt(d1), sqrt(d2))
  with at most two radicands, stored on the basis
  (1, sqrt(d1), sqrt(d2), sqrt(d1*d2)).
* ``IntervalExpr`` -- an expression DAG over +, -, *, /, sqrt, log and
  rational powers, evaluated with outward-rounded dyadic intervals at
  adaptive precision.

Sign queries are exact for ``Rational``/``QuadExt`` and certified for
``IntervalExpr``: the enclosure is refined with doubling precision until it
excludes zero (or is a single point), and ``Inconclusive`` is raised once the
precision cap is reached.  A wrong sign is never returned.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "XReal",
    "Rational",
    "QuadExt",
    "IntervalExpr",
    "Inconclusive",
    "RadicandMismatch",
    "NegativeRadicand",
    "as_xreal",
    "sign",
    "adjoin_sqrt",
    "sqrt_int_decompose",
    "default_precision_cap",
    "set_precision_cap",
    "xreal_to_json",
    "xreal_from_json",
]

_STARTING_PRECISION = 64
_DEFAULT_CAP = 4096


class Inconclusive(Exception):
    """Sign/comparison could not be certified within the precision cap."""

    def __init__(self, precision: int, message: str = ""):
        self.precision = precision
        super().__init__(message or f"inconclusive at precision {precision} bits")


class RadicandMismatch(ValueError):
    """Two QuadExt values live in incompatible quadratic towers."""


class NegativeRadicand(ValueError):
    """Square root of a certified-negative quantity was requested."""


def default_precision_cap() -> int:
    """Current interval precision cap in bits (env WILDFAN_PRECISION_CAP wins)."""
    env = os.environ.get("WILDFAN_PRECISION_CAP")
    if env:
        try:
            return max(_STARTING_PRECISION, int(env))
        except ValueError:
            pass
    return _precision_cap


_precision_cap = _DEFAULT_CAP


def set_precision_cap(bits: int) -> None:
    global _precision_cap
    _precision_cap = max(_STARTING_PRECISION, int(bits))


# ---------------------------------------------------------------------------
# dyadic interval kernel
# ---------------------------------------------------------------------------

def _round_down(x: Fraction, prec: int) -> Fraction:
    return Fraction(x.numerator * (1 << prec) // x.denominator, 1 << prec)


def _round_up(x: Fraction, prec: int) -> Fraction:
    return Fraction(-((-x.numerator) * (1 << prec) // x.denominator), 1 << prec)


def _isqrt_floor(n: int) -> int:
    return math.isqrt(n)


def _isqrt_ceil(n: int) -> int:
    if n <= 0:
        return 0
    s = math.isqrt(n - 1)
    return s + 1


def _iroot_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, integer Newton iteration."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


class _Ival:
    """Closed dyadic interval [lo, hi]; endpoints exact Fractions."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Fraction, hi: Fraction):
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    @staticmethod
    def point(x: Fraction) -> "_Ival":
        return _Ival(x, x)

    def round(self, prec: int) -> "_Ival":
        return _Ival(_round_down(self.lo, prec), _round_up(self.hi, prec))

    def width(self) -> Fraction:
        return self.hi - self.lo

    def intersect(self, other: "_Ival") -> "_Ival":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            # sound outward-rounded enclosures can never become disjoint
            raise ArithmeticError("enclosure refinement produced disjoint intervals")
        return _Ival(lo, hi)

    def __add__(self, other: "_Ival") -> "_Ival":
        return _Ival(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "_Ival") -> "_Ival":
        return _Ival(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "_Ival":
        return _Ival(-self.hi, -self.lo)

    def __mul__(self, other: "_Ival") -> "_Ival":
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return _Ival(min(cands), max(cands))

    def scale(self, c: Fraction) -> "_Ival":
        if c >= 0:
            return _Ival(self.lo * c, self.hi * c)
        return _Ival(self.hi * c, self.lo * c)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def inverse(self) -> "_Ival":
        if self.contains_zero():
            raise ZeroDivisionError("interval straddles zero")
        return _Ival(1 / self.hi, 1 / self.lo)

    def sqrt(self, prec: int) -> "_Ival":
        lo = max(self.lo, Fraction(0))
        if self.hi < 0:
            raise NegativeRadicand(f"sqrt of {self}")
        scale = 1 << (2 * prec)
        nlo = lo.numerator * scale // lo.denominator
        lo_root = Fraction(_isqrt_floor(nlo), 1 << prec)
        nhi = -((-self.hi.numerator) * scale // self.hi.denominator)
        hi_root = Fraction(_isqrt_ceil(nhi), 1 << prec)
        return _Ival(lo_root, hi_root)

    def root(self, k: int, prec: int) -> "_Ival":
        """k-th root for a nonnegative interval."""
        lo = max(self.lo, Fraction(0))
        if self.hi < 0:
            raise NegativeRadicand(f"root of {self}")
        scale = 1 << (k * prec)
        nlo = lo.numerator * scale // lo.denominator
        lo_root = Fraction(_iroot_floor(nlo, k), 1 << prec)
        nhi = -((-self.hi.numerator) * scale // self.hi.denominator)
        r = _iroot_floor(nhi, k)
        if r ** k < nhi:
            r += 1
        return _Ival(lo_root, Fraction(r, 1 << prec))

    def log(self, prec: int) -> "_Ival":
        if self.lo <= 0:
            raise ValueError("log of interval touching zero")
        return _Ival(_ln_down(self.lo, prec), _ln_up(self.hi, prec))


def _sqrt_int_interval(d: int, prec: int) -> _Ival:
    scale = 1 << (2 * prec)
    lo = Fraction(_isqrt_floor(d * scale), 1 << prec)
    hi = Fraction(_isqrt_ceil(d * scale), 1 << prec)
    return _Ival(lo, hi)


def _atanh_series(u: Fraction, prec: int) -> _Ival:
    """Rigorous enclosure of 2*atanh(u) for 0 <= u < 1/2."""
    if u == 0:
        return _Ival.point(Fraction(0))
    # interval-accumulated partial sum plus a geometric tail bound
    work = prec + 16
    eps = Fraction(1, 1 << (prec + 4))
    u2 = u * u
    total = _Ival.point(Fraction(0))
    pw = _Ival.point(u).round(work)
    u2_iv = _Ival.point(u2).round(work)
    k = 0
    while True:
        total = (total + pw.scale(Fraction(1, 2 * k + 1))).round(work)
        k += 1
        pw = (pw * u2_iv).round(work)
        if pw.hi / (2 * k + 1) < eps or k > prec + 64:
            break
    tail_hi = (pw.hi / (2 * k + 1)) / (1 - u2)
    return _Ival(2 * total.lo, 2 * (total.hi + tail_hi)).round(prec + 8)


_LN2_CACHE: dict[int, _Ival] = {}


def _ln2(prec: int) -> _Ival:
    iv = _LN2_CACHE.get(prec)
    if iv is None:
        iv = _atanh_series(Fraction(1, 3), prec)
        _LN2_CACHE[prec] = iv
    return iv


def _ln_enclosure(x: Fraction, prec: int) -> _Ival:
    """Enclosure of ln(x) for x > 0 via range reduction to [1, 2)."""
    if x <= 0:
        raise ValueError("log of nonpositive value")
    e = 0
    m = x
    while m >= 2:
        m /= 2
        e += 1
    while m < 1:
        m *= 2
        e -= 1
    u = (m - 1) / (m + 1)  # in [0, 1/3)
    core = _atanh_series(u, prec)
    if e == 0:
        return core
    return core + _ln2(prec).scale(Fraction(e))


def _ln_down(x: Fraction, prec: int) -> Fraction:
    return _round_down(_ln_enclosure(x, prec).lo, prec)


def _ln_up(x: Fraction, prec: int) -> Fraction:
    return _round_up(_ln_enclosure(x, prec).hi, prec)


# ---------------------------------------------------------------------------
# XReal hierarchy
# ---------------------------------------------------------------------------

XLike = Union["XReal", int, Fraction]


class XReal:
    """Common interface: exact or certified-enclosure real number."""

    __slots__ = ()

    def enclosure(self, prec: int) -> _Ival:
        raise NotImplementedError

    @property
    def is_exact(self) -> bool:
        return True

    # -- arithmetic: subclasses coerce through _binop -----------------------

    @staticmethod
    def _coerce(other: XLike) -> "XReal | None":
        try:
            return as_xreal(other)
        except TypeError:
            return None

    def __add__(self, other: XLike) -> "XReal":
        rhs = self._coerce(other)
        return NotImplemented if rhs is None else _binop(self, rhs, "add")

    def __radd__(self, other: XLike) -> "XReal":
        lhs = self._coerce(other)
        return NotImplemented if lhs is None else _binop(lhs, self, "add")

    def __sub__(self, other: XLike) -> "XReal":
        rhs = self._coerce(other)
        return NotImplemented if rhs is None else _binop(self, rhs, "sub")

    def __rsub__(self, other: XLike) -> "XReal":
        lhs = self._coerce(other)
        return NotImplemented if lhs is None else _binop(lhs, self, "sub")

    def __mul__(self, other: XLike) -> "XReal":
        rhs = self._coerce(other)
        return NotImplemented if rhs is None else _binop(self, rhs, "mul")

    def __rmul__(self, other: XLike) -> "XReal":
        lhs = self._coerce(other)
        return NotImplemented if lhs is None else _binop(lhs, self, "mul")

    def __truediv__(self, other: XLike) -> "XReal":
        rhs = self._coerce(other)
        return NotImplemented if rhs is None else _binop(self, rhs, "div")

    def __rtruediv__(self, other: XLike) -> "XReal":
        lhs = self._coerce(other)
        return NotImplemented if lhs is None else _binop(lhs, self, "div")

    def __pow__(self, n: int) -> "XReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return as_xreal(1) / (self ** (-n))
        out: XReal = Rational(1)
        base: XReal = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self) -> "XReal":
        raise NotImplementedError

    def __pos__(self) -> "XReal":
        return self

    # -- certified comparisons ----------------------------------------------

    def sign(self, precision_cap: int | None = None) -> int:
        return sign(self, precision_cap)

    def __lt__(self, other: XLike) -> bool:
        return sign(self - as_xreal(other)) < 0

    def __le__(self, other: XLike) -> bool:
        return sign(self - as_xreal(other)) <= 0

    def __gt__(self, other: XLike) -> bool:
        return sign(self - as_xreal(other)) > 0

    def __ge__(self, other: XLike) -> bool:
        return sign(self - as_xreal(other)) >= 0

    def __float__(self) -> float:
        iv = self.enclosure(64)
        return float((iv.lo + iv.hi) / 2)


class Rational(XReal):
    """Exact rational number (normalized fraction, positive denominator)."""

    __slots__ = ("value",)

    def __init__(self, numerator: int | Fraction | str | "Rational" = 0,
                 denominator: int | None = None):
        if isinstance(numerator, Rational):
            value = numerator.value
        elif denominator is not None:
            value = Fraction(numerator, denominator)
        else:
            value = Fraction(numerator)
        self.value = value

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def enclosure(self, prec: int) -> _Ival:
        return _Ival.point(self.value).round(prec)

    def __neg__(self) -> "Rational":
        return Rational(-self.value)

    def __repr__(self) -> str:
        return f"Rational({self.value})"

    def __str__(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.value == other
        if isinstance(other, Rational):
            return self.value == other.value
        if isinstance(other, QuadExt):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)


def _squarefree_decompose(n: int, bound: int = 1000) -> tuple[int, int]:
    """n = s*s*d with d free of square factors below `bound` (and not itself
    a perfect square).  Trial division keeps radicands canonical for the
    small numbers that arise here; hidden large square factors do not affect
    correctness of the zero test, only canonicality."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, d = 1, 1
    m = n
    f = 2
    while f * f <= m and f <= bound:
        if m % f == 0:
            count = 0
            while m % f == 0:
                m //= f
                count += 1
            s *= f ** (count // 2)
            if count % 2:
                d *= f
        f += 1 if f == 2 else 2
    # leftover cofactor: pull out a perfect-square part if it is one
    r = _isqrt_floor(m)
    if r * r == m:
        s *= r
    else:
        d *= m
    return s, d


def sqrt_int_decompose(n: int) -> tuple[int, int]:
    """Public wrapper: n = s^2 * d with d the (bounded) square-free part."""
    return _squarefree_decompose(n)


class QuadExt(XReal):
    """Element of Q(sqrt(d1)[, sqrt(d2)]) on the basis of radical products.

    ``radicands`` is a sorted tuple of one or two distinct non-square
    integers > 1; ``coeffs`` has length 2 or 4 and is indexed by the bitmask
    of participating radicands: for two radicands the basis order is
    (1, sqrt(d1), sqrt(d2), sqrt(d1*d2)).
    """

    __slots__ = ("radicands", "coeffs")

    def __init__(self, radicands: Sequence[int], coeffs: Sequence[Fraction | int]):
        rads = tuple(int(d) for d in radicands)
        if not 1 <= len(rads) <= 2:
            raise ValueError("tower supports one or two radicands")
        if any(d <= 1 for d in rads):
            raise ValueError("radicands must be > 1")
        if any(_isqrt_floor(d) ** 2 == d for d in rads):
            raise ValueError("radicands must not be perfect squares")
        if len(rads) == 2:
            if rads[0] == rads[1]:
                raise ValueError("radicands must be distinct")
            prod = rads[0] * rads[1]
            if _isqrt_floor(prod) ** 2 == prod:
                raise ValueError("radicands generate the same field")
        if rads != tuple(sorted(rads)):
            raise ValueError("radicands must be sorted ascending")
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != 1 << len(rads):
            raise ValueError("coefficient count must be 2**len(radicands)")
        self.radicands = rads
        self.coeffs = cs

    # -- helpers -------------------------------------------------------------

    @staticmethod
    def from_rational(value: Fraction | int, radicands: Sequence[int]) -> "QuadExt":
        coeffs = [Fraction(value)] + [Fraction(0)] * ((1 << len(radicands)) - 1)
        return QuadExt(radicands, coeffs)

    @staticmethod
    def sqrt_of(d: int) -> "QuadExt":
        """sqrt(d) for a positive non-square integer, as a field element."""
        s, df = _squarefree_decompose(d)
        if df == 1:
            raise ValueError("perfect square; use Rational")
        return QuadExt((df,), (0, s))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _basis_radicand(self, mask: int) -> int:
        prod = 1
        for i, d in enumerate(self.radicands):
            if mask & (1 << i):
                prod *= d
        return prod

    def enclosure(self, prec: int) -> _Ival:
        work = prec + 8
        total = _Ival.point(Fraction(0))
        for mask, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if mask == 0:
                total = total + _Ival.point(c)
            else:
                total = total + _sqrt_int_interval(self._basis_radicand(mask), work).scale(c)
        return total.round(prec)

    def __neg__(self) -> "QuadExt":
        return QuadExt(self.radicands, tuple(-c for c in self.coeffs))

    def _mul_same_tower(self, other: "QuadExt") -> "QuadExt":
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                # basis(i)*basis(j) = prod_{k in i&j} d_k * basis(i^j)
                factor = 1
                common = i & j
                for k, d in enumerate(self.radicands):
                    if common & (1 << k):
                        factor *= d
                out[i ^ j] += a * b * factor
        return QuadExt(self.radicands, out)

    def _conjugates(self) -> list["QuadExt"]:
        """All nontrivial Galois conjugates (sign flips of the radicals)."""
        n = len(self.radicands)
        out = []
        for signs in range(1, 1 << n):
            coeffs = []
            for mask, c in enumerate(self.coeffs):
                flip = bin(mask & signs).count("1") % 2
                coeffs.append(-c if flip else c)
            out.append(QuadExt(self.radicands, coeffs))
        return out

    def inverse(self) -> "QuadExt":
        if self.is_zero():
            raise ZeroDivisionError("division by certified zero")
        prod = QuadExt.from_rational(1, self.radicands)
        for conj in self._conjugates():
            prod = prod._mul_same_tower(conj)
        norm = self._mul_same_tower(prod)
        if not norm.is_rational():
            raise ArithmeticError("field norm failed to be rational")
        nv = norm.rational_value()
        if nv == 0:
            # dependent radicals would be a construction bug
            raise ZeroDivisionError("division by certified zero")
        return QuadExt(self.radicands, tuple(c / nv for c in prod.coeffs))

    def sign_exact(self) -> int:
        if self.is_zero():
            return 0
        prec = _STARTING_PRECISION
        while True:
            iv = self.enclosure(prec)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            prec *= 2
            # a nonzero element of the tower is bounded away from 0, so this
            # loop terminates; no cap needed

    def __repr__(self) -> str:
        return f"QuadExt(d={self.radicands}, c={[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        names = {0: ""}
        for i, d in enumerate(self.radicands):
            names[1 << i] = f"sqrt({d})"
        if len(self.radicands) == 2:
            names[3] = f"sqrt({self.radicands[0] * self.radicands[1]})"
        parts = []
        for mask, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}*{names[mask]}" if mask else f"{c}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Rational, QuadExt)):
            diff = _binop(self, as_xreal(other), "sub")
            if isinstance(diff, QuadExt):
                return diff.is_zero()
            if isinstance(diff, Rational):
                return diff.value == 0
            return NotImplemented
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        used = tuple((d, c) for (d, c) in _canonical_terms(self))
        return hash(used)


def _canonical_terms(x: QuadExt) -> Iterable[tuple[int, Fraction]]:
    """(radicand, coefficient) pairs for nonzero basis elements, plus the
    rational part keyed by radicand 1."""
    yield (1, x.coeffs[0])
    for mask in range(1, len(x.coeffs)):
        c = x.coeffs[mask]
        if c != 0:
            yield (x._basis_radicand(mask), c)


# ---------------------------------------------------------------------------
# coercion and binary operations
# ---------------------------------------------------------------------------

def as_xreal(v: XLike | float | str) -> XReal:
    if isinstance(v, XReal):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a number here")
    if isinstance(v, int):
        return Rational(v)
    if isinstance(v, Fraction):
        return Rational(v)
    if isinstance(v, float):
        return Rational(Fraction(v))
    if isinstance(v, str):
        return Rational(Fraction(v))
    raise TypeError(f"cannot interpret {v!r} as XReal")


def _compositum(radicands: Iterable[int]) -> tuple[tuple[int, ...], dict[int, tuple[Fraction, int]]]:
    """Independent basis for the field generated by the given radicands.

    Returns the basis tuple plus, for every input radicand d, a pair
    (c, mask) with sqrt(d) = c * prod_{i in mask} sqrt(basis[i]).
    Raises RadicandMismatch beyond two independent radicands.
    """
    basis: list[int] = []
    images: dict[int, tuple[Fraction, int]] = {}
    for d in sorted(set(radicands)):
        expressed = False
        for mask in range(1, 1 << len(basis)):
            prod = d
            denom = 1
            for i, bd in enumerate(basis):
                if mask & (1 << i):
                    prod *= bd
                    denom *= bd
            r = _isqrt_floor(prod)
            if r * r == prod:
                images[d] = (Fraction(r, denom), mask)
                expressed = True
                break
        if not expressed:
            if len(basis) >= 2:
                raise RadicandMismatch(
                    f"radicands {sorted(set(radicands))} need more than two independent radicals")
            basis.append(d)
            images[d] = (Fraction(1), 1 << (len(basis) - 1))
    return tuple(basis), images


def _rebase(x: QuadExt, basis: tuple[int, ...],
            images: dict[int, tuple[Fraction, int]]) -> QuadExt:
    out = [Fraction(0)] * (1 << len(basis))
    for mask, c in enumerate(x.coeffs):
        if c == 0:
            continue
        coeff = c
        new_mask = 0
        for i, d in enumerate(x.radicands):
            if mask & (1 << i):
                ci, mi = images[d]
                coeff *= ci
                overlap = new_mask & mi
                for j, bd in enumerate(basis):
                    if overlap & (1 << j):
                        coeff *= bd
                new_mask ^= mi
        out[new_mask] += coeff
    return QuadExt(basis, out)


def _unify(a: QuadExt, b: QuadExt) -> tuple[QuadExt, QuadExt]:
    if a.radicands == b.radicands:
        return a, b
    # rational-valued elements live in any tower
    if a.is_rational():
        return QuadExt.from_rational(a.rational_value(), b.radicands), b
    if b.is_rational():
        return a, QuadExt.from_rational(b.rational_value(), a.radicands)
    basis, images = _compositum(tuple(a.radicands) + tuple(b.radicands))
    return _rebase(a, basis, images), _rebase(b, basis, images)


def _binop(a: XReal, b: XLike, op: str) -> XReal:
    if not isinstance(b, XReal):
        b = as_xreal(b)

    if isinstance(a, IntervalExpr) or isinstance(b, IntervalExpr):
        return IntervalExpr._binop(IntervalExpr.lift(a), IntervalExpr.lift(b), op)

    if isinstance(a, Rational) and isinstance(b, Rational):
        if op == "add":
            return Rational(a.value + b.value)
        if op == "sub":
            return Rational(a.value - b.value)
        if op == "mul":
            return Rational(a.value * b.value)
        if op == "div":
            if b.value == 0:
                raise ZeroDivisionError("division by certified zero")
            return Rational(a.value / b.value)

    # promote rationals into the other operand's tower
    if isinstance(a, Rational) and isinstance(b, QuadExt):
        a = QuadExt.from_rational(a.value, b.radicands)
    elif isinstance(b, Rational) and isinstance(a, QuadExt):
        b = QuadExt.from_rational(b.value, a.radicands)
    assert isinstance(a, QuadExt) and isinstance(b, QuadExt)
    a, b = _unify(a, b)

    if op == "add":
        return QuadExt(a.radicands, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))
    if op == "sub":
        return QuadExt(a.radicands, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))
    if op == "mul":
        return a._mul_same_tower(b)
    if op == "div":
        return a._mul_same_tower(b.inverse())
    raise AssertionError(op)


# ---------------------------------------------------------------------------
# interval expressions
# ---------------------------------------------------------------------------

class IntervalExpr(XReal):
    """Expression DAG evaluated by outward-rounded dyadic intervals.

    Nodes are immutable; refinement caches the tightest enclosure found so
    far and intersects new evaluations with it, which makes refinement
    monotone by construction.
    """

    __slots__ = ("op", "args", "payload", "_best", "_best_prec")

    def __init__(self, op: str, args: tuple = (), payload=None):
        self.op = op
        self.args = args
        self.payload = payload
        self._best: _Ival | None = None
        self._best_prec = 0

    @property
    def is_exact(self) -> bool:
        return False

    @staticmethod
    def lift(x: XReal) -> "IntervalExpr":
        if isinstance(x, IntervalExpr):
            return x
        return IntervalExpr("leaf", payload=x)

    @staticmethod
    def _binop(a: "IntervalExpr", b: "IntervalExpr", op: str) -> "IntervalExpr":
        return IntervalExpr(op, (a, b))

    @staticmethod
    def sqrt(x: XReal) -> "IntervalExpr":
        return IntervalExpr("sqrt", (IntervalExpr.lift(x),))

    @staticmethod
    def log(x: XReal) -> "IntervalExpr":
        return IntervalExpr("log", (IntervalExpr.lift(x),))

    @staticmethod
    def pow_rational(x: XReal, num: int, den: int) -> "IntervalExpr":
        return IntervalExpr("powq", (IntervalExpr.lift(x),), payload=(num, den))

    def __neg__(self) -> "IntervalExpr":
        return IntervalExpr("neg", (self,))

    def _eval(self, prec: int) -> _Ival:
        op = self.op
        if op == "leaf":
            return self.payload.enclosure(prec)
        if op == "neg":
            return (-self.args[0].refine(prec)).round(prec)
        a = self.args[0].refine(prec + 4)
        if op == "sqrt":
            return a.sqrt(prec)
        if op == "log":
            if a.lo <= 0:
                if a.hi <= 0:
                    raise ValueError("log of certified-nonpositive value")
                raise _NeedsRefinement(prec)  # rounding pushed lo to zero
            return a.log(prec)
        if op == "powq":
            num, den = self.payload
            if a.lo < 0:
                a = _Ival(Fraction(0), max(a.hi, Fraction(0)))
            powed = _Ival.point(Fraction(1))
            base = a
            k = abs(num)
            while k:
                if k & 1:
                    powed = powed * base
                base = base * base
                k >>= 1
            if num < 0:
                powed = powed.inverse()
            out = powed.root(den, prec) if den > 1 else powed
            return out.round(prec)
        b = self.args[1].refine(prec + 4)
        if op == "max":
            return _Ival(max(a.lo, b.lo), max(a.hi, b.hi)).round(prec)
        if op == "add":
            return (a + b).round(prec)
        if op == "sub":
            return (a - b).round(prec)
        if op == "mul":
            return (a * b).round(prec)
        if op == "div":
            if b.contains_zero():
                if b.lo == b.hi == 0:
                    raise ZeroDivisionError("division by certified zero")
                raise _NeedsRefinement(prec)
            return (a * b.inverse()).round(prec)
        raise AssertionError(op)

    def refine(self, prec: int) -> _Ival:
        if self._best is not None and self._best_prec >= prec:
            return self._best
        iv = self._eval(prec)
        if self._best is not None:
            iv = iv.intersect(self._best)
        self._best = iv
        self._best_prec = prec
        return iv

    def enclosure(self, prec: int) -> _Ival:
        cap = max(prec, default_precision_cap())
        p = max(_STARTING_PRECISION, prec)
        while True:
            try:
                return self.refine(p)
            except _NeedsRefinement:
                if p >= cap:
                    raise Inconclusive(p, "divisor enclosure straddles zero at cap")
                p = min(2 * p, cap)

    def sign_certified(self, precision_cap: int | None = None) -> int:
        cap = precision_cap or default_precision_cap()
        prec = _STARTING_PRECISION
        while True:
            try:
                iv = self.refine(prec)
            except _NeedsRefinement:
                iv = None
            if iv is not None:
                if iv.lo > 0:
                    return 1
                if iv.hi < 0:
                    return -1
                if iv.lo == iv.hi == 0:
                    return 0
            if prec >= cap:
                raise Inconclusive(prec)
            prec = min(2 * prec, cap)

    def __repr__(self) -> str:
        iv = self._best if self._best is not None else None
        shown = f"~{float(self):.6g}" if iv or self.op == "leaf" else "unevaluated"
        return f"IntervalExpr({self.op}, {shown})"

    def __float__(self) -> float:
        iv = self.enclosure(64)
        return float((iv.lo + iv.hi) / 2)

    __hash__ = object.__hash__

    def __eq__(self, other: object) -> bool:
        return self is other


class _NeedsRefinement(Exception):
    def __init__(self, precision: int):
        self.precision = precision


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def sign(x: XLike, precision_cap: int | None = None) -> int:
    """Certified sign in {-1, 0, +1}; raises Inconclusive only for interval
    expressions whose value cannot be separated from zero at the cap."""
    x = as_xreal(x)
    if isinstance(x, Rational):
        return (x.value > 0) - (x.value < 0)
    if isinstance(x, QuadExt):
        return x.sign_exact()
    return x.sign_certified(precision_cap)


def xmax(*values: XLike) -> XReal:
    """Maximum of finitely many XReals.

    Decided exactly by sign comparisons when every operand is exact;
    otherwise returned as a certified max-enclosure node.
    """
    xs = [as_xreal(v) for v in values]
    if not xs:
        raise ValueError("xmax needs at least one value")
    if all(x.is_exact for x in xs):
        best = xs[0]
        for x in xs[1:]:
            if sign(x - best) > 0:
                best = x
        return best
    out = IntervalExpr.lift(xs[0])
    for x in xs[1:]:
        out = IntervalExpr("max", (out, IntervalExpr.lift(x)))
    return out


def adjoin_sqrt(x: XLike) -> XReal:
    """Square root of a nonnegative XReal.

    Rational inputs produce exact results: either rational (perfect square)
    or a one-radicand QuadExt.  Rational-valued QuadExt inputs behave the
    same inside their tower.  Anything else falls back to a certified
    IntervalExpr sqrt node.
    """
    x = as_xreal(x)
    if isinstance(x, QuadExt) and x.is_rational():
        x = Rational(x.rational_value())
    if isinstance(x, Rational):
        v = x.value
        if v < 0:
            raise NegativeRadicand(f"sqrt of {v}")
        if v == 0:
            return Rational(0)
        # sqrt(p/q) = sqrt(p*q)/q
        s, d = _squarefree_decompose(v.numerator * v.denominator)
        if d == 1:
            return Rational(Fraction(s, v.denominator))
        return QuadExt((d,), (0, Fraction(s, v.denominator)))
    if isinstance(x, QuadExt):
        sgn = x.sign_exact()
        if sgn < 0:
            raise NegativeRadicand("certified-negative radicand")
        if sgn == 0:
            return Rational(0)
        return IntervalExpr.sqrt(x)
    try:
        if x.sign_certified(precision_cap=256) < 0:
            raise NegativeRadicand("certified-negative radicand")
    except Inconclusive:
        pass  # sqrt node clamps the lower endpoint at 0; pre guarantees x >= 0
    return IntervalExpr.sqrt(x)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def xreal_to_json(x: XReal, enclosure_digits: int = 24):
    """JSON-encodable form: rationals as "p/q", tower elements as
    {"d": [...], "c": [...]}, intervals as a decimal enclosure "[lo,hi]"."""
    if isinstance(x, Rational):
        return f"{x.value.numerator}/{x.value.denominator}"
    if isinstance(x, QuadExt):
        return {
            "d": list(x.radicands),
            "c": [f"{c.numerator}/{c.denominator}" for c in x.coeffs],
        }
    iv = x.enclosure(4 * enclosure_digits)
    scale = 10 ** enclosure_digits
    lo = iv.lo.numerator * scale // iv.lo.denominator
    hi = -((-iv.hi.numerator) * scale // iv.hi.denominator)
    return f"[{_fmt_scaled(lo, enclosure_digits)},{_fmt_scaled(hi, enclosure_digits)}]"


def _fmt_scaled(n: int, digits: int) -> str:
    neg = n < 0
    n = abs(n)
    s = str(n).rjust(digits + 1, "0")
    out = f"{s[:-digits]}.{s[-digits:]}"
    return "-" + out if neg else out


def xreal_from_json(obj) -> XReal:
    """Parse the encodings produced by xreal_to_json (intervals excluded:
    an enclosure does not determine the underlying expression)."""
    if isinstance(obj, bool):
        raise ValueError("boolean is not a number")
    if isinstance(obj, int):
        return Rational(obj)
    if isinstance(obj, float):
        return Rational(Fraction(obj))
    if isinstance(obj, str):
        if obj.startswith("["):
            raise ValueError("interval enclosures cannot be parsed back into expressions")
        return Rational(Fraction(obj))
    if isinstance(obj, dict) and set(obj) == {"d", "c"}:
        return QuadExt(tuple(obj["d"]), tuple(Fraction(c) for c in obj["c"]))
    raise ValueError(f"not an XReal encoding: {obj!r}")
