"""Exact scalar rings: rationals, rational functions in q, first-order hbar jets.

Every computation in the engine is exact.  The four rings form a small tower:

    QQ          rationals (fractions.Fraction)
    QQ(q)       rational functions in one variable q    (QRat)
    QQ[hbar]    dual numbers over QQ, hbar^2 = 0        (DualScalar)
    QQ(q)[hbar] dual numbers over QQ(q)

Coercions go up the tower only (int -> Fraction -> QRat, base -> dual).  A ring
descriptor rejects foreign scalars with RingMismatch; that is the only place
cross-ring mixing is policed, the scalar classes themselves promote freely
along the declared coercions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class RingMismatch(TypeError):
    """A scalar does not belong to the declared ring and no coercion applies."""


class ScalarDivisionError(ZeroDivisionError):
    """Division by a scalar that is not invertible in its ring."""


# ---------------------------------------------------------------------------
# dense polynomials over Fraction, ascending coefficient tuples


def _ptrim(cs):
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _ptrim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] += ca * cb
    return _ptrim(out)


def _pdivmod(a, b):
    if not b:
        raise ScalarDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = Fraction(1) / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        if c:
            q[i] = c
            for j, cb in enumerate(b):
                a[i + j] -= c * cb
    return _ptrim(q), _ptrim(a)


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if a:
        # monic normalization so the gcd is canonical
        lead = a[-1]
        if lead != 1:
            a = tuple(c / lead for c in a)
    return a


class QRat:
    """Rational function in q with Fraction coefficients.

    Canonical form: gcd(num, den) = 1 and den monic.  Zero is ()/(1,).
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1, _raw=False):
        if _raw:
            self.num = num
            self.den = den
            return
        num = self._aspoly(num)
        den = self._aspoly(den)
        if not den:
            raise ScalarDivisionError("rational function with zero denominator")
        g = _pgcd(num, den)
        if g and g != (Fraction(1),):
            num = _pdivmod(num, g)[0]
            den = _pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            inv = Fraction(1) / lead
            num = tuple(c * inv for c in num)
            den = tuple(c * inv for c in den)
        self.num = num
        self.den = den

    @staticmethod
    def _aspoly(x):
        if isinstance(x, tuple):
            return _ptrim([Fraction(c) for c in x])
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return (x,) if x else ()
        raise TypeError(f"cannot build polynomial from {type(x).__name__}")

    @classmethod
    def const(cls, c):
        return cls(Fraction(c))

    @classmethod
    def q_power(cls, n: int) -> "QRat":
        if n >= 0:
            return cls(tuple([Fraction(0)] * n + [Fraction(1)]))
        return cls((Fraction(1),), tuple([Fraction(0)] * (-n) + [Fraction(1)]))

    @classmethod
    def _coerce(cls, x):
        if isinstance(x, QRat):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        return None

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den == (Fraction(1),):
            if not self.num:
                return hash(Fraction(0))
            if len(self.num) == 1:
                return hash(self.num[0])
        return hash(("QRat", self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRat(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return QRat(_pneg(self.num), self.den, _raw=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRat(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ScalarDivisionError("division by zero rational function")
        return QRat(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (QRat.const(1) / self) ** (-n)
        out = QRat.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "QRat":
        if not self.num:
            raise ScalarDivisionError("zero has no inverse")
        return QRat(self.den, self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == (Fraction(1),)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self!r}")
        return self.num[0] if self.num else Fraction(0)

    def is_laurent(self) -> bool:
        """True when the denominator is a power of q."""
        d = self.den
        return all(not c for c in d[:-1]) and d[-1] == 1

    def laurent_terms(self):
        """Yield (exponent, Fraction) pairs, lowest exponent first.

        Raises ValueError when the value is not a Laurent polynomial in q.
        """
        if not self.is_laurent():
            raise ValueError(f"not a Laurent polynomial in q: {self!r}")
        shift = len(self.den) - 1
        for i, c in enumerate(self.num):
            if c:
                yield i - shift, c

    def __repr__(self):
        def side(p):
            if not p:
                return "0"
            bits = []
            for i, c in enumerate(p):
                if not c:
                    continue
                if i == 0:
                    bits.append(str(c))
                elif i == 1:
                    bits.append(f"{c}*q" if c != 1 else "q")
                else:
                    bits.append(f"{c}*q^{i}" if c != 1 else f"q^{i}")
            return " + ".join(bits)

        if self.den == (Fraction(1),):
            return side(self.num)
        return f"({side(self.num)})/({side(self.den)})"


BaseScalar = Union[Fraction, QRat]


def _join_bases(a, b):
    """Promote two base scalars to a common kind (Fraction or QRat)."""
    aq = isinstance(a, QRat)
    bq = isinstance(b, QRat)
    if aq == bq:
        return a, b
    if aq:
        return a, QRat.const(b)
    return QRat.const(a), b


_F0 = Fraction(0)


class DualScalar:
    """First-order jet body + slope*hbar with hbar^2 = 0."""

    __slots__ = ("body", "slope")

    def __init__(self, body, slope=0):
        if isinstance(body, int):
            body = Fraction(body)
        if isinstance(slope, int):
            slope = Fraction(slope)
        body, slope = _join_bases(body, slope)
        self.body = body
        self.slope = slope

    @classmethod
    def _raw(cls, body, slope):
        # callers guarantee body and slope share a base kind
        out = object.__new__(cls)
        out.body = body
        out.slope = slope
        return out

    @classmethod
    def _coerce(cls, x):
        if isinstance(x, DualScalar):
            return x
        if type(x) is Fraction:
            return cls._raw(x, _F0)
        if type(x) is int:
            return cls._raw(Fraction(x), _F0)
        if isinstance(x, (int, Fraction, QRat)):
            return cls(x)
        return None

    def __bool__(self):
        return bool(self.body) or bool(self.slope)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        sb, ss = self.body, self.slope
        ob, os_ = o.body, o.slope
        if type(sb) is Fraction is type(ob) and type(ss) is Fraction is type(
            os_
        ):
            return sb == ob and ss == os_
        sb, ob = _join_bases(sb, ob)
        ss, os_ = _join_bases(ss, os_)
        return sb == ob and ss == os_

    def __hash__(self):
        if not self.slope:
            return hash(self.body)
        return hash(("Dual", self.body, self.slope))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        sb, ss = self.body, self.slope
        ob, os_ = o.body, o.slope
        if type(sb) is Fraction is type(ob) and type(ss) is Fraction is type(
            os_
        ):
            return DualScalar._raw(
                sb + ob, ss + os_ if (ss or os_) else _F0
            )
        return DualScalar(sb + ob, ss + os_)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar._raw(-self.body, -self.slope)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        sb, ss = self.body, self.slope
        ob, os_ = o.body, o.slope
        if type(sb) is Fraction is type(ob) and type(ss) is Fraction is type(
            os_
        ):
            if ss:
                slope = sb * os_ + ss * ob if os_ else ss * ob
            elif os_:
                slope = sb * os_
            else:
                slope = _F0
            return DualScalar._raw(sb * ob, slope)
        return DualScalar(
            self.body * o.body, self.body * o.slope + self.slope * o.body
        )

    __rmul__ = __mul__

    def inverse(self) -> "DualScalar":
        if not self.body:
            raise ScalarDivisionError("dual scalar with zero body has no inverse")
        inv_b = invert(self.body)
        return DualScalar(inv_b, -(inv_b * inv_b) * self.slope)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = DualScalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        if not self.slope:
            return f"{self.body!r}"
        if not self.body:
            return f"({self.slope!r})*hbar"
        return f"{self.body!r} + ({self.slope!r})*hbar"


Scalar = Union[Fraction, QRat, DualScalar]


def invert(x: Scalar) -> Scalar:
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if not x:
            raise ScalarDivisionError("zero has no inverse")
        return Fraction(1) / x
    if isinstance(x, (QRat, DualScalar)):
        return x.inverse()
    raise TypeError(f"not a scalar: {type(x).__name__}")


def hbar_parts(x: Scalar):
    """Split into (body, slope).  Base scalars have slope zero."""
    if isinstance(x, DualScalar):
        return x.body, x.slope
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return x, Fraction(0)
    if isinstance(x, QRat):
        return x, QRat.const(0)
    raise TypeError(f"not a scalar: {type(x).__name__}")


@dataclass(frozen=True)
class ScalarRing:
    """Named ring descriptor; the single policing point for RingMismatch."""

    name: str
    has_q: bool
    has_hbar: bool

    def zero(self) -> Scalar:
        return self.from_int(0)

    def one(self) -> Scalar:
        return self.from_int(1)

    def from_int(self, n: int) -> Scalar:
        return self.from_fraction(Fraction(n))

    def from_fraction(self, c: Fraction) -> Scalar:
        x: Scalar = Fraction(c)
        if self.has_q:
            x = QRat.const(x)
        if self.has_hbar:
            x = DualScalar(x)
        return x

    def q(self) -> Scalar:
        if not self.has_q:
            raise RingMismatch(f"ring {self.name} has no element q")
        x: Scalar = QRat.q_power(1)
        if self.has_hbar:
            x = DualScalar(x)
        return x

    def hbar(self) -> Scalar:
        if not self.has_hbar:
            raise RingMismatch(f"ring {self.name} has no element hbar")
        one = QRat.const(1) if self.has_q else Fraction(1)
        zero = QRat.const(0) if self.has_q else Fraction(0)
        return DualScalar(zero, one)

    def contains(self, x) -> bool:
        if isinstance(x, int):
            return True
        if isinstance(x, Fraction):
            return True
        if isinstance(x, QRat):
            return self.has_q
        if isinstance(x, DualScalar):
            if not self.has_hbar:
                return False
            if isinstance(x.body, QRat) and not self.has_q:
                return False
            return True
        return False

    def coerce(self, x) -> Scalar:
        if not self.contains(x):
            raise RingMismatch(
                f"scalar {x!r} does not live in ring {self.name}"
            )
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        if isinstance(x, QRat):
            return DualScalar(x) if self.has_hbar else x
        # DualScalar; promote the parts to QRat when the ring has q
        if self.has_q and not isinstance(x.body, QRat):
            return DualScalar(QRat.const(x.body), QRat.const(x.slope))
        return x

    def body_ring(self) -> "ScalarRing":
        if not self.has_hbar:
            raise RingMismatch(f"ring {self.name} is not an hbar extension")
        return RING_QQ_Q if self.has_q else RING_QQ


RING_QQ = ScalarRing("QQ", has_q=False, has_hbar=False)
RING_QQ_Q = ScalarRing("QQ(q)", has_q=True, has_hbar=False)
RING_QQ_H = ScalarRing("QQ[hbar]", has_q=False, has_hbar=True)
RING_QQ_QH = ScalarRing("QQ(q)[hbar]", has_q=True, has_hbar=True)

RINGS = {r.name: r for r in (RING_QQ, RING_QQ_Q, RING_QQ_H, RING_QQ_QH)}


def ring_by_name(name: str) -> ScalarRing:
    try:
        return RINGS[name]
    except KeyError:
        raise ValueError(
            f"unknown scalar ring {name!r}; expected one of {sorted(RINGS)}"
        ) from None
