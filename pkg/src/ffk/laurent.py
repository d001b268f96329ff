"""Truncated Laurent series in s = 1/t over F_q, n-th roots at infinity, and |.|_inf."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParseError, PrecisionError, PreconditionError, UnsupportedError
from .ffield import FieldElement, FieldSpec
from .poly import Polynomial, RationalFunction, _mul, parse_ratfunc


@dataclass(frozen=True)
class QPower:
    """The exact rational number base**exponent."""

    base: int
    exponent: int

    def __mul__(self, other):
        if isinstance(other, QPower) and other.base == self.base:
            return QPower(self.base, self.exponent + other.exponent)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, QPower) and other.base == self.base:
            return QPower(self.base, self.exponent - other.exponent)
        return NotImplemented

    def __pow__(self, k: int):
        return QPower(self.base, self.exponent * k)

    def __lt__(self, other):
        return self.exponent < other.exponent

    def __le__(self, other):
        return self.exponent <= other.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.base) ** self.exponent

    def __str__(self):
        if self.exponent >= 0:
            return str(self.base ** self.exponent)
        return f"1/{self.base ** -self.exponent}"

    def to_json(self):
        return {"base": self.base, "exponent": self.exponent, "value": str(self)}


class LaurentSeries:
    """sum_{i} coeffs[i] s^(order + i) + O(s^(order + prec)), s = 1/t.

    ``coeffs[0]`` is nonzero unless the series is zero to its precision, in
    which case ``coeffs`` is empty and ``order`` is the absolute precision.
    """

    __slots__ = ("spec", "order", "coeffs")

    def __init__(self, spec: FieldSpec, order: int, coeffs, _normal=False):
        self.spec = spec
        coeffs = tuple(int(c) for c in coeffs)
        if not _normal:
            k = 0
            while k < len(coeffs) and coeffs[k] == 0:
                k += 1
            order, coeffs = order + k, coeffs[k:]
        self.order = order
        self.coeffs = coeffs

    # -- constructors ---------------------------------------------------------------
    @classmethod
    def zero(cls, spec, abs_prec: int):
        return cls(spec, abs_prec, (), _normal=True)

    @classmethod
    def from_polynomial(cls, f: Polynomial, prec: int) -> "LaurentSeries":
        """f as a series with ``prec`` retained terms."""
        if not f:
            raise PrecisionError("the zero polynomial has no relative precision")
        d = f.degree
        rev = list(reversed(f.coeffs))[:prec]
        rev += [0] * (prec - len(rev))
        return cls(f.spec, -d, rev)

    @classmethod
    def from_ratfunc(cls, r: RationalFunction, prec: int) -> "LaurentSeries":
        return cls.from_polynomial(r.num, prec) / cls.from_polynomial(r.den, prec)

    @classmethod
    def constant(cls, spec, c: int, prec: int):
        return cls(spec, 0, (c,) + (0,) * (prec - 1))

    # -- properties -------------------------------------------------------------------
    @property
    def prec(self) -> int:
        return len(self.coeffs)

    @property
    def abs_prec(self) -> int:
        return self.order + len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, k: int) -> int:
        """Coefficient of s^k (k below abs_prec)."""
        if k >= self.abs_prec:
            raise PrecisionError(f"coefficient of s^{k} is beyond the precision")
        i = k - self.order
        return self.coeffs[i] if i >= 0 else 0

    # -- arithmetic -----------------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.spec != self.spec:
                raise PreconditionError("series over different fields")
            return other
        prec = max(self.prec, 1)
        if isinstance(other, int):
            return LaurentSeries.constant(self.spec, self.spec.from_int(other), prec)
        if isinstance(other, FieldElement):
            return LaurentSeries.constant(self.spec, other.value, prec)
        if isinstance(other, Polynomial):
            return LaurentSeries.from_polynomial(other, prec)
        if isinstance(other, RationalFunction):
            return LaurentSeries.from_ratfunc(other, prec)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        top = min(self.abs_prec, other.abs_prec)
        lo = min(self.order, other.order)
        if top <= lo:
            return LaurentSeries.zero(self.spec, top)
        out = np.zeros(top - lo, dtype=np.int64)
        for ser in (self, other):
            part = np.array(ser.coeffs[: max(0, top - ser.order)], dtype=np.int64)
            if len(part):
                seg = out[ser.order - lo: ser.order - lo + len(part)]
                out[ser.order - lo: ser.order - lo + len(part)] = self.spec.vadd(seg, part)
        res = LaurentSeries(self.spec, lo, out.tolist())
        if not res.coeffs:
            return LaurentSeries.zero(self.spec, top)
        return res

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.spec, self.order, [self.spec.neg(c) for c in self.coeffs], _normal=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            nz = other if not self.coeffs else self
            z = self if not self.coeffs else other
            lead = nz.order if nz.coeffs else nz.abs_prec
            return LaurentSeries.zero(self.spec, z.abs_prec + lead)
        prec = min(self.prec, other.prec)
        prod = _mul(self.spec, self.coeffs[:prec], other.coeffs[:prec])[:prec]
        prod = tuple(prod) + (0,) * (prec - len(prod))
        return LaurentSeries(self.spec, self.order + other.order, prod, _normal=True)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if not self.coeffs:
            raise ZeroDivisionError("division by a series that is zero to its precision")
        spec = self.spec
        a = self.coeffs
        n = len(a)
        b0 = spec.inv(a[0])
        b = [b0]
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                if a[i]:
                    acc = spec.add(acc, spec.mul(a[i], b[k - i]))
            b.append(spec.neg(spec.mul(b0, acc)))
        return LaurentSeries(spec, -self.order, b, _normal=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if not self.coeffs:
            return LaurentSeries.zero(self.spec, self.abs_prec * k) if k else LaurentSeries.constant(self.spec, 1, 1)
        result = LaurentSeries.constant(self.spec, 1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        """Equality on the common window of known coefficients."""
        if not isinstance(other, LaurentSeries):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return not (self - other).coeffs

    __hash__ = None

    def truncate(self, prec: int) -> "LaurentSeries":
        return LaurentSeries(self.spec, self.order, self.coeffs[:prec], _normal=True)

    def scale(self, c: int) -> "LaurentSeries":
        if c == 0:
            return LaurentSeries.zero(self.spec, self.abs_prec)
        return LaurentSeries(self.spec, self.order, [self.spec.mul(x, c) for x in self.coeffs], _normal=True)

    # -- text ---------------------------------------------------------------------------------
    def __str__(self):
        spec = self.spec
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            k = -(self.order + i)
            mono = "t" if k == 1 else f"t^{k}"
            if k == 0:
                terms.append(spec.format(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{spec.format(c)}*{mono}")
        k = -self.abs_prec
        terms.append("O(1)" if k == 0 else ("O(t)" if k == 1 else f"O(t^{k})"))
        return " + ".join(terms)

    def __repr__(self):
        return f"LaurentSeries({self})"

    def to_json(self):
        return {"order": self.order, "coeffs": [self.spec.format(c) for c in self.coeffs], "prec": self.prec}


_BIG_O = re.compile(r"\+?\s*O\(\s*([^)]*)\)\s*$")


def parse_series(spec: FieldSpec, text: str) -> LaurentSeries:
    """Inverse of ``str``: a Laurent polynomial in t followed by ``+ O(t^k)``."""
    m = _BIG_O.search(text)
    if m is None:
        raise ParseError(f"series {text!r} lacks an O(...) term")
    inner = m.group(1).replace(" ", "")
    if inner == "1":
        abs_prec = 0
    elif inner == "t":
        abs_prec = -1
    else:
        mm = re.fullmatch(r"t\^(-?\d+)", inner)
        if mm is None:
            raise ParseError(f"bad precision term O({inner})")
        abs_prec = -int(mm.group(1))
    head = text[: m.start()].strip()
    if not head:
        return LaurentSeries.zero(spec, abs_prec)
    r = parse_ratfunc(spec, head)
    # a Laurent polynomial: num / t^k
    k = r.den.degree
    if r.den != Polynomial.monomial(spec, k):
        raise ParseError(f"{head!r} is not a Laurent polynomial in t")
    order = k - r.num.degree
    if order >= abs_prec:
        raise ParseError(f"terms of {text!r} lie beyond its precision")
    full = LaurentSeries.from_polynomial(r.num, r.num.degree + 1)
    coeffs = list(full.coeffs) + [0] * abs_prec
    return LaurentSeries(spec, order, coeffs[: abs_prec - order], _normal=True)


# ----------------------------------------------------------------------------
# n-th roots


def nth_root_unit_batch(spec: FieldSpec, G: np.ndarray, n: int) -> np.ndarray:
    """H with H^n = G coefficientwise, for rows G of unit power series with G[:, 0] = 1.

    Maintains the coefficients of H^j for j < n and solves for the next
    coefficient of H from the s^k coefficient of H^n, which involves the
    unknown linearly as n * h_k.
    """
    if G.ndim != 2:
        raise PreconditionError("expected a 2-D coefficient array")
    B, prec = G.shape
    if np.any(G[:, 0] != 1):
        raise PreconditionError("leading coefficient must be 1")
    inv_n = spec.inv(spec.from_int(n))
    H = np.zeros((B, prec), dtype=np.int64)
    H[:, 0] = 1
    # P[j] holds the coefficients of H^(j+1) computed so far
    P = np.zeros((n, B, prec), dtype=np.int64)
    P[:, :, 0] = 1
    vadd, vmul, vsub = spec.vadd, spec.vmul, spec.vsub
    for k in range(1, prec):
        partial = np.zeros(B, dtype=np.int64)
        partials = [partial]
        for j in range(1, n):
            # s^k of H^(j+1) without its (j+1) h_k part, from P[j-1] = H^j
            acc = partials[-1]
            if k > 1:
                prod = vmul(H[:, 1:k], P[j - 1][:, k - 1:0:-1])
                acc = vadd(acc, spec.vsum(prod, axis=1))
            partials.append(acc)
        hk = vmul(vsub(G[:, k], partials[n - 1]), np.full(B, inv_n, dtype=np.int64))
        H[:, k] = hk
        for j in range(n):
            P[j][:, k] = vadd(partials[j], vmul(np.full(B, spec.from_int(j + 1), dtype=np.int64), hk))
    return H


def hensel_nth_root(f: Polynomial, n: int, prec: int) -> LaurentSeries:
    """The n-th root of f in F_q((1/t)) with leading coefficient 1, to ``prec`` terms."""
    spec = f.spec
    if n < 1 or n % spec.p == 0:
        raise PreconditionError(f"gcd(n, p) must be 1 (n = {n}, p = {spec.p})")
    if not f or not f.is_monic():
        raise PreconditionError(f"{f} must be monic")
    d = f.degree
    if d % n:
        raise UnsupportedError(f"n = {n} does not divide deg f = {d}: root not in F_q((1/t))")
    if prec < 1:
        raise PreconditionError("prec must be at least 1")
    G = np.zeros((1, prec), dtype=np.int64)
    rev = list(reversed(f.coeffs))[:prec]
    G[0, : len(rev)] = rev
    H = nth_root_unit_batch(spec, G, n)[0]
    return LaurentSeries(spec, -d // n, H.tolist(), _normal=True)


def abs_infinity(a: LaurentSeries) -> QPower:
    """|a|_inf = q^(-v_inf(a)), exactly."""
    if not a.coeffs:
        raise PreconditionError("|0|_inf is zero; no exponent representation")
    return QPower(a.spec.q, -a.order)


def series_arith(a: LaurentSeries, b: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise PreconditionError(f"unknown series operation {op!r}")
