"""Polynomials over F_q, rational functions, irreducibility and discriminants.

Coefficients are integer encodings of F_q elements (see :mod:`ffk.ffield`),
stored low to high with no trailing zeros.  Products of long polynomials go
through Kronecker substitution into Python integers.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from . import _linalg
from .errors import ParseError, PreconditionError, UnsupportedError
from .ffield import FieldElement, FieldSpec, prime_factors

# monic polynomials of degree d are sieved in memory when q^d is below this
SIEVE_LIMIT = 1 << 22


# ----------------------------------------------------------------------------
# coefficient-list kernels


def _trim(c) -> tuple:
    c = tuple(c)
    k = len(c)
    while k and not c[k - 1]:
        k -= 1
    return c[:k] if k < len(c) else c


def _add(spec: FieldSpec, a, b):
    if len(a) < len(b):
        a, b = b, a
    if spec.e == 1:
        p = spec.p
        out = [(x + y) % p for x, y in zip(a, b)]
    else:
        tables = spec.py_tables()
        if tables:
            at = tables[0]
            out = [at[x][y] for x, y in zip(a, b)]
        else:
            add = spec.add
            out = [add(x, y) for x, y in zip(a, b)]
    out.extend(a[len(b):])
    return _trim(out)


def _neg(spec: FieldSpec, a):
    if spec.e == 1:
        p = spec.p
        return tuple(-x % p for x in a)
    tables = spec.py_tables()
    if tables:
        nt = tables[2]
        return tuple(nt[x] for x in a)
    return tuple(spec.neg(x) for x in a)


def _sub(spec, a, b):
    return _add(spec, a, _neg(spec, b))


def _scale(spec, a, c):
    if c == 0:
        return ()
    if spec.e == 1:
        p = spec.p
        return tuple(x * c % p for x in a)
    return tuple(spec.mul(x, c) for x in a)


def _mul_school(spec, a, b):
    out = [0] * (len(a) + len(b) - 1)
    if spec.e == 1:
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        p = spec.p
        return [c % p for c in out]
    tables = spec.py_tables()
    if tables:
        at, mt = tables[0], tables[1]
        for i, x in enumerate(a):
            if x:
                row = mt[x]
                for j, y in enumerate(b):
                    out[i + j] = at[out[i + j]][row[y]]
        return out
    mul, add = spec.mul, spec.add
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = add(out[i + j], mul(x, y))
    return out


def _pack(arr: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(arr, dtype="<u8").tobytes(), "little")


def _unpack(value: int, n: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(8 * n, "little"), dtype="<u8").astype(np.int64)


def _mul_kronecker(spec, a, b):
    n = len(a) + len(b) - 1
    if spec.e == 1:
        prod = _pack(np.array(a, dtype=np.int64)) * _pack(np.array(b, dtype=np.int64))
        return (_unpack(prod, n) % spec.p).tolist()
    # two-level substitution: slot (k, l) holds the s^l part of the t^k coefficient
    e, p = spec.e, spec.p
    width = 2 * e - 1

    def spread(c):
        arr = np.array(c, dtype=np.int64)
        block = np.zeros((len(c), width), dtype=np.int64)
        for i, col in enumerate(spec.vdigits(arr)):
            block[:, i] = col
        return _pack(block.ravel())

    rows = (_unpack(spread(a) * spread(b), n * width) % p).reshape(n, width)
    mod = np.array(spec.modulus[:e], dtype=np.int64)
    for l in range(width - 1, e - 1, -1):
        top = rows[:, l:l + 1]
        rows[:, l - e:l] = (rows[:, l - e:l] - top * mod) % p
    weights = np.array([p ** i for i in range(e)], dtype=np.int64)
    return (rows[:, :e] @ weights).tolist()


def _mul(spec, a, b):
    if not a or not b:
        return ()
    if min(len(a), len(b)) <= 12:
        return _trim(_mul_school(spec, a, b))
    return _trim(_mul_kronecker(spec, a, b))


def _divmod(spec, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) <= db:
        return (), tuple(a)
    r = list(a)
    quo = [0] * (len(a) - db)
    if spec.e == 1:
        p = spec.p
        inv = pow(b[-1], p - 2, p)
        for k in range(len(a) - 1, db - 1, -1):
            c = r[k] * inv % p
            if c:
                quo[k - db] = c
                base = k - db
                for j in range(db):
                    r[base + j] = (r[base + j] - c * b[j]) % p
                r[k] = 0
    elif spec.py_tables():
        at, mt, nt = spec.py_tables()
        inv = spec.inv(b[-1])
        nb = [nt[y] for y in b]
        for k in range(len(a) - 1, db - 1, -1):
            c = mt[r[k]][inv]
            if c:
                quo[k - db] = c
                base = k - db
                row = mt[c]
                for j in range(db):
                    r[base + j] = at[r[base + j]][row[nb[j]]]
                r[k] = 0
    else:
        inv = spec.inv(b[-1])
        for k in range(len(a) - 1, db - 1, -1):
            c = spec.mul(r[k], inv)
            if c:
                quo[k - db] = c
                base = k - db
                for j in range(db):
                    r[base + j] = spec.sub(r[base + j], spec.mul(c, b[j]))
                r[k] = 0
    return _trim(quo), _trim(r[:db])


# ----------------------------------------------------------------------------


class Polynomial:
    """An element of F_q[t] (dense, low-to-high integer encodings)."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs=()):
        self.spec = spec
        self.coeffs = _trim(int(c) for c in coeffs)

    @classmethod
    def _raw(cls, spec, coeffs: tuple) -> "Polynomial":
        """Wrap an already trimmed tuple of encodings without re-checking it."""
        out = object.__new__(cls)
        out.spec = spec
        out.coeffs = coeffs
        return out

    @classmethod
    def t(cls, spec):
        return cls(spec, (0, 1))

    @classmethod
    def constant(cls, spec, c):
        if isinstance(c, FieldElement):
            c = c.value
        return cls(spec, (c,))

    @classmethod
    def monomial(cls, spec, k, c=1):
        return cls(spec, (0,) * k + (c,))

    # -- basic properties ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_monic(self):
        return self.lc == 1

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim((self.spec.from_int(other),))
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.q, self.coeffs))

    def sort_key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    # -- arithmetic ---------------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.spec is not self.spec and other.spec != self.spec:
                raise PreconditionError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Polynomial(self.spec, (self.spec.from_int(other),))
        if isinstance(other, FieldElement):
            return Polynomial(self.spec, (other.value,))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._raw(self.spec, _add(self.spec, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.spec, _neg(self.spec, self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._raw(self.spec, _sub(self.spec, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._raw(self.spec, _mul(self.spec, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        q, r = _divmod(self.spec, self.coeffs, other.coeffs)
        return Polynomial._raw(self.spec, q), Polynomial._raw(self.spec, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        return RationalFunction(self) / other

    def __rtruediv__(self, other):
        return RationalFunction.lift(self.spec, other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self) ** k
        result = Polynomial(self.spec, (1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def powmod(self, k: int, m: "Polynomial") -> "Polynomial":
        result = Polynomial(self.spec, (1,)) % m
        base = self % m
        while k:
            if k & 1:
                result = (result * base) % m
            k >>= 1
            if k:
                base = (base * base) % m
        return result

    def scale(self, c: int) -> "Polynomial":
        return Polynomial._raw(self.spec, _scale(self.spec, self.coeffs, c))

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self.scale(self.spec.inv(self.lc))

    def derivative(self) -> "Polynomial":
        spec = self.spec
        return Polynomial(spec, [spec.mul(spec.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        spec = self.spec
        acc = 0
        for c in reversed(self.coeffs):
            acc = spec.add(spec.mul(acc, x), c)
        return acc

    def shift(self, c: int) -> "Polynomial":
        """f(t + c)."""
        lin = Polynomial(self.spec, (c, 1))
        acc = Polynomial(self.spec)
        for coef in reversed(self.coeffs):
            acc = acc * lin + Polynomial(self.spec, (coef,))
        return acc

    def frobenius(self, Q: int) -> "Polynomial":
        """f^Q for Q a power of p, computed coefficientwise."""
        spec = self.spec
        out = [0] * (self.degree * Q + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * Q] = spec.pow(c, Q)
        return Polynomial(spec, out)

    def reverse(self, n: int | None = None) -> "Polynomial":
        n = self.degree if n is None else n
        c = self.coeffs + (0,) * (n + 1 - len(self.coeffs))
        return Polynomial(self.spec, tuple(reversed(c[: n + 1])))

    # -- text ---------------------------------------------------------------------
    def __str__(self):
        return format_poly(self.spec, self.coeffs, "t")

    def __repr__(self):
        return f"Polynomial({self})"


def format_poly(spec: FieldSpec, coeffs, var: str = "t") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        cs = spec.format(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if c == 1:
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return "+".join(terms) if terms else "0"


def poly_arith(f: Polynomial, g: Polynomial, op: str):
    """Dispatch for add, sub, mul, divmod and gcd."""
    if f.spec != g.spec:
        raise PreconditionError("polynomials over different fields")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divmod":
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        return divmod(f, g)
    if op == "gcd":
        return gcd(f, g)
    raise PreconditionError(f"unknown polynomial operation {op!r}")


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd (zero only when both inputs are zero)."""
    a, b = f, g
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(f: Polynomial, g: Polynomial):
    """(d, u, v) with u f + v g = d, d monic."""
    spec = f.spec
    r0, r1 = f, g
    s0, s1 = Polynomial(spec, (1,)), Polynomial(spec)
    t0, t1 = Polynomial(spec), Polynomial(spec, (1,))
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = spec.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def inverse_mod(f: Polynomial, m: Polynomial) -> Polynomial:
    d, u, _ = xgcd(f % m, m)
    if d.degree != 0:
        raise ZeroDivisionError(f"{f} is not invertible modulo {m}")
    return u % m


def crt(residues, moduli) -> Polynomial:
    """The unique x with deg x < deg(prod moduli) and x = r_i mod m_i."""
    if not moduli:
        raise PreconditionError("crt needs at least one modulus")
    spec = moduli[0].spec
    x = Polynomial(spec)
    m = Polynomial(spec, (1,))
    for r, mi in zip(residues, moduli):
        # x + m * k = r mod mi
        k = ((r - x) * inverse_mod(m, mi)) % mi
        x = x + m * k
        m = m * mi
    return x % m


# ----------------------------------------------------------------------------
# irreducibility and enumeration


def is_irreducible(f: Polynomial) -> bool:
    """Rabin's test over F_q."""
    d = f.degree
    if d < 1:
        raise PreconditionError("irreducibility of a constant polynomial")
    if d == 1:
        return True
    spec = f.spec
    f = f.monic()
    t = Polynomial.t(spec)
    frob = [t % f]
    h = frob[0]
    for _ in range(d):
        h = h.powmod(spec.q, f)
        frob.append(h)
    if frob[d] != t % f:
        return False
    for r in prime_factors(d):
        if gcd(frob[d // r] - t, f).degree > 0:
            return False
    return True


def count_monic_irreducible(q: int, d: int) -> int:
    """Gauss's necklace formula."""

    def mobius(n):
        res = 1
        for r in prime_factors(n):
            if (n // r) % r == 0:
                return 0
            res = -res
        return res

    return sum(mobius(m) * q ** (d // m) for m in range(1, d + 1) if d % m == 0) // d


def monic_from_code(spec: FieldSpec, code: int, d: int) -> Polynomial:
    q = spec.q
    return Polynomial(spec, [(code // q ** i) % q for i in range(d)] + [1])


def _monic_matrix(spec, d):
    q = spec.q
    codes = np.arange(q ** d, dtype=np.int64)
    cols = [(codes // q ** i) % q for i in range(d)]
    cols.append(np.ones_like(codes))
    return cols


@functools.lru_cache(maxsize=64)
def irreducible_codes(spec: FieldSpec, d: int) -> tuple[int, ...]:
    """Codes of the monic irreducibles of degree d, in canonical order.

    The code of t^d + c_{d-1} t^{d-1} + ... + c_0 is sum c_i q^i, so integer
    order is degree-then-lexicographic order with the top coefficient first.
    Small cases are sieved (mark every product of two monic factors); larger
    ones fall back to Rabin's test candidate by candidate.
    """
    q = spec.q
    if d < 1:
        return ()
    if d == 1:
        return tuple(range(q))
    total = q ** d
    if total > SIEVE_LIMIT:
        return tuple(c for c in range(total) if is_irreducible(monic_from_code(spec, c, d)))
    reducible = np.zeros(total, dtype=bool)
    for k in range(1, d // 2 + 1):
        a_cols = _monic_matrix(spec, k)
        b_cols = _monic_matrix(spec, d - k)
        code = np.zeros((q ** k, q ** (d - k)), dtype=np.int64)
        for m in range(d):
            acc = np.zeros_like(code)
            for i in range(max(0, m - (d - k)), min(k, m) + 1):
                acc = spec.vadd(acc, spec.vmul(a_cols[i][:, None], b_cols[m - i][None, :]))
            code += acc * q ** m
        reducible[code.ravel()] = True
    return tuple(int(c) for c in np.nonzero(~reducible)[0])


def monic_irreducibles(spec: FieldSpec, d: int) -> list[Polynomial]:
    return [monic_from_code(spec, c, d) for c in irreducible_codes(spec, d)]


def enumerate_Pn_plus(spec: FieldSpec, n: int, max_degree: int) -> list[Polynomial]:
    """Monic irreducibles with degree in {n, 2n, ...} up to ``max_degree``."""
    if n < 1 or math.gcd(n, spec.p) != 1:
        raise PreconditionError(f"gcd(n, p) must be 1 (n = {n}, p = {spec.p})")
    out = []
    for d in range(n, max_degree + 1, n):
        out.extend(monic_irreducibles(spec, d))
    return out


def irreducible_factors(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Monic irreducible factors with multiplicities, by trial division.

    Adequate for the small degrees used here; not a general factoring routine.
    """
    if not f:
        raise PreconditionError("factorisation of zero")
    rem = f.monic()
    found = []
    d = 1
    while rem.degree >= 2 * d:
        if is_irreducible(rem):
            break
        for g in monic_irreducibles(rem.spec, d):
            k = 0
            while True:
                q, r = divmod(rem, g)
                if r:
                    break
                rem, k = q, k + 1
            if k:
                found.append((g, k))
            if rem.degree < 2 * d:
                break
        d += 1
    if rem.degree >= 1:
        found.append((rem, 1))
    found.sort(key=lambda fk: fk[0].sort_key())
    return found


# ----------------------------------------------------------------------------


class RationalFunction:
    """An element num/den of F_q(t) with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, _reduced=False):
        spec = num.spec
        if den is None:
            den = Polynomial(spec, (1,))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced and not den.is_constant():
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        if den.lc != 1:
            inv = spec.inv(den.lc)
            num, den = num.scale(inv), den.scale(inv)
        if not num:
            den = Polynomial(spec, (1,))
        self.num, self.den = num, den

    @property
    def spec(self) -> FieldSpec:
        return self.num.spec

    @classmethod
    def lift(cls, spec, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Polynomial):
            return cls(value, _reduced=True)
        if isinstance(value, int):
            return cls(Polynomial(spec, (spec.from_int(value),)), _reduced=True)
        if isinstance(value, FieldElement):
            return cls(Polynomial(spec, (value.value,)), _reduced=True)
        raise TypeError(f"cannot lift {value!r} to F_q(t)")

    @classmethod
    def t(cls, spec):
        return cls(Polynomial.t(spec), _reduced=True)

    def _other(self, other):
        if isinstance(other, (RationalFunction, Polynomial, int, FieldElement)):
            return RationalFunction.lift(self.spec, other)
        return NotImplemented

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.degree == 0 and o.den.degree == 0:
            return RationalFunction(self.num * o.num, _reduced=True)
        # cross-cancel before multiplying
        g1 = gcd(self.num, o.den) if o.den.degree > 0 else None
        g2 = gcd(o.num, self.den) if self.den.degree > 0 else None
        a, d2 = (self.num // g1, o.den // g1) if g1 and g1.degree > 0 else (self.num, o.den)
        b, d1 = (o.num // g2, self.den // g2) if g2 and g2.degree > 0 else (o.num, self.den)
        return RationalFunction(a * b, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, _reduced=True)

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"{_wrap(str(self.num))}/{_wrap(str(self.den))}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _wrap(s: str) -> str:
    return s if s.isalnum() else f"({s})"


# ----------------------------------------------------------------------------
# text


def _symbols(spec: FieldSpec, var: str) -> dict:
    symbols = {var: RationalFunction.t(spec)}
    if spec.e > 1:
        symbols["s"] = RationalFunction.lift(spec, FieldElement(spec, spec.s))
    return symbols


def parse_ratfunc(spec: FieldSpec, text: str, var: str = "t") -> RationalFunction:
    from .parsing import evaluate

    value = evaluate(text, _symbols(spec, var), lambda n: RationalFunction.lift(spec, n))
    return RationalFunction.lift(spec, value)


def parse_poly(spec: FieldSpec, text: str, var: str = "t") -> Polynomial:
    r = parse_ratfunc(spec, text, var)
    if not r.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return r.num


# ----------------------------------------------------------------------------
# resultants and discriminants of polynomials in an auxiliary variable X


def _x_trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _x_mod(a, b):
    a = list(a)
    db = len(b) - 1
    inv = b[-1].inverse()
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv
        if c:
            for j in range(db + 1):
                a[k - db + j] = a[k - db + j] - c * b[j]
    return _x_trim(a[:db])


def resultant(f, g) -> RationalFunction:
    """Res_X(f, g) for f, g given as coefficient lists (low to high) over F_q(t).

    Euclidean recursion over the field F_q(t):
    Res(f, g) = (-1)^(deg f deg g) lc(g)^(deg f - deg r) Res(g, r), r = f mod g.
    """
    spec = next(c for c in list(f) + list(g) if c).spec
    f = _x_trim(RationalFunction.lift(spec, c) for c in f)
    g = _x_trim(RationalFunction.lift(spec, c) for c in g)
    if not f or not g:
        return RationalFunction.lift(spec, 0)
    result = RationalFunction.lift(spec, 1)
    while True:
        m, n = len(f) - 1, len(g) - 1
        if n == 0:
            return result * g[0] ** m
        r = _x_mod(f, g)
        if not r:
            return RationalFunction.lift(spec, 0)
        if (m * n) % 2:
            result = -result
        result = result * g[-1] ** (m - (len(r) - 1))
        f, g = g, r


def sylvester_resultant(f, g) -> RationalFunction:
    """Res_X(f, g) as the determinant of the Sylvester matrix."""
    spec = next(c for c in list(f) + list(g) if c).spec
    f = _x_trim(RationalFunction.lift(spec, c) for c in f)
    g = _x_trim(RationalFunction.lift(spec, c) for c in g)
    m, n = len(f) - 1, len(g) - 1
    zero = RationalFunction.lift(spec, 0)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return _linalg.det(rows, RationalFunction.lift(spec, 1), zero)


def discriminant(f) -> Polynomial:
    """disc_X(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f) for f in F_q[t][X]."""
    coeffs = _x_trim(f)
    if len(coeffs) < 3:
        raise PreconditionError("discriminant needs degree >= 2 in X")
    spec = coeffs[-1].spec
    coeffs = [RationalFunction.lift(spec, c) for c in coeffs]
    d = len(coeffs) - 1
    deriv = _x_trim(c * i for i, c in enumerate(coeffs))[1:]
    if not deriv:
        raise PreconditionError("inseparable polynomial: derivative vanishes")
    res = resultant(coeffs, deriv)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    disc = res * sign / coeffs[-1]
    if not disc.is_polynomial():
        raise UnsupportedError("discriminant of a non-integral polynomial")
    return disc.num


def kummer_polynomial(c: Polynomial, n: int) -> list[Polynomial]:
    """Coefficient list of X^n - c."""
    spec = c.spec
    return [-c] + [Polynomial(spec)] * (n - 1) + [Polynomial(spec, (1,))]
