"""Exact arithmetic in F_q, q = p^e with p an odd prime.

An element c_0 + c_1 s + ... + c_{e-1} s^{e-1} of F_p[s]/(modulus) is encoded
as the integer c_0 + c_1 p + ... + c_{e-1} p^{e-1}.  Integer order on the
encodings is the canonical element order (highest s-coefficient compared
first), and the canonical generator of F_q^x is the smallest encoding that
generates.  Most of the library works on raw encodings through the methods
of :class:`FieldSpec`; :class:`FieldElement` is the public value type.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, PreconditionError, UnsupportedError

MAX_Q = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ----------------------------------------------------------------------------
# dense polynomials over F_p as lists, used only to set up F_q itself


def _fp_mulmod(a, b, mod, p):
    e = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return prod[:e] + [0] * (e - len(prod[:e]))


def _fp_has_factor_of_degree(mod, k, p):
    """True if the monic ``mod`` has a monic factor of degree ``k`` over F_p."""
    for code in range(p ** k):
        div = [(code // p ** i) % p for i in range(k)] + [1]
        rem = list(mod)
        for top in range(len(rem) - 1, k - 1, -1):
            c = rem[top]
            if c:
                for j in range(k + 1):
                    rem[top - k + j] = (rem[top - k + j] - c * div[j]) % p
        if not any(rem[:k]):
            return True
    return False


def _fp_irreducible(mod, p):
    e = len(mod) - 1
    return all(not _fp_has_factor_of_degree(mod, k, p) for k in range(1, e // 2 + 1))


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``e`` over F_p in canonical order."""
    for code in range(p ** e):
        mod = [(code // p ** i) % p for i in range(e)] + [1]
        if _fp_irreducible(mod, p):
            return tuple(mod)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# full q x q addition/multiplication tables below this size
TABLE_LIMIT = 1024


class FieldSpec:
    """The finite field F_q together with its log/exp tables.

    Instances are interned through :func:`field`, so equal specs are usually
    the same object; equality is nevertheless structural.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not isinstance(p, int) or p < 3 or not is_prime(p):
            raise UnsupportedError(f"p must be an odd prime, got {p}")
        if not isinstance(e, int) or e < 1:
            raise UnsupportedError(f"extension degree must be >= 1, got {e}")
        if p ** e > MAX_Q:
            raise UnsupportedError(f"q = {p}^{e} exceeds the supported bound 2^20")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            if modulus is not None and len(modulus) > 2:
                raise PreconditionError("a modulus is only meaningful for e > 1")
            self.modulus = None
        else:
            if modulus is None:
                modulus = default_modulus(p, e)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise PreconditionError(f"modulus must be monic of degree {e}")
            if not _fp_irreducible(list(modulus), p):
                raise PreconditionError("modulus is not irreducible over F_p")
            self.modulus = modulus
        self._pows = [p ** i for i in range(e)]
        self._tables = None
        self._mul_flat = self._add_flat = None
        self._py = None
        self.generator = self._find_generator()
        if e > 1:
            self._build_tables()

    # -- identity -----------------------------------------------------------
    def _key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldSpec({self})"

    def __str__(self):
        if self.e == 1:
            return f"p={self.p}"
        mod = _format_fp_poly(self.modulus, "s")
        return f"p={self.p},e={self.e},mod={mod}"

    # -- setup ----------------------------------------------------------------
    def _slow_mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        da, db = self.digits(a), self.digits(b)
        return self.from_digits(_fp_mulmod(da, db, self.modulus, self.p))

    def _slow_pow(self, a, k):
        result = 1
        while k:
            if k & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return result

    def _find_generator(self):
        n = self.q - 1
        factors = prime_factors(n)
        for g in range(1, self.q):
            if all(self._slow_pow(g, n // r) != 1 for r in factors):
                return g
        raise AssertionError("F_q^x has no generator")  # pragma: no cover

    def _build_tables(self):
        if self._tables is not None:
            return self._tables
        n = self.q - 1
        exp = [0] * n
        log = [-1] * self.q
        x = 1
        g = self.generator
        for k in range(n):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, g)
        zech = None
        if self.e > 1:
            p = self.p
            zech = [-1] * n
            for k in range(n):
                y = exp[k]
                one_plus = y - y % p + (y % p + 1) % p
                zech[k] = log[one_plus] if one_plus else -1
        self._tables = (exp, log, zech)
        self._exp_np = np.array(exp, dtype=np.int64)
        log_np = np.array(log, dtype=np.int64)
        log_np[0] = 0
        self._log_np = log_np
        if self.e > 1 and self.q <= TABLE_LIMIT:
            q = self.q
            elems = np.arange(q, dtype=np.int64)
            prod = self._exp_np[(log_np[:, None] + log_np[None, :]) % n]
            prod[0, :] = 0
            prod[:, 0] = 0
            self._mul_flat = prod.reshape(-1)
            total = np.zeros((q, q), dtype=np.int64)
            for w in self._pows:
                total += ((elems[:, None] // w % self.p + elems[None, :] // w % self.p) % self.p) * w
            self._add_flat = total.reshape(-1)
        return self._tables

    # -- encodings ------------------------------------------------------------
    def digits(self, a: int) -> list[int]:
        p = self.p
        return [(a // self._pows[i]) % p for i in range(self.e)]

    def from_digits(self, ds) -> int:
        return sum((int(c) % self.p) * self._pows[i] for i, c in enumerate(ds))

    def from_int(self, n: int) -> int:
        return n % self.p

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.q:
            raise PreconditionError(f"{a!r} is not an element encoding of F_{self.q}")
        return int(a)

    @property
    def s(self) -> int:
        """Encoding of the class of s (the F_q generator over F_p)."""
        if self.e == 1:
            raise PreconditionError("F_p has no variable s")
        return self.p

    # -- scalar arithmetic on encodings -----------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        exp, log, zech = self._tables
        la = log[a]
        z = zech[(log[b] - la) % (self.q - 1)]
        return 0 if z < 0 else exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if a == 0:
            return 0
        exp, log, _ = self._tables
        n = self.q - 1
        return exp[(log[a] + n // 2) % n]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log, _ = self._tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        exp, log, _ = self._tables
        return exp[(-log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero in F_q")
            return 1 if k == 0 else 0
        if self.e == 1:
            return pow(a, k % (self.p - 1), self.p)
        exp, log, _ = self._build_tables()
        return exp[(log[a] * k) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log to the canonical generator."""
        if a == 0:
            raise PreconditionError("log of zero")
        _, log, _ = self._build_tables()
        return log[a]

    def exp(self, k: int) -> int:
        exp, _, _ = self._build_tables()
        return exp[k % (self.q - 1)]

    def nth_root(self, a: int, n: int):
        """Some b with b^n = a, or None when a is not an n-th power."""
        if a == 0:
            return 0
        k = self.log(a)
        m = self.q - 1
        from math import gcd

        g = gcd(n, m)
        if k % g:
            return None
        # solve n * x = k (mod m)
        x = (k // g) * pow(n // g, -1, m // g) % (m // g)
        return self.exp(x)

    def elements(self):
        return range(self.q)

    # -- vectorised arithmetic on int64 arrays of encodings -------------------
    def py_tables(self):
        """(add, mul, neg) as nested Python lists for small extension fields, else None."""
        if self.e == 1 or not self._tables_ready():
            return None
        if self._py is None:
            q = self.q
            add = self._add_flat.reshape(q, q).tolist()
            mul = self._mul_flat.reshape(q, q).tolist()
            neg = [row.index(0) for row in add]
            self._py = (add, mul, neg)
        return self._py

    def _tables_ready(self) -> bool:
        self._build_tables()
        return self._mul_flat is not None

    def vdigits(self, a: np.ndarray) -> list[np.ndarray]:
        return [(a // self._pows[i]) % self.p for i in range(self.e)]

    def vadd(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self._tables_ready():
            return self._add_flat[a * self.q + b]
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i, w in enumerate(self._pows):
            out += (((a // w) % p + (b // w) % p) % p) * w
        return out

    def vneg(self, a):
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out = np.zeros_like(a)
        for w in self._pows:
            out += ((-((a // w) % p)) % p) * w
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        if self._tables_ready():
            return self._mul_flat[a * self.q + b]
        idx = (self._log_np[a] + self._log_np[b]) % (self.q - 1)
        return np.where((a == 0) | (b == 0), 0, self._exp_np[idx])

    def vsum(self, a, axis):
        if self.e == 1:
            return a.sum(axis=axis) % self.p
        p = self.p
        out = 0
        for w in self._pows:
            out = out + (((a // w) % p).sum(axis=axis) % p) * w
        return np.asarray(out, dtype=np.int64)

    # -- text -----------------------------------------------------------------
    def format(self, a: int) -> str:
        """Canonical text of an element: ``3`` or ``(1+2*s)``."""
        if self.e == 1 or a < self.p:
            return str(a)
        return "(" + _format_fp_poly(self.digits(a), "s", ascending=True) + ")"

    def parse_element(self, text: str) -> "FieldElement":
        from .parsing import evaluate

        symbols = {} if self.e == 1 else {"s": FieldElement(self, self.s)}
        value = evaluate(text, symbols, lambda n: FieldElement(self, self.from_int(n)))
        if not isinstance(value, FieldElement):  # pragma: no cover
            raise ParseError(f"{text!r} is not a field element")
        return value

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, str):
            return self.parse_element(value)
        return FieldElement(self, self.check(value))


def _format_fp_poly(coeffs, var, ascending=False):
    terms = []
    order = range(len(coeffs)) if ascending else range(len(coeffs) - 1, -1, -1)
    for i in order:
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


@functools.lru_cache(maxsize=None)
def field(p: int, e: int = 1, modulus: tuple | None = None) -> FieldSpec:
    """Interned constructor for :class:`FieldSpec`."""
    return FieldSpec(p, e, modulus)


def parse_field_spec(text: str) -> FieldSpec:
    """Parse ``p=5`` or ``p=3,e=2,mod=s^2+1``."""
    parts = {}
    for chunk in text.split(","):
        if "=" not in chunk:
            raise ParseError(f"bad field spec component {chunk!r}")
        key, value = chunk.split("=", 1)
        parts[key.strip()] = value.strip()
    unknown = set(parts) - {"p", "e", "mod"}
    if unknown or "p" not in parts:
        raise ParseError(f"bad field spec {text!r}")
    try:
        p = int(parts["p"])
        e = int(parts.get("e", "1"))
    except ValueError as exc:
        raise ParseError(f"bad field spec {text!r}") from exc
    modulus = None
    if "mod" in parts:
        modulus = parse_fp_poly(parts["mod"], p, "s")
        if e == 1 and "e" not in parts:
            e = len(modulus) - 1
    return field(p, e, modulus)


def parse_fp_poly(text: str, p: int, var: str) -> tuple[int, ...]:
    """Coefficients (low to high) of a polynomial over F_p written in ``var``."""
    from .parsing import evaluate

    if not is_prime(p) or p < 3:
        raise UnsupportedError(f"p must be an odd prime, got {p}")
    value = evaluate(text, {var: _FpList((0, 1), p)}, lambda n: _FpList((n % p,), p))
    return value.coeffs


class _FpList:
    """Minimal F_p[x] value used while parsing a field modulus."""

    def __init__(self, coeffs, p):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs, self.p = tuple(coeffs), p

    def _lift(self, other):
        return other if isinstance(other, _FpList) else _FpList((other % self.p,), self.p)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return _FpList([(x + y) % self.p for x, y in zip(a, b)], self.p)

    def __neg__(self):
        return _FpList([-c % self.p for c in self.coeffs], self.p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return _FpList((), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + x * y) % self.p
        return _FpList(out, self.p)

    def __pow__(self, k):
        if k < 0:
            raise ParseError("negative exponent in a polynomial over F_p")
        out = _FpList((1,), self.p)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        other = self._lift(other)
        if len(other.coeffs) != 1:
            raise ParseError("division by a non-constant in a polynomial over F_p")
        return self * pow(other.coeffs[0], self.p - 2, self.p)


@dataclass(frozen=True, order=False)
class FieldElement:
    """An element of F_q; ``value`` is its integer encoding."""

    spec: FieldSpec
    value: int

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise PreconditionError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.div(b, self.value))

    def __pow__(self, k: int):
        return FieldElement(self.spec, self.spec.pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.spec.from_int(other) and 0 <= other < self.spec.p
        return isinstance(other, FieldElement) and other.spec == self.spec and other.value == self.value

    def __hash__(self):
        return hash((self.spec, self.value))

    def __lt__(self, other):
        return self.value < other.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.spec.format(self.value)

    def __repr__(self):
        return f"FieldElement({self.spec}, {self})"

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def multiplicative_order(self) -> int:
        if not self.value:
            raise PreconditionError("zero has no multiplicative order")
        n = self.spec.q - 1
        order = n
        for r in prime_factors(n):
            while order % r == 0 and self.spec.pow(self.value, order // r) == 1:
                order //= r
        return order


def field_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {add, sub, mul, div} to two elements of the same field."""
    if x.spec != y.spec:
        raise PreconditionError("elements of different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if not y.value:
            raise ZeroDivisionError("division by zero in F_q")
        return x / y
    raise PreconditionError(f"unknown field operation {op!r}")


def primitive_root_of_unity(spec: FieldSpec, n: int) -> FieldElement:
    """zeta_n = g^((q-1)/n) for the canonical generator g."""
    if n < 1 or (spec.q - 1) % n:
        raise UnsupportedError(f"n = {n} does not divide q - 1 = {spec.q - 1}")
    return FieldElement(spec, spec.pow(spec.generator, (spec.q - 1) // n))


def root_of_unity_index(spec: FieldSpec, w: int, zeta: int, l: int) -> int:
    """The k in [0, l) with zeta^k = w, by brute force."""
    x = 1
    for k in range(l):
        if x == w:
            return k
        x = spec.mul(x, zeta)
    raise PreconditionError(f"{spec.format(w)} is not an {l}-th root of unity")


def power_residue_dlog(x: FieldElement, l: int) -> int:
    """k with x^((q-1)/l) = zeta_l^k."""
    spec = x.spec
    if not x.value:
        raise PreconditionError("power residue symbol of zero")
    if not is_prime(l):
        raise UnsupportedError(f"l = {l} is not prime")
    zeta = primitive_root_of_unity(spec, l).value
    w = spec.pow(x.value, (spec.q - 1) // l)
    return root_of_unity_index(spec, w, zeta, l)
