"""Kummer towers K_M = K(u_1, ..., u_M), u_i^n = p_i(t), over K = F_q(t)."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from . import _linalg
from .errors import PrecisionError, PreconditionError, UnsupportedError
from .ffield import FieldElement, FieldSpec, primitive_root_of_unity
from .laurent import LaurentSeries, QPower, abs_infinity, hensel_nth_root
from .places import Place, poly_valuation
from .poly import (
    Polynomial,
    RationalFunction,
    discriminant,
    enumerate_Pn_plus,
    irreducible_factors,
    is_irreducible,
    kummer_polynomial,
)


@dataclass(frozen=True)
class TowerSpec:
    spec: FieldSpec
    n: int
    levels: tuple

    def __post_init__(self):
        spec, n = self.spec, self.n
        if n < 1 or n % spec.p == 0:
            raise PreconditionError(f"gcd(n, p) must be 1 (n = {n}, p = {spec.p})")
        if (spec.q - 1) % n:
            raise UnsupportedError(f"n = {n} does not divide q - 1 = {spec.q - 1}")
        seen = set()
        for f in self.levels:
            if f.spec != spec:
                raise PreconditionError("level over a different field")
            if f.degree < 1 or not f.is_monic() or not is_irreducible(f):
                raise PreconditionError(f"level {f} is not monic irreducible")
            if f in seen:
                raise PreconditionError(f"level {f} repeated")
            seen.add(f)

    @property
    def M(self) -> int:
        return len(self.levels)

    @property
    def zeta(self) -> int:
        return primitive_root_of_unity(self.spec, self.n).value

    @property
    def degree(self) -> int:
        return self.n ** self.M

    def basis(self) -> list[tuple]:
        return list(itertools.product(range(self.n), repeat=self.M))

    def require_Pn_plus(self):
        for f in self.levels:
            if f.degree % self.n:
                raise PreconditionError(f"level {f} is not in P_n^+ (n = {self.n} does not divide its degree)")

    def one(self) -> "TowerElement":
        return TowerElement.lift(self, 1)

    def u(self, i: int) -> "TowerElement":
        """The generator u_i (1-based)."""
        if not 1 <= i <= self.M:
            raise PreconditionError(f"no level u{i}")
        exps = tuple(1 if k == i - 1 else 0 for k in range(self.M))
        if self.n == 1:
            return TowerElement(self, {(0,) * self.M: RationalFunction(self.levels[i - 1], _reduced=True)})
        return TowerElement(self, {exps: RationalFunction.lift(self.spec, 1)})

    def t(self) -> "TowerElement":
        return TowerElement.lift(self, RationalFunction.t(self.spec))

    def __str__(self):
        return f"n={self.n}; levels=[{', '.join(str(f) for f in self.levels)}]"


def make_tower(spec: FieldSpec, n: int, levels) -> TowerSpec:
    return TowerSpec(spec, n, tuple(levels))


class TowerElement:
    """sum over exponent tuples e of coeffs[e] * prod u_i^e_i, coefficients in F_q(t)."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: TowerSpec, coeffs: dict):
        self.tower = tower
        self.coeffs = {e: c for e, c in coeffs.items() if c}

    @classmethod
    def lift(cls, tower, value) -> "TowerElement":
        if isinstance(value, TowerElement):
            return value
        r = RationalFunction.lift(tower.spec, value)
        return cls(tower, {(0,) * tower.M: r})

    def _other(self, other):
        if isinstance(other, TowerElement):
            if other.tower != self.tower:
                raise PreconditionError("elements of different towers")
            return other
        if isinstance(other, (int, FieldElement, Polynomial, RationalFunction)):
            return TowerElement.lift(self.tower, other)
        return NotImplemented

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return TowerElement(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, {e: -c for e, c in self.coeffs.items()})

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
        n, levels = self.tower.n, self.tower.levels
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                c = c1 * c2
                e = []
                for i, (a, b) in enumerate(zip(e1, e2)):
                    s = a + b
                    if s >= n:
                        s -= n
                        c = c * levels[i]
                    e.append(s)
                e = tuple(e)
                out[e] = out[e] + c if e in out else c
        return TowerElement(self.tower, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.tower.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if len(o.coeffs) == 1 and (0,) * self.tower.M in o.coeffs:
            inv = o.coeffs[(0,) * self.tower.M].inverse()
            return TowerElement(self.tower, {e: c * inv for e, c in self.coeffs.items()})
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    # -- linear algebra over K -----------------------------------------------------------
    def vector(self) -> list:
        zero = RationalFunction.lift(self.tower.spec, 0)
        return [self.coeffs.get(e, zero) for e in self.tower.basis()]

    def matrix(self) -> list:
        """Matrix of multiplication by self in the product basis (columns are images)."""
        basis = self.tower.basis()
        one = RationalFunction.lift(self.tower.spec, 1)
        cols = [(self * TowerElement(self.tower, {b: one})).vector() for b in basis]
        return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]

    def norm(self) -> RationalFunction:
        spec = self.tower.spec
        return _linalg.det(self.matrix(), RationalFunction.lift(spec, 1), RationalFunction.lift(spec, 0))

    def trace(self) -> RationalFunction:
        m = self.matrix()
        return sum((m[i][i] for i in range(len(m))), RationalFunction.lift(self.tower.spec, 0))

    def inverse(self) -> "TowerElement":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero tower element")
        basis = self.tower.basis()
        if len(basis) == 1:
            return TowerElement(self.tower, {basis[0]: self.coeffs[basis[0]].inverse()})
        rhs = TowerElement.lift(self.tower, 1).vector()
        sol = _linalg.solve(self.matrix(), rhs)
        return TowerElement(self.tower, dict(zip(basis, sol)))

    # -- misc -----------------------------------------------------------------------------
    def is_integral(self) -> bool:
        """All coordinates polynomial (integral over F_q[t] in the product basis)."""
        return all(c.is_polynomial() for c in self.coeffs.values())

    def coefficient(self, exps) -> RationalFunction:
        return self.coeffs.get(tuple(exps), RationalFunction.lift(self.tower.spec, 0))

    def extend_to(self, bigger: TowerSpec) -> "TowerElement":
        """Re-embed into a tower whose levels extend these ones."""
        if bigger.n != self.tower.n or bigger.levels[: self.tower.M] != self.tower.levels:
            raise PreconditionError("target tower does not extend this one")
        pad = (0,) * (bigger.M - self.tower.M)
        return TowerElement(bigger, {e + pad: c for e, c in self.coeffs.items()})

    def total_degree(self) -> int:
        n, levels = self.tower.n, self.tower.levels
        best = 0
        for e, c in self.coeffs.items():
            d = c.num.degree + c.den.degree + sum(k * f.degree // n for k, f in zip(e, levels))
            best = max(best, d)
        return best

    def __str__(self):
        if not self.coeffs:
            return "0"
        base = (0,) * self.tower.M
        if list(self.coeffs) == [base]:
            return str(self.coeffs[base])
        spec = self.tower.spec
        terms = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mono = "*".join(f"u{i + 1}" if k == 1 else f"u{i + 1}^{k}" for i, k in enumerate(e) if k)
            if c.is_polynomial() and c.num.is_constant():
                cs = spec.format(c.num.lc)
                if not mono:
                    terms.append(cs)
                elif c.num.lc == 1:
                    terms.append(mono)
                else:
                    terms.append(f"{cs}*{mono}")
            else:
                cs = f"({c})"
                terms.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(terms)

    def __repr__(self):
        return f"TowerElement({self})"

    def to_json(self):
        return {
            "levels": [str(f) for f in self.tower.levels],
            "coeffs": [{"exps": list(e), "value": str(self.coeffs[e])} for e in sorted(self.coeffs)],
        }


def parse_tower_element(tower: TowerSpec, text: str) -> TowerElement:
    from .parsing import evaluate

    symbols = {"t": tower.t()}
    if tower.spec.e > 1:
        symbols["s"] = TowerElement.lift(tower, FieldElement(tower.spec, tower.spec.s))
    for i in range(1, tower.M + 1):
        symbols[f"u{i}"] = tower.u(i)
    value = evaluate(text, symbols, lambda k: TowerElement.lift(tower, k))
    return TowerElement.lift(tower, value)


def tower_arith(x: TowerElement, y: TowerElement, op: str) -> TowerElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise PreconditionError(f"unknown tower operation {op!r}")


# ----------------------------------------------------------------------------
# embeddings into F_q((1/t))


@functools.lru_cache(maxsize=256)
def _root(f: Polynomial, n: int, prec: int) -> LaurentSeries:
    return hensel_nth_root(f, n, prec)


def embedding_tuples(tower: TowerSpec) -> list[tuple]:
    return list(itertools.product(range(tower.n), repeat=tower.M))


def conjugate(x: TowerElement, j: tuple, prec: int) -> LaurentSeries:
    """Image of x under u_i -> zeta^j_i * (n-th root of p_i with leading coefficient 1)."""
    tower = x.tower
    tower.require_Pn_plus()
    spec = tower.spec
    zeta = tower.zeta
    roots = [_root(f, tower.n, prec) for f in tower.levels]
    total = None
    for e, c in x.coeffs.items():
        term = LaurentSeries.from_ratfunc(c, prec)
        twist = 1
        for i, k in enumerate(e):
            if k:
                term = term * roots[i] ** k
                twist = spec.mul(twist, spec.pow(zeta, j[i] * k))
        if twist != 1:
            term = term.scale(twist)
        total = term if total is None else total + term
    if total is None:
        raise PreconditionError("conjugates of zero")
    return total


def conjugates(x: TowerElement, prec: int) -> list[LaurentSeries]:
    """All n^M embeddings of x, ordered lexicographically by (j_1, ..., j_M)."""
    return [conjugate(x, j, prec) for j in embedding_tuples(x.tower)]


def default_prec(x: TowerElement) -> int:
    return 2 * (1 + x.total_degree())


def norm_max(x: TowerElement, prec: int | None = None, max_prec: int = 4096) -> QPower:
    """max_j |sigma_j(x)|_inf as an exact power of q."""
    if not x:
        raise PreconditionError("norm_max of zero")
    prec = prec or default_prec(x)
    while prec <= max_prec:
        conj = conjugates(x, prec)
        if all(c.coeffs for c in conj):
            return max(abs_infinity(c) for c in conj)
        prec *= 2
    raise PrecisionError("precision exhausted while certifying leading terms")


# ----------------------------------------------------------------------------
# discriminants and level bounds


def _check_Pn_plus(p: Polynomial, n: int):
    if p.degree < 1 or not p.is_monic() or p.degree % n or not is_irreducible(p):
        raise PreconditionError(f"{p} is not in P_{n}^+")


def verify_integral_basis(p: Polynomial, n: int) -> dict:
    """disc(X^n - p) and its valuations at the finite places dividing it."""
    _check_Pn_plus(p, n)
    disc = discriminant(kummer_polynomial(p, n))
    vp = poly_valuation(disc, p)
    cofactor = disc // p ** vp
    valuations = {Place(p.spec, p): vp}
    if cofactor.degree > 0:
        for g, k in irreducible_factors(cofactor):
            valuations[Place(p.spec, g)] = k
    ok = vp == n - 1 and all(k == 0 for pl, k in valuations.items() if pl.pi != p)
    return {"disc": disc, "valuations": valuations, "ok": ok}


def comaximality_report(tower: TowerSpec) -> bool:
    """True iff the level discriminants have pairwise disjoint finite supports."""
    supports = []
    for f in tower.levels:
        disc = discriminant(kummer_polynomial(f, tower.n))
        supports.append(disc)
    for a, b in itertools.combinations(supports, 2):
        from .poly import gcd

        if gcd(a, b).degree > 0:
            return False
    return True


def power_of_q(q: int, N: int) -> int:
    k = 0
    while N > 1 and N % q == 0:
        N //= q
        k += 1
    if N != 1:
        raise PreconditionError(f"N must be a power of q = {q}")
    return k


def effective_level_bound(spec: FieldSpec, n: int, N: int) -> list[Polynomial]:
    """Every p in P_n^+ with q^deg p <= N, in enumeration order."""
    k = power_of_q(spec.q, N)
    return enumerate_Pn_plus(spec, n, k)


# ----------------------------------------------------------------------------
# bounded-norm enumeration


def _polys_up_to(spec, k):
    """All f in F_q[t] with deg f <= k (zero included), in canonical order."""
    if k < 0:
        return [Polynomial(spec)]
    q = spec.q
    return [Polynomial(spec, [(c // q ** i) % q for i in range(k + 1)]) for c in range(q ** (k + 1))]


def _bounded_exponent(tower: TowerSpec, k: int) -> list[TowerElement]:
    """Integral x in the tower with ||x||_max <= q^k, by descent on the top level."""
    if k < 0:
        return [TowerElement.lift(tower, 0)]
    if tower.M == 0:
        return [TowerElement.lift(tower, f) for f in _polys_up_to(tower.spec, k)]
    n = tower.n
    lower = TowerSpec(tower.spec, n, tower.levels[:-1])
    step = tower.levels[-1].degree // n
    parts = []
    for i in range(n):
        parts.append([a.extend_to(tower) for a in _bounded_exponent(lower, k - i * step)])
    top = tower.u(tower.M)
    powers = [tower.one()]
    for _ in range(1, n):
        powers.append(powers[-1] * top)
    bound = QPower(tower.spec.q, k)
    out = []
    for combo in itertools.product(*parts):
        x = TowerElement.lift(tower, 0)
        for a, w in zip(combo, powers):
            if a:
                x = x + a * w
        if not x or norm_max(x) <= bound:
            out.append(x)
    return out


def enumerate_bounded(tower: TowerSpec, N: int) -> list[TowerElement]:
    """All integral x of the tower with ||x||_max <= N (zero included)."""
    tower.require_Pn_plus()
    k = power_of_q(tower.spec.q, N)
    return _bounded_exponent(tower, k)
