"""Symbol algebras (a, b)_zeta of prime degree l over F_q(t) and their local invariants."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from . import _linalg
from .errors import ParseError, PreconditionError, UnsupportedError
from .ffield import FieldElement, FieldSpec, is_prime, primitive_root_of_unity, root_of_unity_index
from .places import Place, poly_valuation, valuation, weak_approximation
from .poly import (
    Polynomial,
    RationalFunction,
    inverse_mod,
    irreducible_factors,
    monic_from_code,
    parse_ratfunc,
)


@dataclass(frozen=True)
class SymbolAlgebra:
    """u^l = a, v^l = b, v u = zeta u v."""

    l: int
    a: RationalFunction
    b: RationalFunction

    def __post_init__(self):
        spec = self.a.spec
        if not is_prime(self.l):
            raise UnsupportedError(f"l = {self.l} is not prime")
        if (spec.q - 1) % self.l:
            raise UnsupportedError(f"l = {self.l} does not divide q - 1 = {spec.q - 1}")
        if not self.a or not self.b:
            raise PreconditionError("symbol entries must be nonzero")

    @classmethod
    def make(cls, spec, a, b, l: int) -> "SymbolAlgebra":
        return cls(l, RationalFunction.lift(spec, a), RationalFunction.lift(spec, b))

    @property
    def spec(self) -> FieldSpec:
        return self.a.spec

    @property
    def zeta(self) -> int:
        return primitive_root_of_unity(self.spec, self.l).value

    def basis(self):
        return list(itertools.product(range(self.l), repeat=2))

    def element(self, coords) -> "AlgebraElement":
        """From a dict {(i, j): value} or a list in basis order."""
        if not isinstance(coords, dict):
            coords = dict(zip(self.basis(), coords))
        return AlgebraElement(self, {k: RationalFunction.lift(self.spec, v) for k, v in coords.items()})

    def one(self):
        return self.element({(0, 0): 1})

    def u(self):
        return self.element({(1, 0): 1})

    def v(self):
        return self.element({(0, 1): 1})

    def __str__(self):
        return f"({self.a} | {self.b}; l={self.l})"


_ALGEBRA = re.compile(r"^\s*\((.*)\|(.*);\s*l\s*=\s*(\d+)\s*\)\s*$")


def parse_algebra(spec: FieldSpec, text: str) -> SymbolAlgebra:
    m = _ALGEBRA.match(text)
    if m is None:
        raise ParseError(f"algebra {text!r} is not of the form (a | b; l=k)")
    return SymbolAlgebra(int(m.group(3)), parse_ratfunc(spec, m.group(1).strip()), parse_ratfunc(spec, m.group(2).strip()))


class AlgebraElement:
    """sum x_ij u^i v^j with x_ij in F_q(t)."""

    __slots__ = ("A", "coords")

    def __init__(self, A: SymbolAlgebra, coords: dict):
        self.A = A
        self.coords = {k: c for k, c in coords.items() if c}

    def coord(self, i, j) -> RationalFunction:
        return self.coords.get((i, j), RationalFunction.lift(self.A.spec, 0))

    def _other(self, other):
        if isinstance(other, AlgebraElement):
            if other.A != self.A:
                raise PreconditionError("elements of different algebras")
            return other
        if isinstance(other, (int, FieldElement, Polynomial, RationalFunction)):
            return self.A.element({(0, 0): other})
        return NotImplemented

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coords == o.coords

    __hash__ = None

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.coords)
        for k, c in o.coords.items():
            out[k] = out[k] + c if k in out else c
        return AlgebraElement(self.A, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.A, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        A = self.A
        l, spec, zeta = A.l, A.spec, A.zeta
        out = {}
        for (i, j), c1 in self.coords.items():
            for (k, m), c2 in o.coords.items():
                c = c1 * c2
                tw = spec.pow(zeta, j * k)
                if tw != 1:
                    c = c * FieldElement(spec, tw)
                ii, jj = i + k, j + m
                if ii >= l:
                    ii -= l
                    c = c * A.a
                if jj >= l:
                    jj -= l
                    c = c * A.b
                key = (ii, jj)
                out[key] = out[key] + c if key in out else c
        return AlgebraElement(A, out)

    def __rmul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self

    def scale(self, r) -> "AlgebraElement":
        r = RationalFunction.lift(self.A.spec, r)
        return AlgebraElement(self.A, {k: c * r for k, c in self.coords.items()})

    def conj(self) -> "AlgebraElement":
        """Standard involution (l = 2 only)."""
        if self.A.l != 2:
            raise UnsupportedError("conj is defined for quaternion algebras (l = 2) only")
        return AlgebraElement(self.A, {k: (c if k == (0, 0) else -c) for k, c in self.coords.items()})

    def left_matrix(self):
        basis = self.A.basis()
        cols = []
        for bk in basis:
            prod = self * AlgebraElement(self.A, {bk: RationalFunction.lift(self.A.spec, 1)})
            cols.append([prod.coord(*bi) for bi in basis])
        return [[cols[c][r] for c in range(len(basis))] for r in range(len(basis))]

    def inverse(self) -> "AlgebraElement":
        if not self.coords:
            raise PreconditionError("zero is not invertible")
        basis = self.A.basis()
        rhs = [RationalFunction.lift(self.A.spec, 1 if b == (0, 0) else 0) for b in basis]
        try:
            sol = _linalg.solve(self.left_matrix(), rhs)
        except PreconditionError:
            raise PreconditionError("element is not invertible (reduced norm 0)") from None
        return AlgebraElement(self.A, dict(zip(basis, sol)))

    def __str__(self):
        if not self.coords:
            return "0"
        terms = []
        for (i, j) in sorted(self.coords):
            c = self.coords[(i, j)]
            mono = "*".join(x for x in (("u" if i == 1 else f"u^{i}") if i else "", ("v" if j == 1 else f"v^{j}") if j else "") if x)
            cs = f"({c})"
            terms.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(terms)

    def __repr__(self):
        return f"AlgebraElement({self})"


def algebra_arith(x: AlgebraElement, y: AlgebraElement | None, op: str) -> AlgebraElement:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "conj":
        return x.conj()
    if op == "inv":
        return x.inverse()
    raise PreconditionError(f"unknown algebra operation {op!r}")


# ----------------------------------------------------------------------------
# reduced trace and norm through the splitting field K(u)


class _Ku:
    """Arithmetic in K[u]/(u^l - a) on coefficient lists."""

    def __init__(self, A: SymbolAlgebra):
        self.l, self.a = A.l, A.a
        self.zero = [RationalFunction.lift(A.spec, 0)] * A.l
        self.one = [RationalFunction.lift(A.spec, 1)] + self.zero[1:]

    def mul(self, x, y):
        out = list(self.zero)
        for i, c1 in enumerate(x):
            if not c1:
                continue
            for j, c2 in enumerate(y):
                if not c2:
                    continue
                c = c1 * c2
                k = i + j
                if k >= self.l:
                    k -= self.l
                    c = c * self.a
                out[k] = out[k] + c
        return out

    def add(self, x, y):
        return [p + q for p, q in zip(x, y)]

    def neg(self, x):
        return [-p for p in x]


def _regular_matrix(x: AlgebraElement):
    """Matrix of left multiplication by x on A as a right K(u)-space with basis v^k."""
    A = x.A
    l, spec, zeta = A.l, A.spec, A.zeta
    zinv = spec.inv(zeta)
    zero = RationalFunction.lift(spec, 0)
    C = []
    for m in range(l):
        row = []
        for k in range(l):
            j = (m - k) % l
            entry = []
            for i in range(l):
                c = x.coord(i, j)
                if c:
                    tw = spec.pow(zinv, i * m)
                    if tw != 1:
                        c = c * FieldElement(spec, tw)
                    if j + k >= l:
                        c = c * A.b
                entry.append(c if c else zero)
            row.append(entry)
        C.append(row)
    return C


def nrd(x: AlgebraElement) -> RationalFunction:
    ring = _Ku(x.A)
    det = _linalg.det_leibniz(_regular_matrix(x), ring.mul, ring.add, ring.neg, ring.one, ring.zero)
    if any(det[1:]):
        raise AssertionError("reduced norm left K")  # pragma: no cover
    return det[0]


def trd(x: AlgebraElement) -> RationalFunction:
    C = _regular_matrix(x)
    total = RationalFunction.lift(x.A.spec, 0)
    for m in range(x.A.l):
        total = total + C[m][m][0]
    return total


# ----------------------------------------------------------------------------
# local invariants


def _unit_residue(r: RationalFunction, v: Place):
    """(v(r), residue of r / pi^v(r)) with the residue as Polynomial mod pi or int at infinity."""
    if v.pi is None:
        return r.den.degree - r.num.degree, r.num.lc
    pi = v.pi
    num, den = r.num, r.den
    k1 = poly_valuation(num, pi)
    k2 = poly_valuation(den, pi)
    if k1:
        num = num // pi ** k1
    if k2:
        den = den // pi ** k2
    return k1 - k2, (num * inverse_mod(den, pi)) % pi


def tame_symbol(A: SymbolAlgebra, v: Place):
    """(-1)^(v(a)v(b)) a^v(b) b^(-v(a)) mod v, as a residue-field element."""
    spec = A.spec
    va, ra = _unit_residue(A.a, v)
    vb, rb = _unit_residue(A.b, v)
    sign = spec.from_int(-1) if (va * vb) % 2 else 1
    if v.pi is None:
        s = spec.mul(spec.pow(ra, vb), spec.pow(rb, -va))
        return spec.mul(s, sign)
    pi = v.pi

    def rpow(x, k):
        if k < 0:
            x, k = inverse_mod(x, pi), -k
        return x.powmod(k, pi)

    return (rpow(ra, vb) * rpow(rb, -va)).scale(sign) % pi


def local_invariant(A: SymbolAlgebra, v: Place) -> Fraction:
    """inv_v(A) = k/l with zeta^k = (tame symbol)^((|F_v| - 1)/l)."""
    spec, l = A.spec, A.l
    s = tame_symbol(A, v)
    Q = v.residue_size
    if v.pi is None:
        w = spec.pow(s, (Q - 1) // l)
    else:
        wp = s.powmod((Q - 1) // l, v.pi)
        if wp.degree > 0:
            raise AssertionError("power residue left the constant field")  # pragma: no cover
        w = wp.lc
    k = root_of_unity_index(spec, w, A.zeta, l)
    return Fraction(k, l)


def candidate_places(A: SymbolAlgebra) -> list[Place]:
    """Places where a or b has nonzero valuation, plus infinity."""
    found = set()
    for r in (A.a, A.b):
        for f in (r.num, r.den):
            if f.degree > 0:
                for g, _ in irreducible_factors(f):
                    found.add(g)
    places = [Place(A.spec, g) for g in sorted(found, key=lambda g: g.sort_key())]
    return places + [Place.infinity(A.spec)]


def invariant_profile(A: SymbolAlgebra) -> dict:
    """Nonzero local invariants, keyed by place in canonical order."""
    out = {}
    for v in candidate_places(A):
        inv = local_invariant(A, v)
        if inv:
            out[v] = inv
    return out


def ramified_places(A: SymbolAlgebra) -> set:
    return set(invariant_profile(A))


def reciprocity_check(A: SymbolAlgebra) -> bool:
    total = sum((local_invariant(A, v) for v in candidate_places(A)), Fraction(0))
    return total.denominator == 1


def profile_json(profile: dict) -> list:
    return [{"place": str(v), "num": f.numerator, "den": f.denominator} for v, f in profile.items()]


def random_algebra(spec: FieldSpec, l: int, rng: random.Random, degree: int = 3) -> SymbolAlgebra:
    def rand_poly():
        while True:
            f = Polynomial(spec, [rng.randrange(spec.q) for _ in range(rng.randint(1, degree + 1))])
            if f:
                return f

    def rand_rat():
        if rng.random() < 0.25:
            return RationalFunction(rand_poly(), rand_poly())
        return RationalFunction(rand_poly())

    return SymbolAlgebra(l, rand_rat(), rand_rat())


# ----------------------------------------------------------------------------
# sibling pairs


def _a_candidates(spec: FieldSpec, l: int, finite, max_degree: int):
    nonres = [c for c in range(1, spec.q) if spec.nth_root(c, l) is None]
    for c in nonres:
        yield RationalFunction.lift(spec, c)
    for pi in finite:
        for c in range(1, spec.q):
            yield RationalFunction(pi.scale(c))
    for d in range(1, max_degree + 1):
        for code in range(spec.q ** d):
            g = monic_from_code(spec, code, d)
            for c in range(1, spec.q):
                yield RationalFunction(g.scale(c))


def _b_candidates(spec, l, places):
    # finite uniformizers take priority over 1/t
    places = sorted(places, key=Place.sort_key)
    unis = [v.uniformizer() for v in places]
    exps = sorted(itertools.product(range(l), repeat=len(unis)),
                  key=lambda e: (sum(1 for k in e if k), sum(e), e[::-1]))
    for e in exps:
        if not any(e):
            continue
        b = RationalFunction.lift(spec, 1)
        for u, k in zip(unis, e):
            b = b * u ** k
        yield b


def _search(spec, l, triple, target, max_degree):
    finite = [v.pi for v in triple if v.pi is not None]
    target = set(target)
    for a in _a_candidates(spec, l, finite, max_degree):
        for b in _b_candidates(spec, l, triple):
            A = SymbolAlgebra(l, a, b)
            if ramified_places(A) == target:
                return A
    raise PreconditionError(f"no algebra ramified exactly at {sorted(map(str, target))} within degree cap {max_degree}")


def construct_sibling_pair(p: Place, q1: Place, q2: Place, l: int, max_degree: int = 2):
    """A ramified exactly at {p, q1} and B ramified exactly at {p, q2}."""
    spec = p.spec
    if len({p, q1, q2}) != 3:
        raise PreconditionError("p, q1, q2 must be pairwise distinct")
    if not is_prime(l):
        raise UnsupportedError(f"l = {l} is not prime")
    if (spec.q - 1) % l:
        raise UnsupportedError(f"l = {l} does not divide q - 1 = {spec.q - 1}")
    triple = [p, q1, q2]
    A = _search(spec, l, triple, {p, q1}, max_degree)
    B = _search(spec, l, triple, {p, q2}, max_degree)
    return A, B


# ----------------------------------------------------------------------------
# norm-one traces and integral splitting


def _random_poly(spec, rng, height):
    return Polynomial(spec, [rng.randrange(spec.q) for _ in range(rng.randint(1, height + 1))])


def sample_trace_of_norm_one(A: SymbolAlgebra, count: int, seed: int, height: int = 2) -> list[RationalFunction]:
    """trd(y conj(y)^-1) for seeded random invertible y."""
    if A.l != 2:
        raise UnsupportedError("norm-one sampling is implemented for l = 2")
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        y = A.element([_random_poly(A.spec, rng, height) for _ in range(4)])
        n = nrd(y)
        if not n:
            continue
        # conj(y)^-1 = y / nrd(y), so trd(y conj(y)^-1) = trd(y^2) / nrd(y)
        out.append(trd(y * y) / n)
    return out


def norm_one_sample(A: SymbolAlgebra, y: AlgebraElement) -> AlgebraElement:
    return y * y.conj().inverse()


def split_integral(x, delta_a, delta_b) -> RationalFunction:
    """y with v(y) >= 0 on delta_b and v(x - y) >= 0 on delta_a."""
    delta_a, delta_b = set(delta_a), set(delta_b)
    places = delta_a | delta_b
    if not places:
        return RationalFunction.lift(x.spec, 0) if isinstance(x, RationalFunction) else x
    spec = next(iter(places)).spec
    x = RationalFunction.lift(spec, x)
    for v in delta_a & delta_b:
        if valuation(x, v) < 0:
            raise PreconditionError(f"x must be integral at {v}, which lies in both sets")
    cons = [(v, 0, 0) for v in sorted(delta_b, key=Place.sort_key)]
    cons += [(v, x, 0) for v in sorted(delta_a - delta_b, key=Place.sort_key)]
    return weak_approximation(cons)
