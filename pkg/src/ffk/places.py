"""Places of F_q(t): valuations, residues, weak approximation, Kummer splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ParseError, PreconditionError, UnsupportedError
from .ffield import FieldElement, FieldSpec
from .poly import (
    Polynomial,
    RationalFunction,
    crt,
    inverse_mod,
    irreducible_codes,
    is_irreducible,
    monic_from_code,
    parse_poly,
)

INF = math.inf


@dataclass(frozen=True)
class Place:
    """A finite place (monic irreducible ``pi``) or the place at infinity (``pi is None``)."""

    spec: FieldSpec
    pi: Optional[Polynomial] = None

    def __post_init__(self):
        if self.pi is not None:
            if self.pi.degree < 1 or not self.pi.is_monic():
                raise PreconditionError(f"place generator {self.pi} must be monic of degree >= 1")

    @classmethod
    def infinity(cls, spec):
        return cls(spec, None)

    @classmethod
    def finite(cls, pi: Polynomial, check: bool = True):
        if check and not is_irreducible(pi):
            raise PreconditionError(f"{pi} is not irreducible")
        return cls(pi.spec, pi)

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    @property
    def degree(self) -> int:
        return 1 if self.pi is None else self.pi.degree

    @property
    def residue_size(self) -> int:
        return self.spec.q ** self.degree

    def uniformizer(self) -> RationalFunction:
        if self.pi is None:
            return RationalFunction.t(self.spec).inverse()
        return RationalFunction(self.pi, _reduced=True)

    def sort_key(self):
        return (1, ()) if self.pi is None else (0, self.pi.sort_key())

    def __str__(self):
        return "inf" if self.pi is None else str(self.pi)

    def __repr__(self):
        return f"Place({self})"


def parse_place(spec: FieldSpec, text: str) -> Place:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return Place.infinity(spec)
    pi = parse_poly(spec, text)
    if pi.degree < 1:
        raise ParseError(f"{text!r} does not name a place")
    if not pi.is_monic():
        raise PreconditionError(f"place generator {pi} must be monic")
    return Place.finite(pi)


def places_up_to(spec: FieldSpec, max_degree: int, include_infinity: bool = True) -> list[Place]:
    out = []
    for d in range(1, max_degree + 1):
        out.extend(Place(spec, monic_from_code(spec, c, d)) for c in irreducible_codes(spec, d))
    if include_infinity:
        out.append(Place.infinity(spec))
    return out


def _lift(spec, r) -> RationalFunction:
    return RationalFunction.lift(spec, r)


def _linear_valuation(coeffs: tuple, c: int, spec) -> int:
    """Multiplicity of the root c, by repeated synthetic division."""
    if c == 0:
        k = 0
        while not coeffs[k]:
            k += 1
        return k
    mul, add = spec.mul, spec.add
    k = 0
    while True:
        acc, quo = 0, []
        for a in reversed(coeffs):
            acc = add(mul(acc, c), a)
            quo.append(acc)
        if acc:
            return k
        coeffs = tuple(reversed(quo[:-1]))
        k += 1


def poly_valuation(f: Polynomial, pi: Polynomial) -> float:
    if not f:
        return INF
    if pi.degree == 1:
        return _linear_valuation(f.coeffs, f.spec.neg(pi.coeffs[0]), f.spec)
    k = 0
    while True:
        q, r = divmod(f, pi)
        if r:
            return k
        f, k = q, k + 1


def valuation(r, v: Place):
    """v(r) as an int, or ``math.inf`` for r = 0."""
    r = _lift(v.spec, r)
    if not r:
        return INF
    if v.pi is None:
        return r.den.degree - r.num.degree
    if r.den.degree >= v.pi.degree:
        vd = poly_valuation(r.den, v.pi)
        if vd:
            return -vd
    return poly_valuation(r.num, v.pi)


def residue(r, v: Place):
    """Image of r in the residue field: Polynomial mod pi, or FieldElement at infinity."""
    r = _lift(v.spec, r)
    val = valuation(r, v)
    if val < 0:
        raise PreconditionError(f"residue needs valuation >= 0 at {v}, got {val}")
    if v.pi is None:
        if val > 0:
            return FieldElement(v.spec, 0)
        return FieldElement(v.spec, r.num.lc)
    if val > 0:
        return Polynomial(v.spec)
    return (r.num * inverse_mod(r.den, v.pi)) % v.pi


def residue_mod_power(r, pi: Polynomial, m: int) -> Polynomial:
    """r mod pi^m for r integral at pi."""
    r = _lift(pi.spec, r)
    mod = pi ** m
    if r.den.degree == 0:
        return r.num % mod
    return (r.num * inverse_mod(r.den, mod)) % mod


def smallest_place_outside(spec: FieldSpec, excluded) -> Polynomial:
    """Smallest monic irreducible (canonical order) not in ``excluded``."""
    excluded = set(excluded)
    d = 1
    while True:
        for c in irreducible_codes(spec, d):
            f = monic_from_code(spec, c, d)
            if f not in excluded:
                return f
        d += 1


def weak_approximation(constraints: Sequence[tuple[Place, object, int]]) -> RationalFunction:
    """y with v(y - target) >= m for every (v, target, m).

    Clears denominators at the finite places with D, solves the finite
    congruences by CRT, and, when infinity is constrained, enlarges the
    denominator by a power of an unused prime so that the CRT solution fits
    under the degree bound imposed at infinity.
    """
    if not constraints:
        raise PreconditionError("weak_approximation needs at least one constraint")
    spec = constraints[0][0].spec
    seen = set()
    for v, _, _ in constraints:
        if v in seen:
            raise PreconditionError(f"duplicate place {v} in weak_approximation")
        seen.add(v)
    one = Polynomial(spec, (1,))
    finite = []
    at_inf = None
    D = one
    for v, target, m in constraints:
        target = _lift(spec, target)
        if v.pi is None:
            at_inf = (target, int(m))
            continue
        vt = valuation(target, v)
        if m <= 0 and vt >= m:
            continue
        k = max(0, -vt) if vt != INF else 0
        finite.append((v.pi, target, int(m) + k))
        D = D * v.pi ** k
    mu = sum(M * pi.degree for pi, _, M in finite)
    E = one
    if at_inf is not None:
        need = mu - 1 + at_inf[1] - D.degree
        if need > 0:
            rho = smallest_place_outside(spec, [pi for pi, _, _ in finite] + [v.pi for v, _, _ in constraints])
            E = rho ** (-(-need // rho.degree))
    DE = D * E
    if at_inf is not None:
        W = RationalFunction(DE) * at_inf[0]
        base = W.num // W.den
    else:
        base = Polynomial(spec)
    if finite:
        mods = [pi ** M for pi, _, M in finite]
        res = [(residue_mod_power(RationalFunction(DE) * T, pi, M) - base) % mod
               for (pi, T, M), mod in zip(finite, mods)]
        Z = crt(res, mods)
    else:
        Z = Polynomial(spec)
    return RationalFunction(base + Z, DE)


def split_type(v: Place, n: int, f: Polynomial) -> list[tuple[int, int]]:
    """(e, f) pairs of the places above v in K(f^(1/n)) / K."""
    spec = v.spec
    if (spec.q - 1) % n:
        raise UnsupportedError(f"n = {n} does not divide q - 1 = {spec.q - 1}")
    if f.degree < 1 or not f.is_monic() or not is_irreducible(f):
        raise PreconditionError(f"{f} is not monic irreducible")
    if v.pi is None:
        if f.degree % n:
            raise PreconditionError(f"n = {n} does not divide deg f = {f.degree} (infinity clause)")
        from .laurent import hensel_nth_root, LaurentSeries

        root = hensel_nth_root(f, n, 8)
        if root ** n != LaurentSeries.from_polynomial(f, root.prec):
            raise PreconditionError("Hensel root failed its residual check")  # pragma: no cover
        return [(1, 1)] * n
    if v.pi == f:
        return [(n, 1)]
    m = kummer_residue_order(residue(RationalFunction(f, _reduced=True), v), v.pi, n)
    return [(1, m)] * (n // m)


def kummer_residue_order(r: Polynomial, pi: Polynomial, n: int) -> int:
    """Order of r in F^*/F^*n for F = F_q[t]/(pi); X^n - r splits into factors of this degree."""
    Q = pi.spec.q ** pi.degree
    if not r:
        raise PreconditionError("residue is zero")
    w = r.powmod((Q - 1) // n, pi)
    one = Polynomial(pi.spec, (1,))
    acc, m = w, 1
    while acc != one:
        acc = (acc * w) % pi
        m += 1
    return m
