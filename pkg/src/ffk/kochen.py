"""The Kochen operator, (1,1)-places and holomorphy rings for K and single Kummer steps.

A field L is a :class:`~ffk.tower.TowerSpec`: K itself is the tower with no
levels, a Kummer step K(f^(1/n)) has one level.  Elements of K may be passed
as rational functions and are lifted on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PrecisionError, PreconditionError, UnsupportedError
from .laurent import LaurentSeries, nth_root_unit_batch
from .places import INF, Place, split_type, valuation
from .poly import Polynomial, RationalFunction
from .tower import TowerElement, TowerSpec, conjugate, embedding_tuples


class _Pole:
    """Marker for arguments where (a^q - a)^2 = 1, so beta and gamma are undefined."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"

    __str__ = __repr__


POLE = _Pole()


@dataclass(frozen=True)
class KochenContext:
    place: Place
    t_p: RationalFunction
    q: int

    @classmethod
    def at(cls, place: Place) -> "KochenContext":
        return cls(place, place.uniformizer(), place.residue_size)


def base_field(spec) -> TowerSpec:
    return TowerSpec(spec, 1, ())


# ----------------------------------------------------------------------------
# places of L above a place of K


@dataclass(frozen=True)
class ExtensionPlace:
    """A place of L above ``base``.

    ``kind`` is one of ``base`` (L = K), ``ramified``, ``inert``,
    ``split_inf`` (index ``j`` into the embedding tuples) or ``split_finite``
    (degree-one place t = c, u -> zeta^j * w * (f(c + s)/f(c))^(1/n)).
    """

    L: TowerSpec
    base: Place
    kind: str
    e: int
    f: int
    j: tuple = ()
    c: int = 0
    w: int = 0

    @property
    def residue_size(self) -> int:
        return self.base.residue_size ** self.f

    def __str__(self):
        tag = {"base": "", "ramified": " ramified", "inert": " inert"}.get(self.kind)
        if tag is None:
            tag = f" branch {list(self.j)}"
        return f"{self.base}{tag} (e={self.e}, f={self.f})"

    def to_json(self):
        return {"base": str(self.base), "kind": self.kind, "e": self.e, "f": self.f, "branch": list(self.j)}

    # -- valuations ----------------------------------------------------------------------
    def valuation(self, x) -> float:
        x = TowerElement.lift(self.L, x) if not isinstance(x, TowerElement) else x
        if not x:
            return INF
        if self.kind == "base":
            return valuation(x.coefficient(()), self.base)
        if self.kind == "ramified":
            n = self.L.n
            return min(n * valuation(c, self.base) + e[0] for e, c in x.coeffs.items())
        if self.kind == "inert":
            return min(valuation(c, self.base) for c in x.coeffs.values())
        return _series_valuation(self, x)


def _local_series(P: ExtensionPlace, x: TowerElement, prec: int) -> LaurentSeries:
    if P.kind == "split_inf":
        return conjugate(x, P.j, prec)
    spec = P.L.spec
    f = P.L.levels[0]
    n = P.L.n
    fs = f.shift(P.c)
    G = np.zeros((1, prec), dtype=np.int64)
    inv = spec.inv(fs.coeffs[0])
    G[0, : min(prec, len(fs.coeffs))] = [spec.mul(v, inv) for v in fs.coeffs[:prec]]
    R = LaurentSeries(spec, 0, nth_root_unit_batch(spec, G, n)[0].tolist(), _normal=True)
    zeta = P.L.zeta
    root = R.scale(spec.mul(P.w, spec.pow(zeta, P.j[0])))

    def ascending(g: Polynomial) -> LaurentSeries:
        lead = next(i for i, v in enumerate(g.coeffs) if v)
        coeffs = list(g.coeffs[: lead + prec]) + [0] * max(0, lead + prec - len(g.coeffs))
        return LaurentSeries(spec, 0, coeffs)

    total = None
    for e, c in x.coeffs.items():
        term = ascending(c.num.shift(P.c)) / ascending(c.den.shift(P.c))
        if e[0]:
            term = term * root ** e[0]
        total = term if total is None else total + term
    return total


def _series_valuation(P: ExtensionPlace, x: TowerElement, prec: int = 16, max_prec: int = 4096):
    while prec <= max_prec:
        ser = _local_series(P, x, prec)
        if ser.coeffs:
            return ser.order
        prec *= 2
    raise PrecisionError("precision exhausted while computing a valuation")


def places_above(L: TowerSpec, base: Place) -> list[ExtensionPlace]:
    if L.M == 0 or L.n == 1:
        if L.M and L.n == 1:
            raise UnsupportedError("degree-one levels are not supported; use the base field")
        return [ExtensionPlace(L, base, "base", 1, 1)]
    n = L.n
    if base.pi is None:
        L.require_Pn_plus()
        return [ExtensionPlace(L, base, "split_inf", 1, 1, j=j) for j in embedding_tuples(L)]
    if L.M > 1:
        raise UnsupportedError("finite places are supported for a single Kummer step only")
    f = L.levels[0]
    if base.pi == f:
        return [ExtensionPlace(L, base, "ramified", n, 1)]
    data = split_type(base, n, f)
    m = data[0][1]
    if m == n:
        return [ExtensionPlace(L, base, "inert", 1, n)]
    if m == 1 and base.degree == 1:
        spec = L.spec
        c = spec.neg(base.pi.coeffs[0])
        w = spec.nth_root(f(c), n)
        return [ExtensionPlace(L, base, "split_finite", 1, 1, j=(j,), c=c, w=w) for j in range(n)]
    raise UnsupportedError(f"split type {data} at {base} is outside the supported cases")


# ----------------------------------------------------------------------------
# the operator


def _lift(L: Optional[TowerSpec], a, spec):
    if isinstance(a, TowerElement):
        return a
    if L is None:
        return RationalFunction.lift(spec, a)
    return TowerElement.lift(L, a)


def _frob_ratfunc(r: RationalFunction, Q: int) -> RationalFunction:
    return RationalFunction(r.num.frobenius(Q), r.den.frobenius(Q), _reduced=True)


def frobenius(x, Q: int):
    """x^Q for Q a power of p."""
    if isinstance(x, RationalFunction):
        return _frob_ratfunc(x, Q)
    L = x.tower
    out = {}
    for e, c in x.coeffs.items():
        c = _frob_ratfunc(c, Q)
        exps = []
        for i, k in enumerate(e):
            a, b = divmod(k * Q, L.n)
            if a:
                c = c * L.levels[i] ** a
            exps.append(b)
        exps = tuple(exps)
        out[exps] = out[exps] + c if exps in out else c
    return TowerElement(L, out)


def beta(a, ctx: KochenContext, L: Optional[TowerSpec] = None):
    """(a^q - a)/((a^q - a)^2 - 1), or POLE."""
    a = _lift(L, a, ctx.place.spec)
    d = frobenius(a, ctx.q) - a
    den = d * d - 1
    if not den:
        return POLE
    return d / den


def gamma(a, ctx: KochenContext, L: Optional[TowerSpec] = None):
    """beta(a)/t_p, or POLE."""
    b = beta(a, ctx, L)
    if b is POLE:
        return POLE
    return b / ctx.t_p


def _common_denominator(x) -> Polynomial:
    from .poly import gcd

    if isinstance(x, RationalFunction):
        return x.den
    dens = [c.den for c in x.coeffs.values()]
    if not dens:
        return Polynomial(x.tower.spec, (1,))
    D = dens[0]
    for d in dens[1:]:
        D = D * (d // gcd(D, d))
    return D


def _beta_parts(a, Q: int):
    """(A, B) with beta(a) = A*B/(A^2 - B^2), A, B free of denominators."""
    D = _common_denominator(a)
    DQ1 = D ** (Q - 1)
    if isinstance(a, RationalFunction):
        N = a.num * (D // a.den)
        return N.frobenius(Q) - N * DQ1, D.frobenius(Q)
    L = a.tower
    spec = L.spec
    out: dict = {}
    for e, c in a.coeffs.items():
        N = c.num * (D // c.den)
        # (N u^e)^Q = N^(Q) * prod p_i^(floor) * u^(e Q mod n)
        F = N.frobenius(Q)
        exps = []
        for i, k in enumerate(e):
            hi, lo = divmod(k * Q, L.n)
            if hi:
                F = F * L.levels[i] ** hi
            exps.append(lo)
        exps = tuple(exps)
        out[exps] = out[exps] + F if exps in out else F
        out[e] = out[e] - N * DQ1 if e in out else -(N * DQ1)
    zero = Polynomial(spec)
    A = TowerElement(L, {e: RationalFunction(f, _reduced=True) for e, f in out.items() if f != zero})
    return A, TowerElement.lift(L, D.frobenius(Q))


def _val(P, x):
    if isinstance(P, Place):
        return valuation(x, P)
    return P.valuation(x)


def beta_valuation(a, P, ctx: KochenContext):
    """v_P(beta(a)) from the unreduced fraction A*B/((A - B)(A + B)); POLE if undefined."""
    A, B = _beta_parts(a, ctx.q)
    vm, vp = _val(P, A - B), _val(P, A + B)
    if vm == INF or vp == INF:
        return POLE
    return _val(P, A) + _val(P, B) - vm - vp


def gamma_valuation(a, P, ctx: KochenContext):
    vb = beta_valuation(a, P, ctx)
    if vb is POLE:
        return POLE
    e = 1 if isinstance(P, Place) else P.e
    return vb - e


@dataclass(frozen=True)
class ValuationCase:
    tag: str  # Pos, Neg, ZeroHigher, ZeroUnit
    predicted: object  # int, or the string "<=0"

    @property
    def clause(self) -> str:
        return {"Pos": "i", "Neg": "ii", "ZeroHigher": "iii", "ZeroUnit": "iv"}[self.tag]

    def to_json(self):
        return {"tag": self.tag, "clause": self.clause, "predicted": self.predicted}


def classify_beta(a, P, ctx: KochenContext) -> ValuationCase:
    """Which of the four valuation cases applies to a at P, with the predicted v_P(beta(a))."""
    if isinstance(P, ExtensionPlace):
        a = _lift(P.L, a, ctx.place.spec)
    A, B = _beta_parts(a, ctx.q)
    if _val(P, A - B) == INF or _val(P, A + B) == INF:
        raise PreconditionError("a is a pole of gamma")
    v = _val(P, a)
    if v == INF:
        return ValuationCase("Pos", INF)
    if v > 0:
        return ValuationCase("Pos", v)
    if v < 0:
        return ValuationCase("Neg", -ctx.q * v)
    # v(a) = 0: look at a^q - a = A / B
    w = _val(P, A) - _val(P, B)
    if w > 0:
        return ValuationCase("ZeroHigher", w)
    return ValuationCase("ZeroUnit", "<=0")


def is_one_one_place(P) -> bool:
    if isinstance(P, Place):
        return True
    return P.e == 1 and P.f == 1


def _check_above(P, ctx):
    base = P if isinstance(P, Place) else P.base
    if base != ctx.place:
        raise PreconditionError(f"{P} does not lie above {ctx.place}")


def witness_non_11(L: TowerSpec, P, ctx: KochenContext):
    """An element a, not a pole of gamma, with v_P(gamma(a)) < 0."""
    _check_above(P, ctx)
    if is_one_one_place(P):
        raise PreconditionError(f"{P} is a (1,1)-place; no witness exists")
    spec = L.spec
    u = L.u(1)
    candidates = [u] + [u + c for c in range(1, spec.q)] + [u * (1 + RationalFunction.t(spec))]
    if P.kind == "inert":
        candidates += [u * TowerElement.lift(L, c) for c in range(2, spec.q)]
    for a in candidates:
        vg = gamma_valuation(a, P, ctx)
        if vg is not POLE and vg < 0:
            return a
    raise UnsupportedError(f"no witness found among the standard candidates at {P}")  # pragma: no cover


def holomorphy_membership(L: TowerSpec, x, base: Place) -> bool:
    """v_P(x) >= 0 at every (1,1)-place P of L above ``base`` (vacuous when none)."""
    return all(P.valuation(x) >= 0 for P in places_above(L, base) if is_one_one_place(P))


def _random_ratfunc(spec, rng: random.Random, height: int) -> RationalFunction:
    while True:
        num = Polynomial(spec, [rng.randrange(spec.q) for _ in range(rng.randint(1, height + 1))])
        den = Polynomial(spec, [rng.randrange(spec.q) for _ in range(rng.randint(1, height + 1))])
        if den:
            return RationalFunction(num, den)


def random_element(L: TowerSpec, rng: random.Random, height: int = 2) -> TowerElement:
    return TowerElement(L, {e: _random_ratfunc(L.spec, rng, height) for e in L.basis()})


def gamma_integrality_sample(L: TowerSpec, base: Place, sample_count: int, seed: int, height: int = 2) -> dict:
    """Check v_P(gamma(a)) >= 0 at the (1,1)-places above ``base`` for random a."""
    ctx = KochenContext.at(base)
    rng = random.Random(seed)
    targets = [P for P in places_above(L, base) if is_one_one_place(P)]
    violations = []
    skipped = 0
    histogram: dict[int, int] = {}
    for _ in range(sample_count):
        a = random_element(L, rng, height)
        for P in targets:
            vg = gamma_valuation(a, P, ctx)
            if vg is POLE:
                skipped += 1
                break
            if vg != INF:
                histogram[vg] = histogram.get(vg, 0) + 1
            if vg < 0:
                violations.append({"input": str(a), "place": str(P), "valuation": vg})
    return {
        "samples": sample_count,
        "poles": skipped,
        "places": [str(P) for P in targets],
        "violations": violations,
        "valuation_histogram": {str(k): histogram[k] for k in sorted(histogram)},
    }


def kochen_representation(L: TowerSpec, r, ctx: KochenContext):
    """(x, y, z) with r = x / (1 + t_p gamma(z) y) and x, y integral above p."""
    r = TowerElement.lift(L, r)
    places = places_above(L, ctx.place)
    zero = TowerElement.lift(L, 0)
    one = TowerElement.lift(L, 1)
    if not r:
        return zero, one, zero
    if not holomorphy_membership(L, r, ctx.place):
        raise PreconditionError("r is not in the holomorphy ring R_p(L)")
    bad = [P for P in places if P.valuation(r) < 0]
    if not bad:
        return r, one, zero
    if len(places) != 1:
        raise UnsupportedError("several places above p: representation needs weak approximation in L")
    P = bad[0]
    z = witness_non_11(L, P, ctx)
    w = beta(z, ctx, L)  # equals t_p * gamma(z)
    vw = P.valuation(w)
    if vw > 0:
        raise UnsupportedError(
            f"v_P(t_p gamma(z)) = {vw} > 0 at {P}: 1 + t_p gamma(z) y is a unit for integral y, "
            "so no integral x exists"
        )
    need = max(0, -(P.valuation(r) + vw))
    K = -(-need // P.e)
    tk = TowerElement.lift(L, ctx.t_p ** K)
    y = -w.inverse() + tk
    x = r * w * tk
    return x, y, z


def check_representation(L: TowerSpec, r, triple, ctx: KochenContext) -> bool:
    """Exact identity r (1 + t_p gamma(z) y) = x, plus integrality of x, y above p."""
    x, y, z = triple
    r = TowerElement.lift(L, r)
    g = gamma(z, ctx, L)
    if g is POLE:
        return False
    factor = 1 + TowerElement.lift(L, ctx.t_p) * g * y
    if not factor:
        return False
    if r * factor != x:
        return False
    return all(P.valuation(x) >= 0 and P.valuation(y) >= 0 for P in places_above(L, ctx.place))
