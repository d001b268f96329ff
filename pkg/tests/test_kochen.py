import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffk.errors import PreconditionError
from ffk.ffield import field
from ffk.kochen import (
    POLE,
    KochenContext,
    base_field,
    beta,
    check_representation,
    classify_beta,
    gamma,
    gamma_integrality_sample,
    holomorphy_membership,
    is_one_one_place,
    kochen_representation,
    places_above,
    witness_non_11,
)
from ffk.places import INF, parse_place, valuation
from ffk.poly import Polynomial, RationalFunction, parse_poly, parse_ratfunc
from ffk.tower import TowerElement, make_tower

F5, F7 = field(5), field(7)
T = parse_place(F5, "t")
AT_T = KochenContext.at(T)
K = base_field(F5)
INERT = make_tower(F5, 2, [parse_poly(F5, "t^2+2")])
RAMIFIED = make_tower(F5, 2, [parse_poly(F5, "t")])


def R(text, spec=F5):
    return parse_ratfunc(spec, text)


def _beta_direct(a, q):
    """(a^q - a) / ((a^q - a)^2 - 1) computed straight from the definition."""
    d = a ** q - a
    den = d * d - 1
    return POLE if not den else d * den.inverse()


def test_context():
    assert AT_T.q == 5 and valuation(AT_T.t_p, T) == 1
    quad = KochenContext.at(parse_place(F5, "t^2+2"))
    assert quad.q == 25


def test_beta_gamma_examples():
    assert beta(R("0"), AT_T) == 0
    assert beta(R("1"), AT_T) == 0
    assert valuation(beta(R("1/t"), AT_T), T) == 5
    assert gamma(R("0"), AT_T) == 0
    assert valuation(gamma(R("1/t"), AT_T), T) == 4


def test_pole_marker():
    # a^3 - a = 1 is solvable in F_27 (the trace of 1 is 3 = 0), so an
    # exponent-3 operator over F_27 has constant poles
    spec = field(3, 3)
    place = parse_place(spec, "t")
    ctx = KochenContext(place, place.uniformizer(), 3)
    consts = [RationalFunction.lift(spec, Polynomial(spec, (c,))) for c in range(spec.q)]
    poles = [a for a in consts if _beta_direct(a, 3) is POLE]
    assert len(poles) == 6
    for a in poles:
        assert beta(a, ctx) is POLE and gamma(a, ctx) is POLE
        with pytest.raises(PreconditionError):
            classify_beta(a, place, ctx)


def test_classify_examples():
    assert classify_beta(R("t^3"), T, AT_T).tag == "Pos"
    assert classify_beta(R("t^3"), T, AT_T).predicted == 3
    neg = classify_beta(R("1/t"), T, AT_T)
    assert (neg.tag, neg.predicted, neg.clause) == ("Neg", 5, "ii")
    # every unit of K is congruent to its q-th power, so case (iv) needs f > 1
    [inert] = places_above(INERT, T)
    unit = classify_beta(INERT.u(1), inert, AT_T)
    assert (unit.tag, unit.predicted, unit.clause) == ("ZeroUnit", "<=0", "iv")
    higher = classify_beta(R("t+1"), T, AT_T)
    assert (higher.tag, higher.predicted) == ("ZeroHigher", 1)


ratfuncs = st.tuples(
    st.lists(st.integers(0, 4), min_size=1, max_size=5),
    st.lists(st.integers(0, 4), min_size=1, max_size=5).filter(any),
).map(lambda nd: RationalFunction(Polynomial(F5, nd[0]), Polynomial(F5, nd[1])))


@pytest.mark.parametrize("place", ["t", "t+2", "t^2+2", "inf"])
def test_classify_matches_definition(place):
    v = parse_place(F5, place)
    ctx = KochenContext.at(v)

    @given(ratfuncs)
    def check(a):
        b = _beta_direct(a, ctx.q)
        if b is POLE:
            return
        case = classify_beta(a, v, ctx)
        got = valuation(b, v)
        if case.tag == "ZeroUnit":
            assert got <= 0
        else:
            assert got == case.predicted
        assert (got == INF) == (not a or b == 0) or case.tag != "Pos"

    check()


def test_one_one_places():
    assert is_one_one_place(T)
    [inert] = places_above(INERT, T)
    assert (inert.kind, inert.e, inert.f) == ("inert", 1, 2) and not is_one_one_place(inert)
    at_inf = places_above(INERT, parse_place(F5, "inf"))
    assert len(at_inf) == 2 and all(is_one_one_place(P) for P in at_inf)
    [ram] = places_above(RAMIFIED, T)
    assert (ram.e, ram.f) == (2, 1)
    split = places_above(INERT, parse_place(F5, "t+1"))  # 1 + 2 = 3 is not a square mod 5
    assert [P.f for P in split] == [2]
    split = places_above(INERT, parse_place(F5, "t+3"))  # 9 + 2 = 1 is a square
    assert len(split) == 2 and all(is_one_one_place(P) for P in split)


def test_witness_examples():
    [ram] = places_above(RAMIFIED, T)
    a = witness_non_11(RAMIFIED, ram, AT_T)
    assert a == RAMIFIED.u(1)
    assert ram.valuation(gamma(a, AT_T, RAMIFIED)) == -1
    [inert] = places_above(INERT, T)
    a = witness_non_11(INERT, inert, AT_T)
    assert classify_beta(a, inert, AT_T).tag == "ZeroUnit"
    assert inert.valuation(gamma(a, AT_T, INERT)) < 0
    with pytest.raises(PreconditionError):
        witness_non_11(K, T, AT_T)


@pytest.mark.parametrize("f,place", [("t", "t"), ("t^2+2", "t"), ("t+1", "t+1"), ("t^2+2", "t+1")])
def test_witness_is_non_integral(f, place):
    L = make_tower(F5, 2, [parse_poly(F5, f)])
    v = parse_place(F5, place)
    ctx = KochenContext.at(v)
    for P in places_above(L, v):
        if not is_one_one_place(P):
            a = witness_non_11(L, P, ctx)
            g = gamma(a, ctx, L)
            assert g is not POLE and P.valuation(g) < 0


def test_holomorphy_examples():
    assert not holomorphy_membership(K, R("1/t"), T)
    assert holomorphy_membership(INERT, R("1/t"), T)
    assert holomorphy_membership(K, R("t"), T)


@pytest.mark.parametrize("L", [K, INERT, make_tower(F5, 2, [parse_poly(F5, "t^2+3")])], ids=["K", "inert", "other"])
@pytest.mark.parametrize("place", ["t", "inf"])
def test_gamma_integral_at_one_one_places(L, place):
    report = gamma_integrality_sample(L, parse_place(F5, place), 200, seed=11)
    assert report["violations"] == []
    assert report == gamma_integrality_sample(L, parse_place(F5, place), 200, seed=11)


def test_gamma_sample_vacuous():
    report = gamma_integrality_sample(INERT, T, 50, seed=1)
    assert report["places"] == [] and report["violations"] == []


def test_representation_examples():
    one, zero = TowerElement.lift(K, 1), TowerElement.lift(K, 0)
    r = TowerElement.lift(K, R("t/(t+1)"))
    assert kochen_representation(K, r, AT_T) == (r, one, zero)
    z = TowerElement.lift(INERT, 0)
    assert kochen_representation(INERT, z, AT_T) == (z, TowerElement.lift(INERT, 1), z)
    triple = kochen_representation(INERT, R("1/t"), AT_T)
    assert check_representation(INERT, R("1/t"), triple, AT_T)
    with pytest.raises(PreconditionError):
        kochen_representation(K, R("1/t"), AT_T)


def test_representation_postconditions_inert():
    rng = random.Random(5)
    for _ in range(40):
        num = TowerElement(INERT, {e: RationalFunction.lift(F5, Polynomial(F5, [rng.randrange(5) for _ in range(3)])) for e in INERT.basis()})
        if not num:
            continue
        r = num * TowerElement.lift(INERT, R("1/t") ** rng.randint(0, 3))
        assert check_representation(INERT, r, kochen_representation(INERT, r, AT_T), AT_T)
