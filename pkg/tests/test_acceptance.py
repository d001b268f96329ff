"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are
collected in the "acceptance criteria" section of the terminal summary) or
``python tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from collections import Counter

import numpy as np
import pytest

from ffk.csa import (
    construct_sibling_pair,
    nrd,
    norm_one_sample,
    random_algebra,
    ramified_places,
    reciprocity_check,
    sample_trace_of_norm_one,
    trd,
)
from ffk.ffield import field
from ffk.kochen import KochenContext, check_representation, classify_beta, kochen_representation, places_above
from ffk.laurent import nth_root_unit_batch
from ffk.places import Place, parse_place, poly_valuation, split_type, valuation
from ffk.poly import Polynomial, RationalFunction, enumerate_Pn_plus, sylvester_resultant
from ffk.tower import TowerElement, effective_level_bound, enumerate_bounded, make_tower, power_of_q, verify_integral_basis

import oracles
from oracles import DigitField

HENSEL_CONFIGS = [(5, 1, 2), (7, 1, 2), (7, 1, 3), (3, 2, 2)]  # (p, e, n) with n | q - 1


def _oracle_field(spec):
    return DigitField(spec.p, spec.e, spec.modulus)


def _reversed_rows(polys, width):
    """Row r holds the coefficients of p_r(1/s) * s^deg, i.e. the unit series of p_r at infinity."""
    G = np.zeros((len(polys), width), dtype=np.int64)
    for r, f in enumerate(polys):
        rev = list(reversed(f.coeffs))[:width]
        G[r, : len(rev)] = rev
    return G


# ----------------------------------------------------------------------------
# 1. Hensel residual


def test_hensel_residual(criterion):
    with criterion(1, "Hensel residual, every p in P_n^+ with deg <= 6, prec 32") as rec:
        prec = 32
        total, elapsed, mismatches = 0, 0.0, 0
        for p, e, n in HENSEL_CONFIGS:
            spec = field(p, e)
            start = time.perf_counter()
            polys = enumerate_Pn_plus(spec, n, 6)
            G = _reversed_rows(polys, prec)
            H = nth_root_unit_batch(spec, G, n)
            elapsed += time.perf_counter() - start
            # oracle: expected count and H^n = G by independent convolution
            expected = sum(oracles.monic_irreducible_count(spec.q, d) for d in range(n, 7, n))
            assert len(polys) == expected, (spec.q, n, len(polys), expected)
            P = oracles.series_power(_oracle_field(spec), H, n)
            mismatches += int((P != G).any(axis=1).sum())
            total += len(polys)
        rec.detail = f"{total} roots, {mismatches} nonzero residuals, {elapsed:.2f} s (bound 10 s)"
        assert mismatches == 0
        assert elapsed <= 10.0


def test_hensel_root_matches_search_oracle():
    # spot-check the batched root against a coefficient-by-coefficient search
    spec = field(3, 2)
    F = _oracle_field(spec)
    rng = random.Random(11)
    polys = enumerate_Pn_plus(spec, 2, 4)
    for f in rng.sample(polys, 5):
        G = _reversed_rows([f], 10)
        H = nth_root_unit_batch(spec, G, 2)[0].tolist()
        assert H == oracles.nth_root_by_search(F, G[0].tolist(), 2, 10)


# ----------------------------------------------------------------------------
# 2. valuation calculus

VALUATION_CONFIGS = [
    ("F_5, (t)", (5, 1), "t", None),
    ("F_7, (t+3)", (7, 1), "t+3", None),
    ("F_9, (t)", (3, 2), "t", None),
    ("F_5, inf", (5, 1), "inf", None),
    ("F_5(sqrt(t^2+2)), inert over (t)", (5, 1), "t", (2, 0, 1)),
]
WINDOW, OFFSET = 24, -3


def _valuation_samples(spec, count, seed, with_u):
    """Structured samples a = c + x^k g(x)/h(x) (+ m x^j u), x the local parameter."""
    rng = np.random.default_rng(seed)
    q = spec.q
    c = rng.integers(0, q, count)
    k = rng.integers(-3, 4, count)
    g = rng.integers(0, q, (count, 3))
    h = rng.integers(0, q, (count, 3))
    g[:, 0] = rng.integers(1, q, count)
    h[:, 0] = rng.integers(1, q, count)
    m = np.where(rng.random(count) < 0.5, rng.integers(1, q, count), 0) if with_u else np.zeros(count, dtype=np.int64)
    j = rng.integers(0, 3, count)
    return c, k, g, h, m, j


def _local_to_ratfunc(spec, place, coeffs):
    """sum coeffs[i] x^i as an element of F_q(t)."""
    coeffs = [int(v) for v in coeffs]
    if place.is_infinite:
        d = max(i for i, v in enumerate(coeffs) if v)
        num = Polynomial(spec, list(reversed(coeffs[: d + 1])))
        return RationalFunction(num, Polynomial.monomial(spec, d))
    c0 = spec.neg(place.pi.coeffs[0])
    return RationalFunction.lift(spec, Polynomial(spec, coeffs).shift(spec.neg(c0)))


def _library_elements(spec, place, L, samples):
    c, k, g, h, m, j = samples
    x = _local_to_ratfunc(spec, place, [0, 1])
    out = []
    for i in range(len(c)):
        a = int(c[i]) + x ** int(k[i]) * _local_to_ratfunc(spec, place, g[i]) / _local_to_ratfunc(spec, place, h[i])
        if L is not None:
            a = TowerElement.lift(L, a)
            if m[i]:
                a = a + L.u(1) * (x ** int(j[i]) * int(m[i]))
        out.append(a)
    return out


def _oracle_rows(F, samples, u_series):
    """Coefficients of each sample in the local parameter, exponents OFFSET .. OFFSET + WINDOW - 1."""
    c, k, g, h, m, j = samples
    B = len(c)
    gh = F.conv(g, oracles.series_inverse(F, oracles._pad(h, WINDOW)), WINDOW)
    A = np.zeros((B, WINDOW), dtype=np.int64)
    for kk in range(-3, 4):
        rows = k == kk
        start = kk - OFFSET
        A[rows, start:] = gh[rows, : WINDOW - start]
    A[:, -OFFSET] = F.add(A[:, -OFFSET], c)
    if u_series is not None:
        for jj in range(3):
            rows = (j == jj) & (m != 0)
            start = jj - OFFSET
            term = F.mul(m[rows][:, None], np.array(u_series[: WINDOW - start])[None, :])
            A[rows, start:] = F.add(A[rows, start:], term)
    return A


def test_valuation_calculus(criterion):
    with criterion(2, "valuation calculus, 10^4 samples per configuration") as rec:
        count = 10_000
        parts, worst = [], 0.0
        failures = 0
        for label, (p, e), place_text, level in VALUATION_CONFIGS:
            spec = field(p, e)
            place = parse_place(spec, place_text)
            ctx = KochenContext.at(place)
            L = None if level is None else make_tower(spec, 2, [Polynomial(spec, level)])
            P = place if L is None else places_above(L, place)[0]
            samples = _valuation_samples(spec, count, seed=len(parts) + 1, with_u=L is not None)
            elements = _library_elements(spec, place, L, samples)

            start = time.perf_counter()
            cases = [classify_beta(a, P, ctx) for a in elements]
            elapsed = time.perf_counter() - start
            worst = max(worst, elapsed)

            if L is None:
                F = _oracle_field(spec)
                u_series = None
            else:
                # completion F_25((t)); oracle encodes F_25 as F_5[x]/(x^2 - 2)
                F = DigitField(5, 2, (3, 0, 1))
                root = oracles.nth_root_by_search(DigitField(5), [1, 0, 3], 2, WINDOW)
                u_series = [F.scalar_mul(5, c) for c in root]  # sqrt(2) * sqrt(1 + 3 t^2)
            direct = oracles.local_beta_valuation(F, ctx.q, _oracle_rows(F, samples, u_series), OFFSET)
            # a is an exact constant of F_q when g is proportional to h, k = 0 and there is
            # no u term; then a^q = a and beta(a) = 0, which no finite window can certify
            c, k, g, h, m, j = samples
            G = _oracle_field(spec)
            lam = G.mul(g[:, 0], oracles.inverse_table(G)[h[:, 0]])
            constant = (G.mul(lam[:, None], h) == g).all(axis=1) & (k == 0) & (m == 0)
            tags = Counter()
            for case, v, const in zip(cases, direct.tolist(), constant.tolist()):
                tags[case.tag] += 1
                if const:
                    failures += case.predicted != math.inf
                elif v >= 10 ** 6:
                    failures += 1
                elif case.tag == "ZeroUnit":
                    failures += v > 0
                else:
                    failures += v != case.predicted
            parts.append(f"{label} {dict(tags)} {elapsed:.2f} s")
        rec.detail = f"{failures} mismatches; slowest classification {worst:.2f} s (bound 5 s); " + "; ".join(parts)
        assert failures == 0
        assert worst <= 5.0


# ----------------------------------------------------------------------------
# 3, 4. discriminant exponent and splitting at infinity


def _sampled_Pn_plus():
    rng = random.Random(2024)
    out = []
    for p, e, n in HENSEL_CONFIGS:
        polys = enumerate_Pn_plus(field(p, e), n, 6)
        out.extend((f, n) for f in rng.sample(polys, 20))
    return out


def test_discriminant_exponent(criterion):
    with criterion(3, "discriminant exponent of X^n - p, 20 samples per (q, n)") as rec:
        bad = 0
        samples = _sampled_Pn_plus()
        for f, n in samples:
            spec = f.spec
            report = verify_integral_basis(f, n)
            # oracle: Sylvester determinant of X^n - p and n X^(n-1)
            xf = [-f] + [Polynomial(spec)] * (n - 1) + [Polynomial(spec, (1,))]
            xd = [Polynomial(spec)] * (n - 1) + [Polynomial(spec, (spec.from_int(n),))]
            res = sylvester_resultant(xf, xd)
            assert res.den.is_constant()
            disc = res.num
            rest = disc // f ** (n - 1)
            ok = (
                report["ok"]
                and report["valuations"] == {Place.finite(f): n - 1}
                and poly_valuation(disc, f) == n - 1
                and rest.degree == 0
                and (report["disc"] == disc or report["disc"] == -disc)
            )
            bad += not ok
        rec.detail = f"{len(samples) - bad}/{len(samples)} with v_p = n - 1 and no other finite support"
        assert bad == 0


def test_splitting_at_infinity(criterion):
    with criterion(4, "split_type at infinity and at (p)") as rec:
        bad = 0
        samples = _sampled_Pn_plus()
        for f, n in samples:
            spec = f.spec
            at_inf = split_type(Place.infinity(spec), n, f)
            at_p = split_type(Place.finite(f), n, f)
            L = make_tower(spec, n, [f])
            above = places_above(L, Place.infinity(spec))
            ok = (
                at_inf == [(1, 1)] * n
                and at_p == [(n, 1)]
                and len(above) == n
                and all(P.e == 1 and P.f == 1 for P in above)
            )
            bad += not ok
        rec.detail = f"{len(samples) - bad}/{len(samples)} split completely at infinity, totally ramified at (p)"
        assert bad == 0


# ----------------------------------------------------------------------------
# 5. bounded-norm enumeration


def _element_key(x):
    return tuple(sorted((e, c.num.coeffs) for e, c in x.coeffs.items()))


def _brute_force_bounded(tower, N):
    """Integral elements of the tower with ||x||_max <= N, by exhausting coefficient boxes.

    The box for the coefficient of u^e allows degree floor(k - sum e_i deg p_i / n) + 1,
    one more than the norm bound permits.
    """
    spec, n = tower.spec, tower.n
    q, k = spec.q, power_of_q(spec.q, N)
    F = _oracle_field(spec)
    basis = tower.basis()
    caps = {}
    for e in basis:
        bound = k - sum(ei * f.degree for ei, f in zip(e, tower.levels)) / n
        caps[e] = math.floor(bound) + 1
    boxes = {}
    for e in basis:
        width = max(caps[e], -1) + 1
        if width == 0:
            boxes[e] = np.zeros((1, 1), dtype=np.int64)
        else:
            codes = np.arange(q ** width, dtype=np.int64)
            boxes[e] = np.stack([(codes // q ** i) % q for i in range(width)], axis=1)
    idx = np.stack(np.meshgrid(*[np.arange(len(boxes[e])) for e in basis], indexing="ij"), axis=-1)
    idx = idx.reshape(-1, len(basis))
    coeff_polys = {e: boxes[e][idx[:, i]] for i, e in enumerate(basis)}
    roots = []
    for f in tower.levels:
        rev = list(reversed(f.coeffs))
        roots.append((-(f.degree // n), oracles.nth_root_by_search(F, rev, n, 32)))
    orders = oracles.batch_conjugate_min_order(F, coeff_polys, roots, tower.zeta, n, 48)
    keep = orders >= -k
    out = set()
    for r in np.nonzero(keep)[0]:
        key = []
        for e in basis:
            coeffs = coeff_polys[e][r].tolist()
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if coeffs:
                key.append((e, tuple(coeffs)))
        out.add(tuple(sorted(key)))
    return out, len(idx)


def test_bounded_enumeration(criterion):
    with criterion(5, "enumerate_bounded equals brute force") as rec:
        spec = field(5)
        t2p2, t2p3 = Polynomial(spec, (2, 0, 1)), Polynomial(spec, (3, 0, 1))
        cases = [
            (1, []), (1, [t2p2]), (1, [t2p2, t2p3]),
            (5, []), (5, [t2p2]), (5, [t2p2, t2p3]),
            (25, [t2p2]),
        ]
        elapsed, parts, equal = 0.0, [], True
        sizes = {}
        for N, levels in cases:
            tower = make_tower(spec, 2, levels)
            start = time.perf_counter()
            found = enumerate_bounded(tower, N)
            elapsed += time.perf_counter() - start
            keys = {_element_key(x) for x in found}
            brute, candidates = _brute_force_bounded(tower, N)
            same = keys == brute and len(keys) == len(found)
            equal &= same
            sizes[(N, len(levels))] = len(found)
            parts.append(f"N={N} levels={len(levels)}: {len(found)} of {candidates} candidates {'=' if same else '!='}")
        # the relevant levels for N = 25 are all of P_2^+ in degree 2; one of them is kept
        assert len(effective_level_bound(spec, 2, 25)) == 10
        rec.detail = "; ".join(parts) + f"; enumeration {elapsed:.2f} s (bound 60 s)"
        assert equal
        assert sizes[(5, 1)] == 125
        assert elapsed <= 60.0


# ----------------------------------------------------------------------------
# 6. reciprocity


def test_reciprocity(criterion):
    with criterion(6, "reciprocity over 10^3 random algebras per (q, l)") as rec:
        start = time.perf_counter()
        parts, bad = [], 0
        for (p, e), l in [((5, 1), 2), ((7, 1), 2), ((7, 1), 3), ((3, 2), 2)]:
            spec = field(p, e)
            rng = random.Random(p * 100 + e * 10 + l)
            ramified = 0
            for _ in range(1000):
                A = random_algebra(spec, l, rng)
                bad += not reciprocity_check(A)
                ramified += bool(ramified_places(A))
            parts.append(f"q={spec.q} l={l}: {ramified} nonsplit")
        elapsed = time.perf_counter() - start
        rec.detail = f"{bad} violations, {elapsed:.2f} s (bound 30 s); " + "; ".join(parts)
        assert bad == 0
        assert elapsed <= 30.0


# ----------------------------------------------------------------------------
# 7, 8. sibling pairs and trace integrality

SIBLING_TRIPLES = [
    (5, ("t", "t+1", "t+2")),
    (5, ("t", "t+1", "inf")),
    (5, ("t^2+2", "t", "t+1")),
    (5, ("inf", "t", "t+4")),
    (5, ("t+3", "t^2+3", "inf")),
    (7, ("t", "t+1", "t+2")),
    (7, ("t^2+1", "t", "inf")),
    (7, ("inf", "t+1", "t+5")),
    (7, ("t+2", "t^2+2", "t+6")),
    (7, ("t", "t^2+1", "t^2+2")),
]


_SIBLINGS = {}


def _sibling_algebras():
    if not _SIBLINGS:
        for q, names in SIBLING_TRIPLES:
            spec = field(q)
            triple = [parse_place(spec, s) for s in names]
            start = time.perf_counter()
            A, B = construct_sibling_pair(*triple, 2)
            _SIBLINGS[(q, names)] = (triple, A, B, time.perf_counter() - start)
    return _SIBLINGS


def test_sibling_pairs(criterion):
    with criterion(7, "sibling pairs for 10 triples over F_5, F_7, l = 2") as rec:
        pairs = _sibling_algebras()
        elapsed = sum(v[3] for v in pairs.values())
        bad = 0
        for (q, names), (triple, A, B, _) in pairs.items():
            p, q1, q2 = triple
            ok = oracles.ramified_by_power_test(A) == {p, q1} and oracles.ramified_by_power_test(B) == {p, q2}
            ok &= ramified_places(A) == {p, q1} and ramified_places(B) == {p, q2}
            bad += not ok
        rec.detail = f"{len(pairs) - bad}/{len(pairs)} verified, search {elapsed:.2f} s (bound 30 s)"
        assert len(pairs) == 10 and bad == 0
        assert elapsed <= 30.0


def test_trace_integrality(criterion):
    with criterion(8, "trd of 10^3 norm-one samples per sibling algebra") as rec:
        bad, checked, exact = 0, 0, 0
        for seed, (key, (triple, A, B, _)) in enumerate(sorted(_sibling_algebras().items())):
            for alg in (A, B):
                ram = ramified_places(alg)
                for value in sample_trace_of_norm_one(alg, 1000, seed):
                    checked += 1
                    bad += any(valuation(value, v) < 0 for v in ram)
                # exact spot checks: the sampled elements really have reduced norm one
                rng = random.Random(seed)
                spec = alg.spec
                made = 0
                while made < 10:
                    y = alg.element([Polynomial(spec, [rng.randrange(spec.q) for _ in range(3)]) for _ in range(4)])
                    if not nrd(y):
                        continue
                    x = norm_one_sample(alg, y)
                    assert nrd(x) == 1
                    assert trd(x) == trd(y * y) / nrd(y)
                    made += 1
                exact += made
        rec.detail = f"{checked - bad}/{checked} traces integral at every ramified place; {exact} exact norm-one checks"
        assert bad == 0


# ----------------------------------------------------------------------------
# 9. Kochen representation


def _random_poly(spec, rng, degree):
    return Polynomial(spec, [rng.randrange(spec.q) for _ in range(degree + 1)])


def test_kochen_representation(criterion):
    with criterion(9, "Kochen representation, 100 seeded r per field, p = (t)") as rec:
        spec = field(5)
        t = Polynomial.t(spec)
        place = Place.finite(t)
        ctx = KochenContext.at(place)
        K = make_tower(spec, 1, [])
        L = make_tower(spec, 2, [Polynomial(spec, (2, 0, 1))])
        rng = random.Random(99)
        start = time.perf_counter()
        passed, nontrivial = 0, 0
        for _ in range(100):
            # R_(t)(K): denominators prime to t
            while True:
                den = _random_poly(spec, rng, 2)
                if den and den.coeffs[0]:
                    break
            r = RationalFunction(_random_poly(spec, rng, 3), den)
            triple = kochen_representation(K, r, ctx)
            passed += check_representation(K, r, triple, ctx)
        for _ in range(100):
            # (t) is inert in L, so R_(t)(L) = L; include poles at t
            coeffs = {}
            for e in L.basis():
                while True:
                    den = _random_poly(spec, rng, 2)
                    if den:
                        break
                coeffs[e] = RationalFunction(_random_poly(spec, rng, 2), den * t ** rng.randint(0, 3))
            r = TowerElement(L, coeffs)
            triple = kochen_representation(L, r, ctx)
            nontrivial += bool(triple[2])
            passed += check_representation(L, r, triple, ctx)
        elapsed = time.perf_counter() - start
        rec.detail = f"{passed}/200 exact identities ({nontrivial} needing a witness), {elapsed:.2f} s (bound 30 s)"
        assert passed == 200
        assert elapsed <= 30.0


# ----------------------------------------------------------------------------
# 10. excluded


def test_existence_results_excluded(criterion):
    with criterion(10, "uniform bound and undecidability", excluded=True) as rec:
        rec.detail = "existence and logic statements without effective content; covered by criteria 1-9"
        print(rec.line())
    pytest.skip("not computable: no effective content")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
