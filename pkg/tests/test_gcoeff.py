import numpy as np
import pytest

from grpgeom import (AlgebraicSet, EquationSystem, GTarget, VerbalData, WordContext, build_group,
                     coordinate_group, corollary2_check, corollary3_check, evaluate, g_decompose,
                     g_identity_check, hom_extends, parse_word, solve, verbal_subgroup)
from grpgeom.words import WordError, random_word

from conftest import three_cycles, transpositions


def csystem(G, n, *texts):
    return EquationSystem.parse(WordContext(n, G), texts)


def test_g_identity_examples(S3):
    ctx = WordContext(1, S3)
    assert g_identity_check(S3, parse_word("g0*g0^-1", ctx))
    e = S3.identity
    assert g_identity_check(S3, parse_word(f"x1^-1*g{e}*x1*g{e}^-1", ctx))
    t = transpositions(S3)[0]
    assert not g_identity_check(S3, parse_word(f"x1^-1*g{t}*x1*g{t}^-1", ctx))
    with pytest.raises(WordError):
        g_identity_check(S3, parse_word("x1", WordContext(1)))


def test_corollary2_examples(S3):
    r = corollary2_check(S3, csystem(S3, 1, "g0*x1*g0^-1*x1^-1"))
    assert r["g_verbal"] and r["status"] == "ok" and all(r["identities"])

    t = transpositions(S3)[0]
    r = corollary2_check(S3, csystem(S3, 1, f"x1*g{t} = g{t}*x1"))
    assert r["points"] == 2 and not r["g_verbal"]
    assert r["status"] == "ok" and r["witness_verified"]

    r = corollary2_check(S3, csystem(S3, 1, "x1^6"))
    assert r["g_verbal"] and r["identities"] == [True]


def test_corollary2_empty_solution_set(S3):
    t = transpositions(S3)[0]
    r = corollary2_check(S3, csystem(S3, 1, f"x1*g{t}*x1^-1", "x1^2"))
    assert r["points"] == 0 and r["status"] == "empty"


def test_verbal_subgroup_examples(S3):
    H = GTarget(S3)
    T = WordContext(2)
    assert verbal_subgroup(VerbalData((parse_word("x1*x1^-1", T),)), H).order == 1
    comm = verbal_subgroup(VerbalData((parse_word("[x1,x2]", T),)), H)
    assert set(comm.elements) == {S3.identity, *three_cycles(S3)}
    squares = verbal_subgroup(VerbalData((parse_word("x1^2", WordContext(1)),)), H)
    assert squares == comm


def test_verbal_data_validation(S3):
    with pytest.raises(WordError):
        VerbalData(())
    with pytest.raises(WordError):
        VerbalData((parse_word("x1", WordContext(1)), parse_word("x1", WordContext(2))))


def _g_endomorphisms(H):
    """All endomorphisms of ``H = G^2`` fixing the diagonal, as element maps."""
    P, diag = H.group, H.diagonal
    G = H.base
    t = transpositions(G)[0]
    h = t * G.order + G.identity                       # (t, e) together with the diagonal generates H
    ctx = WordContext(1, G)
    Q = coordinate_group(P, AlgebraicSet(P, 1, [(h,)]), ctx, embed=diag)
    assert Q.order == P.order
    maps = []
    for target in range(P.order):
        if hom_extends(Q, [target] + diag.tolist(), P, embed=diag):
            phi = np.empty(P.order, dtype=np.intp)
            for q in range(Q.order):
                phi[Q.elements[q][0]] = evaluate(Q.word_lift(q), (target,), P, diag)
            maps.append(phi)
    return maps


def test_verbal_subgroups_are_g_invariant(S3):
    H = GTarget(S3, 2)
    maps = _g_endomorphisms(H)
    assert len(maps) > 1
    for phi in maps:
        assert np.array_equal(phi[H.diagonal], H.diagonal)
    T2, C1 = WordContext(2), WordContext(1, S3)
    t = transpositions(S3)[0]
    datas = [VerbalData((parse_word("[x1,x2]", T2),)), VerbalData((parse_word("x1^2", WordContext(1)),)),
             VerbalData((parse_word(f"[x1,g{t}]", C1),)), VerbalData((parse_word("x1^3", WordContext(1)),))]
    for W in datas:
        K = set(verbal_subgroup(W, H).elements)
        for phi in maps:
            assert {int(phi[k]) for k in K} <= K


def test_g_decompose_on_h_equals_g_is_fullness(S3):
    rng = np.random.default_rng(3)
    ctx = WordContext(1, S3)
    H = GTarget(S3)
    seen = set()
    extra = [parse_word("x1^6", ctx), parse_word("[x1^6,g1]", ctx)]
    for i in range(60):
        w = extra[i] if i < len(extra) else random_word(ctx, int(rng.integers(1, 5)), rng, True)
        V = solve(S3, EquationSystem.from_words(ctx, [w]))
        if len(V) == 0:
            continue
        seen.add(V.is_full)
        assert g_decompose(H, V).yes == V.is_full
    assert seen == {True, False}


def test_diagonal_is_injective_homomorphism(S3):
    H = GTarget(S3, 2)
    d = H.diagonal
    assert len(set(d.tolist())) == S3.order
    for a in range(S3.order):
        for b in range(S3.order):
            assert H.group.mul(d[a], d[b]) == d[S3.mul(a, b)]
    with pytest.raises(ValueError):
        GTarget(S3, 0)


def test_corollary3_examples(S3):
    r = corollary3_check(S3, GTarget(S3), csystem(S3, 1))
    assert r["status"] == "ok" and r["marked_iso"] and not r["mismatches"]

    r = corollary3_check(S3, GTarget(S3, 2), csystem(S3, 1))
    assert r["status"] == "ok" and r["marked_iso"]
    assert r["family_orders"] == [36]
    assert r["gamma_order"] == r["free_order"]

    t = transpositions(S3)[0]
    r = corollary3_check(S3, GTarget(S3), csystem(S3, 1, f"x1*g{t} = g{t}*x1"))
    assert r["status"] == "no variety correspondence asserted"


def test_solutions_in_powers_are_coordinatewise(S3):
    # V over G^2 with diagonal constants is V over G squared, so only full sets decompose
    H = GTarget(S3, 2)
    ctx = WordContext(1, S3)
    rng = np.random.default_rng(11)
    for _ in range(40):
        w = random_word(ctx, int(rng.integers(1, 6)), rng, include_constants=True)
        S = EquationSystem.from_words(ctx, [w])
        Z = {p[0] for p in solve(S3, S).tuples}
        VH = solve(H.group, S, embed=H.diagonal)
        assert {p[0] for p in VH.tuples} == {a * S3.order + b for a in Z for b in Z}
        if len(VH):
            assert g_decompose(H, VH).yes == VH.is_full


def test_corollary3_budget(S3):
    r = corollary3_check(S3, GTarget(S3, 2), csystem(S3, 2), budget=100)
    assert r["status"] == "budget"
