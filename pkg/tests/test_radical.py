import itertools

import pytest

from grpgeom import (AlgebraicSet, EquationSystem, WordContext, build_group, closure,
                     coordinate_group, corollary1_check, decompose, endo_invariance_sampled,
                     full_invariance_exact, hom_extends, identity_oracle, is_characteristic,
                     marked_iso, nielsen_generators, relatively_free, solve, subgroup_closure,
                     substitute, theorem2_report)
from grpgeom.groups import whole_group
from grpgeom.radical import NotAlgebraicError, check_verdict, gamma_vanishes
from grpgeom.words import enumerate_words, parse_word

from conftest import three_cycles, transpositions


def V(G, n, *texts):
    return solve(G, EquationSystem.parse(WordContext(n), texts))


@pytest.fixture(scope="module")
def no_instance(S3):
    return V(S3, 2, "[x1,x2]", "x1^2", "x2^3")


@pytest.fixture(scope="module")
def q8_counterexample():
    """Generating pairs of quaternion8 together with all central pairs."""
    G = build_group("quaternion8")
    gens = [p for p in itertools.product(range(8), repeat=2) if subgroup_closure(G, p).order == 8]
    center = [a for a in range(8) if all(G.mul(a, b) == G.mul(b, a) for b in range(8))]
    E = AlgebraicSet(G, 2, gens + list(itertools.product(center, repeat=2)))
    return G, E


def test_decompose_whole_space(S3):
    full = AlgebraicSet.full(S3, 2)
    verdict = decompose(S3, full)
    assert verdict.yes
    assert whole_group(S3) in verdict.decomposition
    assert check_verdict(S3, full, verdict)


def test_decompose_commuting_pairs(S3):
    E = V(S3, 2, "[x1,x2]")
    assert len(E) == 18
    verdict = decompose(S3, E)
    assert verdict.yes
    # maximal abelian subgroups: A3 and the three transposition subgroups
    assert sorted(K.order for K in verdict.decomposition) == [2, 2, 2, 3]
    for K in verdict.decomposition:
        assert all(S3.mul(a, b) == S3.mul(b, a) for a in K.elements for b in K.elements)
    assert check_verdict(S3, E, verdict)


def test_decompose_no_instance(S3, no_instance):
    verdict = decompose(S3, no_instance)
    assert not verdict.yes
    w = verdict.witness
    t, e = w.point
    assert t in transpositions(S3) and e == S3.identity
    assert w.image == (e, t)
    assert w.image not in no_instance
    assert w.endo.image_point(w.point, S3) == w.image
    assert check_verdict(S3, no_instance, verdict)


def test_decompose_strict_rejects_non_algebraic(S3):
    t1, t2 = transpositions(S3)[:2]
    E = AlgebraicSet(S3, 1, [(t1,), (t2,)])
    with pytest.raises(NotAlgebraicError):
        decompose(S3, E)


def test_exact_oracle_examples(S3, no_instance):
    assert full_invariance_exact(S3, AlgebraicSet(S3, 2, [(0, 0)])).yes
    E = V(S3, 1, "x1^3")
    assert coordinate_group(S3, E).order == 3
    assert full_invariance_exact(S3, E).yes

    verdict = full_invariance_exact(S3, no_instance)
    assert verdict.outcome == "no"
    assert check_verdict(S3, no_instance, verdict)
    # the swap x1 <-> x2 does not extend to an endomorphism of the coordinate group
    Q = coordinate_group(S3, no_instance)
    assert not hom_extends(Q, [Q.marked[1], Q.marked[0]], Q.as_group)


def test_exact_oracle_budget(S3):
    verdict = full_invariance_exact(S3, AlgebraicSet.full(S3, 2), budget=10)
    assert verdict.outcome == "budget"
    assert "budget" in verdict.note


def test_sampled_oracle(S3, no_instance):
    assert endo_invariance_sampled(S3, no_instance, 0).yes
    verdict = endo_invariance_sampled(S3, no_instance, 1)
    assert not verdict.yes
    assert check_verdict(S3, no_instance, verdict)
    E = V(S3, 2, "[x1,x2]")
    for maxlen in range(5):
        assert endo_invariance_sampled(S3, E, maxlen).yes


def test_is_characteristic_examples(S3, no_instance):
    assert is_characteristic(S3, AlgebraicSet.full(S3, 2)).yes
    assert is_characteristic(S3, V(S3, 2, "[x1,x2]")).yes
    verdict = is_characteristic(S3, no_instance)
    assert not verdict.yes
    assert verdict.witness.image == tuple(reversed(verdict.witness.point))
    assert check_verdict(S3, no_instance, verdict)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_nielsen_generators_closed_under_inverses(n):
    ctx = WordContext(n)
    endos = [g.endo(ctx) for g in nielsen_generators(n)]
    xs = tuple(ctx.gens())
    for a in endos:
        assert any(tuple(substitute(substitute(x, a), b) for x in xs) == xs for b in endos)
    if n == 1:
        assert [g.kind for g in nielsen_generators(1)] == ["invert"]


def test_theorem2_report_examples(S3):
    C4 = build_group("cyclic(4)")
    E = V(C4, 2, "x1^2")
    r = theorem2_report(C4, E)
    assert r["gamma_n_vanishes_on_E"] and r["consistent"]
    assert (r["characteristic"] == "yes") == (r["decomposable"] == "yes")

    Q8 = build_group("quaternion8")
    r = theorem2_report(Q8, V(Q8, 3, "[x1,x2]"))
    assert r["nilpotency_class"] == 2 and r["n"] == 3
    assert r["gamma_n_vanishes_on_E"] and r["consistent"]

    r = theorem2_report(S3, V(S3, 2, "[x1,x2]"))
    assert not r["hypothesis_applicable"] and r["nilpotency_class"] is None


def test_class_at_most_n_reading_fails(q8_counterexample):
    # class 2 = n, yet a characteristic radical that is not fully characteristic
    G, E = q8_counterexample
    assert len(E) == 28
    assert closure(G, E)[1]
    r = theorem2_report(G, E)
    assert r["class_at_most_n"] and not r["class_at_most_n_minus_1"]
    assert r["characteristic"] == "yes" and r["decomposable"] == "no"
    assert not r["gamma_n_vanishes_on_E"]
    assert r["consistent"]
    assert full_invariance_exact(G, E).outcome == "no"
    assert not gamma_vanishes(G, E)


def test_identity_oracle_examples(S3):
    ctx1, ctx2 = WordContext(1), WordContext(2)
    A3 = subgroup_closure(S3, three_cycles(S3)[:1])
    assert identity_oracle([A3], parse_word("[x1,x2]", ctx2))
    T = subgroup_closure(S3, transpositions(S3)[:1])
    assert identity_oracle([T], parse_word("x1^2", ctx1))
    assert identity_oracle([whole_group(S3)], parse_word("x1^6", ctx1))
    assert not identity_oracle([whole_group(S3)], parse_word("x1^3", ctx1))


def test_corollary1_examples(S3, no_instance):
    r = corollary1_check(S3, EquationSystem(WordContext(2)), 4)
    assert r["status"] == "ok" and not r["discrepancies"]
    r = corollary1_check(S3, EquationSystem.parse(WordContext(2), ["[x1,x2]"]), 6)
    assert r["status"] == "ok" and r["words_checked"] == 1 + 4 * sum(3 ** k for k in range(6))
    r = corollary1_check(S3, EquationSystem.parse(WordContext(1), ["x1^2"]), 8)
    assert r["status"] == "ok" and r["words_checked"] == 17
    r = corollary1_check(S3, EquationSystem.parse(WordContext(2), ["[x1,x2]", "x1^2", "x2^3"]), 4)
    assert r["status"] == "not fully characteristic"


def test_relatively_free_examples(S3):
    ctx1, ctx2 = WordContext(1), WordContext(2)
    assert relatively_free([subgroup_closure(S3, [])], ctx1).order == 1
    T = subgroup_closure(S3, transpositions(S3)[:1])
    assert relatively_free([T], ctx1).order == 2
    F = relatively_free([whole_group(S3)], ctx2)
    # redundant members leave the group unchanged
    assert relatively_free([whole_group(S3), T], ctx2).order == F.order
    assert F.order == coordinate_group(S3, AlgebraicSet.full(S3, 2)).order


def test_marked_iso_examples(S3):
    E = V(S3, 2, "[x1,x2]")
    Q = coordinate_group(S3, E)
    assert marked_iso(Q, Q)
    assert not marked_iso(Q, coordinate_group(S3, V(S3, 2, "x1", "x2^2")))
    family = decompose(S3, E).decomposition
    assert marked_iso(Q, relatively_free(family, WordContext(2)))


def test_verdict_certificates_catch_tampering(S3, no_instance):
    from dataclasses import replace
    verdict = decompose(S3, no_instance)
    forged = replace(verdict, witness=replace(verdict.witness, image=verdict.witness.point))
    assert not check_verdict(S3, no_instance, forged)
    ok = decompose(S3, V(S3, 2, "[x1,x2]"))
    assert not check_verdict(S3, no_instance, ok)


@pytest.mark.parametrize("spec", ["symmetric(3)", "quaternion8", "dihedral(4)"])
def test_oracles_agree_on_solved_systems(spec):
    G = build_group(spec)
    ctx = WordContext(2)
    words = list(enumerate_words(ctx, 3))[1:]
    for w in words[::7]:
        E = solve(G, EquationSystem.from_words(ctx, [w]))
        dec, exact = decompose(G, E), full_invariance_exact(G, E)
        assert dec.outcome == exact.outcome
        if exact.yes:
            assert is_characteristic(G, E).yes
        if dec.yes:
            assert endo_invariance_sampled(G, E, 2).yes
