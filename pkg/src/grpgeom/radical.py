"""Decision procedures for full invariance of radicals.

An algebraic set ``E`` in ``G^n`` has a fully characteristic radical exactly
when ``E`` is a union of sets ``K^n`` for n-generator subgroups ``K``.  The
checks here come in independent pairs so that each can police the other:

* :func:`decompose` tests the union criterion directly, using ``K(a)``, the
  subgroup generated by the entries of each point ``a``;
* :func:`full_invariance_exact` tests, inside the finite coordinate group,
  that every assignment of generators extends to an endomorphism;
* :func:`endo_invariance_sampled` replays bounded-length substitutions;
* :func:`is_characteristic` checks invariance under Nielsen generators of
  ``Aut(F_n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import (AlgebraicSet, CoordinateGroup, EquationSystem, GeometryError, all_points,
                       closure, coordinate_group, decode, encode, endomorphism_mask, extension_mask,
                       radical_contains, solve)
from .groups import FiniteGroup, Subgroup, nilpotency_class, subgroup_closure
from .words import (EndoSpec, Word, WordContext, WordError, basic_commutators, enumerate_words,
                    evaluate_many, format_word)

DEFAULT_BUDGET = 10**6


class NotAlgebraicError(GeometryError):
    """Raised by strict checks on sets that are not closed; ``extra`` samples ``cl(E) \\ E``."""

    def __init__(self, message: str, extra: list[tuple[int, ...]]):
        super().__init__(message)
        self.extra = extra


@dataclass(frozen=True)
class Witness:
    """A point of ``E`` sent outside ``E`` by a substitution.

    ``endo`` (when present) maps ``point`` to ``image`` under evaluation, so
    the witness can be replayed with :func:`grpgeom.words.evaluate`.
    """

    point: tuple[int, ...]
    image: tuple[int, ...]
    endo: Optional[EndoSpec] = None
    label: str = ""

    def as_dict(self, G: FiniteGroup) -> dict:
        out = {
            "point": list(self.point),
            "point_names": [G.names[a] for a in self.point],
            "image": list(self.image),
            "image_names": [G.names[a] for a in self.image],
        }
        if self.endo is not None:
            out["endomorphism"] = [format_word(v) for v in self.endo.images]
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class Verdict:
    """Outcome of a full-invariance check: ``"yes"``, ``"no"`` or ``"budget"``.

    ``decomposition`` is filled by :func:`decompose` only; ``witness`` is
    present on every ``"no"``.
    """

    outcome: str
    decomposition: Optional[tuple[Subgroup, ...]] = None
    witness: Optional[Witness] = None
    note: str = ""

    @property
    def yes(self) -> bool:
        return self.outcome == "yes"

    def as_dict(self, G: FiniteGroup) -> dict:
        out: dict = {"outcome": self.outcome}
        if self.decomposition is not None:
            out["family"] = [
                {"order": K.order, "elements": list(K.elements), "names": K.names()}
                for K in self.decomposition
            ]
        if self.witness is not None:
            out["witness"] = self.witness.as_dict(G)
        if self.note:
            out["note"] = self.note
        return out


def _require_nonempty(E: AlgebraicSet) -> None:
    if len(E) == 0:
        raise GeometryError("the empty set has no points to analyse")


def _least_escape(E: AlgebraicSet, points: np.ndarray, images: np.ndarray) -> Optional[tuple[int, int]]:
    """``(row, code)`` of the smallest image code outside ``E``, first row on ties."""
    codes = encode(images, E.group.order)
    outside = ~E.mask[codes]
    if not outside.any():
        return None
    cand = np.where(outside, codes, np.iinfo(np.int64).max)
    row = int(np.argmin(cand))
    return row, int(codes[row])


def _tuple(row) -> tuple[int, ...]:
    return tuple(int(v) for v in row)


def power_points(K: Subgroup, n: int) -> np.ndarray:
    """All points of ``K^n`` in lexicographic order of element indices."""
    elems = np.array(K.elements, dtype=np.intp)
    return elems[all_points(len(elems), n)]


def family_points(family: Sequence[Subgroup], n: int) -> np.ndarray:
    """Sorted points of the union of ``K^n`` over the family."""
    if not family:
        raise GeometryError("empty family of subgroups")
    G = family[0].parent
    if any(K.parent is not G for K in family):
        raise GeometryError("family members live in different groups")
    codes = np.unique(np.concatenate([encode(power_points(K, n), G.order) for K in family]))
    return decode(codes, G.order, n)


def maximal_members(family: Sequence[Subgroup]) -> tuple[Subgroup, ...]:
    """Deduplicate by element set and keep inclusion-maximal members, ordered by elements."""
    unique = {K.elements: K for K in family}
    members = sorted(unique.values(), key=lambda K: (-K.order, K.elements))
    kept: list[Subgroup] = []
    for K in members:
        if not any(K.issubset(L) for L in kept):
            kept.append(K)
    return tuple(sorted(kept, key=lambda K: K.elements))


def point_endo(G: FiniteGroup, point: Sequence[int], image: Sequence[int],
               ctx: Optional[WordContext] = None, embed=None) -> EndoSpec:
    """Words ``v_i`` with ``v_i(point) = image[i]``; ``image`` must lie in ``K(point)^n``.

    With a coefficient context, ``K(point)`` also contains the constants.
    """
    n = len(point)
    single = AlgebraicSet(G, n, [point])
    Q = coordinate_group(G, single, ctx, embed)
    words = []
    for b in image:
        q = Q.element_index([b])
        if q is None:
            raise GeometryError(f"{b} is not in the subgroup generated by {tuple(point)}")
        words.append(Q.word_lift(q))
    return EndoSpec(Q.ctx, tuple(words))


def decompose(G: FiniteGroup, E: AlgebraicSet, strict: bool = True) -> Verdict:
    """Test ``E = union of K(a)^n`` over the points ``a`` of ``E``.

    On failure the witness is the lexicographically least tuple of some
    ``K(a)^n`` outside ``E``, with ``a`` the first point reaching it and an
    endomorphism (word lifts over ``a``) that sends ``a`` there.

    With ``strict`` set, a set that is not algebraic raises
    :class:`NotAlgebraicError`.
    """
    _require_nonempty(E)
    if E.group is not G:
        raise GeometryError("algebraic set lives over a different group")
    if strict:
        cl, closed = closure(G, E)
        if not closed:
            extra = [_tuple(p) for p in cl.points[~E.mask[cl.codes]][:5]]
            raise NotAlgebraicError(f"set is not algebraic; closure adds {len(cl) - len(E)} points", extra)

    n = E.n
    subgroups: dict[frozenset, Subgroup] = {}
    powers: dict[tuple[int, ...], np.ndarray] = {}
    best = None
    for row in E.points:
        key = frozenset(int(a) for a in row)
        K = subgroups.get(key)
        if K is None:
            K = subgroups[key] = subgroup_closure(G, key)
        codes = powers.get(K.elements)
        if codes is None:
            codes = powers[K.elements] = encode(power_points(K, n), G.order)
        missing = codes[~E.mask[codes]]
        if missing.size:
            least = int(missing.min())
            if best is None or least < best[0]:
                best = (least, _tuple(row))
    if best is not None:
        code, point = best
        image = _tuple(decode([code], G.order, n)[0])
        endo = point_endo(G, point, image)
        return Verdict("no", witness=Witness(point, image, endo, label="K(a)^n escapes E"))
    return Verdict("yes", decomposition=maximal_members(list(subgroups.values())))


def full_invariance_exact(G: FiniteGroup, E: AlgebraicSet, ctx: Optional[WordContext] = None,
                          embed=None, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Whether every assignment ``x_i -> q_i`` in ``Q = Gamma(E)`` extends to an endomorphism of ``Q``.

    Constants, in coefficient mode, stay pinned to themselves.  Assignments
    are scanned in lexicographic order of element indices; if ``|Q|^n``
    exceeds ``budget`` the verdict is ``"budget"`` and nothing is scanned.
    """
    _require_nonempty(E)
    Q = coordinate_group(G, E, ctx, embed)
    n = E.n
    total = Q.order ** n
    if total > budget:
        return Verdict("budget", note=f"|Q|^n = {Q.order}^{n} = {total} exceeds budget {budget}")
    step = 1 << 16
    for start in range(0, total, step):
        qs = decode(np.arange(start, min(total, start + step)), Q.order, n)
        ok = endomorphism_mask(Q, qs)
        if not ok.all():
            bad = _tuple(qs[int(np.argmin(ok))])
            return Verdict("no", witness=_exact_witness(Q, E, bad))
    return Verdict("yes", note=f"all {total} assignments extend (|Q| = {Q.order})")


def _exact_witness(Q: CoordinateGroup, E: AlgebraicSet, targets: tuple[int, ...]) -> Witness:
    images = Q.elements[list(targets)].T.astype(np.intp)      # (|E|, n)
    hit = _least_escape(E, E.points, images)
    if hit is None:
        raise GeometryError("assignment fails to extend but moves no point outside E; "
                            "the set is not algebraic")
    row, _ = hit
    endo = EndoSpec(Q.ctx, tuple(Q.word_lift(q) for q in targets))
    return Witness(_tuple(E.points[row]), _tuple(images[row]), endo,
                   label="assignment q = " + str(list(targets)))


def endo_invariance_sampled(G: FiniteGroup, E: AlgebraicSet, maxlen: int) -> Verdict:
    """Apply every substitution whose images have length ``<= maxlen`` to every point of ``E``."""
    _require_nonempty(E)
    n, order = E.n, G.order
    ctx = WordContext(n)
    words = list(enumerate_words(ctx, maxlen))
    vals = np.stack([evaluate_many(w, E.points, G) for w in words]).astype(np.int64)   # (W, m)
    weights = order ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for head in itertools.product(range(len(words)), repeat=n - 1):
        base = sum(weights[i] * vals[h] for i, h in enumerate(head)) if head else 0
        codes = base + vals                                       # last image varies by row
        inside = E.mask[codes].all(axis=1)
        if not inside.all():
            last = int(np.argmin(inside))
            images = tuple(words[h] for h in head) + (words[last],)
            endo = EndoSpec(ctx, images)
            img_pts = np.stack([vals[h] for h in head] + [vals[last]], axis=1)
            row, _ = _least_escape(E, E.points, img_pts)
            return Verdict("no", witness=Witness(_tuple(E.points[row]), _tuple(img_pts[row]), endo,
                                                 label="sampled endomorphism"))
    return Verdict("yes", note=f"invariant under all {len(words) ** n} substitutions with "
                               f"images of length <= {maxlen}")


@dataclass(frozen=True)
class AutGenerator:
    """A Nielsen automorphism of F_n.

    ``swap`` exchanges ``x_i`` and ``x_j``; ``invert`` sends ``x_i`` to its
    inverse; ``right_multiply`` sends ``x_i`` to ``x_i x_j^sign``.
    """

    kind: str
    i: int
    j: int = -1
    sign: int = 1

    def endo(self, ctx: WordContext) -> EndoSpec:
        xs = ctx.gens()
        images = list(xs)
        if self.kind == "swap":
            images[self.i], images[self.j] = xs[self.j], xs[self.i]
        elif self.kind == "invert":
            images[self.i] = xs[self.i].inverse()
        elif self.kind == "right_multiply":
            images[self.i] = xs[self.i] * xs[self.j] ** self.sign
        else:
            raise ValueError(f"unknown Nielsen move {self.kind!r}")
        return EndoSpec(ctx, tuple(images))

    @property
    def label(self) -> str:
        if self.kind == "swap":
            return f"swap(x{self.i + 1},x{self.j + 1})"
        if self.kind == "invert":
            return f"invert(x{self.i + 1})"
        return f"x{self.i + 1}->x{self.i + 1}*x{self.j + 1}^{self.sign}"


def nielsen_generators(n: int) -> list[AutGenerator]:
    """Swaps, inversions and right multiplications (with their inverses) for F_n."""
    gens = [AutGenerator("swap", i, j) for i, j in itertools.combinations(range(n), 2)]
    gens += [AutGenerator("invert", i) for i in range(n)]
    for i, j in itertools.permutations(range(n), 2):
        gens += [AutGenerator("right_multiply", i, j, 1), AutGenerator("right_multiply", i, j, -1)]
    return gens


def is_characteristic(G: FiniteGroup, E: AlgebraicSet) -> Verdict:
    """Invariance of ``Rad(E)`` under ``Aut(F_n)``, tested on Nielsen generators.

    Every generator and its inverse is in the test set and invariance
    composes, so passing the generators gives invariance under all of
    ``Aut(F_n)``.
    """
    _require_nonempty(E)
    ctx = WordContext(E.n)
    for gen in nielsen_generators(E.n):
        alpha = gen.endo(ctx)
        images = np.stack([evaluate_many(v, E.points, G) for v in alpha.images], axis=1)
        hit = _least_escape(E, E.points, images)
        if hit is not None:
            row, _ = hit
            return Verdict("no", witness=Witness(_tuple(E.points[row]), _tuple(images[row]), alpha,
                                                 label=gen.label))
    return Verdict("yes", note="invariant under every Nielsen generator and its inverse, "
                               "hence under Aut(F_n)")


def gamma_vanishes(G: FiniteGroup, E: AlgebraicSet, weight: Optional[int] = None) -> bool:
    """Whether every left-normed basic commutator of the given weight (default ``n``) vanishes on ``E``."""
    ctx = WordContext(E.n)
    weight = E.n if weight is None else weight
    return all(radical_contains(G, E, w) for w in basic_commutators(weight, ctx))


def theorem2_report(G: FiniteGroup, E: AlgebraicSet) -> dict:
    """Nilpotent-case report: commutator hypothesis, characteristic check, decomposition.

    The hypothesis is tested as the vanishing of the weight-``n`` left-normed
    basic commutators on ``E``; for nilpotent ``G`` and ``n <= 3`` these
    normally generate ``gamma_n(F_n)`` modulo any nilpotent quotient.  Under
    the hypothesis a characteristic radical must also be fully
    characteristic, and ``consistent`` records whether that held.
    """
    n = E.n
    c = nilpotency_class(G)
    applicable = c is not None
    vanishes = gamma_vanishes(G, E)
    char = is_characteristic(G, E)
    dec = decompose(G, E, strict=False)
    consistent = not (applicable and vanishes and char.yes and not dec.yes)
    return {
        "nilpotency_class": c,
        "nilpotent": applicable,
        "n": n,
        "class_at_most_n": applicable and c <= n,
        "class_at_most_n_minus_1": applicable and c <= n - 1,
        "hypothesis_applicable": applicable,
        "gamma_n_vanishes_on_E": vanishes,
        "characteristic": char.outcome,
        "decomposable": dec.outcome,
        "characteristic_not_fully": char.yes and not dec.yes,
        "consistent": consistent,
        "_verdicts": (char, dec),
    }


def identity_oracle(family: Sequence[Subgroup], w: Word, embed=None) -> bool:
    """Whether ``w`` is an identity of every member of the family."""
    if w.has_constants and embed is None:
        raise WordError("identity_oracle takes coefficient-free words unless an embedding is given")
    G = family[0].parent if family else None
    pts = family_points(family, w.ctx.nvars)
    return bool(np.all(evaluate_many(w, pts, G, embed) == G.identity))


def corollary1_check(G: FiniteGroup, S: EquationSystem, maxlen: int) -> dict:
    """Compare ``Rad(V(S))`` with the identities of the decomposition family on short words."""
    if S.ctx.coefficients:
        raise WordError("corollary1_check works coefficient-free")
    return identity_sweep(G, solve(G, S), maxlen)


def identity_sweep(G: FiniteGroup, V: AlgebraicSet, maxlen: int) -> dict:
    """Every word of length ``<= maxlen`` lies in ``Rad(V)`` iff it is an identity of the family.

    The family comes from :func:`decompose`; if ``V`` has none the report
    says so and no words are checked.
    """
    verdict = decompose(G, V, strict=False)
    report = {"points": len(V), "verdict": verdict.outcome}
    if not verdict.yes:
        report.update(status="not fully characteristic", words_checked=0, discrepancies=[])
        report["_verdict"] = verdict
        return report
    family = verdict.decomposition
    ctx = WordContext(V.n)
    checked, discrepancies, in_radical = 0, [], 0
    for w in enumerate_words(ctx, maxlen):
        lhs = radical_contains(G, V, w)
        rhs = identity_oracle(family, w)
        checked += 1
        in_radical += lhs
        if lhs != rhs:
            discrepancies.append({"word": format_word(w), "radical": lhs, "identity": rhs})
    report.update(status="ok" if not discrepancies else "discrepancy", words_checked=checked,
                  words_in_radical=in_radical, discrepancies=discrepancies,
                  family_orders=[K.order for K in family])
    report["_verdict"] = verdict
    return report


def relatively_free(family: Sequence[Subgroup], ctx: WordContext, embed=None) -> CoordinateGroup:
    """``F_n`` modulo the identities of the family, as the coordinate group of ``union K^n``.

    A coefficient context (with ``embed`` placing the constants in the
    family's parent group) gives the G-group analogue.
    """
    pts = family_points(family, ctx.nvars)
    G = family[0].parent
    E = AlgebraicSet(G, ctx.nvars, pts, provenance="raw")
    return coordinate_group(G, E, ctx, embed)


def marked_iso(Q1: CoordinateGroup, Q2: CoordinateGroup) -> bool:
    """Whether matching marked generators extends to an isomorphism ``Q1 -> Q2``."""
    if Q1.num_marked != Q2.num_marked:
        raise GeometryError("coordinate groups have different numbers of marked generators")
    if Q1.order != Q2.order:
        return False
    forward = extension_mask(Q1, [Q2.marked], Q2.as_group)[0]
    backward = extension_mask(Q2, [Q1.marked], Q1.as_group)[0]
    return bool(forward and backward)


def check_verdict(G: FiniteGroup, E: AlgebraicSet, verdict: Verdict) -> bool:
    """Re-verify a verdict's certificate independently of the procedure that produced it."""
    if verdict.outcome == "no":
        w = verdict.witness
        if w is None or w.point not in E or w.image in E:
            return False
        if w.endo is not None:
            return w.endo.image_point(w.point, G) == w.image
        return True
    if verdict.outcome == "yes" and verdict.decomposition is not None:
        pts = family_points(verdict.decomposition, E.n)
        return AlgebraicSet(G, E.n, pts) == E
    return verdict.outcome in ("yes", "budget")
