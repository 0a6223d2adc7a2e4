"""Algebraic sets over a finite group and the finite side of the radical.

The radical ``Rad(E)`` of a set ``E`` of n-tuples is infinite, so it is never
listed.  Membership is decided pointwise (:func:`radical_contains`), and the
quotient ``F_n / Rad(E)`` is built concretely as the subgroup of ``G^E``
generated by the coordinate projections (:func:`coordinate_group`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from .groups import FiniteGroup, GroupError
from .words import (CONST, VAR, Word, WordContext, WordError, constant_embedding,
                    evaluate_many, format_word, free_reduce, parse_word)


class GeometryError(ValueError):
    """Invalid geometric request (empty set where forbidden, mismatched arity, ...)."""


class SystemFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Equation:
    left: Word
    right: Word
    normalized: Word = field(init=False, compare=False)

    def __post_init__(self):
        if self.left.ctx != self.right.ctx:
            raise WordError("equation sides belong to different contexts")
        object.__setattr__(self, "normalized", self.left * self.right.inverse())

    @property
    def ctx(self) -> WordContext:
        return self.left.ctx

    @classmethod
    def of(cls, w: Word) -> "Equation":
        """The equation ``w = 1``."""
        return cls(w, w.ctx.one)

    def __str__(self) -> str:
        if self.right.is_identity:
            return format_word(self.left)
        return f"{format_word(self.left)} = {format_word(self.right)}"


class EquationSystem:
    """An ordered set of equations over one context, deduplicated by normal form."""

    def __init__(self, ctx: WordContext, equations: Sequence[Equation] = ()):
        self.ctx = ctx
        seen, eqs = set(), []
        for eq in equations:
            if eq.ctx != ctx:
                raise WordError(f"equation {eq} does not belong to this context")
            key = eq.normalized.letters
            if key not in seen:
                seen.add(key)
                eqs.append(eq)
        self.equations = tuple(eqs)

    @classmethod
    def from_words(cls, ctx: WordContext, words: Sequence[Word]) -> "EquationSystem":
        return cls(ctx, [Equation.of(w) for w in words])

    @classmethod
    def parse(cls, ctx: WordContext, texts: Sequence[str]) -> "EquationSystem":
        return cls(ctx, [parse_equation(t, ctx) for t in texts])

    def __iter__(self) -> Iterator[Equation]:
        return iter(self.equations)

    def __len__(self) -> int:
        return len(self.equations)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquationSystem):
            return NotImplemented
        return self.ctx == other.ctx and self.equations == other.equations

    def __hash__(self) -> int:
        return hash((self.ctx, self.equations))

    def __repr__(self) -> str:
        return "EquationSystem([" + ", ".join(map(str, self.equations)) + "])"


def parse_equation(text: str, ctx: WordContext) -> Equation:
    if text.count("=") > 1:
        raise WordError(f"more than one '=' in {text!r}")
    if "=" in text:
        lhs, rhs = text.split("=")
        return Equation(parse_word(lhs, ctx), parse_word(rhs, ctx))
    return Equation.of(parse_word(text, ctx))


def parse_system(text: str, constants: Optional[FiniteGroup] = None) -> EquationSystem:
    """Read a system file: ``vars n``, an optional ``coefficients`` line, then ``eq ...`` lines.

    ``constants`` supplies the group for coefficient-mode files.
    """
    nvars, coeff = None, False
    raw: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "vars":
            if nvars is not None:
                raise SystemFormatError("duplicate 'vars' line", lineno)
            if not rest.strip().isdigit() or int(rest) < 1:
                raise SystemFormatError(f"'vars' needs a positive integer, got {rest!r}", lineno)
            nvars = int(rest)
        elif head == "coefficients" and not rest.strip():
            coeff = True
        elif head == "eq":
            raw.append((lineno, rest))
        else:
            raise SystemFormatError(f"unknown directive {head!r}", lineno)
    if nvars is None:
        raise SystemFormatError("missing 'vars n' line")
    if coeff and constants is None:
        raise SystemFormatError("coefficient system needs a constant group")
    ctx = WordContext(nvars, constants if coeff else None)
    eqs = []
    for lineno, body in raw:
        try:
            eqs.append(parse_equation(body, ctx))
        except WordError as exc:
            raise SystemFormatError(str(exc), lineno) from None
    return EquationSystem(ctx, eqs)


def format_system(S: EquationSystem) -> str:
    lines = [f"vars {S.ctx.nvars}"]
    if S.ctx.coefficients:
        lines.append("coefficients")
    lines += [f"eq {eq}" for eq in S]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# point sets

def all_points(order: int, n: int) -> np.ndarray:
    """Every n-tuple over ``range(order)``, lexicographically."""
    grids = np.indices((order,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.intp)


def encode(points: np.ndarray, order: int) -> np.ndarray:
    """Mixed-radix codes; code order equals lexicographic tuple order."""
    points = np.asarray(points, dtype=np.int64)
    if points.size == 0:
        return np.zeros(0, dtype=np.int64)
    weights = order ** np.arange(points.shape[1] - 1, -1, -1, dtype=np.int64)
    return points @ weights


def decode(codes: np.ndarray, order: int, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((len(codes), n), dtype=np.intp)
    for i in range(n - 1, -1, -1):
        out[:, i] = codes % order
        codes = codes // order
    return out


class AlgebraicSet:
    """A finite set of n-tuples over ``group``, kept sorted and deduplicated.

    ``provenance`` records where the set came from; raw sets are not assumed
    to be closed.
    """

    def __init__(self, group: FiniteGroup, n: int, points, provenance: str = "raw"):
        if n < 1:
            raise GeometryError("arity must be >= 1")
        pts = np.asarray(points, dtype=np.intp).reshape(-1, n)
        if pts.size and (pts.min() < 0 or pts.max() >= group.order):
            raise GroupError(f"tuple entry out of range [0, {group.order})")
        codes = np.unique(encode(pts, group.order))
        self.group = group
        self.n = n
        self.codes = codes
        self.points = decode(codes, group.order, n)
        self.provenance = provenance
        self.codes.setflags(write=False)
        self.points.setflags(write=False)

    @classmethod
    def full(cls, group: FiniteGroup, n: int, provenance: str = "raw") -> "AlgebraicSet":
        return cls(group, n, all_points(group.order, n), provenance)

    @classmethod
    def from_codes(cls, group: FiniteGroup, n: int, codes, provenance: str = "raw") -> "AlgebraicSet":
        return cls(group, n, decode(np.asarray(codes), group.order, n), provenance)

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean membership vector indexed by code."""
        m = np.zeros(self.group.order ** self.n, dtype=bool)
        m[self.codes] = True
        m.setflags(write=False)
        return m

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.points]

    def contains_points(self, points) -> np.ndarray:
        return self.mask[encode(np.asarray(points).reshape(-1, self.n), self.group.order)]

    def __contains__(self, point) -> bool:
        point = tuple(point)
        if len(point) != self.n or not all(0 <= int(a) < self.group.order for a in point):
            return False
        return bool(self.contains_points(np.array([point]))[0])

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return iter(self.tuples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicSet):
            return NotImplemented
        return (self.group is other.group and self.n == other.n
                and np.array_equal(self.codes, other.codes))

    def __hash__(self) -> int:
        return hash((id(self.group), self.n, self.codes.tobytes()))

    def issubset(self, other: "AlgebraicSet") -> bool:
        return bool(np.all(other.mask[self.codes]))

    @property
    def is_full(self) -> bool:
        return len(self) == self.group.order ** self.n

    def with_provenance(self, provenance: str) -> "AlgebraicSet":
        return AlgebraicSet(self.group, self.n, self.points, provenance)

    def format_points(self) -> list[str]:
        names = self.group.names
        return ["(" + ", ".join(names[a] for a in row) + ")" for row in self.points]

    def __repr__(self) -> str:
        return f"<AlgebraicSet n={self.n} size={len(self)} over {self.group.label} ({self.provenance})>"


def _context_for(E: AlgebraicSet, ctx: Optional[WordContext]) -> WordContext:
    if ctx is None:
        return WordContext(E.n)
    if ctx.nvars != E.n:
        raise GeometryError(f"context has {ctx.nvars} variables but the set has arity {E.n}")
    return ctx


def solve(G: FiniteGroup, S: EquationSystem, embed=None) -> AlgebraicSet:
    """``V_G(S)`` by exhaustive filtering of ``G^n``.

    In coefficient mode ``embed`` maps constants into ``G`` (default: the
    constants group must be ``G`` itself).
    """
    constant_embedding(S.ctx, G, embed)
    pts = all_points(G.order, S.ctx.nvars)
    keep = np.ones(len(pts), dtype=bool)
    for eq in S:
        keep &= evaluate_many(eq.normalized, pts, G, embed) == G.identity
    return AlgebraicSet(G, S.ctx.nvars, pts[keep], provenance="solved-from-system")


def radical_contains(G: FiniteGroup, E: AlgebraicSet, eq: Equation | Word, embed=None) -> bool:
    """Whether ``eq`` holds at every point of ``E`` (membership in ``Rad(E)``)."""
    w = eq.normalized if isinstance(eq, Equation) else eq
    if w.ctx.nvars != E.n:
        raise GeometryError(f"equation has {w.ctx.nvars} variables but the set has arity {E.n}")
    if E.group is not G:
        raise GeometryError("algebraic set lives over a different group")
    if len(E) == 0:
        constant_embedding(w.ctx, G, embed)
        return True
    return bool(np.all(evaluate_many(w, E.points, G, embed) == G.identity))


# ---------------------------------------------------------------------------
# coordinate groups

class CoordinateGroup:
    """The subgroup of ``G^E`` generated by the coordinate projections.

    Elements are functions ``E -> G`` stored as rows of ``elements``.  Rows
    are discovered breadth-first from the identity by right multiplication
    with the marked generators, in marked order, so ``parent``/``via`` form a
    spanning tree of the Cayley graph and ``succ[k][q]`` is the index of
    ``q * marked[k]``.  The tree gives each element a word lift.
    """

    def __init__(self, group: FiniteGroup, E: AlgebraicSet, ctx: WordContext, embed=None):
        if len(E) == 0:
            raise GeometryError(
                "coordinate group of the empty set is undefined; Rad of the empty set "
                "contains every equation")
        if E.group is not group:
            raise GeometryError("algebraic set lives over a different group")
        self.group = group
        self.E = E
        self.ctx = _context_for(E, ctx)
        emb = constant_embedding(self.ctx, group, embed)
        self.embed = emb

        dtype = group.index_dtype
        m = len(E)
        gens = [E.points[:, i].astype(dtype) for i in range(E.n)]
        self.marked_letters = [(VAR, i, 1) for i in range(E.n)]
        if emb is not None:
            for g in range(self.ctx.constants.order):
                gens.append(np.full(m, emb[g], dtype=dtype))
                self.marked_letters.append((CONST, g, 1))
        k = len(gens)

        table = group.table
        identity = np.full(m, group.identity, dtype=dtype)
        rows = [identity]
        index = {identity.tobytes(): 0}
        parent = [-1]
        via = [-1]
        succ: list[list[int]] = [[] for _ in range(k)]
        q = 0
        while q < len(rows):
            row = rows[q]
            for j, gvec in enumerate(gens):
                prod = table[row, gvec].astype(dtype)
                key = prod.tobytes()
                idx = index.get(key)
                if idx is None:
                    idx = len(rows)
                    index[key] = idx
                    rows.append(prod)
                    parent.append(q)
                    via.append(j)
                succ[j].append(idx)
            q += 1

        self.elements = np.stack(rows)
        self.elements.setflags(write=False)
        self._index = index
        self.parent = np.array(parent, dtype=np.intp)
        self.via = np.array(via, dtype=np.intp)
        self.succ = np.array(succ, dtype=np.intp).reshape(k, len(rows))
        self.marked = [index[g.tobytes()] for g in gens]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def relation_edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per generator, the Cayley-graph edges ``q -> q * marked_k`` outside the spanning tree."""
        out = []
        nodes = np.arange(self.order)
        for j in range(self.num_marked):
            dst = self.succ[j]
            tree = (self.parent[dst] == nodes) & (self.via[dst] == j)
            out.append((nodes[~tree], dst[~tree]))
        return out

    @cached_property
    def closure_mask(self) -> np.ndarray:
        """Membership vector (by code) of ``cl(E)``: the points ``b`` with ``x -> b`` extending to ``Q -> G``."""
        pts = all_points(self.group.order, self.n)
        T = pts
        if self.embed is not None:
            T = np.hstack([pts, np.broadcast_to(self.embed, (len(pts), len(self.embed)))])
        mask = extension_mask(self, T, self.group)
        mask.setflags(write=False)
        return mask

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<CoordinateGroup order={self.order} over {len(self.E)} points>"

    @property
    def n(self) -> int:
        return self.E.n

    @property
    def num_marked(self) -> int:
        return len(self.marked)

    def element_index(self, values) -> Optional[int]:
        """Index of the function with the given values on ``E``, if it lies in the group."""
        row = np.asarray(values).astype(self.group.index_dtype)
        return self._index.get(row.tobytes())

    def word_lift(self, q: int) -> Word:
        """A word evaluating pointwise on ``E`` to element ``q``."""
        letters = []
        while q > 0:
            letters.append(self.marked_letters[self.via[q]])
            q = int(self.parent[q])
        return free_reduce(letters[::-1], self.ctx)

    def marked_words(self) -> list[Word]:
        return [free_reduce([lt], self.ctx) for lt in self.marked_letters]

    def constant_targets(self, embed) -> list[int]:
        """Images of the constant generators under ``embed`` (empty if coefficient-free)."""
        if self.embed is None:
            return []
        return [int(v) for v in np.asarray(embed)]

    @cached_property
    def as_group(self) -> FiniteGroup:
        """The coordinate group as an abstract :class:`FiniteGroup` on indices ``0..|Q|-1``."""
        N = self.order
        table = np.empty((N, N), dtype=np.intp)
        table[:, 0] = np.arange(N)
        # a * (p * g) = (a * p) * g along the spanning tree
        for b in range(1, N):
            table[:, b] = self.succ[self.via[b]][table[:, self.parent[b]]]
        # a subgroup of G^E is associative by construction
        return FiniteGroup(table, label="coordinate group", check_associative=False)


def coordinate_group(G: FiniteGroup, E: AlgebraicSet, ctx: Optional[WordContext] = None,
                     embed=None) -> CoordinateGroup:
    """``Gamma(E)``, realized inside ``G^E``; constants become constant functions."""
    return CoordinateGroup(G, E, _context_for(E, ctx), embed)


def extension_mask(Q: CoordinateGroup, targets, H: FiniteGroup, chunk_cells: int = 1 << 22) -> np.ndarray:
    """For each row of ``targets`` (shape ``(B, num_marked)``), whether it defines a homomorphism.

    The candidate map is pushed along the spanning tree of ``Q`` and then
    checked on every Cayley-graph edge.  This is the same as asking that the
    subgroup of ``Q x H`` generated by the pairs ``(marked_k, target_k)``
    has exactly ``|Q|`` elements.
    """
    T = np.asarray(targets, dtype=np.intp)
    if T.ndim != 2 or T.shape[1] != Q.num_marked:
        raise GeometryError(f"targets must have shape (B, {Q.num_marked}), got {T.shape}")
    if T.size and (T.min() < 0 or T.max() >= H.order):
        raise GroupError(f"target index out of range [0, {H.order})")
    out = np.empty(len(T), dtype=bool)
    step = max(1, chunk_cells // max(1, Q.order))
    table = H.table
    parent, via = Q.parent, Q.via
    for start in range(0, len(T), step):
        t = T[start:start + step].T                  # (k, b)
        phi = np.empty((Q.order, t.shape[1]), dtype=np.intp)
        phi[0] = H.identity
        for q in range(1, Q.order):
            phi[q] = table[phi[parent[q]], t[via[q]]]
        ok = np.ones(t.shape[1], dtype=bool)
        for j, (src, dst) in enumerate(Q.relation_edges):
            ok &= np.all(phi[dst] == table[phi[src], t[j]], axis=0)
        out[start:start + step] = ok
    return out


def hom_extends(Q: CoordinateGroup, targets: Sequence[int], H: FiniteGroup, embed=None) -> bool:
    """Whether ``marked_k -> targets[k]`` extends to a homomorphism ``Q -> H``.

    In coefficient mode the constant generators must be sent to their images
    under ``embed`` (default: ``H`` is the constants group itself).
    """
    targets = list(targets)
    if len(targets) != Q.num_marked:
        raise GeometryError(f"expected {Q.num_marked} targets, got {len(targets)}")
    if Q.embed is not None:
        pinned = constant_embedding(Q.ctx, H, embed)
        if [int(t) for t in targets[Q.n:]] != [int(v) for v in pinned]:
            raise GeometryError("constant generators must map to their own constants")
    return bool(extension_mask(Q, [targets], H)[0])


def endomorphism_mask(Q: CoordinateGroup, qtuples) -> np.ndarray:
    """For each row ``q`` of ``qtuples`` (shape ``(B, n)``), whether ``x_i -> q_i`` extends to ``Q -> Q``.

    Constants stay fixed.  ``Q`` sits inside the product ``G^E``, so a map into
    ``Q`` is a homomorphism exactly when each coordinate map ``Q -> G`` is one,
    and ``x -> b`` extends to ``Q -> G`` exactly when ``b`` lies in the
    closure of ``E``.  The result agrees with
    ``extension_mask(Q, targets, Q.as_group)`` at a fraction of the cost.
    """
    qs = np.asarray(qtuples, dtype=np.intp)
    if qs.ndim != 2 or qs.shape[1] != Q.n:
        raise GeometryError(f"qtuples must have shape (B, {Q.n}), got {qs.shape}")
    cl_mask = Q.closure_mask
    G = Q.group
    weights = G.order ** np.arange(Q.n - 1, -1, -1, dtype=np.int64)
    out = np.empty(len(qs), dtype=bool)
    step = max(1, (1 << 22) // max(1, len(Q.E)))
    for start in range(0, len(qs), step):
        chunk = qs[start:start + step]
        codes = np.zeros((len(chunk), len(Q.E)), dtype=np.int64)
        for i in range(Q.n):
            codes += weights[i] * Q.elements[chunk[:, i]]
        out[start:start + step] = cl_mask[codes].all(axis=1)
    return out


def pair_closure_size(Q: CoordinateGroup, targets: Sequence[int], H: FiniteGroup) -> int:
    """Order of the subgroup of ``Q x H`` generated by ``(marked_k, targets[k])``.

    Plain breadth-first closure over pairs; kept as an independent check of
    :func:`extension_mask`.
    """
    gens = list(zip(Q.marked, (int(t) for t in targets)))
    start = (0, H.identity)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for q, h in frontier:
            for j, (_, t) in enumerate(gens):
                pair = (int(Q.succ[j][q]), H.mul(h, t))
                if pair not in seen:
                    seen.add(pair)
                    nxt.append(pair)
        frontier = nxt
    return len(seen)


def closure(G: FiniteGroup, E: AlgebraicSet, ctx: Optional[WordContext] = None,
            embed=None) -> tuple[AlgebraicSet, bool]:
    """``cl(E) = V(Rad(E))`` and whether ``E`` is algebraic.

    A tuple ``b`` lies in ``cl(E)`` exactly when ``x_i -> b_i`` (constants
    fixed) extends to a homomorphism from the coordinate group to ``G``.

    The empty set: in coefficient mode it is its own closure; coefficient-free
    every algebraic set contains the all-identity tuple, so the request is
    rejected.
    """
    ctx = _context_for(E, ctx)
    if len(E) == 0:
        if ctx.coefficients:
            return AlgebraicSet(G, E.n, [], provenance="closure-of-set"), True
        raise GeometryError("the empty set is never algebraic without coefficients; "
                            "its closure is undefined")
    Q = coordinate_group(G, E, ctx, embed)
    pts = all_points(G.order, E.n)
    cl = AlgebraicSet(G, E.n, pts[Q.closure_mask], provenance="closure-of-set")
    return cl, cl == E


def is_algebraic(G: FiniteGroup, E: AlgebraicSet, ctx: Optional[WordContext] = None, embed=None) -> bool:
    ctx = _context_for(E, ctx)
    if len(E) == 0:
        return ctx.coefficients
    return closure(G, E, ctx, embed)[1]
