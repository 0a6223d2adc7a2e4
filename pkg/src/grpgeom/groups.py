"""Finite groups stored as Cayley tables over dense integer indices."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np


class GroupError(ValueError):
    """Malformed group data or an invalid request against a group."""


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i, j]`` is the index of the product ``i * j``.  All group axioms are
    checked exhaustively at construction, so a ``FiniteGroup`` that exists is
    a group.
    """

    def __init__(self, table, names: Optional[Sequence[str]] = None, label: str = "group",
                 check_associative: bool = True):
        table = np.array(table, dtype=np.intp)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError(f"table must be a non-empty square array, got shape {table.shape}")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            bad = tuple(int(v) for v in np.argwhere((table < 0) | (table >= n))[0])
            raise GroupError(f"closure: entry at {bad} is out of range [0, {n})")
        identity = _find_identity(table)
        inverse = _find_inverses(table, identity)
        if check_associative:
            _check_associative(table)

        table.setflags(write=False)
        inverse.setflags(write=False)
        self.table = table
        self.identity = identity
        self.inverse = inverse
        self.label = label
        if names is None:
            names = [str(i) for i in range(n)]
        if len(names) != n:
            raise GroupError(f"expected {n} element names, got {len(names)}")
        self.names = tuple(names)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.label} of order {self.order}>"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def commutator(self, a: int, b: int) -> int:
        """``[a, b] = a^-1 b^-1 a b``."""
        t = self.table
        return int(t[t[self.inverse[a], self.inverse[b]], t[a, b]])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"no element named {name!r} in {self.label}") from None

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def index_dtype(self):
        """Smallest unsigned dtype that holds every element index."""
        return np.uint8 if self.order <= 256 else np.uint16 if self.order <= 65536 else np.intp

    def check_element(self, a) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise GroupError(f"element index {a} out of range [0, {self.order})")
        return a


def _find_identity(table: np.ndarray) -> int:
    n = table.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], ar) and np.array_equal(table[:, e], ar):
            return e
    left = [e for e in range(n) if np.array_equal(table[e], ar)]
    if left:
        e = left[0]
        bad = int(np.flatnonzero(table[:, e] != ar)[0])
        raise GroupError(f"identity: {e} is a left identity but {bad}*{e} = {table[bad, e]}")
    raise GroupError("identity: no element e with e*x = x for all x")


def _find_inverses(table: np.ndarray, e: int) -> np.ndarray:
    n = table.shape[0]
    inverse = np.empty(n, dtype=np.intp)
    for a in range(n):
        hits = np.flatnonzero(table[a] == e)
        if len(hits) == 0:
            raise GroupError(f"inverse: element {a} has no right inverse")
        b = int(hits[0])
        if table[b, a] != e:
            raise GroupError(f"inverse: {a}*{b} = identity but {b}*{a} = {table[b, a]}")
        inverse[a] = b
    return inverse


def _check_associative(table: np.ndarray) -> None:
    # (ab)c == a(bc), one slab of a at a time to bound memory
    for a in range(table.shape[0]):
        lhs = table[table[a]][:, :]          # lhs[b, c] = (a b) c
        rhs = table[a][table]                # rhs[b, c] = a (b c)
        if not np.array_equal(lhs, rhs):
            b, c = (int(v) for v in np.argwhere(lhs != rhs)[0])
            raise GroupError(
                f"associativity: ({a}*{b})*{c} = {lhs[b, c]} but {a}*({b}*{c}) = {rhs[b, c]}"
            )


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``parent``; two subgroups are equal when their element sets are."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, a) -> bool:
        return int(a) in self._element_set

    @cached_property
    def _element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._element_set <= other._element_set

    def names(self) -> list[str]:
        return [self.parent.names[a] for a in self.elements]

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"


def subgroup_closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``gens``."""
    gens = tuple(sorted({G.check_element(g) for g in gens}))
    seen = {G.identity}
    frontier = [G.identity]
    table = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(seen)), gens)


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)), tuple(range(G.order)))


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]``, generated by all ``[a, b]`` with ``a`` in A and ``b`` in B."""
    a = np.array(A.elements)[:, None]
    b = np.array(B.elements)[None, :]
    t, inv = G.table, G.inverse
    comms = t[t[inv[a], inv[b]], t[a, b]]
    return subgroup_closure(G, np.unique(comms).tolist())


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """``[gamma_1, gamma_2, ...]`` up to and including the first repeated term."""
    full = whole_group(G)
    series = [full]
    while True:
        nxt = commutator_subgroup(G, series[-1], full)
        series.append(nxt)
        if nxt.elements == series[-2].elements:
            return series


def nilpotency_class(G: FiniteGroup) -> Optional[int]:
    """Nilpotency class of ``G``, or ``None`` if ``G`` is not nilpotent.

    The trivial group has class 0.
    """
    series = lower_central_series(G)
    if series[-1].order != 1:
        return None
    # series[c] is gamma_{c+1}; first trivial term gives the class
    return next(i for i, s in enumerate(series) if s.order == 1)


# ---------------------------------------------------------------------------
# builders

def from_elements(elements: Sequence, mul, names: Optional[Sequence[str]] = None,
                  label: str = "group") -> FiniteGroup:
    """Tabulate a group from a list of hashable elements and a product function."""
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.intp)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            try:
                table[i, j] = index[mul(x, y)]
            except KeyError:
                raise GroupError(f"closure: product of elements {i} and {j} is not in the list") from None
    return FiniteGroup(table, names=names, label=label)


def cyclic(k: int) -> FiniteGroup:
    if k < 1:
        raise GroupError("cyclic(k) needs k >= 1")
    table = (np.arange(k)[:, None] + np.arange(k)[None, :]) % k
    names = ["e"] + ["a" if i == 1 else f"a^{i}" for i in range(1, k)]
    return FiniteGroup(table, names=names, label=f"cyclic({k})")


def dihedral(k: int) -> FiniteGroup:
    """Symmetries of a regular k-gon, order 2k.  Element ``r^i s^j`` has index ``i + k*j``."""
    if k < 1:
        raise GroupError("dihedral(k) needs k >= 1")
    elements = [(i, j) for j in range(2) for i in range(k)]

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + (c if b == 0 else -c)) % k, (b + d) % 2)

    def name(x):
        i, j = x
        r = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
        s = "s" if j else ""
        return (r + s) or "e"

    return from_elements(elements, mul, [name(x) for x in elements], label=f"dihedral({k})")


def symmetric(k: int) -> FiniteGroup:
    """Permutations of ``0..k-1`` in lexicographic order; ``(p*q)(i) = p(q(i))``."""
    if not 1 <= k <= 5:
        raise GroupError("symmetric(k) is supported for 1 <= k <= 5")
    perms = list(itertools.permutations(range(k)))

    def mul(p, q):
        return tuple(p[q[i]] for i in range(k))

    return from_elements(perms, mul, [_cycle_name(p) for p in perms], label=f"symmetric({k})")


def _cycle_name(p: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def quaternion8() -> FiniteGroup:
    # units as (sign, basis) with basis in 1, i, j, k
    basis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, b) for b in "1ijk" for s in (1, -1)]

    def mul(x, y):
        s, b = basis_mul[x[1], y[1]]
        return (x[0] * y[0] * s, b)

    names = [("" if s > 0 else "-") + b for s, b in elements]
    return from_elements(elements, mul, names, label="quaternion8")


def unitriangular(dim: int, p: int) -> FiniteGroup:
    """Upper unitriangular ``dim x dim`` matrices over Z/p (only ``dim == 3``, ``p`` in {2, 3})."""
    if dim != 3 or p not in (2, 3):
        raise GroupError("unitriangular(3, p) is supported for p in {2, 3}")
    # [[1, a, b], [0, 1, c], [0, 0, 1]] stored as (a, b, c)
    elements = list(itertools.product(range(p), repeat=3))

    def mul(x, y):
        a1, b1, c1 = x
        a2, b2, c2 = y
        return ((a1 + a2) % p, (b1 + b2 + a1 * c2) % p, (c1 + c2) % p)

    names = ["e" if x == (0, 0, 0) else "m" + "".join(map(str, x)) for x in elements]
    return from_elements(elements, mul, names, label=f"unitriangular(3,{p})")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """``G x H`` with ``(g, h)`` stored at index ``g * |H| + h``."""
    m = H.order
    gi = np.arange(G.order * m) // m
    hi = np.arange(G.order * m) % m
    table = G.table[gi[:, None], gi[None, :]] * m + H.table[hi[:, None], hi[None, :]]
    names = [f"({G.names[g]},{H.names[h]})" for g, h in zip(gi, hi)]
    return FiniteGroup(table, names=names, label=f"direct_product({G.label},{H.label})")


def direct_power(G: FiniteGroup, k: int) -> FiniteGroup:
    if k < 1:
        raise GroupError("direct power needs k >= 1")
    P = G
    for _ in range(k - 1):
        P = direct_product(P, G)
    return P


def parse_table(text: str) -> FiniteGroup:
    """Read the explicit-table text format: ``order N``, N rows, optional ``names`` line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GroupError("table file is empty")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order" or not head[1].isdigit():
        raise GroupError(f"line 1: expected 'order N', got {lines[0]!r}")
    n = int(head[1])
    if len(lines) < n + 1:
        raise GroupError(f"expected {n} table rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:n + 1], start=2):
        try:
            row = [int(v) for v in ln.split()]
        except ValueError:
            raise GroupError(f"line {i}: non-integer entry in {ln!r}") from None
        if len(row) != n:
            raise GroupError(f"line {i}: expected {n} entries, got {len(row)}")
        rows.append(row)
    names = None
    rest = lines[n + 1:]
    if rest:
        parts = rest[0].split()
        if parts[0] != "names" or len(rest) > 1:
            raise GroupError(f"unexpected trailing content: {rest[0]!r}")
        names = parts[1:]
    return FiniteGroup(rows, names=names, label="table")


def format_table(G: FiniteGroup) -> str:
    out = [f"order {G.order}"]
    out += [" ".join(str(int(v)) for v in row) for row in G.table]
    out.append("names " + " ".join(G.names))
    return "\n".join(out) + "\n"


_BUILDER_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z_0-9]*)|(\d+)|(.))")


@lru_cache(maxsize=None)
def build_group(spec: str) -> FiniteGroup:
    """Build a group from a descriptor such as ``direct_product(cyclic(2),symmetric(3))``.

    Results are cached, so equal descriptors give the same object.
    """
    tokens = []
    for m in _BUILDER_TOKEN.finditer(spec):
        name, num, other = m.groups()
        if name:
            tokens.append(("name", name, m.start(1)))
        elif num:
            tokens.append(("num", int(num), m.start(2)))
        elif other and not other.isspace():
            tokens.append(("sym", other, m.start(3)))
    pos = 0

    def expect(kind, value=None):
        nonlocal pos
        if pos >= len(tokens):
            raise GroupError(f"group spec {spec!r}: unexpected end")
        tok = tokens[pos]
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise GroupError(f"group spec {spec!r}: unexpected {tok[1]!r} at position {tok[2]}")
        pos += 1
        return tok[1]

    def peek(value):
        return pos < len(tokens) and tokens[pos][1] == value

    def group():
        name = expect("name")
        args = []
        if peek("("):
            expect("sym", "(")
            while True:
                if pos < len(tokens) and tokens[pos][0] == "num":
                    args.append(expect("num"))
                else:
                    args.append(group())
                if peek(","):
                    expect("sym", ",")
                    continue
                expect("sym", ")")
                break
        return _make(name, args)

    def _make(name, args):
        ints = all(isinstance(a, int) for a in args)
        if name == "cyclic" and len(args) == 1 and ints:
            return cyclic(args[0])
        if name == "dihedral" and len(args) == 1 and ints:
            return dihedral(args[0])
        if name == "symmetric" and len(args) == 1 and ints:
            return symmetric(args[0])
        if name == "quaternion8" and not args:
            return quaternion8()
        if name == "unitriangular" and len(args) == 2 and ints:
            return unitriangular(*args)
        if name == "direct_product" and len(args) == 2 and not any(isinstance(a, int) for a in args):
            return direct_product(*args)
        raise GroupError(f"group spec {spec!r}: unknown builder {name}{tuple(args) if args else ''}")

    G = group()
    if pos != len(tokens):
        raise GroupError(f"group spec {spec!r}: trailing input at position {tokens[pos][2]}")
    G.label = spec.replace(" ", "")
    return G
