"""Words in the free group F_n and in the free product G[X] = G * F_n.

A word is a tuple of letters ``(kind, index, exp)``.  Variable letters have
``kind == "x"``, a 0-based variable index and a nonzero exponent.  Constant
letters have ``kind == "g"``, an element index of the constant group and
exponent 1; adjacent constants are multiplied out and identity constants are
dropped, so every word is stored in the normal form of the free product.

Commutators follow ``[a, b] = a^-1 b^-1 a b``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .groups import FiniteGroup

VAR = "x"
CONST = "g"

Letter = tuple[str, int, int]


class WordError(ValueError):
    """Invalid word input: syntax, arity or context problems."""

    def __init__(self, message: str, pos: Optional[int] = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


@dataclass(frozen=True)
class WordContext:
    """``nvars`` free variables, plus constants from ``constants`` in coefficient mode."""

    nvars: int
    constants: Optional[FiniteGroup] = None

    def __post_init__(self):
        if self.nvars < 1:
            raise WordError(f"nvars must be >= 1, got {self.nvars}")

    @property
    def coefficients(self) -> bool:
        return self.constants is not None

    def var(self, i: int) -> "Word":
        """The variable ``x_{i+1}`` (0-based ``i``)."""
        if not 0 <= i < self.nvars:
            raise WordError(f"variable index {i + 1} exceeds nvars={self.nvars}")
        return Word(self, ((VAR, i, 1),))

    def const(self, g: int) -> "Word":
        if self.constants is None:
            raise WordError("constants need a coefficient-mode context")
        return free_reduce([(CONST, self.constants.check_element(g), 1)], self)

    @property
    def one(self) -> "Word":
        return Word(self, ())

    def gens(self) -> list["Word"]:
        return [self.var(i) for i in range(self.nvars)]


@dataclass(frozen=True)
class Word:
    ctx: WordContext
    letters: tuple[Letter, ...]

    def __mul__(self, other: "Word") -> "Word":
        _same_ctx(self, other)
        return free_reduce(self.letters + other.letters, self.ctx)

    def inverse(self) -> "Word":
        inv = self.ctx.constants.inverse if self.ctx.constants is not None else None
        out = []
        for kind, idx, exp in reversed(self.letters):
            out.append((VAR, idx, -exp) if kind == VAR else (CONST, int(inv[idx]), 1))
        return Word(self.ctx, tuple(out))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return free_reduce(base.letters * abs(k), self.ctx)

    def __len__(self) -> int:
        return sum(abs(e) if kind == VAR else 1 for kind, _, e in self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def has_constants(self) -> bool:
        return any(kind == CONST for kind, _, _ in self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def _same_ctx(u: Word, v: Word) -> None:
    if u.ctx != v.ctx:
        raise WordError("words belong to different contexts")


def free_reduce(letters: Sequence[Letter], ctx: WordContext) -> Word:
    """Normal form of a raw letter sequence.

    Adjacent powers of one variable merge, zero exponents vanish, adjacent
    constants multiply in the constant group and identity constants vanish.
    """
    G = ctx.constants
    stack: list[Letter] = []
    for kind, idx, exp in letters:
        if kind == VAR:
            if not 0 <= idx < ctx.nvars:
                raise WordError(f"variable index {idx + 1} exceeds nvars={ctx.nvars}")
            if exp == 0:
                continue
            if stack and stack[-1][0] == VAR and stack[-1][1] == idx:
                merged = stack[-1][2] + exp
                stack.pop()
                if merged:
                    stack.append((VAR, idx, merged))
            else:
                stack.append((VAR, idx, exp))
        elif kind == CONST:
            if G is None:
                raise WordError("constant letter in a coefficient-free context")
            g = G.power(G.check_element(idx), exp)
            if stack and stack[-1][0] == CONST:
                g = G.mul(stack.pop()[1], g)
            if g != G.identity:
                stack.append((CONST, g, 1))
        else:
            raise WordError(f"unknown letter kind {kind!r}")
    return Word(ctx, tuple(stack))


def commutator(a: Word, b: Word) -> Word:
    _same_ctx(a, b)
    return free_reduce(a.inverse().letters + b.inverse().letters + a.letters + b.letters, a.ctx)


def left_normed(*ws: Word) -> Word:
    """``[w1, w2, ..., wk] = [[...[w1, w2], ...], wk]``."""
    c = ws[0]
    for w in ws[1:]:
        c = commutator(c, w)
    return c


# ---------------------------------------------------------------------------
# printing and parsing

def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    parts = []
    for kind, idx, exp in w.letters:
        if kind == VAR:
            parts.append(f"x{idx + 1}" if exp == 1 else f"x{idx + 1}^{exp}")
        else:
            parts.append(f"g{idx}")
    return "*".join(parts)


_TOKEN = re.compile(r"\s*(?:(x\d+)|(g\d+)|(-?\d+)|([\^*\[\](),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordError(f"unexpected character {text[pos]!r}", pos)
        var, const, num, sym = m.groups()
        start = m.start(m.lastindex)
        if var:
            tokens.append(("var", var, start))
        elif const:
            tokens.append(("const", const, start))
        elif num is not None:
            tokens.append(("int", num, start))
        else:
            tokens.append(("sym", sym, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_word(text: str, ctx: WordContext) -> Word:
    """Parse the word grammar::

        word := term ('*' term)*       ('*' may be omitted)
        term := atom ('^' integer)?
        atom := VAR | CONST | '[' word ',' word ']' | '(' word ')' | '1'
        VAR  := 'x' digits   (1-based, <= nvars)
        CONST:= 'g' digits   (0-based element index, coefficient mode only)

    ``1`` stands for the empty word so that every printed word parses back.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = tokens[pos]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise WordError(f"expected {want!r}, got {got!r}", tok[2])
        pos += 1
        return tok

    def starts_atom(tok):
        return tok[0] in ("var", "const") or (tok[0] == "sym" and tok[1] in "[(") or (
            tok[0] == "int" and tok[1] == "1")

    def word() -> Word:
        w = term()
        while True:
            tok = peek()
            if tok[0] == "sym" and tok[1] == "*":
                take()
                w = w * term()
            elif starts_atom(tok):
                w = w * term()
            else:
                return w

    def term() -> Word:
        a = atom()
        tok = peek()
        if tok[0] == "sym" and tok[1] == "^":
            take()
            k = take("int")
            a = a ** int(k[1])
        return a

    def atom() -> Word:
        tok = peek()
        kind, value, at = tok
        if kind == "var":
            take()
            i = int(value[1:])
            if not 1 <= i <= ctx.nvars:
                raise WordError(f"variable {value} out of range 1..{ctx.nvars}", at)
            return ctx.var(i - 1)
        if kind == "const":
            take()
            if ctx.constants is None:
                raise WordError(f"constant {value} used without coefficient mode", at)
            g = int(value[1:])
            if not 0 <= g < ctx.constants.order:
                raise WordError(f"constant {value} out of range 0..{ctx.constants.order - 1}", at)
            return ctx.const(g)
        if kind == "int" and value == "1":
            take()
            return ctx.one
        if kind == "sym" and value == "(":
            take()
            w = word()
            take("sym", ")")
            return w
        if kind == "sym" and value == "[":
            take()
            a = word()
            take("sym", ",")
            b = word()
            take("sym", "]")
            return commutator(a, b)
        raise WordError(f"unexpected {value or 'end of input'!r}", at)

    w = word()
    if peek()[0] != "end":
        tok = peek()
        raise WordError(f"trailing input {tok[1]!r}", tok[2])
    return w


# ---------------------------------------------------------------------------
# evaluation and substitution

def constant_embedding(ctx: WordContext, group: FiniteGroup, embed=None) -> Optional[np.ndarray]:
    """Map from constant indices to elements of ``group`` (``None`` if coefficient-free)."""
    if ctx.constants is None:
        return None
    if embed is not None:
        embed = np.asarray(embed, dtype=np.intp)
        if embed.shape != (ctx.constants.order,):
            raise WordError("constant embedding has the wrong length")
        return embed
    if group is not ctx.constants:
        raise WordError(f"context constants {ctx.constants.label} do not match group {group.label}")
    return np.arange(group.order)


def evaluate_many(w: Word, points, group: FiniteGroup, embed=None) -> np.ndarray:
    """Evaluate ``w`` at every row of ``points`` (shape ``(m, n)``)."""
    points = np.asarray(points)
    if points.ndim != 2 or points.shape[1] != w.ctx.nvars:
        raise WordError(f"points must have shape (m, {w.ctx.nvars}), got {points.shape}")
    emb = constant_embedding(w.ctx, group, embed)
    table, inv = group.table, group.inverse
    acc = np.full(points.shape[0], group.identity, dtype=np.intp)
    for kind, idx, exp in w.letters:
        if kind == VAR:
            vals = points[:, idx] if exp > 0 else inv[points[:, idx]]
            for _ in range(abs(exp)):
                acc = table[acc, vals]
        else:
            acc = table[acc, emb[idx]]
    return acc


def evaluate(w: Word, point: Sequence[int], group: FiniteGroup, embed=None) -> int:
    if len(point) != w.ctx.nvars:
        raise WordError(f"expected a {w.ctx.nvars}-tuple, got {len(point)} entries")
    for a in point:
        group.check_element(a)
    return int(evaluate_many(w, np.asarray([point], dtype=np.intp), group, embed)[0])


@dataclass(frozen=True)
class EndoSpec:
    """Endomorphism of F_n (or G[X]) sending ``x_i`` to ``images[i]`` and fixing constants."""

    ctx: WordContext
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.ctx.nvars:
            raise WordError(f"need {self.ctx.nvars} images, got {len(self.images)}")
        for w in self.images:
            _same_ctx(w, Word(self.ctx, ()))

    @classmethod
    def identity(cls, ctx: WordContext) -> "EndoSpec":
        return cls(ctx, tuple(ctx.gens()))

    def __call__(self, w: Word) -> Word:
        return substitute(w, self)

    def image_point(self, point, group: FiniteGroup, embed=None) -> tuple[int, ...]:
        return tuple(evaluate(v, point, group, embed) for v in self.images)

    def __str__(self) -> str:
        return ", ".join(f"x{i + 1}->{format_word(v)}" for i, v in enumerate(self.images))


def substitute(w: Word, alpha: EndoSpec) -> Word:
    if w.ctx != alpha.ctx:
        raise WordError("word and endomorphism belong to different contexts")
    out: list[Letter] = []
    for kind, idx, exp in w.letters:
        if kind == VAR:
            img = alpha.images[idx]
            if exp < 0:
                img = img.inverse()
            out.extend(img.letters * abs(exp))
        else:
            out.append((kind, idx, exp))
    return free_reduce(out, w.ctx)


# ---------------------------------------------------------------------------
# commutator test sets and enumeration

def basic_commutators(weight: int, ctx: WordContext) -> list[Word]:
    """Left-normed basic commutators ``[x_a, x_b, x_c3, ..., x_cw]`` of the given weight.

    Indices satisfy ``a < b`` and ``a <= c3 <= c4 <= ...``; up to the order of
    the first pair these are the left-normed Hall basic commutators.  For
    weight 1 the variables themselves are returned.
    """
    if weight < 1:
        raise WordError("weight must be positive")
    n = ctx.nvars
    xs = ctx.gens()
    if weight == 1:
        return xs
    out = []
    for a, b in itertools.combinations(range(n), 2):
        for tail in itertools.combinations_with_replacement(range(a, n), weight - 2):
            out.append(left_normed(xs[a], xs[b], *(xs[c] for c in tail)))
    return out


def _alphabet(ctx: WordContext, include_constants: bool) -> list[Letter]:
    letters: list[Letter] = []
    for i in range(ctx.nvars):
        letters += [(VAR, i, 1), (VAR, i, -1)]
    if include_constants and ctx.constants is not None:
        G = ctx.constants
        letters += [(CONST, g, 1) for g in range(G.order) if g != G.identity]
    return letters


def _cancels(a: Letter, b: Letter) -> bool:
    if a[0] == CONST and b[0] == CONST:
        return True
    return a[0] == VAR and b[0] == VAR and a[1] == b[1] and a[2] == -b[2]


def enumerate_sequences(ctx: WordContext, maxlen: int,
                        include_constants: bool = False) -> Iterator[tuple[int, ...]]:
    """Reduced letter sequences as tuples of alphabet positions, length then lexicographic."""
    alphabet = _alphabet(ctx, include_constants)
    level: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(maxlen):
        nxt = []
        for seq in level:
            for j, letter in enumerate(alphabet):
                if seq and _cancels(alphabet[seq[-1]], letter):
                    continue
                nxt.append(seq + (j,))
        yield from nxt
        level = nxt


def sequence_word(seq: Sequence[int], ctx: WordContext, include_constants: bool = False) -> Word:
    alphabet = _alphabet(ctx, include_constants)
    return free_reduce([alphabet[j] for j in seq], ctx)


def enumerate_words(ctx: WordContext, maxlen: int, include_constants: bool = False) -> Iterator[Word]:
    """All reduced words of length <= ``maxlen`` in length-then-lexicographic order.

    The letter order is ``x1, x1^-1, x2, x2^-1, ...`` followed by the
    non-identity constants when ``include_constants`` is set.
    """
    if maxlen < 0:
        raise WordError("maxlen must be >= 0")
    alphabet = _alphabet(ctx, include_constants)
    for seq in enumerate_sequences(ctx, maxlen, include_constants):
        yield free_reduce([alphabet[j] for j in seq], ctx)


def random_word(ctx: WordContext, length: int, rng: np.random.Generator,
                include_constants: bool = False) -> Word:
    """A uniformly chosen reduced letter sequence of exactly ``length`` letters."""
    alphabet = _alphabet(ctx, include_constants)
    seq: list[Letter] = []
    while len(seq) < length:
        letter = alphabet[int(rng.integers(len(alphabet)))]
        if seq and _cancels(seq[-1], letter):
            continue
        seq.append(letter)
    return free_reduce(seq, ctx)
