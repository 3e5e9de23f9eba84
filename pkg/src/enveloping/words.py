"""Words for the cobar and bar constructions.

A cobar word is a nonempty tensor string of desuspended symmetric words
(s^{-1}Sym^{k}); a bar word is a tensor string of suspended cobar words (big
side) or of suspended symmetric-algebra words (small side).  Suspensions are
implicit in the containers; all degree bookkeeping lives here.
"""

from __future__ import annotations

import itertools

from .exactlin import Vector, compositions, sym_word


class CobarWord:
    """Tensor word in s^{-1}Sym^{>=1}(sL); letters are symmetric BasisWords."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters):
        self.letters = tuple(letters)
        self._hash = hash(("cobar", self.letters))

    @property
    def degree(self):
        return sum(w.degree + 1 for w in self.letters)

    @property
    def rank(self):
        return sum(w.weight for w in self.letters)

    @property
    def length(self):
        return len(self.letters)

    @property
    def geometric_degree(self):
        return self.rank - self.length

    def sort_key(self):
        return (self.rank, self.length, tuple(w.sort_key() for w in self.letters))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, CobarWord)
            and self._hash == other._hash
            and self.letters == other.letters
        )

    def __repr__(self):
        return "<" + "|".join(repr(w)[1:-1] for w in self.letters) + ">"

    def serialize(self):
        return [w.serialize() for w in self.letters]


def concat(x, y):
    return CobarWord(x.letters + y.letters)


def bar_letter_degree(letter):
    # a bar letter is s(letter) for a cobar word or an algebra word
    return letter.degree - 1


def letter_rank(letter):
    if isinstance(letter, CobarWord):
        return letter.rank
    return letter.weight


class BarWord:
    """Tensor-coalgebra word; letters are cobar words or algebra words."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters):
        self.letters = tuple(letters)
        self._hash = hash(("bar", self.letters))

    @property
    def degree(self):
        return sum(bar_letter_degree(x) for x in self.letters)

    @property
    def rank(self):
        return sum(letter_rank(x) for x in self.letters)

    @property
    def length(self):
        return len(self.letters)

    def sort_key(self):
        return (self.rank, self.length, tuple(x.sort_key() for x in self.letters))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, BarWord)
            and self._hash == other._hash
            and self.letters == other.letters
        )

    def __repr__(self):
        return "[" + " ; ".join(repr(x) for x in self.letters) + "]"

    def serialize(self):
        return [x.serialize() for x in self.letters]


def sym_words(gens, weight):
    """All nonzero symmetric words of a given weight, canonical order."""
    out = []
    for combo in itertools.combinations_with_replacement(sorted(gens), weight):
        sign, w = sym_word(combo)
        if w is not None:
            out.append(w)
    return out


def cobar_words(gens, rank):
    """All cobar words of a given rank over suspended generators."""
    out = []
    for comp in compositions(rank):
        pools = [sym_words(gens, m) for m in comp]
        for letters in itertools.product(*pools):
            out.append(CobarWord(letters))
    return out


def bar_words(letter_pools, rank_cap, length_cap):
    """Bar words with letters drawn from {rank: pool}, within both caps."""
    out = []

    def rec(prefix, remaining):
        if prefix and len(prefix) <= length_cap:
            out.append(BarWord(tuple(prefix)))
        if len(prefix) >= length_cap:
            return
        for r in sorted(letter_pools):
            if r > remaining:
                break
            for letter in letter_pools[r]:
                prefix.append(letter)
                rec(prefix, remaining - r)
                prefix.pop()

    rec([], rank_cap)
    return out


def bar_words_algebra(gens, rank_cap, length_cap):
    """Bar words over Sym^{>=1} algebra words (the small side)."""
    pools = {w: sym_words(gens, w) for w in range(1, rank_cap + 1)}
    return bar_words(pools, rank_cap, length_cap)


def bar_words_cobar(gens, rank_cap, length_cap):
    """Bar words over cobar words (the big side)."""
    pools = {r: cobar_words(gens, r) for r in range(1, rank_cap + 1)}
    return bar_words(pools, rank_cap, length_cap)


def single_bar(letter):
    return BarWord((letter,))


def cobar_unit(word):
    """A one-letter cobar word."""
    return CobarWord((word,))


def vector_product(factors, combine):
    """Product of term dictionaries: combine(tuple_of_words) -> (coeff, key)."""
    out = Vector()
    for picks in itertools.product(*[list(f.items()) for f in factors]):
        words = tuple(p[0] for p in picks)
        coeff = 1
        for p in picks:
            coeff = coeff * p[1]
        c2, key = combine(words)
        if key is not None and c2:
            out.add_term(key, coeff * c2)
    return out
