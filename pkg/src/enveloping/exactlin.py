"""Exact rational graded linear algebra over named bases.

Generators carry a cohomological degree (differentials have degree +1).
Vectors and maps are sparse dictionaries with Fraction coefficients; every
operation is exact, there is no floating point anywhere in the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import NamedTuple

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_scalar(text) -> Fraction:
    """Parse a rational from a 'p/q' (or plain integer) string."""
    return Fraction(str(text))


def format_scalar(q) -> str:
    """Serialize a rational as an explicit 'p/q' string."""
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


class Generator(NamedTuple):
    id: str
    degree: int

    def shifted(self, by):
        return Generator(self.id, self.degree + by)

    def __repr__(self):
        return "%s[%d]" % (self.id, self.degree)


def koszul_sign(perm, degrees):
    """Koszul sign of a rearrangement of graded letters.

    ``perm`` lists, for each output slot, the index of the input letter put
    there (0-indexed one-line notation).  An inverted pair of odd letters
    contributes -1; everything else is free.
    """
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list have different lengths")
    sign = 1
    n = len(perm)
    for k in range(n):
        for l in range(k + 1, n):
            if perm[k] > perm[l] and degrees[perm[k]] % 2 and degrees[perm[l]] % 2:
                sign = -sign
    return sign


def perm_parity(perm):
    """Plain sign of a permutation in 0-indexed one-line notation."""
    sign = 1
    n = len(perm)
    for k in range(n):
        for l in range(k + 1, n):
            if perm[k] > perm[l]:
                sign = -sign
    return sign


def merge_sign(letters):
    """Sort letters by (id, degree), returning (koszul sign, sorted tuple).

    Insertion sort; word lengths stay small throughout the package.
    """
    letters = list(letters)
    sign = 1
    for i in range(1, len(letters)):
        j = i
        while j > 0 and letters[j - 1] > letters[j]:
            if letters[j - 1].degree % 2 and letters[j].degree % 2:
                sign = -sign
            letters[j - 1], letters[j] = letters[j], letters[j - 1]
            j -= 1
    return sign, tuple(letters)


def s_power_sign(degrees):
    """Koszul sign of applying s x ... x s to letters of the given degrees.

    The same formula serves for (s^{x m})^{-1} evaluated on suspended
    letters of degrees ``e``: use s_power_sign([e_i + 1]).
    """
    total = 0
    m = len(degrees)
    for i, d in enumerate(degrees):
        total += (m - 1 - i) * d
    return -1 if total % 2 else 1


TENSOR = "tensor"
SYMMETRIC = "symmetric"


class BasisWord:
    """A basis word: an ordered tuple of generators, tensor or symmetric kind.

    Symmetric words are stored canonically sorted; use ``sym_word`` to build
    them (it returns the Koszul sign of the sort, and None for words that die
    because an odd generator repeats).
    """

    __slots__ = ("kind", "letters", "_hash")

    def __init__(self, kind, letters):
        self.kind = kind
        self.letters = tuple(letters)
        self._hash = hash((kind, self.letters))

    @property
    def degree(self):
        return sum(g.degree for g in self.letters)

    @property
    def weight(self):
        return len(self.letters)

    def sort_key(self):
        return (len(self.letters), self.letters, self.kind)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, BasisWord)
            and self._hash == other._hash
            and self.kind == other.kind
            and self.letters == other.letters
        )

    def __repr__(self):
        sep = "*" if self.kind == SYMMETRIC else "#"
        return "(" + sep.join(g.id for g in self.letters) + ")"

    def serialize(self):
        return [g.id for g in self.letters]


def tensor_word(letters):
    return BasisWord(TENSOR, letters)


def sym_word(letters):
    """Canonicalize a symmetric word: returns (sign, word) or (0, None)."""
    sign, sorted_letters = merge_sign(letters)
    for a, b in zip(sorted_letters, sorted_letters[1:]):
        if a == b and a.degree % 2:
            return 0, None
    return sign, BasisWord(SYMMETRIC, sorted_letters)


class Vector:
    """Sparse vector: finite map from basis keys to nonzero Fractions."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}

    @classmethod
    def unit(cls, word, coeff=ONE):
        if coeff == 0 or word is None:
            return cls()
        v = cls()
        v.terms[word] = Fraction(coeff)
        return v

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    def copy(self):
        return Vector(self.terms)

    def add_term(self, word, coeff):
        # in-place accumulation; only used while assembling a new vector
        c = self.terms.get(word, ZERO) + coeff
        if c:
            self.terms[word] = c
        else:
            self.terms.pop(word, None)

    def __add__(self, other):
        out = Vector(self.terms)
        for w, c in other.terms.items():
            out.add_term(w, c)
        return out

    def __sub__(self, other):
        out = Vector(self.terms)
        for w, c in other.terms.items():
            out.add_term(w, -c)
        return out

    def __neg__(self):
        return Vector({w: -c for w, c in self.terms.items()})

    def scaled(self, a):
        a = Fraction(a)
        if a == 0:
            return Vector()
        return Vector({w: a * c for w, c in self.terms.items()})

    def __rmul__(self, a):
        return self.scaled(a)

    def __eq__(self, other):
        return isinstance(other, Vector) and self.terms == other.terms

    def apply(self, op):
        """Linear extension: op maps a basis key to a Vector (or None)."""
        out = Vector()
        for w, c in self.terms.items():
            image = op(w)
            if image:
                for w2, c2 in image.terms.items():
                    out.add_term(w2, c * c2)
        return out

    def coeff(self, word):
        return self.terms.get(word, ZERO)

    def support(self):
        return set(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=_generic_key):
            bits.append("%s %r" % (self.terms[w], w))
        return " + ".join(bits)


def _generic_key(word):
    sk = getattr(word, "sort_key", None)
    return sk() if sk else repr(word)


def apply_op(op, vec):
    return vec.apply(op)


def add_ops(*ops):
    def combined(word):
        out = Vector()
        for op in ops:
            v = op(word)
            if v:
                for w, c in v.terms.items():
                    out.add_term(w, c)
        return out

    return combined


def memo_op(op):
    cache = {}

    def wrapped(word):
        v = cache.get(word)
        if v is None:
            v = op(word)
            cache[word] = v
        return v

    return wrapped


class GradedLinearMap:
    """Column-major sparse map between graded spaces with named bases."""

    def __init__(self, degree, columns=None):
        self.degree = degree
        self.columns = dict(columns) if columns else {}

    @classmethod
    def from_function(cls, degree, basis, fn):
        cols = {}
        for w in basis:
            v = fn(w)
            if v:
                cols[w] = v
        return cls(degree, cols)

    def __call__(self, word):
        return self.columns.get(word, Vector())

    def apply(self, vec):
        return vec.apply(self)

    def compose(self, other):
        """self after other; only columns reachable from other materialize."""
        cols = {}
        for w, v in other.columns.items():
            image = v.apply(self)
            if image:
                cols[w] = image
        return GradedLinearMap(self.degree + other.degree, cols)

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch in map sum")
        cols = dict(self.columns)
        out = GradedLinearMap(self.degree, cols)
        for w, v in other.columns.items():
            merged = out.columns.get(w, Vector()) + v
            if merged:
                out.columns[w] = merged
            else:
                out.columns.pop(w, None)
        return out

    def check_degrees(self):
        for w, v in self.columns.items():
            for w2 in v.terms:
                if w2.degree != w.degree + self.degree:
                    raise ValueError("column %r violates map degree" % (w,))
        return True


class Echelon:
    """Sparse Gaussian elimination over Q with combination tracking.

    Pivots are keyed by the minimal basis element (under sort_key) in the
    support of the reduced vector; insertion order is up to the caller, which
    makes the whole reduction deterministic.
    """

    def __init__(self, key=_generic_key):
        self.key = key
        self.pivots = {}  # lead key -> (lead word, vec, combo)

    def _lead(self, vec):
        return min(vec.terms, key=self.key)

    def reduce(self, vec, combo=None):
        """Reduce vec against the pivots; returns (residual, combo_used).

        Every support word matching a pivot lead is eliminated (pivot support
        never reaches below its lead, so elimination in increasing order
        terminates); the residual is the canonical projection along the pivot
        span.  combo_used collects, in the caller's tag space, the pivot-tag
        combination that was subtracted (plus the passed-in seed combo).
        """
        combo = combo.copy() if combo is not None else Vector()
        vec = vec.copy()
        while vec:
            hits = [w for w in vec.terms if self.key(w) in self.pivots]
            if not hits:
                break
            lead = min(hits, key=self.key)
            _, pvec, pcombo = self.pivots[self.key(lead)]
            factor = vec.coeff(lead) / pvec.coeff(lead)
            vec = vec - pvec.scaled(factor)
            combo = combo - pcombo.scaled(factor)
        return vec, combo

    def insert(self, vec, combo=None):
        """Insert a vector (with tag combo); returns False if it reduced away."""
        residual, acc = self.reduce(vec, combo)
        if not residual:
            return False, acc
        lead = self._lead(residual)
        self.pivots[self.key(lead)] = (lead, residual, acc)
        return True, acc

    @property
    def rank(self):
        return len(self.pivots)


def rank_of(vectors, key=_generic_key):
    ech = Echelon(key)
    for v in vectors:
        ech.insert(v)
    return ech.rank


class FiniteComplex:
    """A finite complex: basis per degree plus a degree +1 differential."""

    def __init__(self, components, differential, check=True):
        # components: {degree: sequence of basis keys}
        self.components = {p: tuple(ws) for p, ws in components.items() if ws}
        self.differential = differential
        if check:
            self.check_square_zero()

    def basis(self, p):
        return self.components.get(p, ())

    def degrees(self):
        return sorted(self.components)

    def check_square_zero(self):
        for p in self.degrees():
            for w in self.basis(p):
                dd = self.differential(w).apply(self.differential)
                if dd:
                    raise ValueError("differential does not square to zero at %r" % (w,))
        return True

    def homology_dims(self):
        """Exact homology dimensions per degree via sparse row reduction."""
        ranks = {}
        for p in self.degrees():
            ranks[p] = rank_of([self.differential(w) for w in self.basis(p)])
        dims = {}
        for p in self.degrees():
            dim = len(self.basis(p))
            h = dim - ranks.get(p, 0) - ranks.get(p - 1, 0)
            if h:
                dims[p] = h
        return dims


def suspend(vec, shift):
    """Suspension s (shift=+1) or its inverse (shift=-1) on word vectors.

    Every letter degree drops by ``shift``; the coefficient picks up the
    Koszul sign of threading the s (or s^{-1}) symbols through the word.
    """
    if shift not in (1, -1):
        raise ValueError("shift must be +1 or -1")
    out = Vector()
    for w, c in vec.items():
        degs = [g.degree for g in w.letters]
        if shift == 1:
            sign = s_power_sign(degs)
        else:
            sign = s_power_sign([d + 1 for d in degs])
        letters = tuple(g.shifted(-shift) for g in w.letters)
        if w.kind == SYMMETRIC:
            s2, word = sym_word(letters)
            if word is None:
                continue
            out.add_term(word, c * sign * s2)
        else:
            out.add_term(BasisWord(w.kind, letters), c * sign)
    return out


def tensor_map(f, g):
    """Tensor product of column maps on tensor words (Koszul sign included).

    Columns of f and g must consist of fixed-length tensor words so that the
    concatenated domain splits unambiguously.
    """
    f_len = {len(w.letters) for w in f.columns}
    if len(f_len) > 1:
        raise ValueError("left factor domain mixes word lengths")
    cols = {}
    for u, fu in f.columns.items():
        for v, gv in g.columns.items():
            sign = -1 if (g.degree % 2 and u.degree % 2) else 1
            col = Vector()
            for wu, cu in fu.items():
                for wv, cv in gv.items():
                    col.add_term(tensor_word(wu.letters + wv.letters), sign * cu * cv)
            if col:
                cols[tensor_word(u.letters + v.letters)] = col
    return GradedLinearMap(f.degree + g.degree, cols)


def symmetrize(word):
    """Average of all graded permutations of a tensor word."""
    if word.kind != TENSOR:
        raise ValueError("symmetrize expects a tensor word")
    n = len(word.letters)
    degs = [g.degree for g in word.letters]
    out = Vector()
    frac = Fraction(1, _factorial(n))
    for perm in itertools.permutations(range(n)):
        sign = koszul_sign(perm, degs)
        out.add_term(tensor_word(word.letters[i] for i in perm), sign * frac)
    return out


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def compositions(total, max_part=None):
    """Ordered compositions of a positive integer, deterministic order."""
    if total == 0:
        yield ()
        return
    top = total if max_part is None else min(total, max_part)
    for first in range(1, top + 1):
        for rest in compositions(total - first, max_part):
            yield (first,) + rest
