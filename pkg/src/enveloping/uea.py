"""The enveloping structure: transferred products on the symmetric coalgebra,
their checkers, the classical straightening oracle, and transfer of morphisms.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exactlin import Generator, Vector, koszul_sign, s_power_sign, sym_word
from .hpt import Transfer, bar_morphism
from .linfty import CheckResult, LInftyAlgebra
from .words import BarWord, CobarWord, bar_words_algebra, sym_words


class AInftyStructure:
    """Products m_n of degree 2 - n on symmetric words, within caps.

    Tables are computed lazily from the perturbed transfer and memoized; the
    structure is deterministic given the algebra and the caps.
    """

    def __init__(self, algebra, arity_cap=4, weight_cap=6, top_cell_fault=False):
        self.algebra = algebra
        self.arity_cap = arity_cap
        self.weight_cap = weight_cap
        self.transfer = Transfer(algebra, weight_cap, top_cell_fault=top_cell_fault)
        self._tables = {}

    def product(self, words):
        """m_n on a tuple of symmetric words (each of weight >= 1)."""
        words = tuple(words)
        n = len(words)
        if n > self.arity_cap:
            raise ValueError("arity cap exceeded")
        if sum(w.weight for w in words) > self.weight_cap:
            raise ValueError("weight cap exceeded")
        cached = self._tables.get(words)
        if cached is not None:
            return cached
        bar = BarWord(words)
        image = self.transfer.con.d_small(bar)
        value = Vector()
        for w, c in image.items():
            if w.length == 1:
                value.add_term(w.letters[0], c)
        sign = s_power_sign([w.degree for w in words])
        if n % 2:
            sign = -sign
        value = value.scaled(sign)
        self._tables[words] = value
        return value

    def m1(self, word):
        return self.product((word,))

    def m2(self, u, v):
        return self.product((u, v))

    def bar_words(self):
        return bar_words_algebra(
            self.algebra.generators, self.weight_cap, self.arity_cap
        )

    def bar_differential(self, bar):
        """The coderivation on the tensor coalgebra assembled from products."""
        out = Vector()
        letters = bar.letters
        n = len(letters)
        left = 0
        for j in range(n):
            top = min(self.arity_cap, n - j)
            for k in range(1, top + 1):
                chunk = letters[j : j + k]
                prefix = -1 if left % 2 else 1
                csign = s_power_sign([w.degree for w in chunk])
                if k % 2:
                    csign = -csign
                value = self.product(chunk)
                for w, c in value.items():
                    out.add_term(
                        BarWord(letters[:j] + (w,) + letters[j + k :]),
                        prefix * csign * c,
                    )
            left += letters[j].degree - 1
        return out

    def export_tables(self):
        """Product tables over all cap-bounded inputs, JSON-ready."""
        from .exactlin import format_scalar

        entries = []
        for bar in sorted(self.bar_words(), key=lambda b: b.sort_key()):
            value = self.product(bar.letters)
            if not value:
                continue
            entries.append(
                {
                    "arity": bar.length,
                    "inputs": [[g.id for g in w.letters] for w in bar.letters],
                    "output": [
                        {
                            "coeff": format_scalar(c),
                            "monomial": [g.id for g in w.letters],
                        }
                        for w, c in sorted(value.items(), key=lambda t: t[0].sort_key())
                    ],
                }
            )
        return entries


def compute_products(algebra, arity_cap=4, weight_cap=6):
    return AInftyStructure(algebra, arity_cap, weight_cap)


def word_of(*gens):
    sign, w = sym_word(list(gens))
    if w is None:
        raise ValueError("word dies by graded symmetry")
    if sign != 1:
        raise ValueError("letters were not canonically sorted")
    return w


def star_product(u, v):
    """The plain symmetric product of two words."""
    sign, w = sym_word(u.letters + v.letters)
    return Vector.unit(w, sign) if w is not None else Vector()


def stasheff_check(structure):
    """Square-zero of the assembled coderivation on all capped bar words."""
    for bar in structure.bar_words():
        dd = structure.bar_differential(bar).apply(structure.bar_differential)
        if dd:
            return CheckResult(False, bar, "bar differential squares to %r" % (dd,))
    return CheckResult(True)


def m1_matches_l1(structure):
    from .hpt import algebra_differential

    d = algebra_differential(structure.algebra)
    for weight in range(1, structure.weight_cap + 1):
        for w in sym_words(structure.algebra.generators, weight):
            if structure.m1(w) != d(w):
                return CheckResult(False, w, "m_1 differs from the induced differential")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# classical enveloping via straightening (the PBW oracle)


class ClassicalEnveloping:
    """Sorted monomials with the rewriting product x y -> +/- y x + [x, y]."""

    def __init__(self, algebra):
        if not algebra.is_dg_lie():
            raise ValueError("the straightening oracle needs a binary-bracket algebra")
        self.algebra = algebra
        self._cache = {}

    def straighten(self, letters):
        """Express a raw tensor string in the sorted-monomial basis."""
        letters = tuple(letters)
        cached = self._cache.get(letters)
        if cached is not None:
            return cached
        out = Vector()
        for i in range(len(letters) - 1):
            a, b = letters[i], letters[i + 1]
            if a > b:
                sign = -1 if (a.degree % 2 and b.degree % 2) else 1
                swapped = letters[:i] + (b, a) + letters[i + 2 :]
                out = out + self.straighten(swapped).scaled(sign)
                bracket = self.algebra.bracket((a, b))
                for g, c in bracket.items():
                    out = out + self.straighten(
                        letters[:i] + (g,) + letters[i + 2 :]
                    ).scaled(c)
                self._cache[letters] = out
                return out
            if a == b and a.degree % 2:
                # odd square: x x = [x, x] / 2 in characteristic zero
                bracket = self.algebra.bracket((a, b))
                for g, c in bracket.items():
                    out = out + self.straighten(
                        letters[:i] + (g,) + letters[i + 2 :]
                    ).scaled(Fraction(c, 2))
                self._cache[letters] = out
                return out
        out = Vector.unit(tuple(letters))
        self._cache[letters] = out
        return out

    def multiply(self, left, right):
        out = Vector()
        for u, cu in left.items():
            for v, cv in right.items():
                for w, c in self.straighten(u + v).items():
                    out.add_term(w, cu * cv * c)
        return out

    def symmetrize(self, word):
        """The coalgebra isomorphism from symmetric words to the enveloping."""
        gens = word.letters
        n = len(gens)
        degs = [g.degree for g in gens]
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        out = Vector()
        for perm in itertools.permutations(range(n)):
            sign = koszul_sign(perm, degs)
            out = out + self.straighten(tuple(gens[i] for i in perm)).scaled(
                Fraction(sign, fact)
            )
        return out


def pbw_compare(structure, weight_cap=None):
    """Transported product equals classical multiplication; higher ones vanish."""
    algebra = structure.algebra
    if not algebra.is_dg_lie():
        return CheckResult(False, None, "input is not a binary-bracket algebra")
    cap = weight_cap or structure.weight_cap
    oracle = ClassicalEnveloping(algebra)
    words = []
    for w in range(1, cap + 1):
        words.extend(sym_words(algebra.generators, w))
    for u in words:
        for v in words:
            if u.weight + v.weight > cap:
                continue
            lhs = structure.m2(u, v).apply(oracle.symmetrize)
            rhs = oracle.multiply(oracle.symmetrize(u), oracle.symmetrize(v))
            if lhs != rhs:
                return CheckResult(False, (u, v), "transported product mismatch")
    for bar in structure.bar_words():
        if bar.length >= 3 and structure.product(bar.letters):
            return CheckResult(False, bar, "higher product does not vanish")
    # closed form on generators
    for a in algebra.generators:
        for b in algebra.generators:
            u, v = word_of(a), word_of(b)
            expected = star_product(u, v)
            for g, c in algebra.bracket((a, b)).items():
                expected.add_term(word_of(g), Fraction(c, 2))
            if structure.m2(u, v) != expected:
                return CheckResult(False, (u, v), "binary product closed form fails")
    return CheckResult(True)


def alt_bracket_check(structure, n):
    """Antisymmetrized n-fold product recovers the n-th bracket on generators."""
    algebra = structure.algebra
    for gens in itertools.product(algebra.generators, repeat=n):
        degs = [g.degree for g in gens]
        total = Vector()
        for perm in itertools.permutations(range(n)):
            sign = koszul_sign(perm, degs) * _plain_parity(perm)
            try:
                value = structure.product(tuple(word_of(gens[i]) for i in perm))
            except ValueError:
                return CheckResult(False, gens, "caps too small for the check")
            total = total + value.scaled(sign)
        expected = Vector()
        for g, c in algebra.bracket(gens).items():
            expected.add_term(word_of(g), c)
        if total != expected:
            return CheckResult(
                False, gens, "antisymmetrized product %r != bracket %r" % (total, expected)
            )
    return CheckResult(True)


def _plain_parity(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def involution_check(structure, arities=(1, 2, 3)):
    """The parity involution intertwines products with graded reversal.

    The reversal carries its Koszul sign together with the opposite-structure
    normalization (-1)^{(n-1)(n-2)/2}: this is the bar-level reversal
    threaded through the suspension powers.
    """
    for bar in structure.bar_words():
        n = bar.length
        if n not in arities:
            continue
        words = bar.letters
        value = structure.product(words)
        lhs = value.scaled(1 if sum(w.weight for w in words) % 2 == 0 else -1)
        rev = tuple(reversed(words))
        sign = koszul_sign(
            tuple(reversed(range(n))), [w.degree for w in words]
        )
        if ((n - 1) * (n - 2) // 2) % 2:
            sign = -sign
        rhs = Vector()
        for w, c in structure.product(rev).items():
            rhs.add_term(w, c * sign * (-1 if w.weight % 2 else 1))
        if lhs != rhs:
            return CheckResult(False, bar, "involution identity fails")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# coproduct strictness via the doubled algebra


def direct_sum(algebra, tags=("1:", "2:")):
    """The square of an algebra: two commuting copies with prefixed ids."""
    gens = []
    for tag in tags:
        gens.extend(Generator(tag + g.id, g.degree) for g in algebra.generators)
    brackets = {}
    for arity, table in algebra.brackets.items():
        new = {}
        for word, vec in table.items():
            for tag in tags:
                key = tuple(Generator(tag + g.id, g.degree) for g in word)
                new[key] = {
                    Generator(tag + g.id, g.degree): c for g, c in vec.items()
                }
        brackets[arity] = new
    return LInftyAlgebra(gens, brackets, name=algebra.name + "^2")


def coproduct_map(algebra, tags=("1:", "2:")):
    """The bialgebra coproduct as a map into words of the doubled algebra."""

    def on_word(word):
        letters = word.letters
        degs = [g.degree for g in letters]
        n = len(letters)
        out = Vector()
        for size in range(n + 1):
            for subset in itertools.combinations(range(n), size):
                inside = set(subset)
                perm = list(subset) + [i for i in range(n) if i not in inside]
                sign = koszul_sign(tuple(perm), degs)
                first = [Generator(tags[0] + letters[i].id, letters[i].degree)
                         for i in subset]
                second = [Generator(tags[1] + letters[i].id, letters[i].degree)
                          for i in range(n) if i not in inside]
                s2, w2 = sym_word(first + second)
                if w2 is None:
                    continue
                out.add_term(w2, sign * s2)
        return out

    return on_word


def coproduct_strictness_check(structure, arity_cap=2, weight_cap=3):
    """The coproduct is a strict morphism into the doubled enveloping."""
    algebra = structure.algebra
    doubled = AInftyStructure(direct_sum(algebra), arity_cap, weight_cap)
    delta = coproduct_map(algebra)
    for bar in structure.bar_words():
        if bar.length > arity_cap or bar.rank > weight_cap:
            continue
        lhs = structure.product(bar.letters).apply(delta)
        factors = [delta(w) for w in bar.letters]
        rhs = Vector()
        stack = [((), Fraction(1))]
        for fvec in factors:
            nxt = []
            for words, coeff in stack:
                for w, c in fvec.items():
                    nxt.append((words + (w,), coeff * c))
            stack = nxt
        for words, coeff in stack:
            rhs = rhs + doubled.product(words).scaled(coeff)
        if lhs != rhs:
            return CheckResult(False, bar, "coproduct is not strict here")
    return CheckResult(True)


def truncation_agreement_check(algebra, weight_cap=4):
    """Differential and binary product agree with the 2-truncation's."""
    truncated = algebra.truncate_to_dg_lie()
    from .linfty import check_linfty

    if not check_linfty(truncated, min(weight_cap + 1, 4)):
        return CheckResult(False, None, "the 2-truncation is not a dg Lie algebra")
    full = AInftyStructure(algebra, 2, weight_cap)
    trunc = AInftyStructure(truncated, 2, weight_cap)
    for bar in full.bar_words():
        if full.product(bar.letters) != trunc.product(bar.letters):
            return CheckResult(False, bar, "products differ from the 2-truncation")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# morphism transfer


class AInftyMorphismData:
    """Transferred morphism: a coalgebra map between the two bar sides."""

    def __init__(self, phi, source_structure, target_structure):
        self.phi = phi
        self.source = source_structure
        self.target = target_structure
        self._omega_map = bar_morphism(
            _letterwise_coalgebra_map(phi)
        )
        self._cache = {}

    def apply(self, bar):
        """The full transferred coalgebra map on a bar word."""
        cached = self._cache.get(bar)
        if cached is None:
            v = Vector.unit(bar)
            v = v.apply(self.source.transfer.con.G)
            v = v.apply(self._omega_map)
            v = v.apply(self.target.transfer.con.F)
            cached = v
            self._cache[bar] = cached
        return cached

    def component(self, words):
        """U(phi)_n: the corestriction on an input tuple, as algebra words."""
        bar = BarWord(tuple(words))
        out = Vector()
        for w, c in self.apply(bar).items():
            if w.length == 1:
                out.add_term(w.letters[0], c)
        return out


def _letterwise_coalgebra_map(phi):
    def on_letter(c):
        out = Vector()
        for w, coeff in phi.coalgebra_map(c).items():
            out.add_term(CobarWord((w,)), coeff)
        return out

    def on_cobar(x):
        factors = [on_letter(c) for c in x.letters]
        from .words import vector_product

        return vector_product(
            factors, lambda ws: (1, CobarWord(tuple(l for w in ws for l in w.letters)))
        )

    return on_cobar


def u_morphism(phi, arity_cap=3, weight_cap=4):
    src = AInftyStructure(phi.source, arity_cap, weight_cap)
    tgt = AInftyStructure(phi.target, arity_cap, weight_cap)
    return AInftyMorphismData(phi, src, tgt)


def sym_extension(phi):
    """Symmetrization of the first component, on algebra words."""

    def on_word(word):
        factors = [phi.component((g,)) for g in word.letters]
        out = Vector()
        stack = [((), Fraction(1))]
        for f in factors:
            nxt = []
            for gens, coeff in stack:
                for g, c in f.items():
                    nxt.append((gens + (g,), coeff * c))
            stack = nxt
        for gens, coeff in stack:
            s2, w2 = sym_word(gens)
            if w2 is not None:
                out.add_term(w2, coeff * s2)
        return out

    return on_word


def check_first_component(data):
    """U(phi)_1 is the symmetrization of the first component."""
    ext = sym_extension(data.phi)
    for weight in range(1, data.source.weight_cap + 1):
        for w in sym_words(data.source.algebra.generators, weight):
            if data.component((w,)) != ext(w):
                return CheckResult(False, w, "first component is not Sym(phi_1)")
    return CheckResult(True)


def check_strict_vanishing(data):
    for bar in data.source.bar_words():
        if bar.length >= 2 and data.component(bar.letters):
            return CheckResult(False, bar, "strict morphism has a higher component")
    return CheckResult(True)


def check_morphism_chain_map(data):
    """The transferred map commutes with the two bar differentials."""
    for bar in data.source.bar_words():
        lhs = data.apply(bar).apply(data.target.bar_differential)
        rhs = data.source.bar_differential(bar).apply(data.apply)
        if lhs != rhs:
            return CheckResult(False, bar, "transferred map is not a chain map")
    return CheckResult(True)


class CompositionHomotopy:
    """F_N B(psi) H_M B(phi) G_L between the two transferred composites."""

    def __init__(self, data_phi, data_psi):
        self.data_phi = data_phi
        self.data_psi = data_psi
        self._phi_map = bar_morphism(_letterwise_coalgebra_map(data_phi.phi))
        self._psi_map = bar_morphism(_letterwise_coalgebra_map(data_psi.phi))

    def apply(self, bar):
        v = Vector.unit(bar)
        v = v.apply(self.data_phi.source.transfer.con.G)
        v = v.apply(self._phi_map)
        v = v.apply(self.data_phi.target.transfer.con.H)
        v = v.apply(self._psi_map)
        v = v.apply(self.data_psi.target.transfer.con.F)
        return v


def composition_homotopy_check(phi, psi, arity_cap=3, weight_cap=4):
    """The composite-transfer defect is the boundary of the homotopy."""
    data_phi = u_morphism(phi, arity_cap, weight_cap)
    mid = data_phi.target
    data_psi = AInftyMorphismData(psi, mid, AInftyStructure(psi.target, arity_cap, weight_cap))
    from .linfty import compose_morphisms

    comp = compose_morphisms(psi, phi, weight_cap)
    data_comp = AInftyMorphismData(comp, data_phi.source, data_psi.target)
    H = CompositionHomotopy(data_phi, data_psi)
    strict = phi.is_strict() or psi.is_strict()
    for bar in data_phi.source.bar_words():
        direct = data_comp.apply(bar)
        composed = data_phi.apply(bar).apply(data_psi.apply)
        hterm = H.apply(bar).apply(data_psi.target.bar_differential)
        hterm = hterm + data_phi.source.bar_differential(bar).apply(H.apply)
        if direct - composed != hterm:
            return CheckResult(False, bar, "homotopy identity fails"), H
        if strict and H.apply(bar):
            return CheckResult(False, bar, "homotopy does not vanish, factor strict"), H
    return CheckResult(True), H
