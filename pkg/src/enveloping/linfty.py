"""L-infinity algebras, their coalgebra differentials, morphisms and modules.

Structure constants are held on canonically sorted words (repeats allowed on
odd generators) and extended by graded antisymmetry.  The induced coderivation
on the weight-truncated symmetric coalgebra of the suspension is the validator
for everything: an input is accepted exactly when it squares to zero.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .exactlin import (
    Generator,
    Vector,
    format_scalar,
    koszul_sign,
    parse_scalar,
    s_power_sign,
    sym_word,
)
from .words import sym_words


class LInftyAlgebra:
    """Generators with degrees plus bracket tables l_k of degree 2 - k.

    ``brackets``: {arity: {sorted generator tuple: {Generator: Fraction}}}.
    Keys must be sorted by (id, degree); a repeated generator is allowed only
    if it is odd (even repeats vanish by graded antisymmetry).
    """

    def __init__(self, generators, brackets, name=""):
        self.generators = tuple(sorted(generators))
        self.name = name
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError("generator ids must be unique")
        self.by_id = {g.id: g for g in self.generators}
        self.brackets = {}
        for arity, table in brackets.items():
            clean = {}
            for word, value in table.items():
                word = tuple(word)
                if len(word) != arity:
                    raise ValueError("bracket key has wrong arity")
                if list(word) != sorted(word):
                    raise ValueError("bracket keys must be sorted: %r" % (word,))
                for a, b in zip(word, word[1:]):
                    if a == b and a.degree % 2 == 0:
                        raise ValueError(
                            "repeated even generator in bracket key %r" % (word,)
                        )
                vec = Vector()
                target_degree = sum(g.degree for g in word) + 2 - arity
                for gen, coeff in dict(value).items():
                    if gen not in self.by_id.values():
                        raise ValueError("bracket value uses unknown generator")
                    if gen.degree != target_degree:
                        raise ValueError(
                            "bracket l_%d on %r must land in degree %d"
                            % (arity, word, target_degree)
                        )
                    vec.add_term(gen, Fraction(coeff))
                if vec:
                    clean[word] = vec
            if clean:
                self.brackets[arity] = clean

    def arities(self):
        return sorted(self.brackets)

    def bracket(self, gens):
        """l_k on an arbitrary tuple of generators (antisymmetric extension)."""
        k = len(gens)
        table = self.brackets.get(k)
        if not table:
            return Vector()
        degs = [g.degree for g in gens]
        order = sorted(range(k), key=lambda i: gens[i])
        sign = koszul_sign(tuple(order), degs) * _perm_parity_of(order)
        key = tuple(gens[i] for i in order)
        vec = table.get(key)
        if not vec:
            return Vector()
        return vec.scaled(sign)

    def is_dg_lie(self):
        return all(k <= 2 for k in self.brackets)

    def is_abelian(self):
        return all(k <= 1 for k in self.brackets)

    def truncate_to_dg_lie(self):
        kept = {k: t for k, t in self.brackets.items() if k <= 2}
        return LInftyAlgebra(self.generators, _raw_tables(kept), self.name + "_trunc")

    def drop_differential(self):
        kept = {k: t for k, t in self.brackets.items() if k != 1}
        return LInftyAlgebra(self.generators, _raw_tables(kept), self.name + "_nod")

    def l1_only(self):
        kept = {k: t for k, t in self.brackets.items() if k == 1}
        return LInftyAlgebra(self.generators, _raw_tables(kept), self.name + "_ab")

    def __repr__(self):
        return "LInftyAlgebra(%s, dim %d)" % (self.name or "?", len(self.generators))


def _perm_parity_of(order):
    sign = 1
    n = len(order)
    for i in range(n):
        for j in range(i + 1, n):
            if order[i] > order[j]:
                sign = -sign
    return sign


def _raw_tables(brackets):
    return {
        k: {w: dict(v.terms) for w, v in t.items()} for k, t in brackets.items()
    }


class CECoalgebra:
    """Weight-truncated symmetric coalgebra of the suspension, with the
    coderivation induced by the brackets (optionally an arity range of them).
    """

    def __init__(self, algebra, weight_cap, min_arity=1, max_arity=None):
        if weight_cap < 1:
            raise ValueError("weight_cap must be at least 1")
        self.algebra = algebra
        self.weight_cap = weight_cap
        self.min_arity = min_arity
        self.max_arity = max_arity
        self.sgens = tuple(g.shifted(-1) for g in algebra.generators)
        self._delta_cache = {}

    def words(self, weight):
        return sym_words(self.sgens, weight)

    def all_words(self, max_weight=None):
        cap = self.weight_cap if max_weight is None else max_weight
        out = []
        for w in range(1, cap + 1):
            out.extend(self.words(w))
        return out

    def c_value(self, letters):
        """Corestricted coderivation on a block of suspended letters."""
        k = len(letters)
        if self.max_arity is not None and k > self.max_arity:
            return Vector()
        if k < self.min_arity:
            return Vector()
        unsus = [g.shifted(1) for g in letters]
        lk = self.algebra.bracket(tuple(unsus))
        if not lk:
            return Vector()
        # (-1)^k s l_k (s^{x k})^{-1}; the inverse suspension power picks up
        # the Koszul sign evaluated on the unsuspended degrees
        sign = s_power_sign([g.degree for g in unsus])
        if k % 2:
            sign = -sign
        out = Vector()
        for gen, coeff in lk.items():
            out.add_term(gen.shifted(-1), sign * coeff)
        return out

    def delta(self, word):
        """Coderivation on a symmetric word (sum over letter subsets)."""
        cached = self._delta_cache.get(word)
        if cached is not None:
            return cached
        letters = word.letters
        degs = [g.degree for g in letters]
        n = len(letters)
        out = Vector()
        max_k = n if self.max_arity is None else min(n, self.max_arity)
        for k in range(self.min_arity, max_k + 1):
            for subset in itertools.combinations(range(n), k):
                perm = list(subset) + [i for i in range(n) if i not in subset]
                sign = koszul_sign(tuple(perm), degs)
                value = self.c_value(tuple(letters[i] for i in subset))
                if not value:
                    continue
                rest = [letters[i] for i in range(n) if i not in subset]
                rest_degs = [g.degree for g in rest]
                for gen, coeff in value.items():
                    s2, w2 = sym_word([gen] + rest)
                    if w2 is None:
                        continue
                    out.add_term(w2, sign * coeff * s2)
        self._delta_cache[word] = out
        return out

    def reduced_coproduct(self, word):
        """Position-split reduced coproduct; Vector over ordered pairs."""
        letters = word.letters
        degs = [g.degree for g in letters]
        n = len(letters)
        out = Vector()
        for size in range(1, n):
            for subset in itertools.combinations(range(n), size):
                perm = list(subset) + [i for i in range(n) if i not in subset]
                sign = koszul_sign(tuple(perm), degs)
                sA, wA = sym_word([letters[i] for i in subset])
                sB, wB = sym_word([letters[i] for i in range(n) if i not in subset])
                if wA is None or wB is None:
                    continue
                out.add_term((wA, wB), sign * sA * sB)
        return out

    def iterated_reduced_coproduct(self, word, parts):
        """Ordered splits into ``parts`` nonempty symmetric words."""
        if parts == 1:
            return Vector.unit((word,))
        out = Vector()
        for (wA, wB), c in self.reduced_coproduct(word).items():
            if parts == 2:
                out.add_term((wA, wB), c)
            else:
                for rest, c2 in self.iterated_reduced_coproduct(wB, parts - 1).items():
                    out.add_term((wA,) + rest, c * c2)
        return out


class CheckResult:
    def __init__(self, ok, counterexample=None, detail=""):
        self.ok = ok
        self.counterexample = counterexample
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "pass"
        return "FAIL at %r: %s" % (self.counterexample, self.detail)


def check_linfty(algebra, weight_cap):
    """Assert the coderivation squares to zero on all words within the cap."""
    C = CECoalgebra(algebra, weight_cap)
    for word in C.all_words():
        dd = C.delta(word).apply(C.delta)
        if dd:
            return CheckResult(False, word, "delta^2 = %r" % (dd,))
    return CheckResult(True)


def ce_coalgebra(algebra, weight_cap, min_arity=1, max_arity=None):
    C = CECoalgebra(algebra, weight_cap, min_arity, max_arity)
    for word in C.all_words():
        for gen in C.delta(word).apply(C.delta).terms:
            raise ValueError(
                "coderivation does not square to zero on %r (bad input?)" % (word,)
            )
    return C


class LInftyMorphism:
    """Components phi_i: sorted words of arity i -> target generators."""

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = {}
        for arity, table in components.items():
            clean = {}
            for word, value in table.items():
                word = tuple(word)
                if list(word) != sorted(word):
                    raise ValueError("morphism keys must be sorted")
                vec = Vector()
                target_degree = sum(g.degree for g in word) + 1 - arity
                for gen, coeff in dict(value).items():
                    if gen.degree != target_degree:
                        raise ValueError(
                            "phi_%d on %r must land in degree %d"
                            % (arity, word, target_degree)
                        )
                    vec.add_term(gen, Fraction(coeff))
                if vec:
                    clean[word] = vec
            if clean:
                self.components[arity] = clean

    def is_strict(self):
        return all(k <= 1 for k in self.components)

    def component(self, gens):
        """phi_k on an arbitrary tuple (graded antisymmetric extension)."""
        k = len(gens)
        table = self.components.get(k)
        if not table:
            return Vector()
        degs = [g.degree for g in gens]
        order = sorted(range(k), key=lambda i: gens[i])
        sign = koszul_sign(tuple(order), degs) * _perm_parity_of(order)
        vec = table.get(tuple(gens[i] for i in order))
        if not vec:
            return Vector()
        return vec.scaled(sign)

    def suspended_component(self, letters):
        """s phi_k (s^{x k})^{-1} on suspended letters.

        Plain conjugation, no extra sign: the identity morphism must induce
        the identity coalgebra map, and the transferred first component must
        be the symmetrization of phi_1 on the nose.
        """
        unsus = tuple(g.shifted(1) for g in letters)
        vec = self.component(unsus)
        if not vec:
            return Vector()
        sign = s_power_sign([g.degree for g in unsus])
        out = Vector()
        for gen, coeff in vec.items():
            out.add_term(gen.shifted(-1), sign * coeff)
        return out

    def coalgebra_map(self, word):
        """Induced coalgebra morphism on a symmetric word of the source."""
        letters = word.letters
        degs = [g.degree for g in letters]
        n = len(letters)
        out = Vector()
        for partition in set_partitions(range(n)):
            # blocks ordered by minimum; sign of the unshuffle to that order
            arrangement = [i for block in partition for i in block]
            sign = koszul_sign(tuple(arrangement), degs)
            factors = [self.suspended_component(tuple(letters[i] for i in block))
                       for block in partition]
            if any(not f for f in factors):
                continue
            # assemble the product of single-letter images
            stack = [((), Fraction(sign))]
            for f in factors:
                nxt = []
                for gens, coeff in stack:
                    for gen, c2 in f.items():
                        nxt.append((gens + (gen,), coeff * c2))
                stack = nxt
            for gens, coeff in stack:
                s2, w2 = sym_word(gens)
                if w2 is None:
                    continue
                out.add_term(w2, coeff * s2)
        return out


def set_partitions(items):
    """All set partitions; blocks sorted internally and by first element."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def identity_morphism(algebra):
    table = {(g,): {g: 1} for g in algebra.generators}
    return LInftyMorphism(algebra, algebra, {1: table})


def check_morphism(phi, weight_cap):
    """Commutation of the induced coalgebra map with both differentials."""
    CL = CECoalgebra(phi.source, weight_cap)
    CM = CECoalgebra(phi.target, weight_cap)
    for word in CL.all_words():
        lhs = CL.delta(word).apply(phi.coalgebra_map)
        rhs = phi.coalgebra_map(word).apply(CM.delta)
        if lhs != rhs:
            return CheckResult(False, word, "coalgebra map is not a chain map")
    return CheckResult(True)


def compose_morphisms(psi, phi, weight_cap):
    """Corestriction of the composed coalgebra maps, as a new morphism."""
    if psi.source is not phi.target and psi.source.generators != phi.target.generators:
        raise ValueError("morphisms are not composable")
    components = {}
    for arity in range(1, weight_cap + 1):
        table = {}
        for word in sym_words(tuple(g.shifted(-1) for g in phi.source.generators), arity):
            image = phi.coalgebra_map(word).apply(psi.coalgebra_map)
            vec = Vector()
            for w2, c in image.items():
                if w2.weight == 1:
                    vec.add_term(w2.letters[0].shifted(1), c)
            if not vec:
                continue
            unsus = tuple(g.shifted(1) for g in word.letters)
            sign = s_power_sign([g.degree for g in unsus])
            # invert the suspension conjugation to recover plain components
            table[unsus] = {g: sign * c for g, c in vec.items()}
        if table:
            components[arity] = table
    return LInftyMorphism(phi.source, psi.target, components)


class LInftyModule:
    """Module data: a graded space with a degree +1 twisting into End(M).

    ``d_m``: {Generator: vector dict};  ``action``: {symmetric sL word:
    {Generator: vector dict}} giving the operator of each coalgebra word.
    """

    def __init__(self, algebra, basis, d_m=None, action=None, name=""):
        self.algebra = algebra
        self.basis = tuple(sorted(basis))
        self.name = name
        self.d_m = {g: _as_vector(v) for g, v in (d_m or {}).items() if _as_vector(v)}
        self.action = {}
        for word, table in (action or {}).items():
            op = {g: _as_vector(v) for g, v in table.items() if _as_vector(v)}
            if op:
                self.action[word] = op

    def differential(self, m):
        return self.d_m.get(m, Vector())

    def tau(self, word, m):
        """Operator of a coalgebra word applied to a module generator."""
        op = self.action.get(word)
        if not op:
            return Vector()
        return op.get(m, Vector())


def _as_vector(v):
    if isinstance(v, Vector):
        return v
    vec = Vector()
    for g, c in dict(v).items():
        vec.add_term(g, Fraction(c))
    return vec


def check_module(module, weight_cap):
    """Square-zero of the induced differential on C(L) (x) M.

    Basis keys are (word-or-None, module generator); None marks the counit
    component of the coalgebra factor.
    """
    C = CECoalgebra(module.algebra, weight_cap)
    words = [None] + list(C.all_words())

    def D(key):
        word, m = key
        out = Vector()
        if word is not None:
            for w2, c in C.delta(word).items():
                out.add_term((w2, m), c)
        cdeg = 0 if word is None else word.degree
        sign = -1 if cdeg % 2 else 1
        for m2, c in module.differential(m).items():
            out.add_term((word, m2), sign * c)
        # reduced coaction terms: word -> (left, acted)
        if word is not None:
            pieces = [(None, word, 1)]
            for (wA, wB), c in C.reduced_coproduct(word).items():
                pieces.append((wA, wB, c))
            for left, right, c in pieces:
                ldeg = 0 if left is None else left.degree
                s2 = -1 if ldeg % 2 else 1
                for m2, c2 in module.tau(right, m).items():
                    out.add_term((left, m2), s2 * c * c2)
        return out

    for word in words:
        for m in module.basis:
            key = (word, m)
            dd = D(key).apply(D)
            if dd:
                return CheckResult(False, key, "module differential squares to %r" % dd)
    return CheckResult(True)


def trivial_module(algebra):
    return LInftyModule(algebra, [Generator("triv", 0)], {}, {}, name="trivial")


def adjoint_module(algebra):
    """The algebra acting on itself through its binary bracket.

    Valid as stated for differential-free Lie algebras; the general validity
    test is check_module.
    """
    action = {}
    for g in algebra.generators:
        sg = g.shifted(-1)
        _, word = sym_word([sg])
        table = {}
        for m in algebra.generators:
            vec = algebra.bracket((g, m))
            if vec:
                table[m] = vec
        if table:
            action[word] = table
    d_m = {}
    for m in algebra.generators:
        img = algebra.bracket((m,))
        if img:
            d_m[m] = img
    return LInftyModule(algebra, algebra.generators, d_m, action, name="adjoint")


# ---------------------------------------------------------------------------
# bundled algebra builders


def abelian(degrees, name="abelian"):
    gens = [Generator("a%d" % i, d) for i, d in enumerate(degrees, 1)]
    return LInftyAlgebra(gens, {}, name=name)


def sl2():
    e, f, h = Generator("e", 0), Generator("f", 0), Generator("h", 0)
    table = {
        (e, f): {h: 1},
        (e, h): {e: -2},
        (f, h): {f: 2},
    }
    return LInftyAlgebra([e, f, h], {2: table}, name="sl2")


def heisenberg():
    x, y, z = Generator("x", 0), Generator("y", 0), Generator("z", 0)
    return LInftyAlgebra([x, y, z], {2: {(x, y): {z: 1}}}, name="heisenberg")


def l3_gadget():
    """Only a ternary bracket: l_3(a, b, c) = z into a central direction."""
    a, b, c = Generator("a", 1), Generator("b", 1), Generator("c", 1)
    z = Generator("z", 2)
    return LInftyAlgebra([a, b, c, z], {3: {(a, b, c): {z: 1}}}, name="l3only")


def sl2_plus_l3():
    """Direct sum of sl2 and the ternary gadget (no cross brackets)."""
    e, f, h = Generator("e", 0), Generator("f", 0), Generator("h", 0)
    a, b, c = Generator("a", 1), Generator("b", 1), Generator("c", 1)
    z = Generator("z", 2)
    two = {(e, f): {h: 1}, (e, h): {e: -2}, (f, h): {f: 2}}
    three = {(a, b, c): {z: 1}}
    return LInftyAlgebra([e, f, h, a, b, c, z], {2: two, 3: three}, name="sl2+l3")


def odd_abelian(degrees, name="odd"):
    if any(d % 2 == 0 for d in degrees):
        raise ValueError("all degrees must be odd")
    gens = [Generator("t%d" % i, d) for i, d in enumerate(degrees, 1)]
    return LInftyAlgebra(gens, {}, name=name)


def dg_vector_space(pairs, name="dg"):
    """A complex as an L-infinity algebra: pairs (id, degree, dict image)."""
    gens = {gid: Generator(gid, d) for gid, d, _ in pairs}
    table = {}
    for gid, _, image in pairs:
        if image:
            table[(gens[gid],)] = {gens[t]: Fraction(c) for t, c in image.items()}
    return LInftyAlgebra(list(gens.values()), {1: table} if table else {}, name=name)


def from_complete_intersection(variables, polynomials, divided_powers=False):
    """The L-infinity algebra of a polynomial complete intersection.

    ``variables``: ids of the ring variables (one odd degree-1 generator
    each); ``polynomials``: {id: [(coeff, monomial id tuple), ...]}, each with
    no constant or linear part.  Monomial coefficients act through iterated
    partial derivatives by default; set ``divided_powers`` to drop the
    multiplicity factorials.
    """
    xi = {v: Generator("xi_" + v, 1) for v in variables}
    zs = {}
    brackets = {}
    for pid, terms in polynomials.items():
        z = Generator("z_" + pid, 2)
        zs[pid] = z
        for coeff, monomial in terms:
            coeff = Fraction(coeff)
            if len(monomial) < 2:
                raise ValueError("polynomial %s has a term of degree < 2" % pid)
            if any(v not in xi for v in monomial):
                raise ValueError("unknown variable in %s" % pid)
            if coeff == 0:
                continue
            key = tuple(sorted(xi[v] for v in monomial))
            k = len(key)
            mult = Fraction(1)
            if not divided_powers:
                for _, grp in itertools.groupby(key):
                    m = len(list(grp))
                    for j in range(2, m + 1):
                        mult *= j
            table = brackets.setdefault(k, {})
            entry = table.setdefault(key, {})
            entry[z] = entry.get(z, Fraction(0)) + coeff * mult
    gens = list(xi.values()) + list(zs.values())
    brackets = {
        k: {w: {g: c for g, c in val.items() if c} for w, val in t.items()}
        for k, t in brackets.items()
    }
    brackets = {
        k: {w: val for w, val in t.items() if val} for k, t in brackets.items()
    }
    return LInftyAlgebra(gens, {k: t for k, t in brackets.items() if t}, name="ci")


# ---------------------------------------------------------------------------
# JSON interface


def algebra_to_json(algebra):
    gens = [{"id": g.id, "degree": g.degree} for g in algebra.generators]
    brackets = []
    for arity in algebra.arities():
        for word, vec in sorted(algebra.brackets[arity].items()):
            brackets.append(
                {
                    "arity": arity,
                    "inputs": [g.id for g in word],
                    "value": [
                        {"coeff": format_scalar(c), "monomial": [g.id]}
                        for g, c in sorted(vec.items())
                    ],
                }
            )
    return {"name": algebra.name, "generators": gens, "brackets": brackets}


def algebra_from_json(data):
    if "complete_intersection" in data:
        ci = data["complete_intersection"]
        polys = {}
        for rel in ci["relations"]:
            polys[rel["id"]] = [
                (parse_scalar(t["coeff"]), tuple(t["monomial"])) for t in rel["terms"]
            ]
        return from_complete_intersection(
            list(ci["variables"]), polys, bool(ci.get("divided_powers", False))
        )
    gens = {g["id"]: Generator(g["id"], int(g["degree"])) for g in data["generators"]}
    brackets = {}
    for b in data.get("brackets", []):
        arity = int(b["arity"])
        word = tuple(sorted(gens[i] for i in b["inputs"]))
        value = {}
        for t in b["value"]:
            if len(t["monomial"]) != 1:
                raise ValueError("bracket values must be single generators")
            g = gens[t["monomial"][0]]
            value[g] = value.get(g, Fraction(0)) + parse_scalar(t["coeff"])
        table = brackets.setdefault(arity, {})
        if word in table:
            raise ValueError("duplicate bracket entry for %r" % (word,))
        table[word] = value
    return LInftyAlgebra(list(gens.values()), brackets, name=data.get("name", ""))


def module_from_json(algebra, data):
    gens = {g["id"]: Generator(g["id"], int(g["degree"])) for g in data["generators"]}
    d_m = {}
    action = {}
    for entry in data.get("actions", []):
        arity = int(entry["arity"])
        m = gens[entry["module_input"]]
        value = Vector()
        for t in entry["value"]:
            if len(t["monomial"]) != 1:
                raise ValueError("module action values must be single generators")
            value.add_term(gens[t["monomial"][0]], parse_scalar(t["coeff"]))
        if arity == 0:
            if entry.get("inputs"):
                raise ValueError("differential entries take no algebra inputs")
            d_m[m] = (d_m.get(m, Vector())) + value
            continue
        letters = [algebra.by_id[i].shifted(-1) for i in entry["inputs"]]
        sign, word = sym_word(letters)
        if word is None:
            raise ValueError("action word repeats an odd suspended generator")
        table = action.setdefault(word, {})
        table[m] = table.get(m, Vector()) + value.scaled(sign)
    return LInftyModule(algebra, list(gens.values()), d_m, action,
                        name=data.get("name", ""))


def load_algebra(path):
    with open(path) as fh:
        data = json.load(fh)
    algebra = algebra_from_json(data)
    module = None
    if "module" in data:
        module = module_from_json(algebra, data["module"])
    return algebra, module
