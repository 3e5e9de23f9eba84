"""Acceptance suite: one test per criterion, exact arithmetic throughout.

Each test prints a single pass/fail line (run pytest with -s to see them all
even when everything passes).  Tolerances are zero everywhere: every
comparison is exact equality of rationals.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from enveloping import bgg, linfty, permutahedra, tableaux, uea
from enveloping.exactlin import Generator, Vector, koszul_sign, sym_word
from enveloping.hpt import Transfer, algebra_differential, bpl, cobar_differential
from enveloping.linfty import CECoalgebra
from enveloping.words import (
    BarWord,
    bar_words_algebra,
    bar_words_cobar,
    cobar_words,
    sym_words,
)


def report(name, ok, started):
    status = "PASS" if ok else "FAIL"
    print("[%s] %s (%.1fs)" % (status, name, time.monotonic() - started))
    assert ok, name


def brute_force_face_count(n):
    total = 0
    for d in range(1, n + 1):
        seen = set()
        for values in itertools.product(range(1, d + 1), repeat=n):
            if set(values) == set(range(1, d + 1)):
                seen.add(values)
        total += len(seen)
    return total


def test_criterion_01_permutahedra():
    started = time.monotonic()
    ok = True
    expected_totals = {1: 1, 2: 3, 3: 13, 4: 75, 5: 541}
    for n in range(1, 6):
        faces = permutahedra.all_faces(n)
        ok &= len(faces) == expected_totals[n] == brute_force_face_count(n)
        boundaries = {f: permutahedra.boundary(f) for f in faces}
        ok &= all(b.apply(permutahedra.boundary).is_zero() for b in boundaries.values())
        ok &= permutahedra.chain_complex(n).homology_dims() == {0: 1}
        gens = []
        for i in range(1, n):
            sigma = list(range(1, n + 1))
            sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
            gens.append(tuple(sigma))
        for f in faces:
            v = Vector.unit(f)
            for sigma in gens:
                # chain action commuting with the involution
                s, g = permutahedra.act(sigma, f)
                ok &= boundaries[g].scaled(s) == permutahedra.act_vector(
                    sigma, boundaries[f]
                )
                ok &= permutahedra.act_vector(
                    sigma, permutahedra.nu_vector(v)
                ) == permutahedra.nu_vector(permutahedra.act_vector(sigma, v))
            s, g = permutahedra.nu(f)
            ok &= boundaries[g].scaled(s) == permutahedra.nu_vector(boundaries[f])
        # multiplicativity including signs, exhaustive at n = 3
        if n == 3:
            perms = list(itertools.permutations((1, 2, 3)))
            for sigma in perms:
                for tau in perms:
                    comp = tuple(sigma[tau[i - 1] - 1] for i in (1, 2, 3))
                    for f in faces:
                        s1, g1 = permutahedra.act(tau, f)
                        s2, g2 = permutahedra.act(sigma, g1)
                        ok &= (s1 * s2, g2) == permutahedra.act(comp, f)
        con = permutahedra.build_contraction(n)
        ok &= con.F(con.G(Fraction(1))) == 1
        ok &= con.H(con.G(Fraction(1))).is_zero()
        h_cols = {f: con.H(Vector.unit(f)) for f in faces}
        for f in faces:
            v = Vector.unit(f)
            hom = h_cols[f].apply(permutahedra.boundary) + con.H(boundaries[f])
            ok &= v - con.GF(v) == hom
            ok &= con.F(h_cols[f]) == 0
            ok &= con.H(h_cols[f]).is_zero()
            for sigma in gens:
                ok &= con.H(
                    permutahedra.act_vector(sigma, v)
                ) == permutahedra.act_vector(sigma, h_cols[f])
            ok &= con.H(permutahedra.nu_vector(v)) == permutahedra.nu_vector(h_cols[f])
    report("criterion 1: permutahedron suite n <= 5", ok, started)


def test_criterion_02_cobar_contraction():
    started = time.monotonic()
    ok = True
    V = linfty.dg_vector_space([("v", 0, {"w": 1}), ("w", 1, {})])
    C1 = CECoalgebra(V, 6, max_arity=1)
    dOm = cobar_differential(C1)
    dE = algebra_differential(V)
    for weight in range(1, 5):
        for word in sym_words(V.generators, weight):
            u = Vector.unit(word)
            ok &= u.apply(permutahedra.cobar_g).apply(permutahedra.cobar_f) == u
            ok &= u.apply(permutahedra.cobar_g).apply(permutahedra.cobar_h).is_zero()
    for rank in range(1, 5):
        for x in cobar_words(C1.sgens, rank):
            v = Vector.unit(x)
            gf = v.apply(permutahedra.cobar_f).apply(permutahedra.cobar_g)
            hom = v.apply(permutahedra.cobar_h).apply(dOm) + v.apply(dOm).apply(
                permutahedra.cobar_h
            )
            ok &= v - gf == hom
            ok &= v.apply(permutahedra.cobar_h).apply(permutahedra.cobar_f).is_zero()
            ok &= v.apply(permutahedra.cobar_h).apply(permutahedra.cobar_h).is_zero()
            ok &= v.apply(permutahedra.iota_omega).apply(permutahedra.cobar_h) == v.apply(
                permutahedra.cobar_h
            ).apply(permutahedra.iota_omega)
            ok &= v.apply(permutahedra.cobar_f).apply(dE) == v.apply(dOm).apply(
                permutahedra.cobar_f
            )
    # functoriality square for a random degree-zero chain map V -> W
    rng = random.Random(2026)
    W = linfty.dg_vector_space([("p", 0, {"q": 1}), ("q", 1, {})], name="W")
    a = Fraction(rng.randrange(1, 7))
    b = Fraction(rng.randrange(1, 7))
    v0, v1 = V.by_id["v"], V.by_id["w"]
    p0, p1 = W.by_id["p"], W.by_id["q"]

    def phi(g):
        if g == v0:
            return Vector.unit(p0, a)
        if g == v1:
            return Vector.unit(p1, a)  # chain map: same factor along d
        return Vector()

    amap = permutahedra.induced_algebra_map(phi)
    for rank in range(1, 5):
        for x in cobar_words(C1.sgens, rank):
            v = Vector.unit(x)
            ok &= v.apply(permutahedra.cobar_h).apply(amap) == v.apply(amap).apply(
                permutahedra.cobar_h
            )
    report("criterion 2: cobar contraction suite rank <= 4", ok, started)


STASHEFF_ALGEBRAS = [
    ("abelian dim 1", lambda: linfty.abelian([0], name="ab1")),
    ("abelian dim 2", lambda: linfty.abelian([0, 1], name="ab2")),
    ("abelian dim 3", lambda: linfty.abelian([0, 0, 1], name="ab3")),
    ("sl2", linfty.sl2),
    ("heisenberg", linfty.heisenberg),
    ("odd-concentrated", lambda: linfty.odd_abelian([1, 3], name="odd2")),
    ("ternary-only", linfty.l3_gadget),
]


@pytest.mark.parametrize("label,builder", STASHEFF_ALGEBRAS)
def test_criterion_03_stasheff(label, builder):
    started = time.monotonic()
    algebra = builder()
    structure = uea.AInftyStructure(algebra, 4, 5)
    ok = bool(uea.stasheff_check(structure))
    ok &= bool(uea.m1_matches_l1(structure))
    report("criterion 3: bar differential squares to zero [%s]" % label, ok, started)


def test_criterion_04_pbw():
    started = time.monotonic()
    ok = True
    for algebra in (linfty.sl2(), linfty.heisenberg()):
        structure = uea.AInftyStructure(algebra, 3, 4)
        ok &= bool(uea.pbw_compare(structure, 4))
    report("criterion 4: classical enveloping comparison", ok, started)


def test_criterion_05_antisymmetrized_products():
    started = time.monotonic()
    ok = True
    for algebra in (linfty.sl2(), linfty.heisenberg()):
        ok &= bool(uea.alt_bracket_check(uea.AInftyStructure(algebra, 2, 3), 2))
    ok &= bool(uea.alt_bracket_check(uea.AInftyStructure(linfty.l3_gadget(), 3, 4), 3))
    report("criterion 5: antisymmetrized products recover brackets", ok, started)


def test_criterion_06_involution_and_coproduct():
    started = time.monotonic()
    ok = True
    for algebra in (linfty.sl2(), linfty.l3_gadget()):
        structure = uea.AInftyStructure(algebra, 3, 3)
        ok &= bool(uea.involution_check(structure, (1, 2, 3)))
        ok &= bool(uea.coproduct_strictness_check(structure, 2, 3))
        structure3 = uea.AInftyStructure(algebra, 3, 4)
        ok &= bool(uea.coproduct_strictness_check(structure3, 3, 3))
    report("criterion 6: involution and coproduct strictness", ok, started)


def test_criterion_07_morphisms():
    started = time.monotonic()
    ok = True
    H = linfty.heisenberg()
    A2 = linfty.abelian([0, 0])
    x, y, z = (H.by_id[k] for k in ("x", "y", "z"))
    a1, a2 = A2.by_id["a1"], A2.by_id["a2"]
    strict = linfty.LInftyMorphism(
        H, A2, {1: {(x,): {a1: 1}, (y,): {a2: 1}, (z,): {}}}
    )
    ok &= bool(linfty.check_morphism(strict, 4))
    data = uea.u_morphism(strict, 3, 4)
    ok &= bool(uea.check_first_component(data))
    ok &= bool(uea.check_strict_vanishing(data))

    La = linfty.LInftyAlgebra([Generator("a", 1)], {}, name="A")
    Lb = linfty.LInftyAlgebra([Generator("b", 1)], {}, name="B")
    Lc = linfty.LInftyAlgebra([Generator("c", 1)], {}, name="C")
    a, b, c = La.by_id["a"], Lb.by_id["b"], Lc.by_id["c"]
    bent = linfty.LInftyMorphism(La, Lb, {1: {(a,): {b: 1}}, 2: {(a, a): {b: 1}}})
    bent2 = linfty.LInftyMorphism(Lb, Lc, {1: {(b,): {c: 1}}, 2: {(b, b): {c: 1}}})
    ok &= bool(linfty.check_morphism(bent, 4))
    data2 = uea.u_morphism(bent, 3, 4)
    ok &= bool(uea.check_first_component(data2))
    ok &= any(
        bar.length >= 2 and data2.component(bar.letters)
        for bar in data2.source.bar_words()
    )
    res, _ = uea.composition_homotopy_check(bent, bent2, 3, 4)
    ok &= bool(res)
    res, homotopy = uea.composition_homotopy_check(
        bent, linfty.identity_morphism(Lb), 3, 4
    )
    ok &= bool(res)
    res, homotopy = uea.composition_homotopy_check(
        linfty.identity_morphism(La), bent, 3, 4
    )
    ok &= bool(res)
    report("criterion 7: morphism transfer and composition homotopy", ok, started)


def test_criterion_08_perturbation_algebra():
    started = time.monotonic()
    ok = True
    T = Transfer(linfty.sl2(), 3)
    staged = bpl(bpl(T.con0, T.t_mu), T.t_L)
    for bar in bar_words_cobar(T.C1.sgens, 3, 3):
        v = Vector.unit(bar)
        ok &= v.apply(staged.F) == v.apply(T.con.F)
        ok &= v.apply(staged.H) == v.apply(T.con.H)
    for bar in bar_words_algebra(T.algebra.generators, 3, 3):
        v = Vector.unit(bar)
        ok &= v.apply(staged.G) == v.apply(T.con.G)
        ok &= staged.d_small(bar) == T.con.d_small(bar)
    # abelian transfer reproduces the bar construction of the symmetric algebra
    A = linfty.abelian([0, 0, 1], name="ab3")
    TA = Transfer(A, 3)
    from enveloping.exactlin import s_power_sign

    for bar in bar_words_algebra(A.generators, 3, 3):
        direct = Vector()
        letters = bar.letters
        left = 0
        for j in range(len(letters) - 1):
            u, w = letters[j], letters[j + 1]
            prefix = -1 if left % 2 else 1
            csign = s_power_sign([u.degree, w.degree])
            for w2, cc in uea.star_product(u, w).items():
                direct.add_term(
                    BarWord(letters[:j] + (w2,) + letters[j + 2 :]),
                    prefix * csign * cc,
                )
            left += u.degree - 1
        ok &= TA.con.d_small(bar) == direct
    report("criterion 8: perturbation composition law and abelian transfer", ok, started)


def test_criterion_09_tableaux():
    started = time.monotonic()
    ok = True
    for n in range(1, 5):
        for shape in tableaux.partitions(n):
            merged = {}
            for T in tableaux.standard_tableaux(shape):
                JT = tableaux.descents(T)
                for size in range(len(JT) + 1):
                    for combo in itertools.combinations(sorted(JT), size):
                        key = tableaux.column_tableau(T, frozenset(combo))
                        merged[key] = merged.get(key, 0) + 1
                ok &= bool(tableaux.t_complex_contraction_check(T))
                cx = tableaux.t_complex(T)  # checks the square on construction
                dims = cx.homology_dims()
                ok &= dims == ({0: 1} if not JT else {})
            direct = []
            for values in range(1, n + 1):
                direct.extend(tableaux.column_semistandard_fillings(shape, values))
            ok &= sorted(merged) == sorted(direct)
            ok &= all(v == 1 for v in merged.values())
        for dims_pair in ((2, 0), (1, 1)):
            res, cobar_profile, tab_profile = tableaux.decomposition_dims(n, *dims_pair)
            ok &= bool(res)
    report("criterion 9: tableau decomposition suite n <= 4", ok, started)


def test_criterion_10_bgg():
    started = time.monotonic()
    ok = True
    A4 = uea.AInftyStructure(linfty.sl2(), 4, 4)
    ok &= bool(bgg.generalized_cochain_check(A4, 4))
    for degrees in ([1], [1, 3]):
        AO = uea.AInftyStructure(linfty.odd_abelian(degrees), 3, 4)
        res, dims = bgg.twisted_tensor_acyclicity(AO, 4)
        ok &= bool(res) and dims == {0: 1}
    structure = uea.AInftyStructure(linfty.sl2(), 4, 4)
    for M in (linfty.trivial_module(structure.algebra),
              linfty.adjoint_module(structure.algebra)):
        ok &= bool(bgg.roundtrip_fg_check(M, structure, 4, 4))
        forward = bgg.functor_g(M, structure, 4, 4)
        ok &= bool(bgg.roundtrip_gf_check(forward, 4, 4))
    faulty = uea.AInftyStructure(linfty.sl2(), 3, 3, top_cell_fault=True)
    mutated = bgg.roundtrip_fg_check(
        linfty.adjoint_module(faulty.algebra), faulty, 3, 3
    )
    ok &= not mutated
    report("criterion 10: twisted cochain, acyclicity, round trips", ok, started)
