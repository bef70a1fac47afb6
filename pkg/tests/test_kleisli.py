import itertools
import random

import pytest

from catlog.formulas import (
    App, Var, complexity, enumerate_slice, fmt, parse, variables,
)
from catlog.kleisli import (
    FlexibleMorphism, all_flexible_morphisms, all_strict_morphisms,
    check_kleisli_theorem, counit, directed_colimit_signatures, flat,
    flexible_extension, is_regular, is_weak_terminal, kleisli_compose,
    kleisli_identity, lift_strict, minus_functor, random_composable_pair,
    sharp, slice_colimit_comparison, slice_inhabitant, suite_adjunction,
    suite_category_laws, suite_kleisli_theorem, suite_monad_laws,
    suite_regularity, t_on_strict, truncate_slices, unit,
    weak_terminal_witness,
)
from catlog.signatures import (
    Signature, StrictMorphism, compose_strict, identity_morphism,
    strict_extension,
)

from strategies import CPL1_SIG, CPL2_SIG

H = FlexibleMorphism(CPL1_SIG, CPL2_SIG, {
    "neg": parse("negp(x0)", CPL2_SIG),
    "imp": parse("orp(negp(x0), x1)", CPL2_SIG),
})
K = FlexibleMorphism(CPL2_SIG, CPL1_SIG, {
    "negp": parse("neg(x0)", CPL1_SIG),
    "orp": parse("imp(neg(x0), x1)", CPL1_SIG),
})


def shape_catalog(max_connectives=3, arities=(0, 1, 2)):
    shapes = []
    for k in range(max_connectives + 1):
        for combo in itertools.combinations_with_replacement(arities, k):
            shapes.append(Signature(
                "G" + "".join(map(str, combo)),
                {f"g{i}": a for i, a in enumerate(combo)}))
    return shapes


def test_flexible_morphism_enforces_exact_variable_slice():
    with pytest.raises(ValueError):
        FlexibleMorphism(CPL1_SIG, CPL2_SIG, {
            "neg": parse("negp(x0)", CPL2_SIG),
            "imp": parse("orp(x0, x0)", CPL2_SIG),  # variable set {0}, not {0,1}
        })


def test_kleisli_identity_assignments():
    ident = kleisli_identity(CPL1_SIG)
    assert ident("neg") == parse("neg(x0)", CPL1_SIG)
    assert ident("imp") == parse("imp(x0, x1)", CPL1_SIG)


def test_identity_extension_is_identity():
    ident = kleisli_identity(CPL1_SIG)
    for n in range(3):
        for phi in enumerate_slice(CPL1_SIG, n, 3):
            assert flexible_extension(ident, phi) == phi


def test_flexible_extension_single_unfolding():
    assert flexible_extension(H, parse("imp(x0, x1)", CPL1_SIG)) == \
        parse("orp(negp(x0), x1)", CPL2_SIG)


def test_collapsing_unary_drops_complexity():
    collapse = FlexibleMorphism(
        Signature("N", {"neg": 1}), Signature("N", {"neg": 1}),
        {"neg": Var(0)})
    image = flexible_extension(collapse, parse("neg(neg(x0))", CPL1_SIG))
    assert image == Var(0)


def test_extension_determines_morphism():
    # if two morphisms agree on every generator application they are equal
    src = Signature("S", {"u": 1, "b": 2})
    pool = all_flexible_morphisms(src, CPL1_SIG, 2)
    for f, g in itertools.combinations(pool[:40], 2):
        agree = all(
            flexible_extension(f, App(c, tuple(Var(i) for i in range(a)))) ==
            flexible_extension(g, App(c, tuple(Var(i) for i in range(a))))
            for c, a in src.connectives.items())
        assert agree == (f == g)


def test_kleisli_compose_frozen_example():
    composed = kleisli_compose(K, H)
    assert composed("neg") == parse("neg(x0)", CPL1_SIG)
    assert composed("imp") == parse("imp(neg(neg(x0)), x1)", CPL1_SIG)


def test_unit_laws_small_exhaustive():
    for src in (Signature("N", {"n": 1}), Signature("B", {"b": 2})):
        for tgt in (CPL1_SIG, CPL2_SIG):
            for h in all_flexible_morphisms(src, tgt, 2):
                assert kleisli_compose(h, kleisli_identity(src)) == h
                assert kleisli_compose(kleisli_identity(tgt), h) == h


def test_associativity_literal_small_chain():
    n_sig = Signature("N", {"n": 1})
    pool = all_flexible_morphisms(n_sig, n_sig, 2)
    for h1, h2, h3 in itertools.product(pool, repeat=3):
        assert kleisli_compose(kleisli_compose(h3, h2), h1) == \
            kleisli_compose(h3, kleisli_compose(h2, h1))


def test_associativity_factored_over_slices():
    # extension of a composite equals composed extensions on every bounded
    # slice formula, which covers associativity against every first leg
    mid = Signature("M", {"u": 1, "b": 2})
    out = Signature("O", {"v": 1, "c": 2})
    pool2 = all_flexible_morphisms(mid, out, 1)
    pool3 = all_flexible_morphisms(out, mid, 1)
    slices = [phi for n in range(3) for phi in enumerate_slice(mid, n, 2)]
    for h2 in pool2:
        for h3 in pool3:
            composed = kleisli_compose(h3, h2)
            for phi in slices:
                assert flexible_extension(composed, phi) == \
                    flexible_extension(h3, flexible_extension(h2, phi))


def test_lift_strict_extension_agrees_with_hat():
    f = StrictMorphism(CPL1_SIG, CPL2_SIG, {"neg": "negp", "imp": "orp"})
    lifted = lift_strict(f)
    rng = random.Random(5)
    pool = [phi for n in range(3) for phi in enumerate_slice(CPL1_SIG, n, 4)]
    for _ in range(200):
        phi = pool[rng.randrange(len(pool))]
        assert flexible_extension(lifted, phi) == strict_extension(f, phi)


def test_lift_of_identity_is_kleisli_identity():
    assert lift_strict(identity_morphism(CPL1_SIG)) == kleisli_identity(CPL1_SIG)


# --- regularity -------------------------------------------------------------


def test_regularity_examples():
    collapse = FlexibleMorphism(
        Signature("N", {"neg": 1}), CPL1_SIG, {"neg": Var(0)})
    regular, witness = is_regular(collapse)
    assert not regular
    assert complexity(flexible_extension(collapse, witness)) < complexity(witness)
    lifted = lift_strict(StrictMorphism(CPL1_SIG, CPL2_SIG,
                                        {"neg": "negp", "imp": "orp"}))
    assert is_regular(lifted) == (True, None)


def test_regularity_suite_clean():
    report = suite_regularity(60, seed=3)
    assert report["failures"] == []


# --- weak terminals ---------------------------------------------------------


def test_weak_terminal_predicate_examples():
    assert is_weak_terminal(Signature("T", {"tt": 0, "conj": 2}))
    assert not is_weak_terminal(Signature("N", {"neg": 1}))
    assert not is_weak_terminal(Signature("C", {"tt": 0}))
    assert not is_weak_terminal(Signature("B", {"conj": 2}))


def test_weak_terminal_witness_construction():
    probe = Signature("P", {"e": 0, "u": 1, "b": 2, "t": 3})
    terminal = Signature("T", {"tt": 0, "conj": 2})
    witness = weak_terminal_witness(probe, terminal)
    assert witness is not None
    for c, arity in probe.connectives.items():
        assert variables(witness(c)) == frozenset(range(arity))
    # negative case: no constant, so arity-0 connectives cannot be mapped
    assert weak_terminal_witness(probe, Signature("B", {"conj": 2})) is None


def test_weak_terminal_predicate_matches_construction():
    rng = random.Random(17)
    probe = Signature("P", {"e": 0, "u": 1, "b": 2})
    shapes = shape_catalog()
    for _ in range(30):
        candidate = shapes[rng.randrange(len(shapes))]
        built = weak_terminal_witness(probe, candidate)
        assert is_weak_terminal(candidate) == (built is not None)


def test_slice_inhabitant_respects_exact_variables():
    terminal = Signature("T", {"tt": 0, "conj": 3})
    for n in range(5):
        phi = slice_inhabitant(terminal, n)
        assert phi is not None and variables(phi) == frozenset(range(n))


# --- the slice functor, unit, counit, multiplication ------------------------


def test_minus_functor_of_identity():
    ident = kleisli_identity(CPL1_SIG)
    strict, src, tgt = minus_functor(ident, 2, 2)
    for name in src.signature.connectives:
        assert strict(name) == name


def test_minus_functor_functoriality():
    rng = random.Random(23)
    for _ in range(10):
        h1, h2 = random_composable_pair(rng, 2)
        m12, src, _ = minus_functor(kleisli_compose(h2, h1), 2, 2)
        for name, phi in src.decode.items():
            assert m12(name) == fmt(
                flexible_extension(h2, flexible_extension(h1, phi)))


def test_minus_functor_mono_transfer():
    # injective on slices exactly when injective on connectives, levelwise
    small = shape_catalog(2, (1, 2))
    for a in small:
        for b in small:
            for f in all_strict_morphisms(a, b):
                h = lift_strict(f)
                strict, src, _ = minus_functor(h, 3, 2)
                slice_injective = all(
                    _injective_on(strict, [c for c, ar in
                                           src.signature.connectives.items()
                                           if ar == n])
                    for n in range(3))
                conn_injective = all(
                    _injective_map(f, a.level(n)) for n in range(3))
                assert slice_injective == conn_injective


def _injective_on(mapping, keys):
    images = [mapping(k) for k in keys]
    return len(images) == len(set(images))


def _injective_map(f, keys):
    images = [f(c) for c in keys]
    return len(images) == len(set(images))


def test_unit_assignment():
    eta, trunc = unit(CPL1_SIG)
    assert eta("neg") == fmt(parse("neg(x0)", CPL1_SIG))
    assert eta("imp") == fmt(parse("imp(x0, x1)", CPL1_SIG))


def test_counit_decodes():
    trunc = truncate_slices(CPL1_SIG, 2, 2)
    eps = counit(trunc)
    for ident, phi in trunc.decode.items():
        assert eps(ident) == phi


def test_monad_suite_clean():
    report = suite_monad_laws(300, seed=7)
    assert report["failures"] == []


def test_adjunction_suite_clean():
    report = suite_adjunction(25, seed=9)
    assert report["failures"] == []


def test_sharp_flat_round_trip_exhaustive_small():
    src = Signature("S", {"u": 1, "b": 2})
    for h in all_flexible_morphisms(src, CPL1_SIG, 2):
        f, trunc = sharp(h)
        assert flat(f, trunc) == h


def test_category_suite_clean():
    report = suite_category_laws(60, seed=1)
    assert report["failures"] == []


def test_kleisli_theorem_on_corpus_pair():
    report = check_kleisli_theorem([(H, K), (K, H)])
    assert report["failures"] == []


def test_kleisli_theorem_on_lifted_strict():
    f = lift_strict(StrictMorphism(CPL1_SIG, CPL2_SIG,
                                   {"neg": "negp", "imp": "orp"}))
    report = check_kleisli_theorem([(f, K)])
    assert report["failures"] == []


def test_kleisli_suite_clean():
    report = suite_kleisli_theorem(120, seed=2)
    assert report["failures"] == []


# --- reflection of isomorphisms, monomorphisms, epimorphisms ----------------


def _slice_map_properties(f, bound=3, var_bound=2):
    strict, src, tgt = t_on_strict(f, bound, var_bound)
    out = []
    for n in range(var_bound + 1):
        src_level = [c for c, a in src.signature.connectives.items() if a == n]
        images = [strict(c) for c in src_level]
        injective = len(images) == len(set(images))
        tgt_compl1 = {fmt(phi) for phi in enumerate_slice(f.target, n, bound)
                      if complexity(phi) == 1}
        compl1_images = {strict(fmt(phi))
                         for phi in enumerate_slice(f.source, n, bound)
                         if complexity(phi) == 1}
        surjective_1 = tgt_compl1 <= compl1_images
        out.append((injective, surjective_1))
    return out


def test_t_reflects_mono_epi_iso_exhaustive():
    shapes = shape_catalog(2, (0, 1, 2))
    for a in shapes:
        for b in shapes:
            for f in all_strict_morphisms(a, b):
                props = _slice_map_properties(f)
                all_levels_inj = all(
                    _injective_map(f, a.level(n)) for n in range(3))
                for n, (injective, surjective_1) in enumerate(props):
                    conn_inj = _injective_map(f, a.level(n))
                    conn_surj = set(b.level(n)) <= {f(c) for c in a.level(n)}
                    if injective:
                        assert conn_inj
                    if surjective_1:
                        assert conn_surj
                    # preservation sanity: a morphism injective at every
                    # level has injective slice maps
                    if all_levels_inj:
                        assert injective


# --- isomorphisms, sections, and the strict-lift comparison -----------------


def _flexible_isos(sig):
    """All flexible endo-isomorphisms found by bounded search."""
    pool = all_flexible_morphisms(sig, sig, 2)
    ident = kleisli_identity(sig)
    isos = []
    for h in pool:
        for g in pool:
            if kleisli_compose(g, h) == ident and kleisli_compose(h, g) == ident:
                isos.append(h)
                break
    return isos


def test_isomorphisms_are_strict_up_to_variable_permutation():
    # every iso found by search has complexity-one assignments applying a
    # connective to a permutation of the variables; with arities at most one
    # the permutation is trivial and the iso is a lifted strict isomorphism
    sig = Signature("S", {"u": 1, "b": 2})
    for h in _flexible_isos(sig):
        for c, arity in sig.connectives.items():
            body = h(c)
            assert complexity(body) == 1
            assert sorted(v.index for v in body.args) == list(range(arity))
    unary = Signature("U", {"u": 1, "v": 1})
    lifted = {fmt_morphism(lift_strict(f))
              for f in all_strict_morphisms(unary, unary)}
    for h in _flexible_isos(unary):
        assert fmt_morphism(h) in lifted


def fmt_morphism(h):
    return tuple(sorted((c, fmt(phi)) for c, phi in h.assignment.items()))


def test_sections_are_regular():
    sig = Signature("S", {"u": 1, "b": 2})
    pool = all_flexible_morphisms(sig, sig, 2)
    ident = kleisli_identity(sig)
    for h in pool:
        if any(kleisli_compose(g, h) == ident for g in pool):
            assert is_regular(h)[0]


def test_complexity_preserving_morphisms_are_permuted_lifts():
    # lifts preserve complexity exactly; conversely a complexity-preserving
    # morphism applies a target connective to a permutation of the variables
    # (the order-preserving ones are exactly the strict lifts)
    src = Signature("S", {"u": 1, "b": 2})
    tgt = Signature("T", {"v": 1, "c": 2})
    lifted = {fmt_morphism(lift_strict(f)): f
              for f in all_strict_morphisms(src, tgt)}
    slices = [phi for n in range(3) for phi in enumerate_slice(src, n, 3)]
    for h in all_flexible_morphisms(src, tgt, 3):
        preserving = all(
            complexity(flexible_extension(h, phi)) == complexity(phi)
            for phi in slices)
        permuted = all(
            complexity(body) == 1 and
            all(isinstance(a, Var) for a in body.args) and
            sorted(v.index for v in body.args) == list(range(arity))
            for c, arity in src.connectives.items()
            for body in [h(c)])
        assert preserving == permuted
        if fmt_morphism(h) in lifted:
            assert preserving
        ordered = all(
            tuple(v.index for v in h(c).args) == tuple(range(arity))
            for c, arity in src.connectives.items()
            if complexity(h(c)) == 1 and all(isinstance(a, Var) for a in h(c).args))
        if preserving and ordered:
            assert fmt_morphism(h) in lifted


# --- directed colimits of signatures ----------------------------------------


def test_directed_colimit_of_inclusions():
    s0 = Signature("S0", {"n": 1})
    s1 = Signature("S1", {"n": 1, "b": 2})
    s2 = Signature("S2", {"n": 1, "b": 2, "e": 0})
    chain = [StrictMorphism(s0, s1, {"n": "n"}),
             StrictMorphism(s1, s2, {"n": "n", "b": "b"})]
    vertex, cocone = directed_colimit_signatures(chain)
    assert vertex.connectives == s2.connectives
    for n in range(3):
        report = slice_colimit_comparison(chain, n, 3)
        assert report["bijective"], report


def test_directed_colimit_with_merging_step():
    s0 = Signature("S0", {"p": 1, "q": 1})
    s1 = Signature("S1", {"r": 1})
    chain = [StrictMorphism(s0, s1, {"p": "r", "q": "r"})]
    vertex, cocone = directed_colimit_signatures(chain)
    assert len(vertex.connectives) == 1
    for n in range(2):
        report = slice_colimit_comparison(chain, n, 3)
        assert report["bijective"], report


def test_directed_colimit_single_stage():
    s0 = Signature("S0", {"n": 1})
    chain = [StrictMorphism(s0, s0, {"n": "n"})]
    vertex, cocone = directed_colimit_signatures(chain)
    assert vertex.connectives == s0.connectives
    report = slice_colimit_comparison(chain, 1, 3)
    assert report["bijective"]
