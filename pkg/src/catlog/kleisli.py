"""Flexible signature morphisms and the slice monad they generate.

A flexible morphism sends an n-ary connective to a formula over the target
whose variable set is exactly {x0..x_{n-1}}.  Composition substitutes one
assignment into the other (Kleisli composition for the monad that sends a
signature to its family of formula slices).  The monad itself is handled
through finite truncations: slices are materialized only up to a complexity
bound, which is enough to check every law pointwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .formulas import (
    App, Formula, Substitution, Var, check_formula, complexity, enumerate_slice,
    fmt, sort_key, substitute, variables,
)
from .signatures import (
    Signature, StrictMorphism, compose_strict, identity_morphism, signature_coproduct,
    strict_extension,
)


class FlexibleMorphism:
    """Assignment of a target slice formula to each source connective."""

    def __init__(self, source: Signature, target: Signature,
                 assignment: dict[str, Formula], name: str = ""):
        for c, arity in source.connectives.items():
            phi = assignment.get(c)
            if phi is None:
                raise ValueError(f"assignment misses source connective {c!r}")
            check_formula(target, phi)
            if variables(phi) != frozenset(range(arity)):
                raise ValueError(
                    f"{c!r}/{arity} must map into the arity-{arity} slice, "
                    f"got {fmt(phi)} with variables {sorted(variables(phi))}")
        self.source = source
        self.target = target
        self.assignment = {c: assignment[c] for c in source.connectives}
        self.name = name

    def __call__(self, connective: str) -> Formula:
        return self.assignment[connective]

    def __eq__(self, other):
        if not isinstance(other, FlexibleMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.assignment == other.assignment)

    def __hash__(self):
        return hash((self.source, self.target,
                     frozenset(self.assignment.items())))

    def __repr__(self):
        inner = ", ".join(f"{c} -> {fmt(phi)}" for c, phi in sorted(self.assignment.items()))
        return f"FlexibleMorphism({inner})"

    def to_json(self) -> dict:
        return {
            "kind": "flexible",
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "map": {c: fmt(phi) for c, phi in sorted(self.assignment.items())},
        }


def kleisli_identity(sig: Signature) -> FlexibleMorphism:
    """c maps to c(x0..x_{n-1}); neutral for Kleisli composition."""
    assignment = {
        c: App(c, tuple(Var(i) for i in range(arity)))
        for c, arity in sig.connectives.items()
    }
    return FlexibleMorphism(sig, sig, assignment, name=f"id_{sig.name}")


def lift_strict(f: StrictMorphism) -> FlexibleMorphism:
    """View a strict morphism as a flexible one via c -> f(c)(x0..x_{n-1})."""
    assignment = {
        c: App(f(c), tuple(Var(i) for i in range(arity)))
        for c, arity in f.source.connectives.items()
    }
    return FlexibleMorphism(f.source, f.target, assignment, name=f"{f.name}+")


def flexible_extension(h: FlexibleMorphism, phi: Formula) -> Formula:
    """Translate phi by substituting translated arguments into assignments."""
    if isinstance(phi, Var):
        return phi
    body = h(phi.connective)
    sigma = Substitution({
        i: flexible_extension(h, arg) for i, arg in enumerate(phi.args)
    })
    return substitute(sigma, body)


def kleisli_compose(h2: FlexibleMorphism, h1: FlexibleMorphism) -> FlexibleMorphism:
    """h2 after h1: each assignment of h1 is pushed through h2's extension."""
    if h1.target != h2.source:
        raise ValueError("flexible morphisms not composable")
    assignment = {c: flexible_extension(h2, h1(c)) for c in h1.source.connectives}
    return FlexibleMorphism(h1.source, h2.target, assignment)


def is_regular(h: FlexibleMorphism) -> tuple[bool, Formula | None]:
    """True iff the extension never decreases complexity.

    Equivalent criterion: no unary connective is assigned the bare variable
    x0.  When false, returns a witness whose translation is strictly simpler.
    """
    for c, arity in h.source.connectives.items():
        if arity == 1 and h(c) == Var(0):
            return False, App(c, (Var(0),))
    return True, None


def is_weak_terminal(sig: Signature) -> bool:
    """True iff every signature admits some flexible morphism into sig."""
    return bool(sig.level(0)) and any(a >= 2 for a in sig.arities())


def weak_terminal_witness(source: Signature, candidate: Signature
                          ) -> FlexibleMorphism | None:
    """Search a flexible morphism source -> candidate, one slice at a time."""
    assignment: dict[str, Formula] = {}
    for c, arity in source.connectives.items():
        phi = slice_inhabitant(candidate, arity)
        if phi is None:
            return None
        assignment[c] = phi
    return FlexibleMorphism(source, candidate, assignment)


def slice_inhabitant(sig: Signature, n: int) -> Formula | None:
    """Some formula with variable set exactly {x0..x_{n-1}}, if one exists."""
    if n == 1:
        return Var(0)
    constants = sig.level(0)
    if n == 0:
        return App(constants[0], ()) if constants else None
    wide = [c for c in sorted(sig.connectives) if sig.connectives[c] >= 2]
    if not wide:
        return None
    head = wide[0]
    arity = sig.connectives[head]
    # chain the merging connective over all required variables, repeating the
    # last variable to fill extra argument positions
    acc: Formula = Var(n - 1)
    for i in range(n - 2, -1, -1):
        args = [Var(i), acc] + [acc] * (arity - 2)
        acc = App(head, tuple(args))
    return acc


# ---------------------------------------------------------------------------
# Truncated slice signatures: the monad T, materialized up to a bound


@dataclass
class SliceTruncation:
    """The signature of slice formulas of a base signature, up to bounds."""

    base: Signature
    compl_bound: int
    var_bound: int
    signature: Signature
    decode: dict[str, Formula]

    def encode(self, phi: Formula) -> str:
        return fmt(phi)


def truncate_slices(base: Signature, compl_bound: int, var_bound: int,
                    extra: list[Formula] | None = None) -> SliceTruncation:
    """Build the T-signature restricted to bounded complexity and variables.

    `extra` forces additional slice formulas (e.g. images under a morphism)
    into the truncation so that morphisms out of a truncation stay total.
    """
    connectives: dict[str, int] = {}
    decode: dict[str, Formula] = {}
    for n in range(var_bound + 1):
        for phi in enumerate_slice(base, n, compl_bound):
            ident = fmt(phi)
            connectives[ident] = n
            decode[ident] = phi
    for phi in extra or []:
        ident = fmt(phi)
        if ident not in connectives:
            check_formula(base, phi)
            connectives[ident] = len(variables(phi))
            decode[ident] = phi
    sig = Signature(f"T({base.name})<= {compl_bound}", connectives)
    return SliceTruncation(base, compl_bound, var_bound, sig, decode)


def minus_functor(h: FlexibleMorphism, compl_bound: int, var_bound: int
                  ) -> tuple[StrictMorphism, SliceTruncation, SliceTruncation]:
    """Materialize the action of h on slices as a strict morphism.

    The target truncation is enlarged with the images so that the arity
    levels stay aligned (translation preserves variable sets).
    """
    src = truncate_slices(h.source, compl_bound, var_bound)
    images = {ident: flexible_extension(h, phi) for ident, phi in src.decode.items()}
    tgt = truncate_slices(h.target, compl_bound, var_bound, extra=list(images.values()))
    mapping = {ident: fmt(images[ident]) for ident in src.decode}
    return StrictMorphism(src.signature, tgt.signature, mapping), src, tgt


def t_on_strict(f: StrictMorphism, compl_bound: int, var_bound: int
                ) -> tuple[StrictMorphism, SliceTruncation, SliceTruncation]:
    """The slice functor on a strict morphism (extension restricted to slices)."""
    src = truncate_slices(f.source, compl_bound, var_bound)
    tgt = truncate_slices(f.target, compl_bound, var_bound)
    mapping = {ident: fmt(strict_extension(f, phi)) for ident, phi in src.decode.items()}
    return StrictMorphism(src.signature, tgt.signature, mapping), src, tgt


def unit(sig: Signature) -> tuple[StrictMorphism, SliceTruncation]:
    """Strict morphism into the truncated slice signature: c -> c(x0..)."""
    var_bound = max(sig.arities(), default=0)
    trunc = truncate_slices(sig, 1, var_bound)
    mapping = {
        c: fmt(App(c, tuple(Var(i) for i in range(arity))))
        for c, arity in sig.connectives.items()
    }
    return StrictMorphism(sig, trunc.signature, mapping, name="unit"), trunc


def counit(trunc: SliceTruncation) -> FlexibleMorphism:
    """Flexible morphism from the slice signature back to the base: decode."""
    return FlexibleMorphism(trunc.signature, trunc.base, dict(trunc.decode), name="counit")


def flatten(phi: Formula, decode: dict[str, Formula]) -> Formula:
    """Substitute decoded slice formulas for slice-signature connectives."""
    if isinstance(phi, Var):
        return phi
    body = decode[phi.connective]
    sigma = Substitution({i: flatten(a, decode) for i, a in enumerate(phi.args)})
    return substitute(sigma, body)


def mu_apply(trunc: SliceTruncation, phi2: Formula) -> Formula:
    """Multiplication, pointwise: flatten a formula over the slice signature."""
    return flatten(phi2, trunc.decode)


def check_kleisli_theorem(pairs: list[tuple[FlexibleMorphism, FlexibleMorphism]],
                          seed: int | None = None) -> dict:
    """Compare Kleisli composition against unit/multiplication plumbing.

    For each composable pair (h1: A->B, h2: B->C) and each connective c of A,
    the direct composite assignment must equal the assignment obtained by
    rewriting h1(c) with the slice encodings of h2 and flattening.
    """
    failures = []
    for case, (h1, h2) in enumerate(pairs):
        composite = kleisli_compose(h2, h1)
        for c in h1.source.connectives:
            lhs = composite(c)
            staged = _encode_through(h2, h1(c))
            rhs = flatten(staged, {fmt(phi): phi for phi in h2.assignment.values()})
            if lhs != rhs:
                failures.append({
                    "case": case,
                    "inputs": {"h1": h1.to_json(), "h2": h2.to_json(), "connective": c},
                    "lhs": fmt(lhs),
                    "rhs": fmt(rhs),
                })
    report = {"suite": "kleisli", "cases": len(pairs), "failures": failures}
    if seed is not None:
        report["seed"] = seed
    return report


def _encode_through(h: FlexibleMorphism, phi: Formula) -> Formula:
    """Strict extension of the assignment map, landing in encoded slice heads."""
    if isinstance(phi, Var):
        return phi
    return App(fmt(h(phi.connective)),
               tuple(_encode_through(h, a) for a in phi.args))


def sharp(h: FlexibleMorphism) -> tuple[StrictMorphism, SliceTruncation]:
    """Present a flexible morphism as a strict morphism into slice formulas."""
    bound = max([complexity(phi) for phi in h.assignment.values()] or [1])
    var_bound = max(h.source.arities(), default=0)
    trunc = truncate_slices(h.target, max(bound, 1), var_bound,
                            extra=list(h.assignment.values()))
    mapping = {c: fmt(phi) for c, phi in h.assignment.items()}
    return StrictMorphism(h.source, trunc.signature, mapping, name=f"{h.name}#"), trunc


def flat(f: StrictMorphism, trunc: SliceTruncation) -> FlexibleMorphism:
    """Inverse of sharp: decode slice heads back into an assignment."""
    assignment = {c: trunc.decode[f(c)] for c in f.source.connectives}
    return FlexibleMorphism(f.source, trunc.base, assignment, name=f"{f.name}b")


def suite_adjunction(cases: int, seed: int, compl_bound: int = 3) -> dict:
    """Sharp/flat round trips and both triangle identities, pointwise."""
    rng = random.Random(seed)
    failures = []
    done = 0
    while done < cases:
        sig = random_signature(rng, 3, 2, name="s")
        tgt = random_signature(rng, 3, 2, name="t")
        h = random_flexible(rng, sig, tgt, 2)
        if h is None:
            continue
        done += 1
        f_sharp, trunc = sharp(h)
        if flat(f_sharp, trunc) != h:
            failures.append({"case": done, "inputs": {"h": h.to_json()},
                             "lhs": "flat(sharp(h))", "rhs": "h"})
        # first triangle: counit after lifted unit is the identity
        eta, unit_trunc = unit(sig)
        composite = kleisli_compose(counit(unit_trunc), lift_strict(eta))
        if composite != kleisli_identity(sig):
            failures.append({"case": done, "inputs": {"signature": sig.to_json()},
                             "lhs": repr(composite), "rhs": "identity"})
        # second triangle: wrapping a slice formula through the unit of the
        # slice signature and flattening gives the formula back
        trunc3 = truncate_slices(sig, compl_bound, 2)
        for phi in trunc3.decode.values():
            n = len(variables(phi))
            wrapped = App(fmt(phi), tuple(Var(i) for i in range(n)))
            if flatten(wrapped, trunc3.decode) != phi:
                failures.append({"case": done, "inputs": {"formula": fmt(phi)},
                                 "lhs": fmt(flatten(wrapped, trunc3.decode)),
                                 "rhs": fmt(phi)})
                break
    return {"suite": "adjunction", "seed": seed, "cases": cases, "failures": failures}


def suite_regularity(cases: int, seed: int, compl_bound: int = 4) -> dict:
    """Syntactic regularity criterion against brute-force complexity checks."""
    rng = random.Random(seed)
    failures = []
    done = 0
    while done < cases:
        src = random_signature(rng, 3, 2, name="r")
        tgt = random_signature(rng, 3, 2, name="q")
        h = random_flexible(rng, src, tgt, 2)
        if h is None:
            continue
        done += 1
        regular, witness = is_regular(h)
        drop = None
        for n in range(3):
            for theta in enumerate_slice(src, n, compl_bound):
                image = flexible_extension(h, theta)
                if complexity(image) < complexity(theta):
                    drop = theta
                    break
            if drop is not None:
                break
        if regular and drop is not None:
            failures.append({"case": done, "inputs": {"h": h.to_json()},
                             "lhs": "regular", "rhs": f"drop at {fmt(drop)}"})
        if not regular:
            if witness is None or not (
                    complexity(flexible_extension(h, witness)) < complexity(witness)):
                failures.append({"case": done, "inputs": {"h": h.to_json()},
                                 "lhs": "witness", "rhs": "no complexity drop"})
    return {"suite": "regularity", "seed": seed, "cases": cases, "failures": failures}


# ---------------------------------------------------------------------------
# Directed colimits of signatures along a chain


def directed_colimit_signatures(chain: list[StrictMorphism], name: str = ""
                                ) -> tuple[Signature, list[StrictMorphism]]:
    """Colimit of a finite chain of strict morphisms, with its cocone.

    Connectives are identified when some chain map merges them; the vertex
    keeps one representative per class, named after the class member at the
    last stage.
    """
    if not chain:
        raise ValueError("empty chain")
    stages = [chain[0].source] + [f.target for f in chain]
    # push every connective to the final stage; classes are fibers of that map
    to_top: list[dict[str, str]] = []
    for i in range(len(stages)):
        mapping = {c: c for c in stages[i].connectives}
        for f in chain[i:]:
            mapping = {c: f(d) for c, d in mapping.items()}
        to_top.append(mapping)
    top = stages[-1]
    vertex = Signature(name or f"colim({top.name})", dict(top.connectives))
    cocone = [
        StrictMorphism(stages[i], vertex, dict(to_top[i]), name=f"stage{i}")
        for i in range(len(stages))
    ]
    return vertex, cocone


def slice_colimit_comparison(chain: list[StrictMorphism], n: int, compl_bound: int
                             ) -> dict:
    """Check that taking bounded slices commutes with the chain colimit.

    Classes of (stage, formula) pairs under pushing along the chain must map
    bijectively onto the bounded slice of the colimit signature.
    """
    vertex, cocone = directed_colimit_signatures(chain)
    stages = [chain[0].source] + [f.target for f in chain]
    classes: dict[str, list[tuple[int, Formula]]] = {}
    for i, sig in enumerate(stages):
        for phi in enumerate_slice(sig, n, compl_bound):
            image = strict_extension(cocone[i], phi)
            classes.setdefault(fmt(image), []).append((i, phi))
    vertex_slice = {fmt(phi) for phi in enumerate_slice(vertex, n, compl_bound)}
    injective_onto = set(classes) == vertex_slice
    return {
        "bijective": injective_onto,
        "classes": len(classes),
        "vertex_slice": len(vertex_slice),
        "missing": sorted(vertex_slice - set(classes)),
        "spurious": sorted(set(classes) - vertex_slice),
    }


# ---------------------------------------------------------------------------
# Seeded random generators for the law suites


def random_signature(rng: random.Random, max_connectives: int = 3, max_arity: int = 2,
                     name: str = "rnd") -> Signature:
    count = rng.randint(1, max_connectives)
    connectives = {f"{name}{i}": rng.randint(0, max_arity) for i in range(count)}
    return Signature(name, connectives)


def random_formula_in_slice(rng: random.Random, sig: Signature, n: int,
                            max_compl: int) -> Formula | None:
    pool = enumerate_slice(sig, n, max_compl)
    if not pool:
        return None
    return pool[rng.randrange(len(pool))]


def random_flexible(rng: random.Random, source: Signature, target: Signature,
                    max_compl: int) -> FlexibleMorphism | None:
    assignment = {}
    for c, arity in source.connectives.items():
        phi = random_formula_in_slice(rng, target, arity, max_compl)
        if phi is None:
            return None
        assignment[c] = phi
    return FlexibleMorphism(source, target, assignment)


def random_composable_pair(rng: random.Random, max_compl: int,
                           max_connectives: int = 3, max_arity: int = 2
                           ) -> tuple[FlexibleMorphism, FlexibleMorphism]:
    while True:
        a = random_signature(rng, max_connectives, max_arity, name="a")
        b = random_signature(rng, max_connectives, max_arity, name="b")
        c = random_signature(rng, max_connectives, max_arity, name="c")
        h1 = random_flexible(rng, a, b, max_compl)
        if h1 is None:
            continue
        h2 = random_flexible(rng, b, c, max_compl)
        if h2 is None:
            continue
        return h1, h2


def random_composable_triple(rng: random.Random, max_compl: int
                             ) -> tuple[FlexibleMorphism, FlexibleMorphism, FlexibleMorphism]:
    while True:
        h1, h2 = random_composable_pair(rng, max_compl)
        d = random_signature(rng, 3, 2, name="d")
        h3 = random_flexible(rng, h2.target, d, max_compl)
        if h3 is not None:
            return h1, h2, h3


def all_flexible_morphisms(source: Signature, target: Signature, max_compl: int
                           ) -> list[FlexibleMorphism]:
    """Every flexible morphism whose assignments stay within the bound."""
    items = sorted(source.connectives.items())
    pools = []
    for c, arity in items:
        pool = enumerate_slice(target, arity, max_compl)
        if not pool:
            return []
        pools.append(pool)
    out = []
    for combo in _cartesian(pools):
        out.append(FlexibleMorphism(
            source, target, {c: phi for (c, _), phi in zip(items, combo)}))
    return out


def all_strict_morphisms(source: Signature, target: Signature) -> list[StrictMorphism]:
    items = sorted(source.connectives.items())
    pools = []
    for c, arity in items:
        pool = target.level(arity)
        if not pool:
            return []
        pools.append(pool)
    out = []
    for combo in _cartesian(pools):
        out.append(StrictMorphism(
            source, target, {c: d for (c, _), d in zip(items, combo)}))
    return out


def _cartesian(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _cartesian(pools[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# Law suites (report dicts shared by tests and the CLI)


def suite_category_laws(cases: int, seed: int, max_compl: int = 3) -> dict:
    """Unit and associativity of Kleisli composition on random triples."""
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        h1, h2, h3 = random_composable_triple(rng, max_compl)
        ident_s = kleisli_identity(h1.source)
        ident_t = kleisli_identity(h1.target)
        if kleisli_compose(h1, ident_s) != h1 or kleisli_compose(ident_t, h1) != h1:
            failures.append({"case": case, "inputs": {"h1": h1.to_json()},
                             "lhs": "h1 . id", "rhs": "h1"})
        left = kleisli_compose(kleisli_compose(h3, h2), h1)
        right = kleisli_compose(h3, kleisli_compose(h2, h1))
        if left != right:
            failures.append({
                "case": case,
                "inputs": {"h1": h1.to_json(), "h2": h2.to_json(), "h3": h3.to_json()},
                "lhs": repr(left), "rhs": repr(right),
            })
    return {"suite": "category", "seed": seed, "cases": cases, "failures": failures}


def suite_kleisli_theorem(cases: int, seed: int, max_compl: int = 3) -> dict:
    rng = random.Random(seed)
    pairs = [random_composable_pair(rng, max_compl) for _ in range(cases)]
    report = check_kleisli_theorem(pairs, seed=seed)
    return report


def suite_monad_laws(cases: int, seed: int, compl_bound: int = 2) -> dict:
    """Pointwise unit and associativity of flattening on sampled elements."""
    rng = random.Random(seed)
    failures = []
    bases = [
        Signature("m1", {"u": 1}),
        Signature("m2", {"b": 2}),
        Signature("m3", {"u": 1, "b": 2}),
        Signature("m4", {"e": 0, "b": 2}),
        Signature("m5", {"e": 0, "u": 1, "b": 2}),
    ]
    truncs = [truncate_slices(base, compl_bound, 2) for base in bases]
    done = 0
    while done < cases:
        t1 = truncs[rng.randrange(len(truncs))]
        idents = sorted(t1.decode)
        phi = t1.decode[idents[rng.randrange(len(idents))]]
        done += 1
        n = len(variables(phi))
        # left unit: wrap phi as an application of its own encoding, flatten
        applied = App(fmt(phi), tuple(Var(i) for i in range(n)))
        left = flatten(applied, t1.decode)
        if left != phi:
            failures.append({"case": done, "inputs": {"formula": fmt(phi)},
                             "lhs": fmt(left), "rhs": fmt(phi)})
        # right unit: re-encode every base head c as the slice head c(x0..)
        right = flatten(_unit_reencode(phi), t1.decode)
        if right != phi:
            failures.append({"case": done, "inputs": {"formula": fmt(phi)},
                             "lhs": fmt(right), "rhs": fmt(phi)})
        # associativity: a two-level element whose heads encode slice formulas
        phi_outer = _sample_over_slices(rng, t1)
        t2_decode = {fmt(phi_outer): phi_outer}
        args: list[Formula] = []
        for i in range(len(variables(phi_outer))):
            if rng.random() < 0.5:
                inner = _sample_over_slices(rng, t1)
                t2_decode[fmt(inner)] = inner
                args.append(App(fmt(inner),
                                tuple(Var(j) for j in range(len(variables(inner))))))
            else:
                args.append(Var(i))
        psi = App(fmt(phi_outer), tuple(args))
        path_b = flatten(flatten(psi, t2_decode), t1.decode)
        path_a = _flatten_outer_first(psi, t2_decode, t1)
        if path_a != path_b:
            failures.append({"case": done, "inputs": {"formula": fmt(psi)},
                             "lhs": fmt(path_a), "rhs": fmt(path_b)})
    return {"suite": "monad", "seed": seed, "cases": cases, "failures": failures}


def _unit_reencode(phi: Formula) -> Formula:
    """Replace each head c by the head 'c(x0..x_{n-1})' of the same arity."""
    if isinstance(phi, Var):
        return phi
    head = fmt(App(phi.connective, tuple(Var(i) for i in range(len(phi.args)))))
    return App(head, tuple(_unit_reencode(a) for a in phi.args))


def _sample_over_slices(rng: random.Random, t1: SliceTruncation) -> Formula:
    """A small formula whose heads are slice-signature connectives."""
    heads = sorted(t1.signature.connectives)
    outer = rng.choice(heads)
    arity = t1.signature.connectives[outer]
    args: list[Formula] = []
    next_var = 0
    for _ in range(arity):
        if rng.random() < 0.5:
            inner_pool = [h for h in heads if t1.signature.connectives[h] <= 1]
            if inner_pool:
                inner = rng.choice(inner_pool)
                in_arity = t1.signature.connectives[inner]
                inner_args = tuple(Var(next_var + i) for i in range(in_arity))
                next_var += in_arity
                args.append(App(inner, inner_args))
                continue
        args.append(Var(next_var))
        next_var += 1
    return App(outer, tuple(args))


def _flatten_outer_first(psi: Formula, t2_decode: dict[str, Formula],
                         t1: SliceTruncation) -> Formula:
    """Flatten each head down to the base first, then substitute arguments."""
    if isinstance(psi, Var):
        return psi
    over_t1 = t2_decode[psi.connective]
    head_in_base = flatten(over_t1, t1.decode)
    sigma = Substitution({
        i: _flatten_outer_first(a, t2_decode, t1) for i, a in enumerate(psi.args)
    })
    return substitute(sigma, head_in_base)


SLICE_KEY = sort_key
