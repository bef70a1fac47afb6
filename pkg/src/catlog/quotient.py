"""Interderivability quotients: morphism equivalence, congruential logics,
weak equivalences, rigidity probes and Lindenbaum equivalence sets.

Two parallel translations are identified when their extensions agree up to
mutual derivability.  For congruential targets the check at connective
generators settles the whole quotient map; otherwise verdicts are bounded
and say so.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .consequence import (
    Budget, Calculus, DEFAULT_BUDGET, Logic, Rule, Saturation, Verdict,
    derives, designation_function, interderivable, matrix_interderivable,
    truth_function,
)
from .formulas import (
    App, Formula, Substitution, Var, complexity, enumerate_formulas,
    enumerate_slice, fmt, substitute, variables,
)
from .kleisli import (
    FlexibleMorphism, all_flexible_morphisms, flexible_extension,
    kleisli_compose, kleisli_identity,
)
from .logic_cat import (
    Translation, VERIFIED, as_flexible, check_translation, translate_formula,
)
from .signatures import Signature, signature_coproduct


CONFIRMED = "confirmed"
REFUTED = "refuted"
UNKNOWN = "unknown"


def semantic_derives(logic: Logic, gamma, phi: Formula,
                     budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """Derivability with a matrix provider treated as the decision oracle.

    Quotient analyses quantify over many sequents at once; when the logic
    carries a matrix it stands in for the consequence relation exactly,
    instead of steering a bounded proof search per query.
    """
    if logic.matrix is not None:
        from .consequence import matrix_consequence
        holds, counter = matrix_consequence(logic.matrix, gamma, phi)
        if holds:
            return Verdict.yes(reason="matrix decision")
        return Verdict.no(counter={f"x{k}": v for k, v in counter.items()},
                          reason="matrix countervaluation")
    return derives(logic, gamma, phi, budget)


@dataclass
class EquivalenceCertificate:
    """Interderivability of two parallel morphisms, connective by connective."""

    left: FlexibleMorphism
    right: FlexibleMorphism
    status: str
    scope: str = ""  # "generator-sufficient" | "bounded-enumeration"
    per_connective: dict = field(default_factory=dict)
    witness: dict | None = None
    bounds: tuple | None = None

    @property
    def equivalent(self) -> bool:
        return self.status == CONFIRMED

    def to_json(self) -> dict:
        out = {
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "status": self.status,
            "scope": self.scope,
            "per_connective": self.per_connective,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.bounds is not None:
            out["bounds"] = list(self.bounds)
        return out


def morphisms_equivalent(f, g, source: Logic, target: Logic,
                         budget: Budget = DEFAULT_BUDGET,
                         bounds: tuple[int, int] = (3, 2),
                         target_congruential: bool | None = None
                         ) -> EquivalenceCertificate:
    """Do f and g induce the same map on the interderivability quotient?"""
    hf, hg = as_flexible(f), as_flexible(g)
    if hf.source != hg.source or hf.target != hg.target:
        raise ValueError("morphisms are not parallel")
    per_connective = {}
    unknown = False
    for c in sorted(hf.source.connectives):
        v = interderivable(target, hf(c), hg(c), budget)
        per_connective[c] = v.status
        if v.is_no:
            return EquivalenceCertificate(
                hf, hg, REFUTED, scope="generator",
                per_connective=per_connective,
                witness={"connective": c, "left": fmt(hf(c)), "right": fmt(hg(c)),
                         "counter": v.to_json().get("counter")})
        if v.is_unknown:
            unknown = True
    if target_congruential is None:
        target_congruential = (
            is_congruential(target, bounds, budget).status == CONFIRMED
            if target.matrix is not None or target.decides else False)
    if target_congruential:
        status = UNKNOWN if unknown else CONFIRMED
        return EquivalenceCertificate(hf, hg, status, scope="generator-sufficient",
                                      per_connective=per_connective)
    # codomain not known congruential: sweep whole formulas up to the bound
    compl_bound, var_bound = bounds
    for theta in enumerate_formulas(hf.source, var_bound, compl_bound):
        v = interderivable(target, flexible_extension(hf, theta),
                           flexible_extension(hg, theta), budget)
        if v.is_no:
            return EquivalenceCertificate(
                hf, hg, REFUTED, scope="bounded-enumeration",
                per_connective=per_connective, bounds=bounds,
                witness={"formula": fmt(theta),
                         "counter": v.to_json().get("counter")})
        if v.is_unknown:
            unknown = True
    status = UNKNOWN if unknown else CONFIRMED
    return EquivalenceCertificate(hf, hg, status, scope="bounded-enumeration",
                                  per_connective=per_connective, bounds=bounds)


# ---------------------------------------------------------------------------
# Congruentiality


@dataclass
class CongruentialityVerdict:
    status: str
    bounds: tuple[int, int]
    witness: dict | None = None
    pairs_checked: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status, "bounds": list(self.bounds),
               "pairs_checked": self.pairs_checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def is_congruential(logic: Logic, bounds: tuple[int, int] = (4, 2),
                    budget: Budget = DEFAULT_BUDGET) -> CongruentialityVerdict:
    """Replacement compatibility of interderivability, tested at the bounds.

    With a matrix provider only pairs whose value functions differ inside a
    shared designation class can refute, which keeps the sweep small.
    """
    compl_bound, var_bound = bounds
    sig = logic.signature
    pool = enumerate_formulas(sig, var_bound, compl_bound)
    if logic.matrix is not None:
        return _matrix_congruential(logic, pool, bounds, var_bound)
    pairs = 0
    unknown = False
    inter: list[tuple[Formula, Formula]] = []
    for a, b in itertools.combinations(pool, 2):
        v = interderivable(logic, a, b, budget)
        if v.is_yes:
            inter.append((a, b))
        elif v.is_unknown:
            unknown = True
    for a, b in inter:
        bad = _replacement_counterexample(logic, a, b, var_bound, budget)
        pairs += 1
        if bad is not None:
            return CongruentialityVerdict(REFUTED, bounds, witness=bad,
                                          pairs_checked=pairs)
        if bad is None and unknown:
            pass
    status = UNKNOWN if unknown else CONFIRMED
    return CongruentialityVerdict(status, bounds, pairs_checked=pairs)


def _matrix_congruential(logic: Logic, pool: list[Formula],
                         bounds: tuple[int, int], n: int) -> CongruentialityVerdict:
    matrix = logic.matrix
    by_designation: dict[tuple, dict[tuple, Formula]] = {}
    for phi in pool:
        tf = truth_function(matrix, phi, n)
        des = tuple(matrix.is_designated(v) for v in tf)
        by_designation.setdefault(des, {}).setdefault(tf, phi)
    pairs = 0
    for des_class in by_designation.values():
        reps = sorted(des_class.values(), key=fmt)
        for a, b in itertools.combinations(reps, 2):
            pairs += 1
            bad = _replacement_counterexample(logic, a, b, n, DEFAULT_BUDGET)
            if bad is not None:
                return CongruentialityVerdict(REFUTED, bounds, witness=bad,
                                              pairs_checked=pairs)
    return CongruentialityVerdict(CONFIRMED, bounds, pairs_checked=pairs)


def _replacement_counterexample(logic: Logic, a: Formula, b: Formula, n: int,
                                budget: Budget) -> dict | None:
    """Try every connective and argument position with fresh side variables."""
    for c, arity in sorted(logic.signature.connectives.items()):
        for position in range(arity):
            fresh = iter(range(n, n + arity))
            args_a = []
            args_b = []
            for j in range(arity):
                if j == position:
                    args_a.append(a)
                    args_b.append(b)
                else:
                    v = Var(next(fresh))
                    args_a.append(v)
                    args_b.append(v)
            ctx_a = App(c, tuple(args_a))
            ctx_b = App(c, tuple(args_b))
            v = interderivable(logic, ctx_a, ctx_b, budget)
            if v.is_no:
                return {"connective": c, "position": position,
                        "left": fmt(a), "right": fmt(b),
                        "context_left": fmt(ctx_a), "context_right": fmt(ctx_b),
                        "counter": v.to_json().get("counter")}
    return None


def congruential_closure(logic: Logic, bounds: tuple[int, int] = (3, 1),
                         budget: Budget = DEFAULT_BUDGET,
                         name: str = "") -> Logic:
    """Extend a presented logic with replacement-derived two-way rules.

    One forward-saturation sweep discovers the interderivable pairs of the
    bounded pool; the induced partition is then closed symbolically under
    one-layer connective contexts and transitivity until it stabilizes.
    Each class contributes member-to-representative rule schemes, and
    context pairs that leave the pool contribute their own rules.  The
    result is a sound under-approximation of the congruential closure and
    keeps the signature unchanged.
    """
    if logic.matrix is not None:
        verdict = is_congruential(logic, (max(bounds[0], 3), max(bounds[1], 1)))
        if verdict.status == CONFIRMED:
            return logic  # already a fixpoint at the tested bounds
    if logic.calculus is None:
        raise ValueError("congruential closure needs a presented calculus")
    compl_bound, var_bound = bounds
    sig = logic.signature
    pool = enumerate_formulas(sig, var_bound, compl_bound)
    pool_set = set(pool)
    seed_pool = enumerate_formulas(sig, var_bound, 2)
    from .formulas import sort_key
    parent: dict[Formula, Formula] = {phi: phi for phi in pool}

    def find(phi: Formula) -> Formula:
        while parent[phi] != phi:
            parent[phi] = parent[parent[phi]]
            phi = parent[phi]
        return phi

    def union(a: Formula, b: Formula) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        lo, hi = sorted((ra, rb), key=sort_key)
        parent[hi] = lo
        return True

    base = Saturation(logic.calculus, seed_pool)
    reach: dict[Formula, Saturation] = {}
    for phi in pool:
        fork = base.fork()
        fork.extend([phi])
        reach[phi] = fork
    for a, b in itertools.combinations(pool, 2):
        if b in reach[a] and a in reach[b]:
            union(a, b)
    # context fixpoint inside the pool: equivalent arguments make contexts
    # equivalent, which can merge further classes
    changed = True
    while changed:
        changed = False
        for a in pool:
            r = find(a)
            if r == a:
                continue
            for ca, cb in _context_pairs(sig, a, r, compl_bound + 1):
                if ca in pool_set and cb in pool_set:
                    if union(ca, cb):
                        changed = True
    rules: list[Rule] = []
    seen: set[tuple[Formula, Formula]] = set()

    def emit(a: Formula, b: Formula) -> None:
        if (a, b) in seen or a == b:
            return
        seen.add((a, b))
        rules.append(Rule((a,), b))
        rules.append(Rule((b,), a))

    for a in pool:
        r = find(a)
        if r == a:
            continue
        emit(a, r)
        for ca, cb in _context_pairs(sig, a, r, compl_bound + 1):
            if ca in pool_set and cb in pool_set:
                continue  # already identified inside the pool
            emit(ca, cb)
    if not rules:
        return logic
    calc = logic.calculus.extended(rules=rules)
    return Logic(name or f"closure({logic.name})", sig, calculus=calc)


def _context_pairs(sig: Signature, a: Formula, b: Formula, cap: int):
    """One-connective contexts around a pair, fresh variables elsewhere."""
    n = max([i + 1 for i in variables(a) | variables(b)] or [0])
    for c, arity in sorted(sig.connectives.items()):
        for position in range(arity):
            args_a, args_b = [], []
            fresh = iter(range(n, n + arity))
            for j in range(arity):
                if j == position:
                    args_a.append(a)
                    args_b.append(b)
                else:
                    v = Var(next(fresh))
                    args_a.append(v)
                    args_b.append(v)
            ca, cb = App(c, tuple(args_a)), App(c, tuple(args_b))
            if complexity(ca) <= cap and complexity(cb) <= cap:
                yield ca, cb


# ---------------------------------------------------------------------------
# Weak equivalence (conservative + dense translations)


@dataclass
class WeakEquivalenceCertificate:
    morphism: FlexibleMorphism
    status: str
    conservativity: str = ""   # "connective-tables" | "bounded-audit"
    denseness: dict = field(default_factory=dict)  # n -> {class: witness}
    audited_sequents: int = 0
    witness: dict | None = None
    bounds: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.status == CONFIRMED

    def to_json(self) -> dict:
        out = {
            "morphism": self.morphism.to_json(),
            "status": self.status,
            "conservativity": self.conservativity,
            "denseness": {
                str(n): {str(k): v for k, v in per_n.items()}
                for n, per_n in self.denseness.items()
            },
            "audited_sequents": self.audited_sequents,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.bounds is not None:
            out["bounds"] = list(self.bounds)
        return out


def weak_equivalence(h, source: Logic, target: Logic,
                     n_max: int = 2, target_compl: int = 4,
                     source_compl: int = 10, audit: int = 60, seed: int = 0,
                     budget: Budget = DEFAULT_BUDGET) -> WeakEquivalenceCertificate:
    """Certify that h is conservative and dense, or refute it.

    Conservativity is exact at the level of connective truth tables when both
    logics carry matrices over the same values; denseness searches source
    formulas by image truth function (breadth-first over functions, so every
    realizable class is found regardless of formula size).
    """
    hf = as_flexible(h)
    exact_tables = (
        source.matrix is not None and target.matrix is not None
        and tuple(source.matrix.values) == tuple(target.matrix.values)
        and source.matrix.designated == target.matrix.designated
    )
    conservativity = ""
    witness = None
    if exact_tables:
        for c, arity in sorted(hf.source.connectives.items()):
            image_tf = truth_function(target.matrix, hf(c), arity)
            table = source.matrix.tables[c]
            own_tf = tuple(table[combo] for combo in
                           itertools.product(source.matrix.values, repeat=arity))
            if image_tf != own_tf:
                witness = {"connective": c, "source_table": [str(v) for v in own_tf],
                           "image_table": [str(v) for v in image_tf]}
                break
        if witness is None:
            conservativity = "connective-tables"
    if not conservativity:
        ok, audit_witness, audited = _conservativity_audit(
            hf, source, target, n_max, seed, audit, budget)
        if ok is False:
            return WeakEquivalenceCertificate(
                hf, REFUTED, conservativity="bounded-audit",
                witness=witness or audit_witness,
                bounds=(n_max, target_compl, source_compl))
        if witness is not None:
            return WeakEquivalenceCertificate(
                hf, REFUTED, conservativity="connective-tables", witness=witness,
                bounds=(n_max, target_compl, source_compl))
        conservativity = "bounded-audit"
        audited = audited
    else:
        audited = 0
    denseness: dict[int, dict] = {}
    for n in range(n_max + 1):
        found, missing, classes = _denseness_search(
            hf, source, target, n, target_compl, source_compl, budget)
        if missing is not None:
            return WeakEquivalenceCertificate(
                hf, REFUTED, conservativity=conservativity,
                denseness=denseness, witness=missing,
                bounds=(n_max, target_compl, source_compl))
        denseness[n] = {"targets": found, "classes": classes}
    return WeakEquivalenceCertificate(
        hf, CONFIRMED, conservativity=conservativity, denseness=denseness,
        audited_sequents=audited, bounds=(n_max, target_compl, source_compl))


def _conservativity_audit(hf, source, target, n_max, seed, audit, budget):
    rng = random.Random(seed)
    pool = enumerate_formulas(hf.source, n_max, 3)
    if not pool:
        return True, None, 0
    audited = 0
    undecided = False
    for _ in range(audit):
        gamma = [pool[rng.randrange(len(pool))]
                 for _ in range(rng.randint(0, 2))]
        phi = pool[rng.randrange(len(pool))]
        v_src = derives(source, gamma, phi, budget)
        v_tgt = derives(target, [flexible_extension(hf, g) for g in gamma],
                        flexible_extension(hf, phi), budget)
        audited += 1
        if v_src.is_yes and v_tgt.is_no:
            return False, {"sequent": [fmt(g) for g in gamma] + ["|-", fmt(phi)],
                           "direction": "forward"}, audited
        if v_src.is_no and v_tgt.is_yes:
            return False, {"sequent": [fmt(g) for g in gamma] + ["|-", fmt(phi)],
                           "direction": "backward"}, audited
        if v_src.is_unknown or v_tgt.is_unknown:
            undecided = True
    return (None if undecided else True), None, audited


def _denseness_search(hf, source: Logic, target: Logic, n: int,
                      target_compl: int, source_compl: int, budget: Budget):
    """Find a source preimage (up to interderivability) for every bounded
    target slice formula; also report every interderivability class the
    images realize."""
    targets = enumerate_slice(target.signature, n, target_compl)
    if target.matrix is not None:
        return _denseness_by_functions(hf, target, n, targets, source_compl)
    if not targets:
        return {}, None, {}
    # fall back to direct bounded search with derivability queries
    found: dict[str, str] = {}
    candidates = enumerate_slice(hf.source, n, min(source_compl, 4))
    images = [(theta, flexible_extension(hf, theta)) for theta in candidates]
    for tprime in targets:
        hit = None
        for theta, image in images:
            v = interderivable(target, tprime, image, budget)
            if v.is_yes:
                hit = theta
                break
        if hit is None:
            return found, {"missing": fmt(tprime), "mode": "bounded-search"}, {}
        found[fmt(tprime)] = fmt(hit)
    return found, None, {}


def _denseness_by_functions(hf, target: Logic, n: int, targets, source_compl: int):
    """Breadth-first over image truth functions of source slice formulas."""
    matrix = target.matrix
    src_sig = hf.source
    # state: (frozen varset, image truth function over n variables)
    n_val = len(matrix.values) ** n
    best: dict[tuple, Formula] = {}
    frontier: list[tuple[tuple, Formula]] = []

    def push(state, formula):
        if state not in best:
            best[state] = formula
            frontier.append((state, formula))

    for i in range(n):
        func = truth_function(matrix, Var(i), n)
        push((frozenset((i,)), func), Var(i))
    for c, arity in sorted(src_sig.connectives.items()):
        if arity == 0:
            func = truth_function(matrix, hf(c), n)
            push((frozenset(), func), App(c, ()))
    # image functions compose through the translated connective tables
    ops = {}
    for c, arity in sorted(src_sig.connectives.items()):
        if arity > 0:
            table = {}
            for combo in itertools.product(matrix.values, repeat=arity):
                table[combo] = matrix.evaluate(
                    hf(c), dict(zip(range(arity), combo)))
            ops[c] = (arity, table)
    states = list(best.items())
    for _ in range(source_compl):
        new_items = []
        for c, (arity, table) in sorted(ops.items()):
            pools = [states] * arity
            for combo in itertools.product(*pools):
                varset = frozenset().union(*[s[0][0] for s in combo])
                func = tuple(table[tuple(s[0][1][t] for s in combo)]
                             for t in range(n_val))
                state = (varset, func)
                if state not in best:
                    formula = App(c, tuple(s[1] for s in combo))
                    if complexity(formula) <= source_compl:
                        best[state] = formula
                        new_items.append((state, formula))
        if not new_items:
            break
        states = list(best.items())
    full = frozenset(range(n))
    by_designation: dict[tuple, Formula] = {}
    for (varset, func), formula in best.items():
        if varset == full:
            des = tuple(matrix.is_designated(v) for v in func)
            by_designation.setdefault(des, formula)
    classes = {
        "".join("1" if d else "0" for d in des): fmt(theta)
        for des, theta in sorted(by_designation.items())
    }
    found = {}
    for tprime in targets:
        des = designation_function(matrix, tprime, n)
        theta = by_designation.get(des)
        if theta is None:
            return found, {"missing": fmt(tprime),
                           "class": "".join("1" if d else "0" for d in des),
                           "mode": "function-search"}, classes
        found[fmt(tprime)] = fmt(theta)
    return found, None, classes


def compose_weak_equivalences(outer: WeakEquivalenceCertificate,
                              inner: WeakEquivalenceCertificate,
                              ) -> WeakEquivalenceCertificate:
    """Certificates compose; bounds intersect, denseness witnesses chain."""
    if not (outer.holds and inner.holds):
        raise ValueError("can only compose confirmed certificates")
    composite = kleisli_compose(outer.morphism, inner.morphism)
    bounds = tuple(min(a, b) for a, b in zip(inner.bounds, outer.bounds)) \
        if inner.bounds and outer.bounds else None
    return WeakEquivalenceCertificate(
        composite, CONFIRMED,
        conservativity=f"composed({inner.conservativity},{outer.conservativity})",
        denseness={}, bounds=bounds)


# ---------------------------------------------------------------------------
# Rigidity, Lindenbaum sets, directed colimits in the quotient


def rigidity_probe(logic: Logic, bound: int = 3,
                   budget: Budget = DEFAULT_BUDGET) -> dict:
    """Enumerate verified endo-translations and test each against identity."""
    sig = logic.signature
    ident = kleisli_identity(sig)
    endos = all_flexible_morphisms(sig, sig, bound)
    verified = 0
    non_rigid = []
    identity_found = False
    for h in endos:
        if h == ident:
            identity_found = True
        if logic.calculus is not None:
            status = check_translation(h, logic, logic, budget,
                                       semantic=logic.matrix is not None).status
        elif logic.decides:
            status = _sampled_translation_status(h, logic, budget)
        else:
            status = UNKNOWN
        if status != VERIFIED:
            continue
        verified += 1
        cert = morphisms_equivalent(h, ident, logic, logic, budget)
        if cert.status == REFUTED:
            non_rigid.append({"morphism": h.to_json(), "witness": cert.witness})
    return {
        "endomorphisms": len(endos),
        "verified_translations": verified,
        "identity_enumerated": identity_found,
        "rigid": not non_rigid,
        "non_rigid_witnesses": non_rigid,
        "bound": bound,
    }


def _sampled_translation_status(h, logic: Logic, budget: Budget,
                                samples: int = 40, seed: int = 11) -> str:
    rng = random.Random(seed)
    pool = enumerate_formulas(logic.signature, 2, 2)
    if not pool:
        return VERIFIED
    for _ in range(samples):
        gamma = [pool[rng.randrange(len(pool))] for _ in range(rng.randint(0, 2))]
        phi = pool[rng.randrange(len(pool))]
        v = derives(logic, gamma, phi, budget)
        if not v.is_yes:
            continue
        image = derives(logic, [flexible_extension(as_flexible(h), g) for g in gamma],
                        flexible_extension(as_flexible(h), phi), budget)
        if image.is_no:
            return REFUTED
        if image.is_unknown:
            return UNKNOWN
    return VERIFIED


def lindenbaum_delta_check(logic: Logic, delta: list[Formula],
                           budget: Budget = DEFAULT_BUDGET,
                           bounds: tuple[int, int] = (2, 2)) -> dict:
    """Check the five conditions on a candidate equivalence set of binary
    formulas: reflexivity, symmetry, transitivity, replacement, and the
    biconditional tying provable equivalence to interderivability."""
    sig = logic.signature
    full = frozenset((0, 1))
    for d in delta:
        if variables(d) != full:
            raise ValueError(f"{fmt(d)} is not in the binary slice")

    def inst(d: Formula, left: Formula, right: Formula) -> Formula:
        return substitute(Substitution({0: left, 1: right}), d)

    verdicts: dict[str, dict] = {}

    def record(key: str, ok: bool | None, witness=None):
        verdicts[key] = {"status": CONFIRMED if ok else (UNKNOWN if ok is None else REFUTED)}
        if witness is not None:
            verdicts[key]["witness"] = witness

    x0, x1, x2 = Var(0), Var(1), Var(2)

    def run(premises, conclusion):
        return semantic_derives(logic, premises, conclusion, budget)

    # (a) reflexivity
    ok: bool | None = True
    witness = None
    for d in delta:
        v = run([], inst(d, x0, x0))
        if v.is_no:
            ok, witness = False, {"formula": fmt(inst(d, x0, x0)),
                                  "counter": v.to_json().get("counter")}
            break
        if v.is_unknown:
            ok = None
    record("a_reflexive", ok, witness)
    # (b) symmetry
    ok, witness = True, None
    premises = [inst(d, x0, x1) for d in delta]
    for d in delta:
        v = run(premises, inst(d, x1, x0))
        if v.is_no:
            ok, witness = False, {"conclusion": fmt(inst(d, x1, x0)),
                                  "counter": v.to_json().get("counter")}
            break
        if v.is_unknown:
            ok = None
    record("b_symmetric", ok, witness)
    # (c) transitivity
    ok, witness = True, None
    premises = [inst(d, x0, x1) for d in delta] + [inst(d, x1, x2) for d in delta]
    for d in delta:
        v = run(premises, inst(d, x0, x2))
        if v.is_no:
            ok, witness = False, {"conclusion": fmt(inst(d, x0, x2)),
                                  "counter": v.to_json().get("counter")}
            break
        if v.is_unknown:
            ok = None
    record("c_transitive", ok, witness)
    # (d) replacement under every connective
    ok, witness = True, None
    for c, arity in sorted(sig.connectives.items()):
        if not ok or arity == 0:
            continue
        premises = [inst(d, Var(i), Var(arity + i))
                    for i in range(arity) for d in delta]
        left = App(c, tuple(Var(i) for i in range(arity)))
        right = App(c, tuple(Var(arity + i) for i in range(arity)))
        for d in delta:
            v = run(premises, inst(d, left, right))
            if v.is_no:
                ok, witness = False, {"connective": c,
                                      "counter": v.to_json().get("counter")}
                break
            if v.is_unknown:
                ok = None
    record("d_replacement", ok, witness)
    # (e) interderivable iff the equivalence set is provable, on a bounded sweep
    compl_bound, var_bound = bounds
    pool = enumerate_formulas(sig, var_bound, compl_bound)
    ok, witness = True, None
    for phi, psi in itertools.combinations(pool, 2):
        inter = interderivable(logic, phi, psi, budget)
        provable: bool | None = True
        for d in delta:
            v = run([], inst(d, phi, psi))
            if v.is_no:
                provable = False
                break
            if v.is_unknown:
                provable = None
        if inter.is_yes and provable is False:
            ok = False
            witness = {"pair": [fmt(phi), fmt(psi)], "direction": "inter->delta"}
            break
        if inter.is_no and provable is True:
            ok = False
            witness = {"pair": [fmt(phi), fmt(psi)], "direction": "delta->inter"}
            break
        if inter.is_unknown or provable is None:
            ok = None
    record("e_lindenbaum", ok, witness)
    passed = all(v["status"] == CONFIRMED for v in verdicts.values())
    return {"delta": [fmt(d) for d in delta], "conditions": verdicts,
            "passed": passed}


def qfc_directed_colimit(stages: list[Logic], maps: list[Translation],
                         bounds: tuple[int, int] = (3, 1),
                         budget: Budget = DEFAULT_BUDGET, name: str = ""
                         ) -> tuple[Logic, list[Translation]]:
    """Directed colimit in the congruential-quotient setting, for chains.

    The vertex signature is the tagged coproduct of all stage signatures; a
    sequent holds when some late enough stage derives its stage translation,
    where tagged connectives unfold through the chain's extensions.
    """
    if len(maps) != len(stages) - 1:
        raise ValueError("need one chain map per consecutive stage pair")
    sigs = [l.signature for l in stages]
    vertex_sig, injections = signature_coproduct(
        sigs, name=name or "qfc_colim")
    flex = [as_flexible(t.morphism) for t in maps]
    # composite[i][j]: stage i assignment pushed to stage j (i <= j)
    n = len(stages)
    composite: list[list[FlexibleMorphism | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        composite[i][i] = kleisli_identity(sigs[i])
        for j in range(i + 1, n):
            composite[i][j] = kleisli_compose(flex[j - 1], composite[i][j - 1])
    decode = {}
    for i, inj in enumerate(injections):
        for c in sigs[i].connectives:
            decode[inj(c)] = (i, c)
    closed = None
    if all(l.calculus is not None for l in stages):
        # the vertex also carries the congruential closure of the pushed
        # presentations, used when no stage settles a query
        from .signatures import strict_extension
        axioms = []
        rules = []
        for inj, stage in zip(injections, stages):
            axioms.extend(strict_extension(inj, a) for a in stage.calculus.axioms)
            rules.extend(
                Rule(tuple(strict_extension(inj, q) for q in r.premises),
                     strict_extension(inj, r.conclusion))
                for r in stage.calculus.rules
            )
        union_logic = Logic("union", vertex_sig,
                            calculus=Calculus(vertex_sig, axioms, rules))
        closed = congruential_closure(union_logic, bounds, budget,
                                      name="closed_union")

    def to_stage(phi: Formula, j: int) -> Formula:
        if isinstance(phi, Var):
            return phi
        stage, c = decode[phi.connective]
        if stage > j:
            raise ValueError("formula mentions a stage beyond the requested one")
        body = composite[stage][j](c)
        sigma = Substitution({k: to_stage(a, j) for k, a in enumerate(phi.args)})
        return substitute(sigma, body)

    def min_stage(phi: Formula) -> int:
        if isinstance(phi, Var):
            return 0
        own = decode[phi.connective][0]
        return max([own] + [min_stage(a) for a in phi.args])

    def oracle(gamma, phi, budget):
        start = max([min_stage(phi)] + [min_stage(g) for g in gamma])
        unknown = False
        for j in range(start, n):
            v = derives(stages[j], [to_stage(g, j) for g in gamma],
                        to_stage(phi, j), budget)
            if v.is_yes:
                return Verdict.yes(proof=v.proof, stage=j,
                                   reason=f"derived at stage {j}")
            if v.is_unknown:
                unknown = True
        if not unknown and stages[-1].decides:
            last = derives(stages[-1], [to_stage(g, n - 1) for g in gamma],
                           to_stage(phi, n - 1), budget)
            return Verdict.no(counter=last.counter,
                              reason="refuted at the top stage")
        if closed is not None:
            v = derives(closed, gamma, phi, budget)
            if v.is_yes:
                return Verdict.yes(proof=v.proof,
                                   reason="closure of the pushed presentations")
        return Verdict.unknown(reason="no stage settled the translation")

    vertex = Logic(name or "qfc_colim(" + ",".join(l.name for l in stages) + ")",
                   vertex_sig, oracle=oracle,
                   decides=all(l.decides for l in stages))
    cocone = []
    for i, inj in enumerate(injections):
        cocone.append(Translation(inj, stages[i], vertex, VERIFIED,
                                  evidence=["stage translation is the identity "
                                            "on injected formulas"]))
    return vertex, cocone
