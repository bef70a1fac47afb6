"""Translations between logics and their combination constructions.

A translation is a signature morphism that preserves derivability.  Checking
happens on the generating presentation: every axiom image must be derivable
and every rule image admissible in the target.  Combinations (fibring,
constrained fibring, products, directed colimits) build the signature part
first and then equip it with a presented calculus or a delegating oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .consequence import (
    AxiomInstance, Budget, Calculus, DEFAULT_BUDGET, Hypothesis, Logic, Proof,
    Rule, RuleInstance, SignatureMismatch, Step, Verdict, derives,
    transform_proof, verify_proof,
)
from .formulas import Formula, Substitution, Var, fmt, substitute, variables
from .kleisli import FlexibleMorphism, flexible_extension, kleisli_compose, lift_strict
from .signatures import (
    Signature, StrictMorphism, UnsupportedConstruction, compose_strict,
    signature_coproduct, signature_product, signature_pushout, strict_extension,
)


def as_flexible(morphism) -> FlexibleMorphism:
    if isinstance(morphism, StrictMorphism):
        return lift_strict(morphism)
    return morphism


def translate_formula(morphism, phi: Formula) -> Formula:
    if isinstance(morphism, StrictMorphism):
        return strict_extension(morphism, phi)
    return flexible_extension(morphism, phi)


VERIFIED = "verified"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass
class Translation:
    """A signature morphism together with its derivability-preservation status."""

    morphism: object  # StrictMorphism | FlexibleMorphism
    source: Logic
    target: Logic
    status: str = UNKNOWN
    evidence: list = field(default_factory=list)
    witness: dict | None = None

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def to_json(self) -> dict:
        out = {
            "morphism": self.morphism.to_json(),
            "source": self.source.name,
            "target": self.target.name,
            "status": self.status,
        }
        if self.evidence:
            serialized = []
            for e in self.evidence:
                if isinstance(e, dict):
                    e = {k: (v.to_json() if isinstance(v, Proof) else v)
                         for k, v in e.items()}
                    serialized.append(e)
                else:
                    serialized.append(str(e))
            out["evidence"] = serialized
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_translation(morphism, source: Logic, target: Logic,
                      budget: Budget = DEFAULT_BUDGET,
                      semantic: bool = False) -> Translation:
    """Decide translation-hood on the generating presentation of the source.

    Verified when every translated axiom is target-derivable and every
    translated rule is target-admissible as a derivable rule.  A target
    refutation of any image refutes the whole morphism, with the offending
    scheme as witness.  With `semantic=True` a target matrix decides the
    image checks outright instead of steering a proof search.
    """
    if source.calculus is None:
        raise ValueError("translation checking needs a presented source")
    h = morphism
    if _morphism_source(h) != source.signature or _morphism_target(h) != target.signature:
        raise SignatureMismatch("morphism endpoints do not match the logics")

    def target_derives(gamma, phi):
        if semantic and target.matrix is not None:
            from .consequence import matrix_consequence
            holds, counter = matrix_consequence(target.matrix, gamma, phi)
            if holds:
                return Verdict.yes(reason="matrix decision")
            return Verdict.no(counter={f"x{k}": v for k, v in counter.items()})
        return derives(target, gamma, phi, budget)

    evidence = []
    unknown = False
    for i, axiom in enumerate(source.calculus.axioms):
        image = translate_formula(h, axiom)
        v = target_derives([], image)
        if v.is_no:
            return Translation(h, source, target, REFUTED,
                               witness={"axiom": fmt(axiom), "image": fmt(image),
                                        "counter": v.to_json().get("counter")})
        if v.is_unknown:
            unknown = True
        evidence.append({"axiom": i, "image": fmt(image), "verdict": v.status,
                         "proof": v.proof})
    for i, rule in enumerate(source.calculus.rules):
        premises = [translate_formula(h, p) for p in rule.premises]
        conclusion = translate_formula(h, rule.conclusion)
        v = target_derives(premises, conclusion)
        if v.is_no:
            return Translation(h, source, target, REFUTED,
                               witness={"rule": i,
                                        "premise_images": [fmt(p) for p in premises],
                                        "conclusion_image": fmt(conclusion),
                                        "counter": v.to_json().get("counter")})
        if v.is_unknown:
            unknown = True
        evidence.append({"rule": i, "conclusion_image": fmt(conclusion),
                         "verdict": v.status, "proof": v.proof})
    status = UNKNOWN if unknown else VERIFIED
    return Translation(h, source, target, status, evidence=evidence)


def _morphism_source(m) -> Signature:
    return m.source


def _morphism_target(m) -> Signature:
    return m.target


# ---------------------------------------------------------------------------
# Inverse and direct image


def inverse_image(morphism, target: Logic, name: str = "") -> Logic:
    """Pull the target's consequence back along the morphism."""

    def oracle(gamma, phi, budget):
        image_gamma = [translate_formula(morphism, g) for g in gamma]
        image_phi = translate_formula(morphism, phi)
        return derives(target, image_gamma, image_phi, budget)

    return Logic(name or f"{target.name}^*", _morphism_source(morphism),
                 oracle=oracle, decides=target.decides)


def direct_image(morphism, source: Logic, name: str = "") -> Logic:
    """Push a presented consequence forward along the morphism."""
    if source.calculus is None:
        raise ValueError("direct image needs a presented source")
    sig = _morphism_target(morphism)
    axioms = [translate_formula(morphism, a) for a in source.calculus.axioms]
    rules = [
        Rule(tuple(translate_formula(morphism, p) for p in r.premises),
             translate_formula(morphism, r.conclusion))
        for r in source.calculus.rules
    ]
    return Logic(name or f"{source.name}_*", sig,
                 calculus=Calculus(sig, axioms, rules))


def bottom(sig: Signature, name: str = "") -> Logic:
    """Least consequence relation: membership only."""

    def oracle(gamma, phi, budget):
        if phi in gamma:
            proof = Proof([Step(phi, Hypothesis())])
            return Verdict.yes(proof=None, reason="membership",
                               used=frozenset((phi,)), detail={"member": fmt(phi)})
        return Verdict.no(reason="not a member; the least logic proves nothing else")

    return Logic(name or f"bottom({sig.name})", sig, oracle=oracle, decides=True)


def top(sig: Signature, name: str = "") -> Logic:
    """Greatest consequence relation: everything follows."""

    def oracle(gamma, phi, budget):
        return Verdict.yes(reason="top logic", used=frozenset())

    return Logic(name or f"top({sig.name})", sig, oracle=oracle, decides=True)


# ---------------------------------------------------------------------------
# Proof transport along verified translations


def push_proof(translation: Translation, proof: Proof) -> Proof:
    """Translate a source proof into a target proof, splicing the evidence.

    Axiom steps are replaced by the recorded target proofs of the axiom
    images; rule steps by the recorded admissibility proofs, with their
    hypothesis steps wired to the already-built premise images.
    """
    if not translation.verified:
        raise ValueError("can only push proofs along verified translations")
    src_calc = translation.source.calculus
    h = translation.morphism
    axiom_proofs: dict[int, Proof] = {}
    rule_proofs: dict[int, Proof] = {}
    for entry in translation.evidence:
        if entry.get("proof") is None:
            continue
        if "axiom" in entry:
            axiom_proofs[entry["axiom"]] = entry["proof"]
        else:
            rule_proofs[entry["rule"]] = entry["proof"]

    steps: list[Step] = []
    index: dict[Formula, int] = {}

    def append(formula: Formula, justification) -> int:
        if formula in index:
            return index[formula]
        steps.append(Step(formula, justification))
        index[formula] = len(steps) - 1
        return index[formula]

    def splice(sub: Proof, premise_map: dict[Formula, int]) -> int:
        local: dict[int, int] = {}
        for i, step in enumerate(sub.steps):
            j = step.justification
            if isinstance(j, Hypothesis):
                if step.formula in premise_map:
                    local[i] = premise_map[step.formula]
                    continue
                local[i] = append(step.formula, j)
            elif isinstance(j, AxiomInstance):
                local[i] = append(step.formula, j)
            else:
                remapped = tuple(local[p] for p in j.premises)
                local[i] = append(step.formula,
                                  RuleInstance(j.rule, j.substitution, remapped))
        return local[len(sub.steps) - 1]

    for step in proof.steps:
        image = translate_formula(h, step.formula)
        j = step.justification
        if isinstance(j, Hypothesis):
            append(image, Hypothesis())
        elif isinstance(j, AxiomInstance):
            base = _raw_proof(axiom_proofs[j.axiom])
            pushed_sigma = _push_substitution(h, j.substitution)
            splice(transform_proof(base, pushed_sigma), {})
        else:
            rule = src_calc.rules[j.rule]
            base = _raw_proof(rule_proofs[j.rule])
            pushed_sigma = _push_substitution(h, j.substitution)
            transformed = transform_proof(base, pushed_sigma)
            premise_map = {}
            for prem_idx, pattern in zip(j.premises, rule.premises):
                prem_image = translate_formula(h, substitute(j.substitution, pattern))
                premise_map[prem_image] = index[prem_image]
            splice(transformed, premise_map)
    return Proof(steps)


def _raw_proof(p) -> Proof:
    if isinstance(p, Proof):
        return p
    raise TypeError("evidence entry does not carry a proof object")


def _push_substitution(h, sigma: Substitution) -> Substitution:
    """Translate every image of a substitution (extension-compatibility)."""
    return Substitution({
        v: translate_formula(h, sigma(v)) for v in sigma.mapping
    })


def compose_translations(outer: Translation, inner: Translation) -> Translation:
    """Composite translation; Verified composes without re-search."""
    if inner.target is not outer.source and inner.target.signature != outer.source.signature:
        raise SignatureMismatch("translations not composable")
    m_inner = as_flexible(inner.morphism)
    m_outer = as_flexible(outer.morphism)
    composite = kleisli_compose(m_outer, m_inner)
    if inner.verified and outer.verified:
        return Translation(composite, inner.source, outer.target, VERIFIED,
                           evidence=["composed from verified parts"])
    status = REFUTED if REFUTED in (inner.status, outer.status) else UNKNOWN
    return Translation(composite, inner.source, outer.target, status)


# ---------------------------------------------------------------------------
# Combination of logics


def verbatim_translation(morphism, source: Logic, target: Logic) -> Translation:
    """Injection-style translation whose images sit verbatim in the target.

    Builds one-step derivations (axiom instance / single rule application)
    instead of searching.
    """
    calc = target.calculus
    evidence = []
    for i, axiom in enumerate(source.calculus.axioms):
        image = translate_formula(morphism, axiom)
        idx = calc.axioms.index(image)
        proof = Proof([Step(image, AxiomInstance(idx, Substitution()))])
        evidence.append({"axiom": i, "image": fmt(image), "verdict": "yes",
                         "proof": proof})
    for i, rule in enumerate(source.calculus.rules):
        premises = [translate_formula(morphism, p) for p in rule.premises]
        conclusion = translate_formula(morphism, rule.conclusion)
        target_idx = calc.rules.index(Rule(tuple(premises), conclusion))
        steps = [Step(p, Hypothesis()) for p in premises]
        steps.append(Step(conclusion, RuleInstance(
            target_idx, Substitution(), tuple(range(len(premises))))))
        evidence.append({"rule": i, "conclusion_image": fmt(conclusion),
                         "verdict": "yes", "proof": Proof(steps)})
    return Translation(morphism, source, target, VERIFIED, evidence=evidence)


def fibring_unconstrained(l1: Logic, l2: Logic, name: str = ""
                          ) -> tuple[Logic, Translation, Translation]:
    """Coproduct of logics: disjoint signatures, union of presentations."""
    if l1.calculus is None or l2.calculus is None:
        raise ValueError("fibring needs presented components")
    sig, (in1, in2) = signature_coproduct([l1.signature, l2.signature],
                                          name=name or f"{l1.name}+{l2.name}")
    axioms = []
    rules = []
    for inj, logic in ((in1, l1), (in2, l2)):
        axioms.extend(strict_extension(inj, a) for a in logic.calculus.axioms)
        rules.extend(
            Rule(tuple(strict_extension(inj, p) for p in r.premises),
                 strict_extension(inj, r.conclusion))
            for r in logic.calculus.rules
        )
    combined = Logic(name or f"fibring({l1.name},{l2.name})", sig,
                     calculus=Calculus(sig, axioms, rules))
    t1 = verbatim_translation(in1, l1, combined)
    t2 = verbatim_translation(in2, l2, combined)
    return combined, t1, t2


def fibring_constrained(left_leg: Translation, right_leg: Translation,
                        name: str = "") -> tuple[Logic, Translation, Translation]:
    """Pushout of logics over a shared sublogic, for strict spans only."""
    f, g = left_leg.morphism, right_leg.morphism
    if not isinstance(f, StrictMorphism) or not isinstance(g, StrictMorphism):
        raise UnsupportedConstruction(
            "constrained fibring is only available over strict spans")
    if left_leg.source.signature != right_leg.source.signature:
        raise SignatureMismatch("span legs must share their source logic")
    l1, l2 = left_leg.target, right_leg.target
    if l1.calculus is None or l2.calculus is None:
        raise ValueError("constrained fibring needs presented components")
    sig, po_left, po_right = signature_pushout(f, g, name=name)
    axioms = []
    rules = []
    shared = left_leg.source
    pushed_shared = compose_strict(po_left, f)
    for leg, logic in ((po_left, l1), (po_right, l2)):
        axioms.extend(strict_extension(leg, a) for a in logic.calculus.axioms)
        rules.extend(
            Rule(tuple(strict_extension(leg, p) for p in r.premises),
                 strict_extension(leg, r.conclusion))
            for r in logic.calculus.rules
        )
    if shared.calculus is not None:
        axioms.extend(strict_extension(pushed_shared, a)
                      for a in shared.calculus.axioms)
        rules.extend(
            Rule(tuple(strict_extension(pushed_shared, p) for p in r.premises),
                 strict_extension(pushed_shared, r.conclusion))
            for r in shared.calculus.rules
        )
    combined = Logic(name or f"pushout({l1.name},{l2.name})", sig,
                     calculus=Calculus(sig, axioms, rules))
    t1 = verbatim_translation(po_left, l1, combined)
    t2 = verbatim_translation(po_right, l2, combined)
    return combined, t1, t2


def product_logic(l1: Logic, l2: Logic, name: str = ""
                  ) -> tuple[Logic, Translation, Translation]:
    """Product: a sequent holds when both projected sequents hold."""
    sig, (p1, p2) = signature_product([l1.signature, l2.signature])

    def oracle(gamma, phi, budget):
        v1 = derives(l1, [strict_extension(p1, g) for g in gamma],
                     strict_extension(p1, phi), budget)
        if v1.is_no:
            return Verdict.no(counter=v1.counter, reason=f"fails in {l1.name}")
        v2 = derives(l2, [strict_extension(p2, g) for g in gamma],
                     strict_extension(p2, phi), budget)
        if v2.is_no:
            return Verdict.no(counter=v2.counter, reason=f"fails in {l2.name}")
        if v1.is_yes and v2.is_yes:
            return Verdict.yes(detail={"left": v1.status, "right": v2.status})
        return Verdict.unknown(reason="a projection is undecided")

    combined = Logic(name or f"product({l1.name},{l2.name})", sig,
                     oracle=oracle, decides=l1.decides and l2.decides)
    t1 = Translation(p1, combined, l1, VERIFIED, evidence=["defining clause"])
    t2 = Translation(p2, combined, l2, VERIFIED, evidence=["defining clause"])
    return combined, t1, t2


def directed_colimit_logics(stages: list[Logic], maps: list[Translation],
                            name: str = "") -> tuple[Logic, list[Translation]]:
    """Colimit of a chain: union of the pushed-forward presentations."""
    if len(maps) != len(stages) - 1:
        raise ValueError("need one chain map per consecutive stage pair")
    for i, t in enumerate(maps):
        if not isinstance(t.morphism, StrictMorphism):
            raise UnsupportedConstruction("colimit chains must be strict")
        if t.source.signature != stages[i].signature \
                or t.target.signature != stages[i + 1].signature:
            raise SignatureMismatch("chain maps do not line up with the stages")
    from .kleisli import directed_colimit_signatures
    chain = [t.morphism for t in maps]
    if chain:
        vertex_sig, cocone = directed_colimit_signatures(chain, name=name)
    else:
        vertex_sig = stages[0].signature
        from .signatures import identity_morphism
        cocone = [identity_morphism(vertex_sig)]
    axioms = []
    rules = []
    for leg, logic in zip(cocone, stages):
        if logic.calculus is None:
            raise ValueError("colimit stages need presentations")
        axioms.extend(strict_extension(leg, a) for a in logic.calculus.axioms)
        rules.extend(
            Rule(tuple(strict_extension(leg, p) for p in r.premises),
                 strict_extension(leg, r.conclusion))
            for r in logic.calculus.rules
        )
    combined = Logic(name or "colim(" + ",".join(l.name for l in stages) + ")",
                     vertex_sig, calculus=Calculus(vertex_sig, axioms, rules))
    translations = [
        verbatim_translation(leg, logic, combined)
        for leg, logic in zip(cocone, stages)
    ]
    return combined, translations
