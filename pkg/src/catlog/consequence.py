"""Tarskian consequence: Hilbert calculi, finite matrices, and the lattice.

A logic pairs a signature with a derivability provider.  Presented calculi
are searched (bounded, three-valued answers); finite matrices decide.  When
both are present the matrix acts as a sound refutation oracle for the
calculus.  Lattice operations (meet, generated join, directed sup) combine
providers without ever inventing an uncertified No.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formulas import (
    App, Formula, Substitution, Var, check_formula, complexity,
    compose_substitutions, enumerate_formulas, fmt, match, subformulas,
    substitute, variables,
)
from .signatures import Signature


class SignatureMismatch(ValueError):
    """Query or construction mixes formulas with the wrong signature."""


@dataclass(frozen=True)
class Budget:
    """Search bounds: proof steps, substitution-image complexity, candidate
    enumeration complexity, candidate variable count."""

    proof_length: int = 40
    instance_complexity: int = 6
    enumeration_complexity: int = 4
    variable_count: int = 2

    @staticmethod
    def parse(text: str) -> "Budget":
        parts = [int(p) for p in text.split(",")]
        if len(parts) == 1:
            return Budget(proof_length=parts[0])
        if len(parts) != 4:
            raise ValueError("budget must be 'length' or 'length,inst,enum,vars'")
        return Budget(*parts)

    def to_json(self) -> list[int]:
        return [self.proof_length, self.instance_complexity,
                self.enumeration_complexity, self.variable_count]


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# Presented calculi and proofs


@dataclass(frozen=True)
class Rule:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def to_json(self) -> dict:
        return {"premises": [fmt(p) for p in self.premises],
                "conclusion": fmt(self.conclusion)}


class Calculus:
    """Axiom and rule schemes, implicitly closed under substitution."""

    def __init__(self, signature: Signature, axioms: list[Formula], rules: list[Rule]):
        for a in axioms:
            check_formula(signature, a)
        for r in rules:
            if not r.premises:
                raise ValueError("rules need at least one premise; use an axiom instead")
            for p in r.premises:
                check_formula(signature, p)
            check_formula(signature, r.conclusion)
        self.signature = signature
        self.axioms = list(axioms)
        self.rules = list(rules)

    def extended(self, axioms: list[Formula] = (), rules: list[Rule] = ()) -> "Calculus":
        return Calculus(self.signature, self.axioms + list(axioms),
                        self.rules + list(rules))

    def to_json(self) -> dict:
        return {"axioms": [fmt(a) for a in self.axioms],
                "rules": [r.to_json() for r in self.rules]}


@dataclass(frozen=True)
class Hypothesis:
    kind: str = "hypothesis"


@dataclass(frozen=True)
class AxiomInstance:
    axiom: int
    substitution: Substitution
    kind: str = "axiom"


@dataclass(frozen=True)
class RuleInstance:
    rule: int
    substitution: Substitution
    premises: tuple[int, ...]
    kind: str = "rule"


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Hypothesis | AxiomInstance | RuleInstance


class Proof:
    """Justified formula sequence; every step re-checks mechanically."""

    def __init__(self, steps: list[Step]):
        self.steps = list(steps)

    def __len__(self):
        return len(self.steps)

    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def used_hypotheses(self) -> frozenset[Formula]:
        return frozenset(s.formula for s in self.steps
                         if isinstance(s.justification, Hypothesis))

    def to_json(self) -> dict:
        out = []
        for s in self.steps:
            j = s.justification
            if isinstance(j, Hypothesis):
                entry = {"by": "hypothesis"}
            elif isinstance(j, AxiomInstance):
                entry = {"by": "axiom", "axiom": j.axiom,
                         "substitution": j.substitution.to_json()}
            else:
                entry = {"by": "rule", "rule": j.rule,
                         "substitution": j.substitution.to_json(),
                         "premises": list(j.premises)}
            entry["formula"] = fmt(s.formula)
            out.append(entry)
        return {"steps": out, "length": len(self.steps)}


def verify_proof(logic: "Logic", gamma, phi: Formula, proof: Proof) -> bool:
    """Re-check every justification; the last step must be phi."""
    calculus = logic.calculus
    if calculus is None:
        return False
    gamma = frozenset(gamma)
    if not proof.steps or proof.conclusion() != phi:
        return False
    for idx, step in enumerate(proof.steps):
        j = step.justification
        if isinstance(j, Hypothesis):
            if step.formula not in gamma:
                return False
        elif isinstance(j, AxiomInstance):
            if not 0 <= j.axiom < len(calculus.axioms):
                return False
            if substitute(j.substitution, calculus.axioms[j.axiom]) != step.formula:
                return False
        elif isinstance(j, RuleInstance):
            if not 0 <= j.rule < len(calculus.rules):
                return False
            rule = calculus.rules[j.rule]
            if substitute(j.substitution, rule.conclusion) != step.formula:
                return False
            if len(j.premises) != len(rule.premises):
                return False
            for prem_idx, pattern in zip(j.premises, rule.premises):
                if not 0 <= prem_idx < idx:
                    return False
                if substitute(j.substitution, pattern) != proof.steps[prem_idx].formula:
                    return False
        else:
            return False
    return True


def transform_proof(proof: Proof, sigma: Substitution) -> Proof:
    """Push a substitution through a proof (structurality, constructively)."""
    steps = []
    for step in proof.steps:
        j = step.justification
        if isinstance(j, Hypothesis):
            new_j: Hypothesis | AxiomInstance | RuleInstance = j
        elif isinstance(j, AxiomInstance):
            new_j = AxiomInstance(j.axiom, compose_substitutions(sigma, j.substitution))
        else:
            new_j = RuleInstance(j.rule, compose_substitutions(sigma, j.substitution),
                                 j.premises)
        steps.append(Step(substitute(sigma, step.formula), new_j))
    return Proof(steps)


# ---------------------------------------------------------------------------
# Finite matrices


class Matrix:
    """Finite set of truth values with designated subset and total tables."""

    def __init__(self, values: list, designated: list, tables: dict[str, dict[tuple, object]]):
        if not values:
            raise ValueError("matrix needs at least one value")
        if not designated:
            raise ValueError("matrix needs a nonempty designated subset")
        self.values = tuple(values)
        self.designated = frozenset(designated)
        if not self.designated <= set(self.values):
            raise ValueError("designated values must be values")
        self.tables = {c: dict(t) for c, t in tables.items()}

    def validate_for(self, sig: Signature) -> None:
        for c, arity in sig.connectives.items():
            table = self.tables.get(c)
            if table is None:
                raise ValueError(f"matrix misses a table for {c!r}")
            expected = len(self.values) ** arity
            if len(table) != expected:
                raise ValueError(f"table for {c!r} is not total")
            for key, out in table.items():
                if len(key) != arity or any(v not in self.values for v in key):
                    raise ValueError(f"bad table entry {key} for {c!r}")
                if out not in self.values:
                    raise ValueError(f"bad table output {out!r} for {c!r}")

    def evaluate(self, phi: Formula, valuation: dict[int, object]):
        if isinstance(phi, Var):
            return valuation[phi.index]
        args = tuple(self.evaluate(a, valuation) for a in phi.args)
        return self.tables[phi.connective][args]

    def is_designated(self, value) -> bool:
        return value in self.designated

    def to_json(self) -> dict:
        return {
            "values": [str(v) for v in self.values],
            "designated": sorted(str(v) for v in self.designated),
            "tables": {
                c: {",".join(map(str, k)): str(v) for k, v in sorted(t.items(),
                                                                     key=lambda kv: str(kv[0]))}
                for c, t in sorted(self.tables.items())
            },
        }


def matrix_consequence(matrix: Matrix, gamma, phi: Formula
                       ) -> tuple[bool, dict[int, object] | None]:
    """Designation-preserving entailment; countervaluation on failure."""
    gamma = list(gamma)
    occurring = sorted(set().union(variables(phi), *[variables(g) for g in gamma]))
    for combo in itertools.product(matrix.values, repeat=len(occurring)):
        valuation = dict(zip(occurring, combo))
        if all(matrix.is_designated(matrix.evaluate(g, valuation)) for g in gamma):
            if not matrix.is_designated(matrix.evaluate(phi, valuation)):
                return False, valuation
    return True, None


def truth_function(matrix: Matrix, phi: Formula, n: int) -> tuple:
    """Value tuple of phi over all valuations of x0..x_{n-1}, in a fixed order."""
    out = []
    for combo in itertools.product(matrix.values, repeat=n):
        out.append(matrix.evaluate(phi, dict(zip(range(n), combo))))
    return tuple(out)


def designation_function(matrix: Matrix, phi: Formula, n: int) -> tuple[bool, ...]:
    return tuple(matrix.is_designated(v) for v in truth_function(matrix, phi, n))


def matrix_interderivable(matrix: Matrix, phi: Formula, psi: Formula
                          ) -> tuple[bool, dict[int, object] | None]:
    """Mutual designation-entailment, with a separating valuation when false."""
    occurring = sorted(variables(phi) | variables(psi))
    for combo in itertools.product(matrix.values, repeat=len(occurring)):
        valuation = dict(zip(occurring, combo))
        left = matrix.is_designated(matrix.evaluate(phi, valuation))
        right = matrix.is_designated(matrix.evaluate(psi, valuation))
        if left != right:
            return False, valuation
    return True, None


# ---------------------------------------------------------------------------
# Verdicts and logics


@dataclass(frozen=True)
class Verdict:
    status: str  # "yes" | "no" | "unknown"
    proof: Proof | None = None
    counter: dict | None = None
    reason: str = ""
    stage: int | None = None
    used: frozenset | None = None
    detail: dict | None = None

    @property
    def is_yes(self) -> bool:
        return self.status == "yes"

    @property
    def is_no(self) -> bool:
        return self.status == "no"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"

    @staticmethod
    def yes(proof: Proof | None = None, reason: str = "", stage: int | None = None,
            used: frozenset | None = None, detail: dict | None = None) -> "Verdict":
        return Verdict("yes", proof=proof, reason=reason, stage=stage,
                       used=used, detail=detail)

    @staticmethod
    def no(counter: dict | None = None, reason: str = "",
           detail: dict | None = None) -> "Verdict":
        return Verdict("no", counter=counter, reason=reason, detail=detail)

    @staticmethod
    def unknown(reason: str = "", detail: dict | None = None) -> "Verdict":
        return Verdict("unknown", reason=reason, detail=detail)

    def to_json(self) -> dict:
        out: dict = {"verdict": self.status}
        if self.proof is not None:
            out["proof"] = self.proof.to_json()
        if self.counter is not None:
            out["counter"] = {str(k): str(v) for k, v in sorted(
                self.counter.items(), key=lambda kv: str(kv[0]))}
        if self.reason:
            out["reason"] = self.reason
        if self.stage is not None:
            out["stage"] = self.stage
        if self.used is not None:
            out["used_hypotheses"] = sorted(fmt(f) for f in self.used)
        if self.detail is not None:
            out["detail"] = self.detail
        return out


class Logic:
    """Signature plus derivability provider(s).

    Providers: a presented calculus (searched), a finite matrix (decides when
    it is the only provider, refutes otherwise), or an oracle closure used by
    the combination constructors.  `decides` records whether answers are
    exact rather than budget-limited.
    """

    def __init__(self, name: str, signature: Signature, calculus: Calculus | None = None,
                 matrix: Matrix | None = None, oracle=None, decides: bool | None = None):
        if calculus is not None and calculus.signature != signature:
            raise SignatureMismatch("calculus signature differs from logic signature")
        if matrix is not None:
            matrix.validate_for(signature)
        if calculus is None and matrix is None and oracle is None:
            raise ValueError("logic needs at least one provider")
        self.name = name
        self.signature = signature
        self.calculus = calculus
        self.matrix = matrix
        self.oracle = oracle
        if decides is None:
            decides = matrix is not None and calculus is None and oracle is None
        self.decides = decides

    def __repr__(self):
        providers = [p for p, ok in (
            ("calculus", self.calculus), ("matrix", self.matrix), ("oracle", self.oracle)) if ok]
        return f"Logic({self.name!r}, {self.signature.name!r}, {'+'.join(providers)})"

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "signature": self.signature.to_json(),
                     "decides": self.decides}
        if self.calculus is not None:
            out["calculus"] = self.calculus.to_json()
        if self.matrix is not None:
            out["matrix"] = self.matrix.to_json()
        if self.oracle is not None:
            out["oracle"] = True
        return out


def derives(logic: Logic, gamma, phi: Formula,
            budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """Three-valued derivability with certificates.

    Yes from a calculus carries a proof; No carries a countervaluation (or a
    membership certificate from decidable oracles); Unknown means the budget
    ran out without a refutation.
    """
    gamma = frozenset(gamma)
    for f in itertools.chain(gamma, (phi,)):
        check_formula(logic.signature, f)
    if logic.oracle is not None:
        return logic.oracle(gamma, phi, budget)
    if logic.matrix is not None:
        holds, counter = matrix_consequence(logic.matrix, gamma, phi)
        if not holds:
            return Verdict.no(counter={f"x{k}": v for k, v in counter.items()},
                              reason="matrix countervaluation")
        if logic.calculus is None:
            return Verdict.yes(reason="matrix decision", used=gamma)
    proof = search_proof(logic.calculus, gamma, phi, budget)
    if proof is not None:
        return Verdict.yes(proof=proof, used=proof.used_hypotheses())
    return Verdict.unknown(reason="proof search budget exhausted")


def interderivable(logic: Logic, phi: Formula, psi: Formula,
                   budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """Mutual derivability; exact through a matrix, else searched."""
    if logic.matrix is not None:
        ok, witness = matrix_interderivable(logic.matrix, phi, psi)
        if ok:
            return Verdict.yes(reason="matrix interderivability")
        return Verdict.no(counter={f"x{k}": v for k, v in witness.items()},
                          reason="separating valuation")
    forward = derives(logic, [phi], psi, budget)
    backward = derives(logic, [psi], phi, budget)
    if forward.is_yes and backward.is_yes:
        return Verdict.yes(detail={"forward": forward.to_json(),
                                   "backward": backward.to_json()})
    if forward.is_no or backward.is_no:
        bad = forward if forward.is_no else backward
        return Verdict.no(counter=bad.counter, reason=bad.reason)
    return Verdict.unknown(reason="interderivability not settled within budget")


# ---------------------------------------------------------------------------
# Backward-chaining proof search with iterative deepening


_RENAME_OFFSET = 10_000


def _shift(phi: Formula, offset: int) -> Formula:
    if isinstance(phi, Var):
        return Var(phi.index + offset)
    return App(phi.connective, tuple(_shift(a, offset) for a in phi.args))


def unify(a: Formula, b: Formula, binding: dict[int, Formula]) -> dict[int, Formula] | None:
    """Syntactic unification; both sides may contain variables."""

    def resolve(phi: Formula) -> Formula:
        while isinstance(phi, Var) and phi.index in binding:
            phi = binding[phi.index]
        return phi

    def occurs(idx: int, phi: Formula) -> bool:
        phi = resolve(phi)
        if isinstance(phi, Var):
            return phi.index == idx
        vs = variables(phi)
        if idx not in vs and not (vs & binding.keys()):
            return False
        return any(occurs(idx, arg) for arg in phi.args)

    stack = [(a, b)]
    while stack:
        left, right = stack.pop()
        left, right = resolve(left), resolve(right)
        if left == right:
            continue
        if isinstance(left, Var) and isinstance(right, Var):
            # prefer binding template variables, keeping object variables free
            if left.index >= _RENAME_OFFSET:
                binding[left.index] = right
            else:
                binding[right.index] = left
            continue
        if isinstance(left, Var):
            if occurs(left.index, right):
                return None
            binding[left.index] = right
            continue
        if isinstance(right, Var):
            if occurs(right.index, left):
                return None
            binding[right.index] = left
            continue
        if left.connective != right.connective or len(left.args) != len(right.args):
            return None
        stack.extend(zip(left.args, right.args))
    return binding


def _ground(phi: Formula, binding: dict[int, Formula]) -> Formula | None:
    """Fully resolve a unification result; None if foreign variables remain."""
    if isinstance(phi, Var):
        if phi.index in binding:
            return _ground(binding[phi.index], binding)
        if phi.index >= _RENAME_OFFSET:
            return None
        return phi
    args = []
    for a in phi.args:
        g = _ground(a, binding)
        if g is None:
            return None
        args.append(g)
    return App(phi.connective, tuple(args))


class _Node:
    __slots__ = ("formula", "justification", "children", "size")

    def __init__(self, formula, justification, children):
        self.formula = formula
        self.justification = justification
        self.children = children
        self.size = 1 + sum(c.size for c in children)


_FREE_OFFSET = 20_000

# hard cap on search-tree nodes per query; exceeding it means Unknown
_NODE_CAP = 300_000


class _SearchBudget(Exception):
    pass


class _Searcher:
    # object-level variable indices are assumed to stay below _RENAME_OFFSET;
    # rule variables are shifted into [_FREE_OFFSET, ...) while harvesting
    def __init__(self, calculus: Calculus, hypotheses: frozenset[Formula],
                 goal: Formula, budget: Budget):
        self.calculus = calculus
        self.hypotheses = hypotheses
        self.budget = budget
        self.success: dict[Formula, _Node] = {}
        self.failed_at: dict[Formula, int] = {}
        self.sub_pool = self._subformula_pool(goal)
        self.pool = self._candidate_pool(goal)
        self.shallow_pool = [f for f in self.pool if complexity(f) <= 2]
        self.max_depth = min(16, budget.proof_length)
        self.shifted_axioms = [_shift(a, _RENAME_OFFSET) for a in calculus.axioms]
        self.harvest_cache: dict[tuple[int, Formula], list[Substitution]] = {}
        self.nodes = 0
        # keep the total work roughly constant: rich rule sets get fewer nodes
        self.node_cap = max(8_000, _NODE_CAP // max(1, len(calculus.rules)))
        # rules indexed by the head of their conclusion; variable-headed
        # conclusions apply to every goal
        self.rules_by_head: dict[str, list[int]] = {}
        self.var_conclusion_rules: list[int] = []
        for ridx, rule in enumerate(calculus.rules):
            if isinstance(rule.conclusion, Var):
                self.var_conclusion_rules.append(ridx)
            else:
                self.rules_by_head.setdefault(
                    rule.conclusion.connective, []).append(ridx)

    def _subformula_pool(self, goal: Formula) -> list[Formula]:
        base = subformulas(goal)
        for f in self.hypotheses:
            base |= subformulas(f)
        return sorted((f for f in base
                       if complexity(f) <= self.budget.instance_complexity),
                      key=complexity)

    def _candidate_pool(self, goal: Formula) -> list[Formula]:
        occurring = variables(goal)
        for f in self.hypotheses:
            occurring |= variables(f)
        indices = sorted(occurring)[: self.budget.variable_count]
        if not indices:
            indices = [0]
        span = min(max(indices) + 1, max(self.budget.variable_count, 1))
        enumerated = enumerate_formulas(
            self.calculus.signature, span, self.budget.enumeration_complexity)
        pool = list(self.sub_pool)
        seen = set(pool)
        for phi in enumerated:
            if phi not in seen and variables(phi) <= set(indices):
                pool.append(phi)
                seen.add(phi)
        return pool

    def prove(self, goal: Formula, allowed: int, stack: frozenset[Formula]
              ) -> tuple[_Node | None, bool]:
        """Returns (proof tree, cycle_flag); cycle failures are not memoized."""
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise _SearchBudget
        cached = self.success.get(goal)
        if cached is not None and cached.size <= allowed:
            return cached, False
        if allowed <= 0:
            return None, False
        if goal in stack:
            return None, True
        if len(stack) >= self.max_depth:
            # depth-pruned, so the failure is path-dependent: no memo entry
            return None, True
        if self.failed_at.get(goal, -1) >= allowed:
            return None, False
        if goal in self.hypotheses:
            node = _Node(goal, Hypothesis(), [])
            self.success[goal] = node
            return node, False
        for idx, axiom in enumerate(self.calculus.axioms):
            sigma = match(axiom, goal)
            if sigma is not None:
                node = _Node(goal, AxiomInstance(idx, sigma), [])
                self.success[goal] = node
                return node, False
        cycle_seen = False
        if allowed >= 2:
            inner = stack | {goal}
            depth = len(stack)
            if isinstance(goal, App):
                applicable = self.rules_by_head.get(goal.connective, [])
            else:
                applicable = []
            for ridx in itertools.chain(applicable, self.var_conclusion_rules):
                rule = self.calculus.rules[ridx]
                made, cyc = self._try_rule(ridx, rule, goal, allowed, inner, depth)
                cycle_seen = cycle_seen or cyc
                if made is not None:
                    self.success[goal] = made
                    return made, cycle_seen
        if not cycle_seen:
            prev = self.failed_at.get(goal, -1)
            if allowed > prev:
                self.failed_at[goal] = allowed
        return None, cycle_seen

    def _try_rule(self, ridx: int, rule: Rule, goal: Formula, allowed: int,
                  stack: frozenset[Formula], depth: int) -> tuple[_Node | None, bool]:
        if allowed < 1 + len(rule.premises):
            return None, False
        base = match(rule.conclusion, goal)
        if base is None:
            return None, False
        rule_vars: set[int] = set()
        for p in rule.premises:
            rule_vars |= variables(p)
        free = sorted(rule_vars - set(base.mapping))
        # prove structurally richer premise patterns first; they prune harder
        order = sorted(range(len(rule.premises)),
                       key=lambda i: -complexity(rule.premises[i]))
        cycle_seen = False
        for sigma in self._instantiations(rule, ridx, goal, base, free, depth):
            children: list[_Node | None] = [None] * len(rule.premises)
            remaining = allowed - 1
            ok = True
            for i in order:
                node, cyc = self.prove(substitute(sigma, rule.premises[i]),
                                       remaining, stack)
                cycle_seen = cycle_seen or cyc
                if node is None:
                    ok = False
                    break
                children[i] = node
                remaining -= node.size
                if remaining < 0:
                    ok = False
                    break
            if ok and all(c is not None for c in children):
                made = _Node(goal, RuleInstance(ridx, sigma, ()), children)  # indices set later
                if made.size <= allowed:
                    return made, cycle_seen
        return None, cycle_seen

    def _instantiations(self, rule: Rule, ridx: int, goal: Formula,
                        base: Substitution, free: list[int], depth: int = 0):
        if not free:
            yield base
            return
        harvested = self.harvest_cache.get((ridx, goal))
        if harvested is None:
            harvested = self._harvest(rule, base, free)
            self.harvest_cache[(ridx, goal)] = harvested
        seen = {tuple(sigma(v) for v in free) for sigma in harvested}
        yield from harvested
        # fall back to bounded enumeration for anything not harvested; blind
        # candidates branch too widely to allow at depth, so the pool shrinks
        # from full enumeration (root) to small formulas to subformulas only,
        # and the number of blind attempts per node is capped
        if depth == 0:
            pool, cap = self.pool, 160
        elif depth == 1:
            pool, cap = self.shallow_pool, 40
        else:
            pool, cap = self.sub_pool, len(self.sub_pool)
        tried = 0
        pools = [pool] * len(free)
        for combo in itertools.product(*pools):
            key = tuple(combo)
            if key in seen:
                continue
            tried += 1
            if tried > cap:
                return
            mapping = dict(base.mapping)
            mapping.update(dict(zip(free, combo)))
            yield Substitution(mapping)

    def _harvest(self, rule: Rule, base: Substitution, free: list[int]
                 ) -> list[Substitution]:
        """Ground candidates read off hypotheses and axiom unifiers."""
        harvested: list[Substitution] = []
        seen: set[tuple] = set()
        bound = self.budget.instance_complexity

        def consider(binding: dict[int, Formula]):
            images = []
            for v in free:
                img = binding.get(v + _FREE_OFFSET)
                if img is None:
                    return
                img = _ground(img, binding)
                if img is None or complexity(img) > bound:
                    return
                images.append(img)
            key = tuple(images)
            if key in seen:
                return
            seen.add(key)
            mapping = dict(base.mapping)
            mapping.update(dict(zip(free, images)))
            harvested.append(Substitution(mapping))

        shifted = Substitution({**base.mapping,
                                **{v: Var(v + _FREE_OFFSET) for v in free}})
        for premise in rule.premises:
            pattern = substitute(shifted, premise)
            for hyp in self.hypotheses:
                m = match(pattern, hyp, None, bindable=lambda i: i >= _FREE_OFFSET)
                if m is not None:
                    consider(dict(m.mapping))
            for axiom in self.shifted_axioms:
                binding = unify(pattern, axiom, {})
                if binding is not None:
                    consider(binding)
        return harvested


def search_proof(calculus: Calculus | None, hypotheses: frozenset[Formula],
                 goal: Formula, budget: Budget = DEFAULT_BUDGET) -> Proof | None:
    """Iterative-deepening backward search; returns a small proof or None."""
    if calculus is None:
        return None
    searcher = _Searcher(calculus, hypotheses, goal, budget)
    schedule = [1, 2, 3, 5, 8, 13, 21, 34]
    limits = [s for s in schedule if s < budget.proof_length] + [budget.proof_length]
    try:
        for limit in limits:
            node, _ = searcher.prove(goal, limit, frozenset())
            if node is not None:
                return _linearize(node)
    except _SearchBudget:
        return None
    return None


def _linearize(root: _Node) -> Proof:
    steps: list[Step] = []
    index: dict[Formula, int] = {}

    def emit(node: _Node) -> int:
        if node.formula in index:
            return index[node.formula]
        child_indices = tuple(emit(c) for c in node.children)
        j = node.justification
        if isinstance(j, RuleInstance):
            j = RuleInstance(j.rule, j.substitution, child_indices)
        steps.append(Step(node.formula, j))
        index[node.formula] = len(steps) - 1
        return index[node.formula]

    emit(root)
    return Proof(steps)


# ---------------------------------------------------------------------------
# Forward saturation: a second, join-based derivability engine.  Sound by
# construction (every element carries its justification); used where many
# related queries over one hypothesis set must be answered at once.


class Saturation:
    """Derivations reachable from seed axiom instances by forward joins.

    Axiom schemes are instantiated with images drawn from a finite pool;
    rules fire whenever all premises are already derived and the conclusion
    complexity stays within `conclusion_cap`.  Two-premise rules join through
    an index on their shared variables; `fork` makes a cheap copy so many
    hypothesis sets can be explored against one base saturation.
    """

    def __init__(self, calculus: Calculus, seed_pool: list[Formula],
                 conclusion_cap: int = 12, _blank: bool = False):
        self.calculus = calculus
        self.cap = conclusion_cap
        self.derived: dict[Formula, tuple] = {}
        self.queue: list[Formula] = []
        # per rule: premise variable sets and, for 2-premise rules, the join
        # variables plus an index per position keyed by the join images
        self.rule_vars = []
        self.join_vars = []
        self.join_index: list[list[dict[tuple, list[Substitution]]]] = []
        for rule in calculus.rules:
            pvars = [variables(p) for p in rule.premises]
            self.rule_vars.append(pvars)
            if len(rule.premises) == 2:
                self.join_vars.append(tuple(sorted(pvars[0] & pvars[1])))
                self.join_index.append([{}, {}])
            else:
                self.join_vars.append(())
                self.join_index.append([])
        if _blank:
            return
        for aidx, axiom in enumerate(calculus.axioms):
            free = sorted(variables(axiom))
            for combo in itertools.product(seed_pool, repeat=len(free)):
                sigma = Substitution(dict(zip(free, combo)))
                self._add(substitute(sigma, axiom), ("axiom", aidx, sigma))
        self._run()

    def fork(self) -> "Saturation":
        other = Saturation(self.calculus, [], self.cap, _blank=True)
        other.derived = dict(self.derived)
        other.queue = []
        other.join_index = [
            [{k: list(v) for k, v in idx.items()} for idx in per_rule]
            for per_rule in self.join_index
        ]
        return other

    def _add(self, phi: Formula, why: tuple) -> None:
        if phi in self.derived or complexity(phi) > self.cap:
            return
        self.derived[phi] = why
        self.queue.append(phi)

    def _run(self) -> None:
        while self.queue:
            d = self.queue.pop()
            for ridx, rule in enumerate(self.calculus.rules):
                for j, premise in enumerate(rule.premises):
                    sigma = match(premise, d)
                    if sigma is None:
                        continue
                    if len(rule.premises) == 1:
                        self._conclude(ridx, rule, sigma, (d,))
                    elif len(rule.premises) == 2:
                        self._join2(ridx, rule, j, sigma, d)
                    else:
                        self._join_scan(ridx, rule, j, sigma)

    def _conclude(self, ridx: int, rule: Rule, sigma: Substitution,
                  premises: tuple[Formula, ...]) -> None:
        if not variables(rule.conclusion) <= set(sigma.mapping):
            return
        self._add(substitute(sigma, rule.conclusion), ("rule", ridx, sigma, premises))

    def _join2(self, ridx: int, rule: Rule, j: int, sigma: Substitution,
               d: Formula) -> None:
        join = self.join_vars[ridx]
        key = tuple(sigma(v) for v in join)
        self.join_index[ridx][j].setdefault(key, []).append(sigma)
        other = 1 - j
        other_vars = self.rule_vars[ridx][other]
        if other_vars <= set(sigma.mapping):
            # the partner instance is fully determined: membership test
            partner = substitute(sigma, rule.premises[other])
            if partner in self.derived:
                pair = (d, partner) if j == 0 else (partner, d)
                self._conclude(ridx, rule, sigma, pair)
            return
        for sigma2 in self.join_index[ridx][other].get(key, []):
            merged = dict(sigma2.mapping)
            merged.update(sigma.mapping)
            full = Substitution(merged)
            inst = tuple(substitute(full, p) for p in rule.premises)
            if all(p in self.derived for p in inst):
                self._conclude(ridx, rule, full, inst)

    def _join_scan(self, ridx: int, rule: Rule, j: int, sigma: Substitution) -> None:
        positions = [k for k in range(len(rule.premises)) if k != j]

        def go(pos: int, sub: Substitution):
            if pos == len(positions):
                inst = tuple(substitute(sub, p) for p in rule.premises)
                if all(p in self.derived for p in inst):
                    self._conclude(ridx, rule, sub, inst)
                return
            k = positions[pos]
            missing = self.rule_vars[ridx][k] - set(sub.mapping)
            if not missing:
                if substitute(sub, rule.premises[k]) in self.derived:
                    go(pos + 1, sub)
                return
            for candidate in list(self.derived):
                ext = match(rule.premises[k], candidate, dict(sub.mapping))
                if ext is not None:
                    go(pos + 1, ext)

        go(0, sigma)

    def extend(self, hypotheses) -> None:
        for h in hypotheses:
            self._add(h, ("hypothesis",))
        self._run()

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.derived

    def proof_of(self, phi: Formula) -> Proof | None:
        """Rebuild a checkable proof from the recorded justifications."""
        if phi not in self.derived:
            return None
        steps: list[Step] = []
        index: dict[Formula, int] = {}

        def emit(f: Formula) -> int:
            if f in index:
                return index[f]
            why = self.derived[f]
            if why[0] == "hypothesis":
                j: Hypothesis | AxiomInstance | RuleInstance = Hypothesis()
            elif why[0] == "axiom":
                j = AxiomInstance(why[1], why[2])
            else:
                prem_idx = tuple(emit(p) for p in why[3])
                j = RuleInstance(why[1], why[2], prem_idx)
            steps.append(Step(f, j))
            index[f] = len(steps) - 1
            return index[f]

        emit(phi)
        return Proof(steps)


def saturate(calculus: Calculus, hypotheses, seed_pool: list[Formula],
             conclusion_cap: int = 12) -> Saturation:
    sat = Saturation(calculus, seed_pool, conclusion_cap)
    sat.extend(hypotheses)
    return sat


# ---------------------------------------------------------------------------
# Lattice operations on consequence relations


def meet(l1: Logic, l2: Logic, name: str = "") -> Logic:
    """Infimum: derivable when both components derive."""
    if l1.signature != l2.signature:
        raise SignatureMismatch("meet needs a shared signature")

    def oracle(gamma, phi, budget):
        v1 = derives(l1, gamma, phi, budget)
        if v1.is_no:
            return Verdict.no(counter=v1.counter, reason=f"refuted in {l1.name}")
        v2 = derives(l2, gamma, phi, budget)
        if v2.is_no:
            return Verdict.no(counter=v2.counter, reason=f"refuted in {l2.name}")
        if v1.is_yes and v2.is_yes:
            return Verdict.yes(proof=v1.proof or v2.proof,
                               used=(v1.used or frozenset()) | (v2.used or frozenset()),
                               detail={"left": v1.status, "right": v2.status})
        return Verdict.unknown(reason="one component undecided")

    return Logic(name or f"meet({l1.name},{l2.name})", l1.signature,
                 oracle=oracle, decides=l1.decides and l2.decides)


def generated_join(presentations: list[Calculus], name: str = "") -> Calculus:
    """Supremum of presented relations: union of the presentations."""
    if not presentations:
        raise ValueError("empty join")
    sig = presentations[0].signature
    if any(c.signature != sig for c in presentations):
        raise SignatureMismatch("generated join needs a shared signature")
    axioms: list[Formula] = []
    rules: list[Rule] = []
    for calc in presentations:
        axioms.extend(calc.axioms)
        rules.extend(calc.rules)
    return Calculus(sig, axioms, rules)


def directed_sup(chain: list[Logic], name: str = "") -> Logic:
    """Supremum of a chain ordered by strength: first stage that derives wins."""
    if not chain:
        raise ValueError("empty chain")
    sig = chain[0].signature
    if any(l.signature != sig for l in chain):
        raise SignatureMismatch("directed sup needs a shared signature")

    def oracle(gamma, phi, budget):
        unknown = False
        for i, logic in enumerate(chain):
            v = derives(logic, gamma, phi, budget)
            if v.is_yes:
                return Verdict.yes(proof=v.proof, stage=i, used=v.used,
                                   reason=f"witnessed at stage {i}")
            if v.is_unknown:
                unknown = True
        if unknown:
            return Verdict.unknown(reason="no stage settled the query")
        last = derives(chain[-1], gamma, phi, budget)
        return Verdict.no(counter=last.counter, reason="refuted at every stage")

    return Logic(name or "sup(" + ",".join(l.name for l in chain) + ")", sig,
                 oracle=oracle, decides=all(l.decides for l in chain))
