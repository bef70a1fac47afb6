"""Signatures, strict (arity-preserving) morphisms and their (co)limits.

A signature is a finite map from connective names to arities.  Strict
morphisms send connectives to same-arity connectives; their extension to
formula trees replaces heads and fixes variables.  Coproducts, products and
pushouts are computed levelwise on arities.
"""

from __future__ import annotations

from .formulas import App, Formula, Var, check_formula


class UnsupportedConstruction(Exception):
    """Construction needs infinite support (e.g. a terminal signature)."""


class Signature:
    """Finite family of connectives with arities; immutable after creation."""

    def __init__(self, name: str, connectives: dict[str, int]):
        for ident, arity in connectives.items():
            if not ident:
                raise ValueError("empty connective identifier")
            if arity < 0:
                raise ValueError(f"negative arity for {ident!r}")
        self.name = name
        self.connectives = dict(connectives)

    def arity(self, ident: str) -> int:
        return self.connectives[ident]

    def level(self, n: int) -> list[str]:
        return sorted(c for c, a in self.connectives.items() if a == n)

    def arities(self) -> set[int]:
        return set(self.connectives.values())

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.connectives == other.connectives

    def __hash__(self):
        return hash(frozenset(self.connectives.items()))

    def __repr__(self):
        inner = ", ".join(f"{c}/{a}" for c, a in sorted(self.connectives.items()))
        return f"Signature({self.name!r}: {inner})"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "connectives": [
                {"id": c, "arity": a} for c, a in sorted(self.connectives.items())
            ],
        }


EMPTY = Signature("empty", {})


class StrictMorphism:
    """Connective map preserving arities between two signatures."""

    def __init__(self, source: Signature, target: Signature, mapping: dict[str, str],
                 name: str = ""):
        for c, arity in source.connectives.items():
            image = mapping.get(c)
            if image is None:
                raise ValueError(f"morphism misses source connective {c!r}")
            if image not in target.connectives:
                raise ValueError(f"image {image!r} of {c!r} not in target signature")
            if target.connectives[image] != arity:
                raise ValueError(
                    f"arity mismatch: {c!r}/{arity} mapped to "
                    f"{image!r}/{target.connectives[image]}")
        self.source = source
        self.target = target
        self.mapping = {c: mapping[c] for c in source.connectives}
        self.name = name

    def __call__(self, connective: str) -> str:
        return self.mapping[connective]

    def __eq__(self, other):
        if not isinstance(other, StrictMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.mapping == other.mapping)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.mapping.items())))

    def __repr__(self):
        inner = ", ".join(f"{c} -> {d}" for c, d in sorted(self.mapping.items()))
        return f"StrictMorphism({inner})"

    def to_json(self) -> dict:
        return {
            "kind": "strict",
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "map": {c: d for c, d in sorted(self.mapping.items())},
        }


def identity_morphism(sig: Signature) -> StrictMorphism:
    return StrictMorphism(sig, sig, {c: c for c in sig.connectives}, name=f"id_{sig.name}")


def compose_strict(g: StrictMorphism, f: StrictMorphism) -> StrictMorphism:
    if f.target != g.source:
        raise ValueError("strict morphisms not composable")
    return StrictMorphism(f.source, g.target, {c: g(f(c)) for c in f.source.connectives})


def strict_extension(f: StrictMorphism, phi: Formula) -> Formula:
    """Apply f to every connective occurrence of phi; variables are fixed."""
    check_formula(f.source, phi)
    return _extend(f, phi)


def _extend(f: StrictMorphism, phi: Formula) -> Formula:
    if isinstance(phi, Var):
        return phi
    return App(f(phi.connective), tuple(_extend(f, a) for a in phi.args))


# ---------------------------------------------------------------------------
# Levelwise (co)limits


def _tag(ident: str, index: int) -> str:
    return f"{ident}_{index}"


def signature_coproduct(summands: list[Signature], name: str = ""
                        ) -> tuple[Signature, list[StrictMorphism]]:
    """Disjoint union; connectives are tagged by summand index."""
    connectives: dict[str, int] = {}
    maps: list[dict[str, str]] = []
    for i, sig in enumerate(summands):
        maps.append({c: _tag(c, i) for c in sig.connectives})
        for c, arity in sig.connectives.items():
            connectives[_tag(c, i)] = arity
    result = Signature(name or "+".join(s.name for s in summands) or "empty", connectives)
    injections = [
        StrictMorphism(sig, result, maps[i], name=f"in{i}") for i, sig in enumerate(summands)
    ]
    return result, injections


def coproduct_mediator(injections: list[StrictMorphism],
                       cocone: list[StrictMorphism]) -> StrictMorphism:
    """Case-split map out of a coproduct agreeing with a strict cocone."""
    if not cocone:
        raise ValueError("empty cocone")
    target = cocone[0].target
    if any(leg.target != target for leg in cocone):
        raise ValueError("cocone legs disagree on target")
    coproduct = injections[0].target
    mapping: dict[str, str] = {}
    for inj, leg in zip(injections, cocone):
        if inj.source != leg.source:
            raise ValueError("cocone leg does not match injection source")
        for c in inj.source.connectives:
            mapping[inj(c)] = leg(c)
    return StrictMorphism(coproduct, target, mapping, name="mediator")


def signature_product(factors: list[Signature], name: str = ""
                      ) -> tuple[Signature, list[StrictMorphism]]:
    """Levelwise cartesian product; a connective is a tuple of same-arity ones."""
    if not factors:
        raise UnsupportedConstruction(
            "empty product is the terminal signature, which has infinite support")
    arities = set()
    for sig in factors:
        arities |= sig.arities()
    connectives: dict[str, int] = {}
    components: dict[str, tuple[str, ...]] = {}
    for arity in sorted(arities):
        pools = [sig.level(arity) for sig in factors]
        if any(not pool for pool in pools):
            continue
        for combo in _tuples(pools):
            ident = "__".join(combo)
            connectives[ident] = arity
            components[ident] = combo
    result = Signature(name or "x".join(s.name for s in factors), connectives)
    projections = []
    for i, sig in enumerate(factors):
        projections.append(StrictMorphism(
            result, sig, {ident: components[ident][i] for ident in connectives},
            name=f"proj{i}"))
    return result, projections


def product_pairing(projections: list[StrictMorphism],
                    cone: list[StrictMorphism]) -> StrictMorphism:
    """Tupling map into a product agreeing with a strict cone."""
    if not cone:
        raise ValueError("empty cone")
    source = cone[0].source
    if any(leg.source != source for leg in cone):
        raise ValueError("cone legs disagree on source")
    product = projections[0].source
    reverse: dict[tuple[str, ...], str] = {}
    for ident in product.connectives:
        reverse[tuple(pi(ident) for pi in projections)] = ident
    mapping = {}
    for c in source.connectives:
        images = tuple(leg(c) for leg in cone)
        if images not in reverse:
            raise ValueError(f"no product connective for images {images}")
        mapping[c] = reverse[images]
    return StrictMorphism(source, product, mapping, name="pairing")


def signature_pushout(f: StrictMorphism, g: StrictMorphism, name: str = ""
                      ) -> tuple[Signature, StrictMorphism, StrictMorphism]:
    """Coproduct of the targets with f(c) and g(c) glued, for shared source c."""
    if f.source != g.source:
        raise ValueError("pushout legs must share their source")
    left, right = f.target, g.target
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    tagged: dict[str, int] = {}
    for i, sig in enumerate((left, right)):
        for c, arity in sig.connectives.items():
            t = _tag(c, i)
            tagged[t] = arity
            parent[t] = t
    for c in f.source.connectives:
        union(_tag(f(c), 0), _tag(g(c), 1))

    connectives = {}
    for t, arity in tagged.items():
        rep = find(t)
        connectives.setdefault(rep, arity)
    result = Signature(name or f"{left.name}+[{f.source.name}]+{right.name}", connectives)
    left_map = StrictMorphism(
        left, result, {c: find(_tag(c, 0)) for c in left.connectives}, name="po_left")
    right_map = StrictMorphism(
        right, result, {c: find(_tag(c, 1)) for c in right.connectives}, name="po_right")
    return result, left_map, right_map


def _tuples(pools: list[list[str]]):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _tuples(pools[1:]):
            yield (head,) + tail
