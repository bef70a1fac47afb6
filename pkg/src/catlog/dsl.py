"""Text format for signatures, logics and morphisms, and its loader.

Block forms:

    signature NAME { conn/arity ... }

    logic NAME {
      signature SIGNAME
      axiom FORMULA
      rule FORMULA[, FORMULA]* => FORMULA
      matrix {
        values v ...
        designated v ...
        table conn (v,...)=v ...
      }
      bottom          # or: top
    }

    morphism strict NAME : SRC -> TGT { conn -> conn ... }
    morphism flexible NAME : SRC -> TGT { conn -> FORMULA ... }

SRC and TGT name signatures (or logics, which stand for their signatures).
'#' starts a comment.  Formulas use the prefix grammar of the parser.
"""

from __future__ import annotations

import re

from .consequence import Calculus, Logic, Matrix, Rule
from .formulas import Formula, ParseError, parse
from .kleisli import FlexibleMorphism
from .logic_cat import bottom, top
from .signatures import Signature, StrictMorphism


class SpecError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Environment:
    """Named signatures, logics and morphisms from one spec file."""

    def __init__(self):
        self.signatures: dict[str, Signature] = {}
        self.logics: dict[str, Logic] = {}
        self.morphisms: dict[str, StrictMorphism | FlexibleMorphism] = {}

    def signature(self, name: str) -> Signature:
        if name in self.signatures:
            return self.signatures[name]
        if name in self.logics:
            return self.logics[name].signature
        raise KeyError(f"no signature or logic named {name!r}")

    def logic(self, name: str) -> Logic:
        if name not in self.logics:
            raise KeyError(f"no logic named {name!r}")
        return self.logics[name]

    def morphism(self, name: str):
        if name not in self.morphisms:
            raise KeyError(f"no morphism named {name!r}")
        return self.morphisms[name]

    def summary(self) -> dict:
        return {
            "signatures": sorted(self.signatures),
            "logics": sorted(self.logics),
            "morphisms": sorted(self.morphisms),
        }


_SIG_HEAD = re.compile(r"^signature\s+(\w+)$")
_LOGIC_HEAD = re.compile(r"^logic\s+(\w+)$")
_MORPH_HEAD = re.compile(
    r"^morphism\s+(strict|flexible)\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)$")
_CONN = re.compile(r"^(\w+)\s*/\s*(\d+)$")
_TABLE_ENTRY = re.compile(r"\(([^()]*)\)\s*=\s*(\S+)")


def load(path: str) -> Environment:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _logical_lines(text: str) -> list[tuple[str, int]]:
    """Comment-stripped lines with braces split out, keeping line numbers."""
    out: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        buf = ""
        for ch in line:
            if ch in "{}":
                if buf.strip():
                    out.append((buf.strip(), lineno))
                out.append((ch, lineno))
                buf = ""
            else:
                buf += ch
        if buf.strip():
            out.append((buf.strip(), lineno))
    return out


class _Stream:
    def __init__(self, items: list[tuple[str, int]]):
        self.items = items
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self) -> tuple[str, int]:
        return self.items[self.pos]

    def next(self) -> tuple[str, int]:
        item = self.items[self.pos]
        self.pos += 1
        return item

    def expect(self, token: str) -> int:
        if self.done():
            raise SpecError(f"expected {token!r}, found end of input",
                            self.items[-1][1] if self.items else 0)
        text, line = self.next()
        if text != token:
            raise SpecError(f"expected {token!r}, found {text!r}", line)
        return line


def loads(text: str) -> Environment:
    env = Environment()
    stream = _Stream(_logical_lines(text))
    while not stream.done():
        line, lineno = stream.next()
        m = _SIG_HEAD.match(line)
        if m:
            stream.expect("{")
            _read_signature(env, m.group(1), stream, lineno)
            continue
        m = _LOGIC_HEAD.match(line)
        if m:
            stream.expect("{")
            _read_logic(env, m.group(1), stream, lineno)
            continue
        m = _MORPH_HEAD.match(line)
        if m:
            stream.expect("{")
            _read_morphism(env, m, stream, lineno)
            continue
        raise SpecError(f"unrecognized declaration {line!r}", lineno)
    return env


def _read_signature(env: Environment, name: str, stream: _Stream, at: int) -> None:
    if name in env.signatures:
        raise SpecError(f"duplicate signature {name!r}", at)
    connectives: dict[str, int] = {}
    while not stream.done():
        line, lineno = stream.next()
        if line == "}":
            env.signatures[name] = Signature(name, connectives)
            return
        for item in line.split():
            m = _CONN.match(item)
            if not m:
                raise SpecError(f"expected conn/arity, found {item!r}", lineno)
            ident, arity = m.group(1), int(m.group(2))
            if re.fullmatch(r"x[0-9]+", ident):
                raise SpecError(
                    f"connective {ident!r} would collide with a variable", lineno)
            if ident in connectives:
                raise SpecError(f"duplicate connective {ident!r}", lineno)
            connectives[ident] = arity
    raise SpecError(f"unterminated signature {name!r}", at)


def _read_logic(env: Environment, name: str, stream: _Stream, at: int) -> None:
    if name in env.logics:
        raise SpecError(f"duplicate logic {name!r}", at)
    sig: Signature | None = None
    axioms: list[Formula] = []
    rules: list[Rule] = []
    matrix: Matrix | None = None
    marker: str | None = None
    while not stream.done():
        line, lineno = stream.next()
        if line == "}":
            if sig is None:
                raise SpecError(f"logic {name!r} declares no signature", lineno)
            if marker == "bottom":
                env.logics[name] = bottom(sig, name=name)
            elif marker == "top":
                env.logics[name] = top(sig, name=name)
            else:
                calculus = Calculus(sig, axioms, rules) if (axioms or rules) else None
                if calculus is None and matrix is None:
                    raise SpecError(f"logic {name!r} has no provider", lineno)
                try:
                    env.logics[name] = Logic(name, sig, calculus=calculus,
                                             matrix=matrix)
                except ValueError as exc:
                    raise SpecError(str(exc), lineno) from None
            return
        if line.startswith("signature "):
            ref = line.split(None, 1)[1].strip()
            try:
                sig = env.signature(ref)
            except KeyError as exc:
                raise SpecError(str(exc), lineno) from None
        elif line.startswith("axiom "):
            axioms.append(_parse_formula(line[len("axiom "):], sig, lineno))
        elif line.startswith("rule "):
            body = line[len("rule "):]
            if "=>" not in body:
                raise SpecError("rule needs '=>'", lineno)
            left, right = body.rsplit("=>", 1)
            premises = tuple(_parse_formula(p, sig, lineno)
                             for p in _split_top_level(left))
            if not premises:
                raise SpecError("rules need at least one premise", lineno)
            rules.append(Rule(premises, _parse_formula(right, sig, lineno)))
        elif line == "matrix":
            stream.expect("{")
            matrix = _read_matrix(stream, lineno)
        elif line in ("bottom", "top"):
            marker = line
        else:
            raise SpecError(f"unrecognized logic entry {line!r}", lineno)
    raise SpecError(f"unterminated logic {name!r}", at)


def _split_top_level(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    parts: list[str] = []
    depth = 0
    buf = ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(buf)
            buf = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        buf += ch
    parts.append(buf)
    return [p for p in parts if p.strip()]


def _parse_formula(text: str, sig: Signature | None, line: int) -> Formula:
    if sig is None:
        raise SpecError("declare the signature before formulas", line)
    try:
        return parse(text.strip(), sig)
    except ParseError as exc:
        raise SpecError(f"in {text.strip()!r}: {exc}", line) from None


def _read_matrix(stream: _Stream, at: int) -> Matrix:
    values: list[str] = []
    designated: list[str] = []
    tables: dict[str, dict[tuple, str]] = {}
    while not stream.done():
        line, lineno = stream.next()
        if line == "}":
            try:
                return Matrix(values, designated, tables)
            except ValueError as exc:
                raise SpecError(str(exc), lineno) from None
        if line.startswith("values "):
            values = line.split()[1:]
        elif line.startswith("designated "):
            designated = line.split()[1:]
        elif line.startswith("table "):
            parts = line.split(None, 2)
            if len(parts) < 3:
                raise SpecError("table needs entries", lineno)
            conn = parts[1]
            entries = {}
            for m in _TABLE_ENTRY.finditer(parts[2]):
                args = tuple(a.strip() for a in m.group(1).split(",") if a.strip())
                entries[args] = m.group(2)
            tables[conn] = entries
        else:
            raise SpecError(f"unrecognized matrix entry {line!r}", lineno)
    raise SpecError("unterminated matrix block", at)


def _read_morphism(env: Environment, head, stream: _Stream, at: int) -> None:
    kind, name, src_name, tgt_name = head.groups()
    if name in env.morphisms:
        raise SpecError(f"duplicate morphism {name!r}", at)
    try:
        src = env.signature(src_name)
        tgt = env.signature(tgt_name)
    except KeyError as exc:
        raise SpecError(str(exc), at) from None
    mapping: dict[str, object] = {}
    while not stream.done():
        line, lineno = stream.next()
        if line == "}":
            try:
                if kind == "strict":
                    env.morphisms[name] = StrictMorphism(src, tgt, mapping, name=name)
                else:
                    env.morphisms[name] = FlexibleMorphism(src, tgt, mapping, name=name)
            except ValueError as exc:
                raise SpecError(str(exc), lineno) from None
            return
        if "->" not in line:
            raise SpecError(f"expected 'conn -> image', found {line!r}", lineno)
        left, right = line.split("->", 1)
        conn = left.strip()
        if conn not in src.connectives:
            raise SpecError(f"{conn!r} is not a connective of {src_name}", lineno)
        if kind == "strict":
            mapping[conn] = right.strip()
        else:
            mapping[conn] = _parse_formula(right, tgt, lineno)
    raise SpecError(f"unterminated morphism {name!r}", at)


# ---------------------------------------------------------------------------
# Writers (used by the CLI to emit combined objects)


def signature_to_dsl(sig: Signature) -> str:
    body = "\n".join(f"  {c}/{a}" for c, a in sorted(sig.connectives.items()))
    return f"signature {sig.name} {{\n{body}\n}}\n"


def logic_to_dsl(logic: Logic) -> str:
    from .formulas import fmt
    out = [f"logic {logic.name} {{", f"  signature {logic.signature.name}"]
    if logic.calculus is not None:
        for a in logic.calculus.axioms:
            out.append(f"  axiom {fmt(a)}")
        for r in logic.calculus.rules:
            prem = ", ".join(fmt(p) for p in r.premises)
            out.append(f"  rule {prem} => {fmt(r.conclusion)}")
    if logic.matrix is not None:
        m = logic.matrix
        out.append("  matrix {")
        out.append("    values " + " ".join(str(v) for v in m.values))
        out.append("    designated " + " ".join(sorted(str(v) for v in m.designated)))
        for c, table in sorted(m.tables.items()):
            entries = " ".join(
                f"({','.join(map(str, k))})={v}"
                for k, v in sorted(table.items(), key=lambda kv: tuple(map(str, kv[0]))))
            out.append(f"    table {c} {entries}")
        out.append("  }")
    if logic.oracle is not None:
        out.append("  # oracle-backed logic; presentation not expressible")
    out.append("}")
    return "\n".join(out) + "\n"


def morphism_to_dsl(m) -> str:
    from .formulas import fmt
    kind = "strict" if isinstance(m, StrictMorphism) else "flexible"
    out = [f"morphism {kind} {m.name or 'unnamed'} : "
           f"{m.source.name} -> {m.target.name} {{"]
    if isinstance(m, StrictMorphism):
        for c, d in sorted(m.mapping.items()):
            out.append(f"  {c} -> {d}")
    else:
        for c, phi in sorted(m.assignment.items()):
            out.append(f"  {c} -> {fmt(phi)}")
    out.append("}")
    return "\n".join(out) + "\n"
