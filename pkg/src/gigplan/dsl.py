"""Parser for the typed STRIPS-like domain and task language.

The concrete syntax is a small s-expression dialect::

    (domain kitchen
      (:types station - support item - support robot)
      (:predicates (at robot station) (on item support))
      (:action move :params (?r - robot ?a - station ?b - station)
        :pre ((at ?r ?a) (adjacent ?a ?b))
        :eff ((not (at ?r ?a)) (at ?r ?b))))

    (task lunch :objects (robot1 - robot table1 - station)
      :init ((at robot1 table1)) :goal ((served lunch1)) :horizon 4)

Line comments start with ``;``.  Actions may carry ``:duration N :delayed
(...)`` for effects that fire N ticks after execution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class ParseError(Exception):
    """Raised on syntax or validation errors; carries positioned diagnostics."""

    def __init__(self, diagnostics: list["Diagnostic"]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


@dataclass(frozen=True)
class Literal:
    """A possibly negated predicate application over variables and constants."""

    positive: bool
    name: str
    args: tuple[str, ...]

    def render(self) -> str:
        inner = f"({self.name}{''.join(' ' + a for a in self.args)})"
        return inner if self.positive else f"(not {inner})"


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[tuple[str, str], ...]  # (variable, type)
    preconditions: tuple[Literal, ...]
    add_effects: tuple[Literal, ...]
    del_effects: tuple[Literal, ...]
    duration: int = 0
    delayed_add: tuple[Literal, ...] = ()
    delayed_del: tuple[Literal, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class DomainSpec:
    name: str
    types: tuple[tuple[str, Optional[str]], ...]  # (type, parent or None)
    predicates: tuple[tuple[str, tuple[str, ...]], ...]  # (name, param types)
    actions: tuple[ActionSchema, ...]

    def predicate_map(self) -> dict[str, tuple[str, ...]]:
        return {name: types for name, types in self.predicates}

    def action_map(self) -> dict[str, ActionSchema]:
        return {a.name: a for a in self.actions}

    def type_ancestors(self) -> dict[str, frozenset[str]]:
        """Each type mapped to itself plus all transitive parents."""
        parents = {t: p for t, p in self.types}
        out: dict[str, frozenset[str]] = {}
        for t in parents:
            chain = {t}
            cur = parents.get(t)
            while cur is not None and cur not in chain:
                chain.add(cur)
                cur = parents.get(cur)
            out[t] = frozenset(chain)
        return out


@dataclass(frozen=True)
class TaskSpec:
    name: str
    objects: tuple[tuple[str, str], ...]  # (object, type)
    init: tuple[tuple, ...]  # ground atoms as flat tuples: (name, arg1, ...)
    goal: tuple[tuple, ...]
    horizon: int

    def object_map(self) -> dict[str, str]:
        return {name: typ for name, typ in self.objects}


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_PUNCT = {"(": "LPAREN", ")": "RPAREN", "-": "DASH"}


@dataclass(frozen=True)
class Token:
    kind: str  # LPAREN RPAREN DASH NAME VAR INT KEYWORD EOF
    text: str
    line: int
    col: int


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_#"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch in (":", "?"):
            j = i + 1
            while j < n and _is_name_char(text[j]):
                j += 1
            word = text[i:j]
            if len(word) == 1:
                raise ParseError([Diagnostic(f"dangling {ch!r}", start_line, start_col)])
            kind = "KEYWORD" if ch == ":" else "VAR"
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if _is_name_char(ch):
            j = i
            while j < n and _is_name_char(text[j]):
                j += 1
            tokens.append(Token("NAME", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError([Diagnostic(f"unexpected character {ch!r}", start_line, start_col)])
    tokens.append(Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise ParseError([Diagnostic(f"expected {want}, found {tok.text or tok.kind!r}", tok.line, tok.col)])
        return self.next()


def _parse_literal(s: _Stream) -> tuple[Literal, Token]:
    """Returns the literal and the token of its predicate name (for diagnostics)."""
    s.expect("LPAREN")
    positive = True
    tok = s.peek()
    if tok.kind == "NAME" and tok.text == "not":
        s.next()
        positive = False
        s.expect("LPAREN")
    name_tok = s.expect("NAME")
    args: list[str] = []
    while s.peek().kind in ("NAME", "VAR"):
        args.append(s.next().text)
    s.expect("RPAREN")
    if not positive:
        s.expect("RPAREN")
    return Literal(positive, name_tok.text, tuple(args)), name_tok


def _parse_literal_list(s: _Stream) -> list[tuple[Literal, Token]]:
    s.expect("LPAREN")
    out = []
    while s.peek().kind == "LPAREN":
        out.append(_parse_literal(s))
    s.expect("RPAREN")
    return out


def _split_effects(literals: list[tuple[Literal, Token]]) -> tuple[tuple[Literal, ...], tuple[Literal, ...]]:
    adds = tuple(lit for lit, _ in literals if lit.positive)
    dels = tuple(Literal(True, lit.name, lit.args) for lit, _ in literals if not lit.positive)
    return adds, dels


def _parse_action(s: _Stream, diags: list[Diagnostic], positions: dict[int, Token]) -> ActionSchema:
    s.expect("KEYWORD", ":action")
    name_tok = s.expect("NAME")
    s.expect("KEYWORD", ":params")
    s.expect("LPAREN")
    params: list[tuple[str, str]] = []
    while s.peek().kind == "VAR":
        var = s.next()
        s.expect("DASH")
        typ = s.expect("NAME")
        params.append((var.text, typ.text))
    s.expect("RPAREN")
    s.expect("KEYWORD", ":pre")
    pre = _parse_literal_list(s)
    s.expect("KEYWORD", ":eff")
    eff = _parse_literal_list(s)
    duration = 0
    delayed: list[tuple[Literal, Token]] = []
    if s.peek().kind == "KEYWORD" and s.peek().text == ":duration":
        dur_tok = s.next()
        duration = int(s.expect("INT").text)
        s.expect("KEYWORD", ":delayed")
        delayed = _parse_literal_list(s)
        if duration == 0 and delayed:
            diags.append(Diagnostic(f"action {name_tok.text!r} has duration 0 but delayed effects", dur_tok.line, dur_tok.col))
    s.expect("RPAREN")
    adds, dels = _split_effects(eff)
    dadds, ddels = _split_effects(delayed)
    schema = ActionSchema(name_tok.text, tuple(params), tuple(lit for lit, _ in pre), adds, dels, duration, dadds, ddels)
    positions[("lits", schema.name)] = list(pre + eff + delayed)
    positions[("name", schema.name)] = name_tok
    return schema


def parse_domain(text: str) -> DomainSpec:
    """Parse and validate domain source; raises ParseError with diagnostics."""
    s = _Stream(tokenize(text))
    diags: list[Diagnostic] = []
    positions: dict = {}
    s.expect("LPAREN")
    s.expect("NAME", "domain")
    name = s.expect("NAME").text

    s.expect("LPAREN")
    s.expect("KEYWORD", ":types")
    types: list[tuple[str, Optional[str]]] = []
    type_toks: list[Token] = []
    while s.peek().kind == "NAME":
        t = s.next()
        parent = None
        if s.peek().kind == "DASH":
            s.next()
            parent = s.expect("NAME").text
        types.append((t.text, parent))
        type_toks.append(t)
    s.expect("RPAREN")

    s.expect("LPAREN")
    s.expect("KEYWORD", ":predicates")
    predicates: list[tuple[str, tuple[str, ...]]] = []
    pred_toks: list[Token] = []
    while s.peek().kind == "LPAREN":
        s.next()
        p = s.expect("NAME")
        ptypes: list[str] = []
        while s.peek().kind == "NAME":
            ptypes.append(s.next().text)
        s.expect("RPAREN")
        predicates.append((p.text, tuple(ptypes)))
        pred_toks.append(p)
    s.expect("RPAREN")

    actions: list[ActionSchema] = []
    while s.peek().kind == "LPAREN":
        s.next()
        actions.append(_parse_action(s, diags, positions))
    s.expect("RPAREN")
    eof = s.peek()
    if eof.kind != "EOF":
        raise ParseError([Diagnostic(f"trailing input {eof.text!r}", eof.line, eof.col)])

    spec = DomainSpec(name, tuple(types), tuple(predicates), tuple(actions))
    _validate_domain(spec, diags, positions, type_toks, pred_toks)
    if diags:
        raise ParseError(diags)
    return spec


def _validate_domain(spec: DomainSpec, diags: list[Diagnostic], positions: dict,
                     type_toks: list[Token], pred_toks: list[Token]) -> None:
    declared_types = {t for t, _ in spec.types}
    parents = dict(spec.types)
    for (t, parent), tok in zip(spec.types, type_toks):
        if parent is not None and parent not in declared_types:
            diags.append(Diagnostic(f"undeclared parent type {parent!r}", tok.line, tok.col))
    # acyclicity
    for t in declared_types:
        seen = {t}
        cur = parents.get(t)
        while cur is not None:
            if cur in seen:
                tok = next(tk for (ty, _), tk in zip(spec.types, type_toks) if ty == t)
                diags.append(Diagnostic(f"type cycle through {t!r}", tok.line, tok.col))
                break
            seen.add(cur)
            cur = parents.get(cur)

    pred_map: dict[str, tuple[str, ...]] = {}
    for (p, ptypes), tok in zip(spec.predicates, pred_toks):
        if p in pred_map:
            diags.append(Diagnostic(f"duplicate predicate {p!r}", tok.line, tok.col))
        pred_map[p] = ptypes
        for pt in ptypes:
            if pt not in declared_types:
                diags.append(Diagnostic(f"undeclared type {pt!r} in predicate {p!r}", tok.line, tok.col))

    seen_actions: set[str] = set()
    for schema in spec.actions:
        name_tok = positions[("name", schema.name)]
        if schema.name in seen_actions:
            diags.append(Diagnostic(f"duplicate action name {schema.name!r}", name_tok.line, name_tok.col))
        seen_actions.add(schema.name)
        param_vars = {v for v, _ in schema.params}
        if len(param_vars) != len(schema.params):
            diags.append(Diagnostic(f"duplicate parameter in action {schema.name!r}", name_tok.line, name_tok.col))
        for _, ptype in schema.params:
            if ptype not in declared_types:
                diags.append(Diagnostic(f"undeclared type {ptype!r} in action {schema.name!r}", name_tok.line, name_tok.col))
        for lit, tok in positions[("lits", schema.name)]:
            if lit.name not in pred_map:
                diags.append(Diagnostic(f"undeclared predicate {lit.name!r}", tok.line, tok.col))
            elif len(lit.args) != len(pred_map[lit.name]):
                diags.append(Diagnostic(
                    f"predicate {lit.name!r} expects {len(pred_map[lit.name])} args, got {len(lit.args)}",
                    tok.line, tok.col))
            for arg in lit.args:
                if arg.startswith("?") and arg not in param_vars:
                    diags.append(Diagnostic(f"unbound variable {arg!r} in action {schema.name!r}", tok.line, tok.col))


def parse_task(text: str, domain: DomainSpec) -> TaskSpec:
    """Parse and validate task source against an already validated domain."""
    s = _Stream(tokenize(text))
    diags: list[Diagnostic] = []
    s.expect("LPAREN")
    s.expect("NAME", "task")
    name = s.expect("NAME").text

    s.expect("KEYWORD", ":objects")
    s.expect("LPAREN")
    objects: list[tuple[str, str]] = []
    obj_toks: list[Token] = []
    while s.peek().kind == "NAME":
        o = s.next()
        s.expect("DASH")
        t = s.expect("NAME")
        objects.append((o.text, t.text))
        obj_toks.append(t)
    s.expect("RPAREN")

    s.expect("KEYWORD", ":init")
    init = _parse_literal_list(s)
    s.expect("KEYWORD", ":goal")
    goal = _parse_literal_list(s)
    s.expect("KEYWORD", ":horizon")
    hz_tok = s.expect("INT")
    horizon = int(hz_tok.text)
    s.expect("RPAREN")

    declared_types = {t for t, _ in domain.types}
    ancestors = domain.type_ancestors()
    pred_map = domain.predicate_map()
    obj_map: dict[str, str] = {}
    for (o, t), tok in zip(objects, obj_toks):
        if t not in declared_types:
            diags.append(Diagnostic(f"undeclared type {t!r} for object {o!r}", tok.line, tok.col))
        if o in obj_map:
            diags.append(Diagnostic(f"duplicate object {o!r}", tok.line, tok.col))
        obj_map[o] = t

    def check_ground(lits: list[tuple[Literal, Token]], where: str, allow_negative: bool) -> list[tuple]:
        atoms = []
        for lit, tok in lits:
            if not lit.positive:
                if not allow_negative:
                    diags.append(Diagnostic(f"negative literal not allowed in {where}", tok.line, tok.col))
                continue
            if lit.name not in pred_map:
                diags.append(Diagnostic(f"undeclared predicate {lit.name!r} in {where}", tok.line, tok.col))
                continue
            ptypes = pred_map[lit.name]
            if len(lit.args) != len(ptypes):
                diags.append(Diagnostic(
                    f"predicate {lit.name!r} expects {len(ptypes)} args, got {len(lit.args)}", tok.line, tok.col))
                continue
            ok = True
            for arg, pt in zip(lit.args, ptypes):
                if arg.startswith("?"):
                    diags.append(Diagnostic(f"variable {arg!r} not allowed in {where}", tok.line, tok.col))
                    ok = False
                elif arg not in obj_map:
                    diags.append(Diagnostic(f"unknown object {arg!r} in {where}", tok.line, tok.col))
                    ok = False
                elif pt not in ancestors.get(obj_map[arg], frozenset()):
                    diags.append(Diagnostic(
                        f"object {arg!r} of type {obj_map[arg]!r} does not satisfy {pt!r}", tok.line, tok.col))
                    ok = False
            if ok:
                atoms.append((lit.name,) + lit.args)
        return atoms

    init_atoms = check_ground(init, "init", allow_negative=False)
    goal_atoms = check_ground(goal, "goal", allow_negative=False)
    if not goal:
        diags.append(Diagnostic("empty goal", hz_tok.line, hz_tok.col))
    if horizon < 1:
        diags.append(Diagnostic("horizon must be >= 1", hz_tok.line, hz_tok.col))
    if diags:
        raise ParseError(diags)
    return TaskSpec(name, tuple(objects), tuple(init_atoms), tuple(goal_atoms), horizon)


# ---------------------------------------------------------------------------
# Pretty printing (canonical re-emission; round-trips through the parser)
# ---------------------------------------------------------------------------


def _render_literals(lits: tuple[Literal, ...], neg: tuple[Literal, ...] = ()) -> str:
    parts = [l.render() for l in lits] + [Literal(False, l.name, l.args).render() for l in neg]
    return "(" + " ".join(parts) + ")"


def render_domain(spec: DomainSpec) -> str:
    lines = [f"(domain {spec.name}"]
    tdecl = " ".join(t if p is None else f"{t} - {p}" for t, p in spec.types)
    lines.append(f"  (:types {tdecl})")
    pdecl = " ".join(f"({p}{''.join(' ' + t for t in ts)})" for p, ts in spec.predicates)
    lines.append(f"  (:predicates {pdecl})")
    for a in spec.actions:
        params = " ".join(f"{v} - {t}" for v, t in a.params)
        lines.append(f"  (:action {a.name} :params ({params})")
        lines.append(f"    :pre {_render_literals(a.preconditions)}")
        eff = _render_literals(a.add_effects, a.del_effects)
        if a.duration > 0:
            delayed = _render_literals(a.delayed_add, a.delayed_del)
            lines.append(f"    :eff {eff} :duration {a.duration} :delayed {delayed})")
        else:
            lines.append(f"    :eff {eff})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def render_task(task: TaskSpec) -> str:
    objs = " ".join(f"{o} - {t}" for o, t in task.objects)
    init = " ".join(f"({' '.join(atom)})" for atom in task.init)
    goal = " ".join(f"({' '.join(atom)})" for atom in task.goal)
    return (f"(task {task.name} :objects ({objs})\n"
            f"  :init ({init})\n  :goal ({goal})\n  :horizon {task.horizon})\n")
