"""Symbolic environment: grounded actions, transitions, observations, hashing.

States are immutable values; ``apply`` returns a new state.  A ``World`` binds
a domain to a typed object universe and precompiles grounding machinery so the
per-state operations stay cheap enough for breadth-first search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .dsl import ActionSchema, DomainSpec, TaskSpec

Atom = tuple  # ("on", "a", "b") -- predicate name followed by arguments


def render_atom(atom: Atom) -> str:
    return f"{atom[0]}({','.join(atom[1:])})"


def parse_atom(text: str) -> Atom:
    name, _, rest = text.partition("(")
    rest = rest.rstrip(")")
    args = tuple(a for a in rest.split(",") if a) if rest else ()
    return (name,) + args


@dataclass(frozen=True)
class PendingEffect:
    fire_tick: int
    adds: tuple[Atom, ...]
    dels: tuple[Atom, ...]

    def render(self) -> str:
        parts = [f"+{render_atom(a)}" for a in sorted(self.adds)]
        parts += [f"-{render_atom(a)}" for a in sorted(self.dels)]
        return f"@{self.fire_tick}:" + "/".join(parts)


@dataclass(frozen=True)
class SymbolicState:
    predicates: frozenset
    clock: int = 0
    pending: tuple[PendingEffect, ...] = ()


@dataclass(frozen=True)
class GroundedAction:
    schema: str
    binding: tuple[str, ...]
    rendered: str


@dataclass(frozen=True)
class Observation:
    predicates: tuple[Atom, ...]
    clock: int


class PreconditionViolation(Exception):
    """The policy chose an action whose preconditions do not hold."""


def make_action(schema: str, binding: Iterable[str]) -> GroundedAction:
    binding = tuple(binding)
    return GroundedAction(schema, binding, f"{schema}({','.join(binding)})")


def serialize_state(state: SymbolicState) -> str:
    lines = sorted(render_atom(a) for a in state.predicates)
    lines.append(f"#clock={state.clock}")
    lines.extend(sorted(p.render() for p in state.pending))
    return "\n".join(lines)


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def state_hash(state: SymbolicState) -> int:
    """Stable 64-bit hash of the canonical serialization (FNV-1a)."""
    return fnv1a64(serialize_state(state).encode("utf-8"))


# ---------------------------------------------------------------------------
# Grounding
# ---------------------------------------------------------------------------


class _CompiledSchema:
    """Join plan over the positive preconditions of one action schema.

    Positive preconditions are ordered greedily so each step shares as many
    already-bound variables as possible; unbound parameters left over are
    enumerated by type.  Negative preconditions are checked last.
    """

    def __init__(self, schema: ActionSchema, ancestors: dict[str, frozenset[str]],
                 objects_by_type: dict[str, tuple[str, ...]]):
        self.schema = schema
        self.var_index = {v: i for i, (v, _) in enumerate(schema.params)}
        self.var_types = [t for _, t in schema.params]
        self.ancestors = ancestors
        self.objects_by_type = objects_by_type

        remaining = list(schema.preconditions)
        positives = [p for p in remaining if p.positive]
        self.negatives = [p for p in remaining if not p.positive]

        ordered: list = []
        bound: set[str] = set()
        while positives:
            def score(lit):
                new = sum(1 for a in lit.args if a.startswith("?") and a not in bound)
                return (new, -len(lit.args))
            positives.sort(key=score)
            lit = positives.pop(0)
            ordered.append(lit)
            bound.update(a for a in lit.args if a.startswith("?"))
        self.join_order = ordered
        self.free_after_join = [v for v, _ in schema.params if v not in bound]

        # precompile effect templates as (name, arg slots); slot is var index or const
        def compile_atoms(lits):
            out = []
            for lit in lits:
                slots = tuple(self.var_index[a] if a.startswith("?") else a for a in lit.args)
                out.append((lit.name, slots))
            return tuple(out)

        self.adds_t = compile_atoms(schema.add_effects)
        self.dels_t = compile_atoms(schema.del_effects)
        self.dadds_t = compile_atoms(schema.delayed_add)
        self.ddels_t = compile_atoms(schema.delayed_del)

    def _matches_type(self, obj_type: Optional[str], want: str) -> bool:
        if obj_type is None:
            return False
        return want in self.ancestors.get(obj_type, frozenset())

    def instantiate_atoms(self, templates, binding: tuple[str, ...]) -> tuple[Atom, ...]:
        return tuple((name,) + tuple(binding[s] if isinstance(s, int) else s for s in slots)
                     for name, slots in templates)

    def match(self, index: dict[str, list[Atom]], preds: frozenset,
              object_types: dict[str, str]) -> list[tuple[str, ...]]:
        """All bindings (as param-ordered object tuples) satisfying the schema."""
        nvars = len(self.schema.params)
        results: list[tuple[str, ...]] = []
        binding: list[Optional[str]] = [None] * nvars

        def extend(step: int) -> None:
            if step == len(self.join_order):
                finish(0)
                return
            lit = self.join_order[step]
            for atom in index.get(lit.name, ()):
                saved: list[tuple[int, Optional[str]]] = []
                ok = True
                for pat, val in zip(lit.args, atom[1:]):
                    if pat.startswith("?"):
                        vi = self.var_index[pat]
                        cur = binding[vi]
                        if cur is None:
                            if not self._matches_type(object_types.get(val), self.var_types[vi]):
                                ok = False
                                break
                            saved.append((vi, None))
                            binding[vi] = val
                        elif cur != val:
                            ok = False
                            break
                    elif pat != val:
                        ok = False
                        break
                if ok:
                    extend(step + 1)
                for vi, old in saved:
                    binding[vi] = old

        def finish(fi: int) -> None:
            if fi == len(self.free_after_join):
                for lit in self.negatives:
                    atom = (lit.name,) + tuple(
                        binding[self.var_index[a]] if a.startswith("?") else a for a in lit.args)
                    if atom in preds:
                        return
                results.append(tuple(binding))  # type: ignore[arg-type]
                return
            var = self.free_after_join[fi]
            vi = self.var_index[var]
            for obj in self.objects_by_type.get(self.var_types[vi], ()):
                binding[vi] = obj
                finish(fi + 1)
                binding[vi] = None

        extend(0)
        return results


class World:
    """Domain bound to a typed object universe, with precompiled grounding."""

    def __init__(self, domain: DomainSpec, objects: Iterable[tuple[str, str]]):
        self.domain = domain
        self.objects = tuple(objects)
        self.object_types = {o: t for o, t in self.objects}
        ancestors = domain.type_ancestors()
        by_type: dict[str, list[str]] = {}
        for o, t in self.objects:
            for anc in ancestors.get(t, frozenset({t})):
                by_type.setdefault(anc, []).append(o)
        self.objects_by_type = {t: tuple(sorted(os)) for t, os in by_type.items()}
        self.schemas = {
            a.name: _CompiledSchema(a, ancestors, self.objects_by_type)
            for a in domain.actions
        }

    @classmethod
    def for_task(cls, domain: DomainSpec, task: TaskSpec) -> "World":
        return cls(domain, task.objects)

    def initial_state(self, task: TaskSpec) -> SymbolicState:
        return SymbolicState(frozenset(task.init))

    def _index(self, preds: frozenset) -> dict[str, list[Atom]]:
        index: dict[str, list[Atom]] = {}
        for atom in preds:
            index.setdefault(atom[0], []).append(atom)
        return index

    def ground_actions(self, state: SymbolicState) -> list[GroundedAction]:
        """Valid grounded actions in canonical (schema, binding) order."""
        index = self._index(state.predicates)
        out: list[GroundedAction] = []
        for name in sorted(self.schemas):
            comp = self.schemas[name]
            bindings = comp.match(index, state.predicates, self.object_types)
            for b in sorted(bindings):
                out.append(make_action(name, b))
        return out

    def holds(self, state: SymbolicState, action: GroundedAction) -> bool:
        comp = self.schemas.get(action.schema)
        if comp is None or len(action.binding) != comp.schema.arity:
            return False
        env = dict(zip((v for v, _ in comp.schema.params), action.binding))
        for v, t in comp.schema.params:
            if not comp._matches_type(self.object_types.get(env[v]), t):
                return False
        for lit in comp.schema.preconditions:
            atom = (lit.name,) + tuple(env[a] if a.startswith("?") else a for a in lit.args)
            if lit.positive != (atom in state.predicates):
                return False
        return True

    def effects(self, action: GroundedAction):
        """(adds, dels, delayed_adds, delayed_dels, duration) for a binding."""
        comp = self.schemas[action.schema]
        b = action.binding
        return (comp.instantiate_atoms(comp.adds_t, b),
                comp.instantiate_atoms(comp.dels_t, b),
                comp.instantiate_atoms(comp.dadds_t, b),
                comp.instantiate_atoms(comp.ddels_t, b),
                comp.schema.duration)

    def apply(self, state: SymbolicState, action: GroundedAction, check: bool = True) -> SymbolicState:
        """One transition step: immediate effects, scheduling, due pending effects."""
        if check and not self.holds(state, action):
            raise PreconditionViolation(f"{action.rendered} is not valid in the current state")
        adds, dels, dadds, ddels, duration = self.effects(action)
        clock = state.clock + 1
        preds = set(state.predicates)
        preds.difference_update(dels)
        preds.update(adds)
        pending = list(state.pending)
        if duration > 0 and (dadds or ddels):
            pending.append(PendingEffect(state.clock + duration, dadds, ddels))
        due = [p for p in pending if p.fire_tick <= clock]
        pending = [p for p in pending if p.fire_tick > clock]
        for p in sorted(due, key=lambda p: (p.fire_tick, p.render())):
            preds.difference_update(p.dels)
            preds.update(p.adds)
        pending.sort(key=lambda p: (p.fire_tick, p.render()))
        return SymbolicState(frozenset(preds), clock, tuple(pending))


def is_goal(state: SymbolicState, task: TaskSpec) -> bool:
    return all(atom in state.predicates for atom in task.goal)


def observe(state: SymbolicState, visibility: str = "full") -> Observation:
    """Project a state to what the agent can see.

    ``partial`` hides every predicate mentioning an entity that sits inside a
    container that is not opened: ``in(x, c)`` without ``opened(c)`` hides x.
    """
    if visibility == "full":
        return Observation(tuple(sorted(state.predicates)), state.clock)
    if visibility != "partial":
        raise ValueError(f"unknown visibility {visibility!r}")
    hidden: set[str] = set()
    for atom in state.predicates:
        if atom[0] == "in" and len(atom) == 3:
            x, c = atom[1], atom[2]
            if ("opened", c) not in state.predicates:
                hidden.add(x)
    visible = [a for a in state.predicates if not any(arg in hidden for arg in a[1:])]
    return Observation(tuple(sorted(visible)), state.clock)


# Module-level forms of the core operations, mirroring the World methods for
# callers that hold a (domain, objects) pair rather than a prebuilt World.


def ground_actions(domain: DomainSpec, state: SymbolicState,
                   objects: Iterable[tuple[str, str]]) -> list[GroundedAction]:
    return World(domain, objects).ground_actions(state)


def apply_action(domain: DomainSpec, state: SymbolicState, action: GroundedAction,
                 objects: Iterable[tuple[str, str]]) -> SymbolicState:
    return World(domain, objects).apply(state, action)
