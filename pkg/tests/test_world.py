import itertools

import pytest

from gigplan.dsl import parse_domain, parse_task
from gigplan.world import (
    PreconditionViolation,
    SymbolicState,
    World,
    is_goal,
    make_action,
    observe,
    parse_atom,
    render_atom,
    serialize_state,
    state_hash,
)

MOVE_DOMAIN = """
(domain movers
  (:types robot loc)
  (:predicates (at robot loc))
  (:action move :params (?r - robot ?a - loc ?b - loc)
    :pre ((at ?r ?a))
    :eff ((not (at ?r ?a)) (at ?r ?b))))
"""

MOVE_TASK = """
(task roam :objects (robot1 - robot loc1 - loc loc2 - loc loc3 - loc)
  :init ((at robot1 loc1)) :goal ((at robot1 loc3)) :horizon 1)
"""

ASYNC_DOMAIN = """
(domain pots
  (:types robot item)
  (:predicates (raw item) (boiled item) (idle robot))
  (:action boil :params (?x - item)
    :pre ((raw ?x)) :eff ((not (raw ?x)))
    :duration 3 :delayed ((boiled ?x)))
  (:action wait :params () :pre () :eff ()))
"""

ASYNC_TASK = """
(task soup :objects (robot1 - robot water1 - item)
  :init ((raw water1) (idle robot1)) :goal ((boiled water1)) :horizon 4)
"""


def brute_force_ground(world, state):
    """Independent enumeration: all typed bindings, filtered by preconditions."""
    valid = []
    for name in sorted(world.schemas):
        schema = world.schemas[name].schema
        pools = [world.objects_by_type.get(t, ()) for _, t in schema.params]
        for combo in itertools.product(*pools):
            action = make_action(name, combo)
            if world.holds(state, action):
                valid.append(action)
    return sorted(valid, key=lambda a: (a.schema, a.binding))


@pytest.fixture
def move_world():
    dom = parse_domain(MOVE_DOMAIN)
    task = parse_task(MOVE_TASK, dom)
    return World.for_task(dom, task), task


def test_ground_actions_matches_brute_force(move_world):
    world, task = move_world
    state = world.initial_state(task)
    got = world.ground_actions(state)
    assert got == brute_force_ground(world, state)
    # robot at loc1 can move to any loc, including loc1 (no self-move guard)
    assert [a.rendered for a in got] == [
        "move(robot1,loc1,loc1)",
        "move(robot1,loc1,loc2)",
        "move(robot1,loc1,loc3)",
    ]


def test_no_valid_actions_is_empty(move_world):
    world, _ = move_world
    state = SymbolicState(frozenset())
    assert world.ground_actions(state) == []


def test_adding_object_is_monotone(move_world):
    world, task = move_world
    state = world.initial_state(task)
    before = {a.rendered for a in world.ground_actions(state)}
    bigger = World(world.domain, list(task.objects) + [("loc4", "loc")])
    after = {a.rendered for a in bigger.ground_actions(state)}
    assert before <= after


def test_apply_moves_and_advances_clock(move_world):
    world, task = move_world
    state = world.initial_state(task)
    nxt = world.apply(state, make_action("move", ("robot1", "loc1", "loc2")))
    assert ("at", "robot1", "loc2") in nxt.predicates
    assert ("at", "robot1", "loc1") not in nxt.predicates
    assert nxt.clock == state.clock + 1
    assert state.predicates == frozenset({("at", "robot1", "loc1")})  # unchanged


def test_apply_rejects_invalid_action(move_world):
    world, task = move_world
    state = world.initial_state(task)
    with pytest.raises(PreconditionViolation):
        world.apply(state, make_action("move", ("robot1", "loc2", "loc3")))


def test_delete_before_add_keeps_predicate():
    dom = parse_domain("""
(domain toggler
  (:types thing)
  (:predicates (on thing thing))
  (:action touch :params (?a - thing ?b - thing)
    :pre ((on ?a ?b))
    :eff ((not (on ?a ?b)) (on ?a ?b))))
""")
    world = World(dom, [("a", "thing"), ("b", "thing")])
    state = SymbolicState(frozenset({("on", "a", "b")}))
    nxt = world.apply(state, make_action("touch", ("a", "b")))
    assert ("on", "a", "b") in nxt.predicates


def test_delayed_effects_schedule_and_fire():
    dom = parse_domain(ASYNC_DOMAIN)
    task = parse_task(ASYNC_TASK, dom)
    world = World.for_task(dom, task)
    state = world.initial_state(task)
    wait = make_action("wait", ())

    after_boil = world.apply(state, make_action("boil", ("water1",)))
    assert ("boiled", "water1") not in after_boil.predicates
    assert len(after_boil.pending) == 1
    assert after_boil.pending[0].fire_tick == state.clock + 3

    s = after_boil
    for _ in range(3):
        s = world.apply(s, wait)
    assert ("boiled", "water1") in s.predicates
    assert s.pending == ()


def test_wait_is_noop_except_clock():
    dom = parse_domain(ASYNC_DOMAIN)
    task = parse_task(ASYNC_TASK, dom)
    world = World.for_task(dom, task)
    state = world.initial_state(task)
    nxt = world.apply(state, make_action("wait", ()))
    assert nxt.predicates == state.predicates
    assert nxt.clock == 1


def test_async_consistency_with_merged_atomic_action():
    # duration-d action followed by d waits == atomic action with merged effects
    dom = parse_domain(ASYNC_DOMAIN)
    merged_dom = parse_domain(ASYNC_DOMAIN.replace(
        ":eff ((not (raw ?x)))\n    :duration 3 :delayed ((boiled ?x))",
        ":eff ((not (raw ?x)) (boiled ?x))"))
    task = parse_task(ASYNC_TASK, dom)
    world = World.for_task(dom, task)
    merged = World.for_task(merged_dom, task)

    s = world.initial_state(task)
    s = world.apply(s, make_action("boil", ("water1",)))
    for _ in range(3):
        s = world.apply(s, make_action("wait", ()))

    m = merged.initial_state(task)
    m = merged.apply(m, make_action("boil", ("water1",)))
    for _ in range(3):
        m = merged.apply(m, make_action("wait", ()))
    assert s.predicates == m.predicates


def test_is_goal():
    dom = parse_domain(MOVE_DOMAIN)
    task = parse_task(MOVE_TASK, dom)
    empty = SymbolicState(frozenset())
    assert not is_goal(empty, task)
    there = SymbolicState(frozenset({("at", "robot1", "loc3")}))
    assert is_goal(there, task)
    more = SymbolicState(there.predicates | {("at", "robot1", "loc1")})
    assert is_goal(more, task)  # superset never flips true -> false


def test_observe_full_and_partial():
    preds = frozenset({
        ("in", "apple1", "cabinet1"),
        ("red", "apple1"),
        ("closed", "cabinet1"),
        ("at", "robot1", "kitchen"),
    })
    state = SymbolicState(preds, clock=5)
    full = observe(state, "full")
    assert set(full.predicates) == preds
    assert full.clock == 5

    part = observe(state, "partial")
    seen = set(part.predicates)
    assert ("in", "apple1", "cabinet1") not in seen
    assert ("red", "apple1") not in seen
    assert ("closed", "cabinet1") in seen

    opened = SymbolicState(preds | {("opened", "cabinet1")}, clock=6)
    part2 = observe(opened, "partial")
    assert ("red", "apple1") in set(part2.predicates)
    assert ("in", "apple1", "cabinet1") in set(part2.predicates)


def test_canonical_hash_equality_iff_state_equality():
    a = SymbolicState(frozenset({("p", "x"), ("q", "y")}), clock=2)
    b = SymbolicState(frozenset({("q", "y"), ("p", "x")}), clock=2)
    c = SymbolicState(a.predicates, clock=3)
    assert serialize_state(a) == serialize_state(b)
    assert state_hash(a) == state_hash(b)
    assert state_hash(a) != state_hash(c)


def test_fnv_hash_is_pinned():
    # golden value so the hash stays bit-exact across platforms and releases
    state = SymbolicState(frozenset({("on", "cheese1", "bread1")}), clock=1)
    assert serialize_state(state) == "on(cheese1,bread1)\n#clock=1"
    assert state_hash(state) == 0x09025536F7F03D85


def test_atom_render_parse_round_trip():
    for atom in [("on", "a", "b"), ("handempty", "robot1"), ("alarm",)]:
        assert parse_atom(render_atom(atom)) == atom
