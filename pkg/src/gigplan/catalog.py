"""Built-in kitchen recipe catalog and the seeded task generator.

Stations sit on a ring; the robot moves between adjacent stations, so ring
distances are the lever that sets each recipe's optimal plan length.  A seed
varies the layout only in ways that provably preserve that optimum: mirroring
the ring (a distance-preserving automorphism), attaching dead-end spur
stations, and adding distractor items on spurs or underneath ingredients.
Every catalog horizon is validated against breadth-first search in the test
suite rather than trusted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dsl import DomainSpec, TaskSpec, parse_domain

SYNC_DOMAIN_SRC = """
(domain kitchen
  (:types support station - support item - support
          table - station counter - station board - station stove - station
          robot)
  (:predicates (at robot station) (on item support) (located item station)
               (clear support) (holding robot item) (handempty robot)
               (adjacent station station)
               (cuttable item) (cut item) (cookable item) (cooked item))
  (:action move :params (?r - robot ?a - station ?b - station)
    :pre ((at ?r ?a) (adjacent ?a ?b))
    :eff ((not (at ?r ?a)) (at ?r ?b)))
  (:action pick :params (?r - robot ?i - item ?x - support ?s - station)
    :pre ((at ?r ?s) (on ?i ?x) (located ?i ?s) (clear ?i) (handempty ?r))
    :eff ((not (on ?i ?x)) (not (located ?i ?s)) (not (clear ?i))
          (not (handempty ?r)) (holding ?r ?i) (clear ?x)))
  (:action place :params (?r - robot ?i - item ?s - station)
    :pre ((at ?r ?s) (holding ?r ?i) (clear ?s))
    :eff ((not (holding ?r ?i)) (not (clear ?s))
          (on ?i ?s) (located ?i ?s) (clear ?i) (handempty ?r)))
  (:action stack :params (?r - robot ?i - item ?j - item ?s - station)
    :pre ((at ?r ?s) (holding ?r ?i) (located ?j ?s) (clear ?j))
    :eff ((not (holding ?r ?i)) (not (clear ?j))
          (on ?i ?j) (located ?i ?s) (clear ?i) (handempty ?r)))
  (:action cut :params (?r - robot ?i - item ?s - board)
    :pre ((at ?r ?s) (on ?i ?s) (clear ?i) (cuttable ?i) (not (cut ?i)))
    :eff ((cut ?i)))
  (:action cook :params (?r - robot ?i - item ?s - stove)
    :pre ((at ?r ?s) (on ?i ?s) (clear ?i) (cookable ?i) (not (cooked ?i)))
    :eff ((cooked ?i))))
"""

ASYNC_DOMAIN_SRC = """
(domain kitchen_async
  (:types support station - support item - support
          table - station counter - station board - station stove - station
          fryer - station robot)
  (:predicates (at robot station) (on item support) (located item station)
               (clear support) (holding robot item) (handempty robot)
               (adjacent station station)
               (cuttable item) (cut item) (cookable item) (cooked item)
               (fryable item) (fried item) (boilable item) (boiled item))
  (:action move :params (?r - robot ?a - station ?b - station)
    :pre ((at ?r ?a) (adjacent ?a ?b))
    :eff ((not (at ?r ?a)) (at ?r ?b)))
  (:action pick :params (?r - robot ?i - item ?x - support ?s - station)
    :pre ((at ?r ?s) (on ?i ?x) (located ?i ?s) (clear ?i) (handempty ?r))
    :eff ((not (on ?i ?x)) (not (located ?i ?s)) (not (clear ?i))
          (not (handempty ?r)) (holding ?r ?i) (clear ?x)))
  (:action place :params (?r - robot ?i - item ?s - station)
    :pre ((at ?r ?s) (holding ?r ?i) (clear ?s))
    :eff ((not (holding ?r ?i)) (not (clear ?s))
          (on ?i ?s) (located ?i ?s) (clear ?i) (handempty ?r)))
  (:action stack :params (?r - robot ?i - item ?j - item ?s - station)
    :pre ((at ?r ?s) (holding ?r ?i) (located ?j ?s) (clear ?j))
    :eff ((not (holding ?r ?i)) (not (clear ?j))
          (on ?i ?j) (located ?i ?s) (clear ?i) (handempty ?r)))
  (:action cut :params (?r - robot ?i - item ?s - board)
    :pre ((at ?r ?s) (on ?i ?s) (clear ?i) (cuttable ?i) (not (cut ?i)))
    :eff ((cut ?i)))
  (:action cook :params (?r - robot ?i - item ?s - stove)
    :pre ((at ?r ?s) (on ?i ?s) (clear ?i) (cookable ?i) (not (cooked ?i)))
    :eff () :duration 3 :delayed ((cooked ?i)))
  (:action fry :params (?r - robot ?i - item ?s - fryer)
    :pre ((at ?r ?s) (on ?i ?s) (clear ?i) (fryable ?i) (not (fried ?i)))
    :eff () :duration 4 :delayed ((fried ?i)))
  (:action boil :params (?r - robot ?i - item ?s - stove)
    :pre ((at ?r ?s) (located ?i ?s) (boilable ?i) (not (boiled ?i)))
    :eff () :duration 3 :delayed ((boiled ?i)))
  (:action wait :params () :pre () :eff ()))
"""

_STATION_TYPES = {"table": "table", "board": "board", "stove": "stove", "fryer": "fryer"}


def _station_type(name: str) -> str:
    for prefix, typ in _STATION_TYPES.items():
        if name.startswith(prefix):
            return typ
    return "counter"


@dataclass(frozen=True)
class Recipe:
    recipe_id: str
    mode: str  # "sync" | "async"
    horizon: int
    description: str
    ring: tuple[str, ...]
    robot_at: str
    items: tuple[tuple[str, str, tuple[str, ...]], ...]  # (name, support, flags)
    goal: tuple[tuple, ...]


_DISTRACTOR_POOL = (
    ("tomato9", ("cuttable",)),
    ("onion9", ("cuttable",)),
    ("plate9", ()),
)


CATALOG: dict[str, Recipe] = {}


def _recipe(recipe_id, mode, horizon, description, ring, robot_at, items, goal):
    CATALOG[recipe_id] = Recipe(recipe_id, mode, horizon, description,
                                tuple(ring), robot_at,
                                tuple((n, s, tuple(f)) for n, s, f in items),
                                tuple(goal))


_recipe(
    "cheese_sandwich", "sync", 10,
    "table > bread > cheese > bread",
    ring=["table1", "counter1", "counter2", "counter3", "counter4"],
    robot_at="counter2",
    items=[
        ("bread1", "table1", ()),
        ("cheese1", "counter1", ()),
        ("bread2", "counter2", ()),
    ],
    goal=[("on", "bread1", "table1"), ("on", "cheese1", "bread1"),
          ("on", "bread2", "cheese1")],
)

_recipe(
    "lettuce_sandwich", "sync", 14,
    "table > bread > lettuce(cut) > bread",
    ring=["table1", "board1", "counter1", "counter2", "counter3", "counter4"],
    robot_at="counter2",
    items=[
        ("bread1", "table1", ()),
        ("lettuce1", "counter1", ("cuttable",)),
        ("bread2", "counter3", ()),
    ],
    goal=[("on", "bread1", "table1"), ("cut", "lettuce1"),
          ("on", "lettuce1", "bread1"), ("on", "bread2", "lettuce1")],
)

_recipe(
    "veggie_sandwich", "sync", 24,
    "table > bread > lettuce(cut) > tomato(cut) > bread",
    ring=["table1", "board1", "counter1", "counter2", "counter3", "counter4", "counter5"],
    robot_at="counter3",
    items=[
        ("bread1", "table1", ()),
        ("tomato1", "counter1", ("cuttable",)),
        ("lettuce1", "tomato1", ("cuttable",)),
        ("bread2", "counter4", ()),
    ],
    goal=[("on", "bread1", "table1"), ("cut", "lettuce1"),
          ("on", "lettuce1", "bread1"), ("cut", "tomato1"),
          ("on", "tomato1", "lettuce1"), ("on", "bread2", "tomato1")],
)

_recipe(
    "burger", "sync", 10,
    "table > bottombun > patty(cook) > topbun",
    ring=["table1", "stove1", "counter1", "counter2", "counter3"],
    robot_at="stove1",
    items=[
        ("bun_bottom1", "table1", ()),
        ("patty1", "stove1", ("cookable",)),
        ("bun_top1", "counter2", ()),
    ],
    goal=[("on", "bun_bottom1", "table1"), ("cooked", "patty1"),
          ("on", "patty1", "bun_bottom1"), ("on", "bun_top1", "patty1")],
)

_recipe(
    "cheeseburger", "sync", 15,
    "table > bottombun > patty(cook) > cheese > topbun",
    ring=["counter1", "stove1", "table1", "counter2", "counter3"],
    robot_at="counter1",
    items=[
        ("bun_bottom1", "table1", ()),
        ("patty1", "counter1", ("cookable",)),
        ("bun_top1", "counter2", ()),
        ("cheese1", "bun_top1", ()),
    ],
    goal=[("on", "bun_bottom1", "table1"), ("cooked", "patty1"),
          ("on", "patty1", "bun_bottom1"), ("on", "cheese1", "patty1"),
          ("on", "bun_top1", "cheese1")],
)

_recipe(
    "double_cheeseburger", "sync", 23,
    "table > bottombun > patty > cheese > patty > cheese > topbun",
    ring=["counter1", "counter2", "table1", "counter3", "counter4"],
    robot_at="counter2",
    items=[
        ("bun_bottom1", "table1", ()),
        ("patty2", "counter1", ("cookable", "cooked")),
        ("patty1", "patty2", ("cookable", "cooked")),
        ("bun_top1", "counter3", ()),
        ("cheese2", "bun_top1", ()),
        ("cheese1", "cheese2", ()),
    ],
    goal=[("on", "bun_bottom1", "table1"), ("on", "patty1", "bun_bottom1"),
          ("cooked", "patty1"), ("on", "cheese1", "patty1"),
          ("on", "patty2", "cheese1"), ("cooked", "patty2"),
          ("on", "cheese2", "patty2"), ("on", "bun_top1", "cheese2")],
)

_recipe(
    "chicken_sandwich", "async", 16,
    "table > bread > cheese > chicken(cook) > bread",
    ring=["table1", "stove1", "counter1", "counter2", "counter3"],
    robot_at="stove1",
    items=[
        ("bread1", "table1", ()),
        ("chicken1", "stove1", ("cookable",)),
        ("cheese1", "counter1", ()),
        ("bread2", "counter2", ()),
    ],
    goal=[("on", "bread1", "table1"), ("on", "cheese1", "bread1"),
          ("cooked", "chicken1"), ("on", "chicken1", "cheese1"),
          ("on", "bread2", "chicken1")],
)

_recipe(
    "potato_soup", "async", 19,
    "table > bowl > [water, potato] (boiled)",
    ring=["table1", "stove1", "counter1", "counter2", "counter3"],
    robot_at="counter1",
    items=[
        ("bowl1", "counter1", ()),
        ("water1", "bowl1", ("boilable",)),
        ("potato1", "counter2", ("boilable",)),
    ],
    goal=[("on", "bowl1", "table1"), ("on", "water1", "bowl1"),
          ("on", "potato1", "water1"), ("boiled", "water1"),
          ("boiled", "potato1")],
)

_recipe(
    "crispy_chicken_sandwich", "async", 22,
    "table > bread > lettuce(cut) > chicken(fry) > bread",
    ring=["table1", "board1", "fryer1", "counter1", "counter2", "counter3"],
    robot_at="fryer1",
    items=[
        ("bread1", "table1", ()),
        ("chicken1", "fryer1", ("fryable",)),
        ("lettuce1", "counter1", ("cuttable",)),
        ("bread2", "counter2", ()),
    ],
    goal=[("on", "bread1", "table1"), ("cut", "lettuce1"),
          ("on", "lettuce1", "bread1"), ("fried", "chicken1"),
          ("on", "chicken1", "lettuce1"), ("on", "bread2", "chicken1")],
)

_recipe(
    "fried_potato", "async", 12,
    "table > potato(cut, fry)",
    ring=["table1", "board1", "fryer1", "counter1"],
    robot_at="counter1",
    items=[
        ("potato1", "counter1", ("cuttable", "fryable")),
    ],
    goal=[("cut", "potato1"), ("fried", "potato1"), ("on", "potato1", "table1")],
)


def sync_recipes() -> list[str]:
    return [r for r, spec in CATALOG.items() if spec.mode == "sync"]


def async_recipes() -> list[str]:
    return [r for r, spec in CATALOG.items() if spec.mode == "async"]


_domain_cache: dict[str, DomainSpec] = {}


def domain_for_mode(mode: str) -> DomainSpec:
    if mode not in _domain_cache:
        src = SYNC_DOMAIN_SRC if mode == "sync" else ASYNC_DOMAIN_SRC
        _domain_cache[mode] = parse_domain(src)
    return _domain_cache[mode]


class UnknownRecipe(KeyError):
    pass


def generate_task(recipe_id: str, seed: int) -> tuple[DomainSpec, TaskSpec]:
    """Deterministic task instance for (recipe, seed).

    Seed effects are optimum-preserving by construction: counter names are
    permuted (an isomorphic rename), dead-end spur counters are attached to
    the ring, and distractor items are dropped on spurs or slid underneath a
    base ingredient (where they can neither block nor shorten the plan).
    """
    if recipe_id not in CATALOG:
        raise UnknownRecipe(recipe_id)
    recipe = CATALOG[recipe_id]
    rng = random.Random(f"{recipe_id}:{seed}")

    ring = list(recipe.ring)
    spur_count = rng.randint(0, 2)
    spurs = [(f"spur{i + 1}", rng.choice(ring)) for i in range(spur_count)]

    items = [(n, s, f) for n, s, f in recipe.items]
    recipe_station = {n: s for n, s, _ in recipe.items}
    n_distract = rng.randint(0, len(_DISTRACTOR_POOL) - 1)
    occupied_spurs: set[str] = set()
    for name, flags in rng.sample(_DISTRACTOR_POOL, n_distract):
        hosts = [s for s, _ in spurs if s not in occupied_spurs]
        if hosts and rng.random() < 0.6:
            host = rng.choice(hosts)
            items.append((name, host, flags))
            occupied_spurs.add(host)
        else:
            # slide underneath a base ingredient that sits directly on a ring
            # station and is not already padded
            bases = [n for n, s, _ in items if s in ring and n in recipe_station]
            if not bases:
                continue
            target = rng.choice(bases)
            station = next(s for n, s, _ in items if n == target)
            items = [(n, name if n == target else s, f) for n, s, f in items]
            items.append((name, station, flags))

    # rename counters (ring and spur alike) with a seeded permutation; fixed
    # stations (table/board/stove/fryer) keep their names
    counter_slots = [s for s in ring if _station_type(s) == "counter"]
    counter_slots += [s for s, _ in spurs]
    new_names = [f"counter{i + 1}" for i in range(len(counter_slots))]
    rng.shuffle(new_names)
    rename = dict(zip(counter_slots, new_names))

    def nm(station: str) -> str:
        return rename.get(station, station)

    stations = [nm(s) for s in ring] + [nm(s) for s, _ in spurs]
    adjacency = []
    k = len(ring)
    for i in range(k):
        adjacency.append((nm(ring[i]), nm(ring[(i + 1) % k])))
    for spur, anchor in spurs:
        adjacency.append((nm(spur), nm(anchor)))

    items = [(n, rename.get(s, s), f) for n, s, f in items]

    objects = [("robot1", "robot")]
    objects += [(s, _station_type(s)) for s in stations]
    objects += [(n, "item") for n, _, _ in items]

    support_of = {n: s for n, s, _ in items}

    def station_of(name: str) -> str:
        while name in support_of:
            name = support_of[name]
        return name

    init: list[tuple] = []
    for a, b in adjacency:
        init.append(("adjacent", a, b))
        init.append(("adjacent", b, a))
    init.append(("at", "robot1", nm(recipe.robot_at)))
    init.append(("handempty", "robot1"))
    occupied = {s for _, s, _ in items if s in stations}
    for s in stations:
        if s not in occupied:
            init.append(("clear", s))
    covered = {s for _, s, _ in items}
    for name, support, flags in items:
        init.append(("on", name, support))
        init.append(("located", name, station_of(name)))
        if name not in covered:
            init.append(("clear", name))
        for flag in flags:
            init.append((flag, name))

    task = TaskSpec(
        name=f"{recipe_id}_{seed}",
        objects=tuple(sorted(objects)),
        init=tuple(sorted(set(init))),
        goal=recipe.goal,
        horizon=recipe.horizon,
    )
    return domain_for_mode(recipe.mode), task
