"""Forward search over the symbolic transition system.

``bfs_plan`` is the reference shortest-plan oracle: breadth-first over
canonical states, expanding successors in canonical action order, so the plan
it returns is deterministic.  ``iddfs_plan`` is an independent second search
used to cross-check plan lengths in tests.

States are deduplicated on (predicates, clock-relative pending): two states
with the same facts and the same schedule relative to now behave identically,
which lets the search share work across time.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .dsl import TaskSpec
from .world import GroundedAction, SymbolicState, World


class SearchBudgetExceeded(Exception):
    def __init__(self, expansions: int):
        self.expansions = expansions
        super().__init__(f"search budget exceeded after {expansions} expansions")


def _key(state: SymbolicState):
    rel = tuple(sorted((p.fire_tick - state.clock, p.adds, p.dels) for p in state.pending))
    return (state.predicates, rel)


def _goal_atoms(task: TaskSpec) -> frozenset:
    return frozenset(task.goal)


def bfs_plan(world: World, state: SymbolicState, task: TaskSpec,
             budget: int = 2_000_000) -> Optional[list[GroundedAction]]:
    """Shortest plan from state to the task goal, or None if the space is
    exhausted without reaching it.  Raises SearchBudgetExceeded past budget."""
    goal = _goal_atoms(task)
    if goal <= state.predicates:
        return []
    start = _key(state)
    parents: dict = {start: None}
    frontier = deque([(state, start)])
    expansions = 0
    while frontier:
        cur, cur_key = frontier.popleft()
        expansions += 1
        if expansions > budget:
            raise SearchBudgetExceeded(expansions)
        for action in world.ground_actions(cur):
            nxt = world.apply(cur, action, check=False)
            key = _key(nxt)
            if key in parents:
                continue
            parents[key] = (cur_key, action)
            if goal <= nxt.predicates:
                plan = []
                k = key
                while parents[k] is not None:
                    k, a = parents[k]
                    plan.append(a)
                plan.reverse()
                return plan
            frontier.append((nxt, key))
    return None


def iddfs_plan_length(world: World, state: SymbolicState, task: TaskSpec,
                      max_depth: int, budget: int = 5_000_000) -> Optional[int]:
    """Length of a shortest plan found by iterative-deepening DFS, or None.

    A per-limit memo of (state key -> shallowest depth seen) keeps the
    search polynomial in the reachable space.  Kept intentionally separate
    from bfs_plan: this is the oracle the BFS is checked against.
    """
    goal = _goal_atoms(task)
    counter = [0]

    for limit in range(max_depth + 1):
        best_depth: dict = {}

        def dls(cur: SymbolicState, depth: int) -> bool:
            if goal <= cur.predicates:
                return True
            if depth == limit:
                return False
            counter[0] += 1
            if counter[0] > budget:
                raise SearchBudgetExceeded(counter[0])
            key = _key(cur)
            seen = best_depth.get(key)
            if seen is not None and seen <= depth:
                return False
            best_depth[key] = depth
            for action in world.ground_actions(cur):
                if dls(world.apply(cur, action, check=False), depth + 1):
                    return True
            return False

        if dls(state, 0):
            return limit
    return None
