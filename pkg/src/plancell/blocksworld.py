"""STRIPS blocksworld: states, the four actions, validation, solving, corpora.

States are immutable values; ``apply`` returns a fresh successor. The
solver comes in two flavours: exhaustive breadth-first search (optimal,
used for small instances and as an oracle) and a greedy two-phase strategy
(put misplaced blocks on the table, then build goal towers bottom-up) that
is fast enough to generate training corpora for the larger sizes.
"""

from __future__ import annotations

import random
import string
import time
from dataclasses import dataclass

from .dataset import TrainingSet, build_training_set
from .errors import DataError, InapplicableActionError, LimitError

ACTION_ARITY = {"pick-up": 1, "put-down": 1, "stack": 2, "unstack": 2}

# goal atoms: ("on", x, y) or ("on-table", x)
Atom = tuple


@dataclass(frozen=True)
class Action:
    name: str
    args: tuple[str, ...]

    def __post_init__(self):
        if self.name not in ACTION_ARITY:
            raise DataError(f"unknown action {self.name!r}")
        if len(self.args) != ACTION_ARITY[self.name]:
            raise DataError(
                f"{self.name} takes {ACTION_ARITY[self.name]} argument(s), "
                f"got {len(self.args)}"
            )

    def __str__(self):
        return " ".join((self.name,) + self.args)

    @classmethod
    def parse(cls, text: str) -> "Action":
        parts = text.strip().strip("()").split()
        if not parts:
            raise DataError("empty action string")
        return cls(parts[0], tuple(parts[1:]))


class BlockState:
    """One blocksworld configuration.

    ``on`` maps a block to the block it sits on, ``on_table`` holds the
    blocks on the table, ``holding`` is the block in the arm (or None).
    ``clear`` and ``arm_empty`` are derived, so they can never disagree
    with the rest of the state.
    """

    __slots__ = ("on", "on_table", "holding", "_key")

    def __init__(self, on: dict[str, str] | None = None,
                 on_table: set[str] | frozenset[str] = frozenset(),
                 holding: str | None = None):
        self.on = dict(on or {})
        self.on_table = frozenset(on_table)
        self.holding = holding
        self._key = (frozenset(self.on.items()), self.on_table, holding)

    @property
    def blocks(self) -> frozenset[str]:
        extra = {self.holding} if self.holding else set()
        return frozenset(self.on) | frozenset(self.on.values()) | self.on_table | extra

    @property
    def clear(self) -> frozenset[str]:
        covered = set(self.on.values())
        if self.holding:
            covered.add(self.holding)
        return self.blocks - covered

    @property
    def arm_empty(self) -> bool:
        return self.holding is None

    def check(self) -> None:
        """Raise DataError unless every block occupies exactly one position."""
        positions: dict[str, int] = {}
        for b in self.on:
            positions[b] = positions.get(b, 0) + 1
        for b in self.on_table:
            positions[b] = positions.get(b, 0) + 1
        if self.holding:
            positions[self.holding] = positions.get(self.holding, 0) + 1
        for b, n in positions.items():
            if n != 1:
                raise DataError(f"block {b!r} occupies {n} positions")
        for b, under in self.on.items():
            if under not in positions:
                raise DataError(f"block {b!r} rests on unknown block {under!r}")

    def __eq__(self, other):
        return isinstance(other, BlockState) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        towers = []
        for base in sorted(self.on_table):
            tower = [base]
            inverse = {v: k for k, v in self.on.items()}
            while tower[-1] in inverse:
                tower.append(inverse[tower[-1]])
            towers.append("/".join(tower))
        hold = f" holding={self.holding}" if self.holding else ""
        return f"<BlockState {' '.join(towers)}{hold}>"


def all_on_table(blocks) -> BlockState:
    return BlockState(on_table=set(blocks))


def apply(state: BlockState, action: Action) -> BlockState:
    """Successor state under classical STRIPS semantics.

    Raises InapplicableActionError naming the first failed precondition.
    """
    name, args = action.name, action.args

    def need(cond: bool, what: str):
        if not cond:
            raise InapplicableActionError(f"{action}: requires {what}")

    if name == "pick-up":
        (x,) = args
        need(x in state.on_table, f"on-table({x})")
        need(x in state.clear, f"clear({x})")
        need(state.arm_empty, "arm-empty")
        return BlockState(state.on, state.on_table - {x}, x)

    if name == "put-down":
        (x,) = args
        need(state.holding == x, f"holding({x})")
        return BlockState(state.on, state.on_table | {x}, None)

    if name == "stack":
        x, y = args
        need(state.holding == x, f"holding({x})")
        need(y in state.clear, f"clear({y})")
        on = dict(state.on)
        on[x] = y
        return BlockState(on, state.on_table, None)

    x, y = args  # unstack
    need(state.on.get(x) == y, f"on({x},{y})")
    need(x in state.clear, f"clear({x})")
    need(state.arm_empty, "arm-empty")
    on = dict(state.on)
    del on[x]
    return BlockState(on, state.on_table, x)


def holds(state: BlockState, atom: Atom) -> bool:
    if atom[0] == "on":
        return state.on.get(atom[1]) == atom[2]
    if atom[0] == "on-table":
        return atom[1] in state.on_table
    raise DataError(f"unknown goal atom {atom!r}")


def satisfies(state: BlockState, goal) -> bool:
    return all(holds(state, atom) for atom in goal)


def validate_plan(initial: BlockState, plan, goal) -> tuple[bool, str | None]:
    """Replay a plan; (True, None) iff every step applies and the goal holds.

    ``plan`` may be anything with a ``steps`` attribute, or a plain
    sequence of action strings / Action objects.
    """
    steps = getattr(plan, "steps", plan)
    state = initial
    for i, step in enumerate(steps):
        action = step if isinstance(step, Action) else Action.parse(step)
        try:
            state = apply(state, action)
        except InapplicableActionError as exc:
            return False, f"step {i + 1} inapplicable: {exc}"
    for atom in goal:
        if not holds(state, atom):
            return False, f"goal atom {atom} not satisfied in final state"
    return True, None


@dataclass(frozen=True)
class SolveResult:
    """A solution plan (action strings) plus solver metrics."""

    plan: tuple[str, ...]
    cpu_time: float
    steps: int


def solve(initial: BlockState, goal, budget: int = 500_000,
          method: str = "bfs") -> SolveResult:
    """Find a plan reaching the goal; BFS is optimal, greedy is fast.

    ``budget`` caps the number of states expanded (BFS only). The returned
    plan always validates against (initial, goal).
    """
    initial.check()
    _check_goal_consistency(initial, goal)
    start = time.perf_counter()
    if method == "bfs":
        actions = _solve_bfs(initial, goal, budget)
    elif method == "greedy":
        actions = _solve_greedy(initial, goal)
    else:
        raise DataError(f"unknown solve method {method!r}")
    elapsed = time.perf_counter() - start
    return SolveResult(tuple(str(a) for a in actions), elapsed, len(actions))


class UnsolvableGoalError(DataError):
    pass


def _check_goal_consistency(initial: BlockState, goal) -> None:
    known = initial.blocks
    support: dict[str, str] = {}
    for atom in goal:
        for b in atom[1:]:
            if b not in known:
                raise UnsolvableGoalError(f"goal references unknown block {b!r}")
        if atom[0] == "on":
            x, y = atom[1], atom[2]
            if x == y:
                raise UnsolvableGoalError(f"block {x!r} cannot rest on itself")
            if support.get(x, y) != y:
                raise UnsolvableGoalError(f"block {x!r} has two goal positions")
            support[x] = y
        elif atom[0] == "on-table":
            if atom[1] in support:
                raise UnsolvableGoalError(f"block {atom[1]!r} has two goal positions")
    under = {}
    for x, y in support.items():
        if y in under:
            raise UnsolvableGoalError(f"two blocks stacked on {y!r} in goal")
        under[y] = x
    # cycle check over the goal support chain
    for x in support:
        seen = {x}
        cur = x
        while cur in support:
            cur = support[cur]
            if cur in seen:
                raise UnsolvableGoalError("goal stacking contains a cycle")
            seen.add(cur)


def _successors(state: BlockState):
    clear = sorted(state.clear)
    if state.arm_empty:
        for x in clear:
            if x in state.on_table:
                yield Action("pick-up", (x,))
            else:
                yield Action("unstack", (x, state.on[x]))
    else:
        x = state.holding
        yield Action("put-down", (x,))
        for y in clear:
            yield Action("stack", (x, y))


def _solve_bfs(initial: BlockState, goal, budget: int) -> list[Action]:
    if satisfies(initial, goal):
        return []
    frontier = [(initial, ())]
    seen = {initial}
    expanded = 0
    while frontier:
        next_frontier = []
        for state, path in frontier:
            expanded += 1
            if expanded > budget:
                raise LimitError(f"search budget of {budget} states exhausted")
            for action in _successors(state):
                succ = apply(state, action)
                if succ in seen:
                    continue
                seen.add(succ)
                new_path = path + (action,)
                if satisfies(succ, goal):
                    return list(new_path)
                next_frontier.append((succ, new_path))
        frontier = next_frontier
    raise UnsolvableGoalError("goal unreachable from the initial state")


def _solve_greedy(initial: BlockState, goal) -> list[Action]:
    """Two phases: clear misplaced blocks to the table, then build towers."""
    want_on = {a[1]: a[2] for a in goal if a[0] == "on"}
    want_table = {a[1] for a in goal if a[0] == "on-table"}

    actions: list[Action] = []
    state = initial

    def do(action: Action):
        nonlocal state
        state = apply(state, action)
        actions.append(action)

    def placed(b: str, trail=()) -> bool:
        """Block b is in its final position (support chain included)."""
        if b in trail:
            return False
        if b in want_on:
            under = state.on.get(b)
            return under == want_on[b] and placed(under, trail + (b,))
        if b in want_table:
            return b in state.on_table
        # unconstrained: stable unless resting on something unplaced
        under = state.on.get(b)
        return under is None or placed(under, trail + (b,))

    if state.holding:
        do(Action("put-down", (state.holding,)))

    # phase 1: tear down everything not already in final position
    moved = True
    while moved:
        moved = False
        for x in sorted(state.clear):
            if x in state.on and not placed(x):
                do(Action("unstack", (x, state.on[x])))
                do(Action("put-down", (x,)))
                moved = True

    # phase 2: build goal towers bottom-up
    progress = True
    while progress:
        progress = False
        for x in sorted(want_on):
            y = want_on[x]
            if placed(x) or x not in state.clear or y not in state.clear:
                continue
            if not placed(y):
                continue
            do(Action("pick-up", (x,)) if x in state.on_table
               else Action("unstack", (x, state.on[x])))
            do(Action("stack", (x, y)))
            progress = True

    if not satisfies(state, goal):
        raise UnsolvableGoalError("greedy construction failed to reach the goal")
    return actions


def random_state(blocks: list[str], rng: random.Random) -> BlockState:
    """Uniform-ish random configuration: shuffled blocks dealt into towers."""
    order = list(blocks)
    rng.shuffle(order)
    on: dict[str, str] = {}
    on_table: set[str] = set()
    towers: list[str] = []  # current top of each tower
    for b in order:
        spot = rng.randrange(len(towers) + 1)
        if spot == len(towers):
            on_table.add(b)
            towers.append(b)
        else:
            on[b] = towers[spot]
            towers[spot] = b
    return BlockState(on, on_table)


def state_goal_atoms(state: BlockState) -> list[Atom]:
    """Full description of a configuration as on/on-table atoms."""
    atoms: list[Atom] = [("on-table", b) for b in sorted(state.on_table)]
    atoms += [("on", x, y) for x, y in sorted(state.on.items())]
    return atoms


@dataclass(frozen=True)
class CorpusRun:
    """One solved instance: problem, plan, and the label it received."""

    problem: str
    initial: BlockState
    goal: tuple[Atom, ...]
    plan: tuple[str, ...]
    cpu_time: float
    label: str


def block_names(n: int) -> list[str]:
    return list(string.ascii_lowercase[:n])


def generate_runs(sizes: list[int], per_size: int, seed: int,
                  pool: int = 5, method: str = "greedy") -> list[CorpusRun]:
    """Solve ``per_size`` draws per block count and label the plans.

    Draws are sampled from a pool of ``pool`` distinct problems per size so
    identical plans recur across instances, as in a corpus built by re-running
    a planner. Labels P1, P2, ... are assigned in first-seen order of
    distinct step sequences, shared across sizes. Deterministic given the
    seed, except for the measured cpu time.
    """
    if not sizes:
        raise DataError("sizes must be nonempty")
    if per_size < 1:
        raise DataError(f"per_size must be >= 1, got {per_size}")
    if pool < 1:
        raise DataError(f"pool must be >= 1, got {pool}")

    rng = random.Random(seed)
    labels: dict[tuple[str, ...], str] = {}
    runs: list[CorpusRun] = []
    for n in sizes:
        blocks = block_names(n)
        problems = []
        for _ in range(pool):
            initial = random_state(blocks, rng)
            goal = tuple(state_goal_atoms(random_state(blocks, rng)))
            problems.append((initial, goal))
        for _ in range(per_size):
            initial, goal = problems[rng.randrange(pool)]
            result = solve(initial, goal, method=method)
            steps = result.plan
            if steps not in labels:
                labels[steps] = f"P{len(labels) + 1}"
            runs.append(CorpusRun(f"blocks-{n}", initial, goal, steps,
                                  result.cpu_time, labels[steps]))
    return runs


def corpus_training_set(runs: list[CorpusRun]) -> TrainingSet:
    columns = [("problem", "nominal"), ("time", "numeric"), ("steps", "numeric")]
    rows = [(r.problem, r.cpu_time, float(len(r.plan)), r.label) for r in runs]
    return build_training_set(columns, rows)


def generate_corpus(sizes: list[int], per_size: int, seed: int,
                    pool: int = 5, method: str = "greedy") -> TrainingSet:
    """Training set over solved instances: problem name, cpu time, plan length."""
    return corpus_training_set(generate_runs(sizes, per_size, seed, pool, method))


def problem_to_json(initial: BlockState, goal) -> dict:
    """JSON-ready problem description: blocks, initial layout, goal atoms."""
    return {
        "blocks": sorted(initial.blocks),
        "initial": {
            "on": dict(sorted(initial.on.items())),
            "on-table": sorted(initial.on_table),
            "holding": initial.holding,
        },
        "goal": [list(atom) for atom in goal],
    }


def problem_from_json(data: dict) -> tuple[BlockState, tuple[Atom, ...]]:
    try:
        blocks = set(data["blocks"])
        layout = data["initial"]
        state = BlockState(layout.get("on", {}),
                           set(layout.get("on-table", ())),
                           layout.get("holding"))
        goal = tuple(tuple(atom) for atom in data["goal"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise DataError(f"malformed problem description: {exc}") from exc
    if state.blocks - blocks:
        raise DataError("initial layout uses blocks missing from the block list")
    if blocks - state.blocks:
        raise DataError("block list names blocks absent from the initial layout")
    state.check()
    for atom in goal:
        if atom[0] not in ("on", "on-table"):
            raise DataError(f"unknown goal atom {atom!r}")
    return state, goal
