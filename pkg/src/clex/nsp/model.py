"""Matrix models for the nurse-scheduling benchmark.

Rows are nurses, columns are days.  Every row carries the same row
constraint, adjacent rows are lexicographically ordered (top row smallest),
and every column meets its demand.  The modes differ only in how the row
constraints and the row ordering are propagated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..basic import post_atleast, post_lex, post_sequence_decomposed
from ..clex_regular import post_clex_regular, post_clex_regular_product
from ..clex_sequence import post_clex_sequence
from ..engine import BranchingOrder, Limits, Model
from ..regular import Dfa, post_regular
from ..sequence import SequenceSpec, sequence_dfa
from .instance import NspInstance

SEQUENCE_MODES = ("among-lex", "seq-lex", "clex-seq")
REGULAR_MODES = ("regular-lex", "clex-product", "clex-regular")
MODES = SEQUENCE_MODES + REGULAR_MODES

# modes that propagate the row constraints and lex as one constraint
COMBINED_MODES = frozenset({"clex-seq", "clex-product", "clex-regular"})


@dataclass
class ModelConfig:
    mode: str
    spec: SequenceSpec | None = None
    dfa: Dfa | None = None
    limits: Limits = field(default_factory=Limits)
    name: str = ""

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        if self.mode in SEQUENCE_MODES and self.spec is None:
            raise ValueError(f"mode {self.mode} needs a Sequence spec")
        if self.mode in REGULAR_MODES and self.dfa is None:
            raise ValueError(f"mode {self.mode} needs an automaton")
        if not self.name:
            if self.spec is not None:
                self.name = f"{self.mode}({self.spec.l},{self.spec.u},{self.spec.k})"
            else:
                self.name = self.mode

    def check(self, inst: NspInstance) -> None:
        if self.mode in SEQUENCE_MODES and not inst.boolean:
            raise ValueError(f"mode {self.mode} expects a Boolean instance (s=1)")
        if self.mode in REGULAR_MODES and inst.boolean:
            raise ValueError(f"mode {self.mode} expects a shift instance (s>1)")


@dataclass
class NspModel:
    model: Model
    order: BranchingOrder
    grid: list[list[int]]  # grid[row][day] -> variable index

    def schedule(self, values: list[int]) -> list[list[int]]:
        return [[values[v] for v in row] for row in self.grid]


def branching_order(grid: list[list[int]]) -> BranchingOrder:
    """Columns from the last day backwards, each column bottom row first."""
    n, m = len(grid), len(grid[0])
    seq = [grid[i][j] for j in range(m - 1, -1, -1) for i in range(n - 1, -1, -1)]
    return BranchingOrder(seq)


def build_model(inst: NspInstance, config: ModelConfig) -> NspModel:
    config.check(inst)
    model = Model()
    values = list(inst.values)
    grid = [[model.new_var(values) for _ in range(inst.days)] for _ in range(inst.nurses)]
    mode = config.mode
    n = inst.nurses

    if mode in SEQUENCE_MODES:
        spec = config.spec
        if mode == "clex-seq" and n > 1:
            for a, b in zip(grid, grid[1:]):
                post_clex_sequence(model, a, b, spec)
        else:
            for row in grid:
                if mode == "among-lex":
                    if spec.k <= inst.days:
                        post_sequence_decomposed(model, spec, row)
                else:
                    post_regular(model, sequence_dfa(spec, values), row)
            for a, b in zip(grid, grid[1:]):
                post_lex(model, a, b)
    else:
        dfa = config.dfa
        if mode != "regular-lex" and n > 1:
            for a, b in zip(grid, grid[1:]):
                if mode == "clex-product":
                    post_clex_regular_product(model, a, b, dfa, values)
                else:
                    post_clex_regular(model, a, b, dfa)
        else:
            for row in grid:
                post_regular(model, dfa, row)
            for a, b in zip(grid, grid[1:]):
                post_lex(model, a, b)

    for j in range(inst.days):
        col = [grid[i][j] for i in range(n)]
        if inst.boolean:
            post_atleast(model, col, {1}, inst.demand[j][0])
        else:
            for t in range(inst.shifts):
                post_atleast(model, col, {t}, inst.demand[j][t])
    return NspModel(model, branching_order(grid), grid)
