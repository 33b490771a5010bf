"""Nurse-scheduling instances: text format and seeded generator.

Format::

    n m s
    d_1 ... d_s      # one line per day, m lines

``s = 1`` is the Boolean model (1 = works, demand counts ones).  ``s > 1``
is the shift model: values ``0..s-1`` are working shifts, value ``s`` is a
day off, and each day line holds one demand per working shift.  Blank lines
and ``#`` comments are ignored on input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class NspInstance:
    nurses: int
    days: int
    shifts: int
    demand: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "demand", tuple(tuple(row) for row in self.demand))
        if self.nurses < 1 or self.days < 1 or self.shifts < 1:
            raise ValueError("nurses, days and shifts must be positive")
        if len(self.demand) != self.days:
            raise ValueError(f"expected {self.days} demand rows, got {len(self.demand)}")
        for j, row in enumerate(self.demand):
            if len(row) != self.shifts:
                raise ValueError(f"day {j + 1}: expected {self.shifts} demands")
            if any(d < 0 for d in row) or sum(row) > self.nurses:
                raise ValueError(f"day {j + 1}: demand {list(row)} outside 0..{self.nurses}")

    @property
    def boolean(self) -> bool:
        return self.shifts == 1

    @property
    def values(self) -> range:
        """Value set of every cell."""
        return range(2) if self.boolean else range(self.shifts + 1)

    @property
    def off_value(self) -> int:
        return 0 if self.boolean else self.shifts

    def day_demand(self, j: int) -> int:
        return sum(self.demand[j])


def format_instance(inst: NspInstance) -> str:
    lines = [f"{inst.nurses} {inst.days} {inst.shifts}"]
    lines += [" ".join(map(str, row)) for row in inst.demand]
    return "\n".join(lines) + "\n"


def parse_instance_text(text: str) -> NspInstance:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if ln:
            rows.append((lineno, ln))
    if not rows:
        raise InstanceFormatError("empty instance file")
    lineno, head = rows[0]
    try:
        n, m, s = (int(t) for t in head.split())
    except ValueError:
        raise InstanceFormatError(f"line {lineno}: header must be 'n m s'") from None
    if n < 1 or m < 1 or s < 1:
        raise InstanceFormatError(f"line {lineno}: n, m and s must be positive")
    body = rows[1:]
    if len(body) != m:
        where = body[-1][0] if body else lineno
        raise InstanceFormatError(f"line {where}: expected {m} demand rows, found {len(body)}")
    demand = []
    for lineno, ln in body:
        try:
            vals = [int(t) for t in ln.split()]
        except ValueError:
            raise InstanceFormatError(f"line {lineno}: non-integer demand") from None
        if len(vals) != s:
            raise InstanceFormatError(f"line {lineno}: expected {s} demands, found {len(vals)}")
        if any(v < 0 for v in vals):
            raise InstanceFormatError(f"line {lineno}: negative demand")
        if sum(vals) > n:
            raise InstanceFormatError(f"line {lineno}: demand {sum(vals)} exceeds {n} nurses")
        demand.append(tuple(vals))
    return NspInstance(n, m, s, tuple(demand))


def parse_instance(path: str | Path) -> NspInstance:
    return parse_instance_text(Path(path).read_text())


def write_instance(inst: NspInstance, path: str | Path) -> None:
    Path(path).write_text(format_instance(inst))


def generate_instance(seed: int, n: int, m: int, demand_range: tuple[int, int],
                      shift_model: bool = False, shifts: int = 3) -> NspInstance:
    """Uniform demands in ``demand_range`` (per day, or per day and shift).

    Shift-model days whose total exceeds ``n`` are scaled down shift by shift.
    """
    lo, hi = demand_range
    if not 0 <= lo <= hi:
        raise ValueError(f"bad demand range {demand_range}")
    rng = random.Random(seed)
    s = shifts if shift_model else 1
    demand = []
    for _ in range(m):
        row = [rng.randint(lo, hi) for _ in range(s)]
        t = 0
        while sum(row) > n:
            if row[t % s] > 0:
                row[t % s] -= 1
            t += 1
        demand.append(tuple(row))
    return NspInstance(n, m, s, tuple(demand))
