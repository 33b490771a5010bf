"""C&Lex for Sequence rows via lex-extreme supports.

Rows are channelled to membership bits ``b[i] = (X[i] in V)`` for the
Sequence reasoning.  Lexicographic comparisons are always done on original
values: a bit string is first expanded to the smallest (or largest) value
tuple it stands for.  This needs, per variable, every value outside ``V`` to
lie below every value inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import Domain, Model, Propagator, PropagatorHandle, Status
from .sequence import SequenceSpec, check_consistency_max, check_consistency_min

BOOL = Domain((0, 1))
ZERO = Domain((0,))
ONE = Domain((1,))


class ChannelError(ValueError):
    pass


@dataclass
class Channel:
    """Bit view of multi-valued domains for membership in ``V``."""

    domains: list[Domain]
    V: frozenset[int]

    def __post_init__(self) -> None:
        for i, d in enumerate(self.domains):
            inside = [v for v in d if v in self.V]
            outside = [v for v in d if v not in self.V]
            if inside and outside and max(outside) >= min(inside):
                raise ChannelError(
                    f"position {i}: values outside V must be smaller than values in V "
                    f"(domain {d}, V={sorted(self.V)})")

    @property
    def is_identity(self) -> bool:
        return self.V == {1} and all(d.as_set() <= {0, 1} for d in self.domains)

    def booleans(self) -> list[Domain]:
        out = []
        for d in self.domains:
            s = d.as_set()
            if s <= self.V:
                out.append(ONE)
            elif s.isdisjoint(self.V):
                out.append(ZERO)
            else:
                out.append(BOOL)
        return out

    def expand_min(self, bits: Sequence[int]) -> list[int]:
        """Smallest value tuple whose membership pattern is ``bits``."""
        V = self.V
        return [min(v for v in d if (v in V) == bool(b)) for d, b in zip(self.domains, bits)]

    def expand_max(self, bits: Sequence[int]) -> list[int]:
        V = self.V
        return [max(v for v in d if (v in V) == bool(b)) for d, b in zip(self.domains, bits)]


def channel_multivalued(domains: Sequence[Domain], spec: SequenceSpec) -> tuple[list[Domain], Channel]:
    """Boolean domains for the membership bits, plus the channel for mapping back."""
    ch = Channel(list(domains), spec.V)
    return ch.booleans(), ch


def _bit_spec(spec: SequenceSpec) -> SequenceSpec:
    return SequenceSpec(spec.l, spec.u, spec.k, frozenset({1}))


def _prune_against(ch: Channel, bits: list[Domain], extreme: list[int], target: list[int],
                   spec: SequenceSpec, below: bool) -> list[Domain] | None:
    """Keep v at position i iff the lex-smallest (largest if not ``below``)
    support of X[i]=v is <=lex (>=lex) ``target``."""
    check = check_consistency_min if below else check_consistency_max
    expand = ch.expand_min if below else ch.expand_max
    base = expand(extreme)
    cache: dict[tuple[int, int], list[int] | None] = {}
    out = []
    V = ch.V
    for i, d in enumerate(ch.domains):
        keep = []
        for v in d:
            if v == base[i]:
                keep.append(v)
                continue
            b = 1 if v in V else 0
            key = (i, b)
            if key not in cache:
                if b == extreme[i]:
                    cache[key] = base
                else:
                    probe = list(bits)
                    probe[i] = ONE if b else ZERO
                    sup = check(spec, probe)
                    cache[key] = None if sup is None else expand(sup)
            sup = cache[key]
            if sup is None:
                continue
            cand = list(sup)
            cand[i] = v
            if (cand <= target) if below else (cand >= target):
                keep.append(v)
        if not keep:
            return None
        out.append(d.keep(keep))
    return out


def filter_clex_sequence(xd: Sequence[Domain], yd: Sequence[Domain],
                         spec: SequenceSpec) -> tuple[list[Domain], list[Domain]] | None:
    """DC on Sequence(X) & Sequence(Y) & X <=lex Y."""
    if len(xd) != len(yd):
        raise ValueError("rows must have equal length")
    bspec = _bit_spec(spec)
    bx, chx = channel_multivalued(xd, spec)
    by, chy = channel_multivalued(yd, spec)
    xl_bits = check_consistency_min(bspec, bx)
    if xl_bits is None:
        return None
    yu_bits = check_consistency_max(bspec, by)
    if yu_bits is None:
        return None
    xl = chx.expand_min(xl_bits)
    yu = chy.expand_max(yu_bits)
    if xl > yu:
        return None
    nx = _prune_against(chx, bx, xl_bits, yu, bspec, below=True)
    if nx is None:
        return None
    ny = _prune_against(chy, by, yu_bits, xl, bspec, below=False)
    if ny is None:
        return None
    return nx, ny


class CLexSequencePropagator(Propagator):
    priority = 2
    name = "clex-sequence"

    def __init__(self, xs: Sequence[int], ys: Sequence[int], spec: SequenceSpec):
        if len(xs) != len(ys):
            raise ValueError("rows must have equal length")
        super().__init__(list(xs) + list(ys))
        self.xs, self.ys = list(xs), list(ys)
        self.spec = spec

    def propagate(self, model: Model) -> Status:
        res = filter_clex_sequence(model.domains(self.xs), model.domains(self.ys), self.spec)
        if res is None:
            return Status.FAILED
        nx, ny = res
        if not (model.narrow_all(self.xs, nx) and model.narrow_all(self.ys, ny)):
            return Status.FAILED
        if all(d.is_fixed() for d in nx) and all(d.is_fixed() for d in ny):
            return Status.ENTAILED
        return Status.CONSISTENT


def propagate_clex_sequence(model: Model, xs: Sequence[int], ys: Sequence[int],
                            spec: SequenceSpec) -> Status:
    return CLexSequencePropagator(xs, ys, spec).propagate(model)


def post_clex_sequence(model: Model, xs: Sequence[int], ys: Sequence[int],
                       spec: SequenceSpec) -> PropagatorHandle:
    return model.post(CLexSequencePropagator(xs, ys, spec))
