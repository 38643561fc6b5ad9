"""Parabolic subalgebras as crossed-node sets and their gradings."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .rootsys import RootSystem, Root, as_weight, build, highest_root, render


@dataclass(frozen=True)
class Parabolic:
    rs: RootSystem
    crossed: frozenset[int]

    def render(self, labels=None) -> str:
        return render(self.rs, labels, self.crossed)

    def factor(self, index: int) -> "Parabolic":
        """Restriction to one irreducible factor, renumbered from 1."""
        s = self.rs.factor_slices()[index]
        local = {c - s.start for c in self.crossed if s.start < c <= s.stop}
        return Parabolic(self.rs.factor(index), frozenset(local))


@dataclass(frozen=True)
class GradedDims:
    dims: dict[int, int]

    @property
    def height(self) -> int:
        return max((abs(k) for k, d in self.dims.items() if d), default=0)

    def __getitem__(self, k: int) -> int:
        return self.dims.get(k, 0)


def make_parabolic(rs, crossed: Iterable[int] = ()) -> Parabolic:
    if not isinstance(rs, RootSystem):
        rs = build(rs)
    crossed = frozenset(int(c) for c in crossed)
    for c in crossed:
        rs.check_node(c)
    return Parabolic(rs, crossed)


def sigma_height(p: Parabolic, alpha: Root) -> int:
    return sum(alpha.simple_coords[c - 1] for c in p.crossed)


def is_abelian(p: Parabolic) -> bool:
    for f in range(len(p.rs.lie_type.factors)):
        q = p.factor(f)
        if sigma_height(q, highest_root(q.rs)) > 1:
            return False
    return True


def graded_dims(p: Parabolic) -> GradedDims:
    counts = Counter()
    for alpha in p.rs.positive_roots:
        h = sigma_height(p, alpha)
        counts[h] += 1
        counts[-h] += 1
    counts[0] += p.rs.rank
    return GradedDims(dict(sorted(counts.items())))


def lowest_form(p: Parabolic) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(i + 1 in p.crossed)) for i in range(p.rs.rank))


def geometric_weight(p: Parabolic, lam) -> Fraction:
    lam = as_weight(lam, p.rs.rank)
    inv = p.rs.inv_cartan
    return sum((inv[c - 1][j] * lam[j] for c in p.crossed for j in range(p.rs.rank) if lam[j]),
               Fraction(0))


def is_p_dominant(p: Parabolic, lam) -> bool:
    lam = as_weight(lam, p.rs.rank)
    return all(lam[i] >= 0 for i in range(p.rs.rank) if i + 1 not in p.crossed)
