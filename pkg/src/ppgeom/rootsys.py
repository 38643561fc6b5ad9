"""Root systems, weights and Weyl group arithmetic.

Node numbering is 1-based throughout the public API. Bourbaki order is used
for A, B, C, D, F and G. For E the first rank-1 nodes form a chain and the
last node hangs off the chain: off node 3 for E6 and E7, off node 5 for E8.

Weights are tuples of Fractions in the fundamental-weight basis. Roots carry
integer coordinates in both the simple-root and fundamental-weight bases.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import _exact

_VALID_RANKS = {
    "A": lambda k: k >= 1,
    "B": lambda k: k >= 2,
    "C": lambda k: k >= 2,
    "D": lambda k: k >= 3,
    "E": lambda k: k in (6, 7, 8),
    "F": lambda k: k == 4,
    "G": lambda k: k == 2,
}

# node (0-based) the branch node is attached to, for the E series
_E_BRANCH = {6: 2, 7: 2, 8: 4}


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True)
class LieType:
    """An ordered list of irreducible factors, each a (family, rank) pair."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise RootSystemError("empty Lie type")
        for fam, k in self.factors:
            if fam not in _VALID_RANKS:
                raise RootSystemError(f"unknown family {fam!r}")
            if not isinstance(k, int) or not _VALID_RANKS[fam](k):
                raise RootSystemError(f"invalid rank {k} for family {fam}")

    @classmethod
    def parse(cls, spec) -> "LieType":
        """Accept 'E6', 'A3+A3', ('C', 4), a list of those, or a LieType."""
        if isinstance(spec, LieType):
            return spec
        if isinstance(spec, str):
            parts = [p.strip() for p in re.split(r"[+x,]", spec) if p.strip()]
            factors = []
            for p in parts:
                m = re.fullmatch(r"([A-Ga-g])_?(\d+)", p)
                if not m:
                    raise RootSystemError(f"cannot parse Lie type {p!r}")
                factors.append((m.group(1).upper(), int(m.group(2))))
            return cls(tuple(factors))
        if isinstance(spec, tuple) and len(spec) == 2 and isinstance(spec[0], str):
            return cls(((spec[0].upper(), int(spec[1])),))
        factors = []
        for item in spec:
            factors.extend(cls.parse(item).factors)
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(k for _, k in self.factors)

    @property
    def irreducible(self) -> bool:
        return len(self.factors) == 1

    def __str__(self):
        return "+".join(f"{f}{k}" for f, k in self.factors)


def _edges(family: str, k: int):
    """(i, j, multiplicity, short node or None), 0-based."""
    if family == "D":
        out = [(i, i + 1, 1, None) for i in range(k - 2)]
        out.append((k - 3, k - 1, 1, None))
        return out
    if family == "E":
        out = [(i, i + 1, 1, None) for i in range(k - 2)]
        out.append((_E_BRANCH[k], k - 1, 1, None))
        return out
    out = [(i, i + 1, 1, None) for i in range(k - 1)]
    if family == "B":
        out[-1] = (k - 2, k - 1, 2, k - 1)
    elif family == "C":
        out[-1] = (k - 2, k - 1, 2, k - 2)
    elif family == "F":
        out[1] = (1, 2, 2, 2)
    elif family == "G":
        out = [(0, 1, 3, 0)]
    return out


def cartan_matrix(family: str, k: int) -> list[list[int]]:
    """C[i][j] = <alpha_j, alpha_i^vee>; column j is alpha_j in the weight basis."""
    c = [[2 if i == j else 0 for j in range(k)] for i in range(k)]
    for i, j, m, short in _edges(family, k):
        if short is None:
            c[i][j] = c[j][i] = -1
        else:
            long_ = j if short == i else i
            c[short][long_] = -m
            c[long_][short] = -1
    return c


@dataclass(frozen=True, order=True)
class Root:
    simple_coords: tuple[int, ...]
    fw_coords: tuple[int, ...] = field(compare=False)

    @property
    def height(self) -> int:
        return sum(self.simple_coords)

    def __neg__(self):
        return Root(tuple(-a for a in self.simple_coords), tuple(-a for a in self.fw_coords))


def _positive_roots(cartan: list[list[int]]) -> list[tuple[int, ...]]:
    k = len(cartan)
    simple = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            fw = [sum(cartan[i][j] * beta[j] for j in range(k)) for i in range(k)]
            for i in range(k):
                # p = how far beta - t alpha_i stays a root
                p = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    if tuple(cur) in found:
                        p += 1
                    else:
                        break
                q = p - fw[i]
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(found)


def as_weight(mu, rank: int | None = None) -> tuple[Fraction, ...]:
    """Coerce a sequence or 'a,b,c' string to a Fraction tuple."""
    if isinstance(mu, str):
        mu = [s for s in re.split(r"[,\s]+", mu.strip()) if s]
    if isinstance(mu, tuple) and all(type(x) is Fraction for x in mu):
        w = mu
    else:
        w = tuple(Fraction(x) for x in mu)
    if rank is not None and len(w) != rank:
        raise RootSystemError(f"weight has {len(w)} coordinates, expected {rank}")
    return w


@dataclass(frozen=True)
class RootSystem:
    lie_type: LieType
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Root, ...]
    half_norms: tuple[Fraction, ...]  # (alpha_i, alpha_i)/2, long roots -> 1
    offsets: tuple[int, ...]  # first global node index of each factor (0-based)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def inv_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(map(tuple, _exact.inverse(self.cartan)))

    @cached_property
    def pairing_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix of the fundamental weights under the normalized form."""
        inv = self.inv_cartan
        return tuple(tuple(inv[i][j] * self.half_norms[i] for j in range(self.rank))
                     for i in range(self.rank))

    @cached_property
    def adjacency(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """node -> ((neighbour, edge multiplicity), ...), 1-based."""
        adj = {}
        for i in range(self.rank):
            nbrs = []
            for j in range(self.rank):
                if i != j and self.cartan[i][j]:
                    nbrs.append((j + 1, max(-self.cartan[i][j], -self.cartan[j][i])))
            adj[i + 1] = tuple(nbrs)
        return adj

    @property
    def rho(self) -> tuple[Fraction, ...]:
        return (Fraction(1),) * self.rank

    @property
    def dim(self) -> int:
        return 2 * len(self.positive_roots) + self.rank

    def factor_slices(self) -> list[slice]:
        ends = list(self.offsets[1:]) + [self.rank]
        return [slice(a, b) for a, b in zip(self.offsets, ends)]

    def factor(self, index: int) -> "RootSystem":
        return build(LieType((self.lie_type.factors[index],)))

    def factor_of(self, node: int) -> int:
        """Index of the factor containing a 1-based node."""
        for f, s in enumerate(self.factor_slices()):
            if s.start < node <= s.stop:
                return f
        raise RootSystemError(f"node {node} out of range")

    def root_from_simple(self, coords: Sequence[int]) -> Root:
        coords = tuple(int(a) for a in coords)
        fw = tuple(sum(self.cartan[i][j] * coords[j] for j in range(self.rank))
                   for i in range(self.rank))
        return Root(coords, fw)

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        """All roots, negatives first."""
        return tuple(-a for a in reversed(self.positive_roots)) + self.positive_roots

    @cached_property
    def _root_set(self) -> frozenset:
        return frozenset(a.simple_coords for a in self.roots)

    def is_root(self, simple_coords: Sequence[int]) -> bool:
        return tuple(simple_coords) in self._root_set

    def simple_root(self, i: int) -> Root:
        return self.root_from_simple([int(j == i - 1) for j in range(self.rank)])

    def check_node(self, i: int):
        if not (isinstance(i, int) and 1 <= i <= self.rank):
            raise RootSystemError(f"node {i!r} out of range 1..{self.rank}")

    @cached_property
    def _int_norms(self) -> tuple[int, tuple[int, ...]]:
        den = 1
        for d in self.half_norms:
            den = den * d.denominator // gcd(den, d.denominator)
        return den, tuple(int(d * den) for d in self.half_norms)

    def root_inner(self, a: Root, b: Root) -> Fraction:
        """(a, b) for two roots, in integer arithmetic."""
        den, ds = self._int_norms
        return Fraction(sum(x * d * y for x, d, y in zip(a.fw_coords, ds, b.simple_coords)), den)

    def is_long(self, alpha: Root) -> bool:
        return pairing(self, alpha.fw_coords, alpha.fw_coords) == 2


def build(lie_type) -> RootSystem:
    return _build(LieType.parse(lie_type))


@lru_cache(maxsize=None)
def _build(lt: LieType) -> RootSystem:
    k = lt.rank
    cartan = [[0] * k for _ in range(k)]
    roots, half_norms, offsets = [], [], []
    off = 0
    for fam, rk in lt.factors:
        c = cartan_matrix(fam, rk)
        for i in range(rk):
            for j in range(rk):
                cartan[off + i][off + j] = c[i][j]
        d = [None] * rk
        d[0] = Fraction(1)
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(rk):
                if c[i][j] and d[j] is None:
                    d[j] = d[i] * c[i][j] / c[j][i]
                    stack.append(j)
        top = max(d)
        half_norms.extend(x / top for x in d)
        for beta in _positive_roots(c):
            roots.append((0,) * off + beta + (0,) * (k - off - rk))
        offsets.append(off)
        off += rk
    cartan_t = tuple(map(tuple, cartan))
    pos = []
    for beta in sorted(roots):
        fw = tuple(sum(cartan[i][j] * beta[j] for j in range(k)) for i in range(k))
        pos.append(Root(beta, fw))
    return RootSystem(lt, cartan_t, tuple(pos), tuple(half_norms), tuple(offsets))


def highest_root(rs: RootSystem) -> Root:
    if not rs.lie_type.irreducible:
        raise RootSystemError("highest_root needs an irreducible system; use rs.factor(i)")
    return max(rs.positive_roots, key=lambda a: a.height)


def inverse_cartan(rs: RootSystem):
    return [list(row) for row in rs.inv_cartan]


def pairing(rs: RootSystem, mu, nu) -> Fraction:
    mu, nu = as_weight(mu), as_weight(nu)
    if len(mu) != rs.rank or len(nu) != rs.rank:
        raise RootSystemError("weight dimension does not match the rank")
    g = rs.pairing_matrix
    return sum((mu[i] * g[i][j] * nu[j] for i in range(rs.rank) for j in range(rs.rank)
                if mu[i] and nu[j]), Fraction(0))


def root_pairing(rs: RootSystem, mu, alpha: Root) -> Fraction:
    """(mu, alpha) for a weight mu and a root given in simple coordinates."""
    mu = as_weight(mu, rs.rank)
    return sum((mu[j] * rs.half_norms[j] * a for j, a in enumerate(alpha.simple_coords) if a),
               Fraction(0))


def reflect(rs: RootSystem, i: int, mu) -> tuple[Fraction, ...]:
    rs.check_node(i)
    mu = as_weight(mu, rs.rank)
    b = mu[i - 1]
    if b == 0:
        return mu
    return tuple(m - b * rs.cartan[j][i - 1] for j, m in enumerate(mu))


def to_antidominant(rs: RootSystem, mu) -> tuple[tuple[Fraction, ...], list[int]]:
    mu = as_weight(mu, rs.rank)
    word = []
    bound = len(rs.positive_roots)
    while True:
        i = next((j for j, m in enumerate(mu) if m > 0), None)
        if i is None:
            return mu, word
        mu = reflect(rs, i + 1, mu)
        word.append(i + 1)
        if len(word) > bound:
            raise RootSystemError("reflection word exceeded the number of positive roots")


def minus_w0(rs: RootSystem) -> tuple[int, ...]:
    """sigma with -w0(omega_i) = omega_sigma(i), as a 1-based tuple."""
    return _minus_w0(rs.lie_type)


@lru_cache(maxsize=None)
def _minus_w0(lt: LieType) -> tuple[int, ...]:
    rs = build(lt)
    sigma = []
    for i in range(rs.rank):
        omega = [int(j == i) for j in range(rs.rank)]
        low, _ = to_antidominant(rs, omega)
        neg = [-x for x in low]
        if sorted(neg) != [0] * (rs.rank - 1) + [1]:
            raise RootSystemError("-w0 did not map a fundamental weight to one")
        sigma.append(neg.index(1) + 1)
    return tuple(sigma)


def is_dominant(mu) -> bool:
    return all(x >= 0 for x in as_weight(mu))


def weyl_dim(rs: RootSystem, lam) -> int:
    lam = as_weight(lam, rs.rank)
    if not all(x >= 0 and x.denominator == 1 for x in lam):
        raise RootSystemError(f"weyl_dim needs a dominant integral weight, got {_fmt(lam)}")
    num = den = Fraction(1)
    for alpha in rs.positive_roots:
        a = alpha.simple_coords
        rho_a = sum(rs.half_norms[j] * a[j] for j in range(rs.rank) if a[j])
        lam_a = sum(rs.half_norms[j] * a[j] * lam[j] for j in range(rs.rank) if a[j])
        num *= rho_a + lam_a
        den *= rho_a
    d = num / den
    assert d.denominator == 1
    return int(d)


def _fmt(mu) -> str:
    return ",".join(str(x) for x in mu)


# ---------------------------------------------------------------- rendering

def ascii_only() -> bool:
    return os.environ.get("PPGEOM_ASCII", "").lower() not in ("", "0", "false", "no")


def _connector(mult: int, short_side: str | None) -> str:
    triple = "#" if ascii_only() else "≡"
    if mult == 1:
        return "--"
    glyph = "=" if mult == 2 else triple
    return glyph + ">" if short_side == "right" else "<" + glyph


def _render_factor(fam: str, k: int, labels: list[str], crossed: set[int]) -> list[str]:
    glyphs = ["x" if i in crossed else "o" for i in range(k)]
    if fam in ("D", "E"):
        chain = list(range(k - 1))
        branch, attach = k - 1, (k - 3 if fam == "D" else _E_BRANCH[k])
    else:
        chain, branch, attach = list(range(k)), None, None
    conn = {}
    for i, j, m, short in _edges(fam, k):
        if j == i + 1 and j in chain:
            conn[i] = _connector(m, None if short is None else ("right" if short == j else "left"))
    widths = [max(1, len(labels[i])) for i in chain]
    top, mid, centres, col = [], [], [], 0
    for pos, i in enumerate(chain):
        w = widths[pos]
        top.append(labels[i].center(w))
        mid.append(glyphs[i].center(w))
        centres.append(col + (w - 1) // 2)
        col += w
        if pos < len(chain) - 1:
            top.append("  ")
            mid.append(conn[i])
            col += 2
    lines = ["".join(top).rstrip(), "".join(mid)]
    if branch is not None:
        c = centres[attach]
        lab = labels[branch]
        lines.append(" " * c + "|")
        lines.append(" " * c + glyphs[branch])
        if lab:
            lines.append(" " * max(0, c - (len(lab) - 1) // 2) + lab)
    return lines


def render(rs: RootSystem, labels=None, crossed: Iterable[int] = ()) -> str:
    """ASCII Dynkin diagram; labels are printed above nodes, crossed nodes as x."""
    crossed = set(crossed)
    if labels is None:
        labels = [""] * rs.rank
    labels = [x if isinstance(x, str) else str(x) for x in labels]
    blocks = []
    for (fam, k), s in zip(rs.lie_type.factors, rs.factor_slices()):
        local = {c - 1 - s.start for c in crossed if s.start < c <= s.stop}
        blocks.append(_render_factor(fam, k, labels[s], local))
    height = max(len(b) for b in blocks)
    width = [max(len(line) for line in b) for b in blocks]
    out = []
    for row in range(height):
        parts = [(b[row] if row < len(b) else "").ljust(w) for b, w in zip(blocks, width)]
        sep = "   +   " if row == 1 else "       "
        out.append(sep.join(parts).rstrip())
    return "\n".join(out)


def node_order_diagram(lie_type) -> str:
    """The diagram labelled by node numbers, as printed in the CLI help."""
    rs = build(lie_type)
    return render(rs, labels=[str(i + 1) for i in range(rs.rank)])
