"""Hasse diagrams, Kostant's theorem and Laplacian eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .parabolic import Parabolic, geometric_weight, is_p_dominant, lowest_form
from .rootsys import RootSystem, RootSystemError, as_weight, highest_root, pairing, reflect


@dataclass(frozen=True)
class HasseDiagram:
    vertices: tuple[tuple[Fraction, ...], ...]
    edges: tuple[tuple[int, int, int], ...]  # (source index, target index, node)
    length: tuple[int, ...]
    words: tuple[tuple[int, ...], ...]  # lexicographically least path word per vertex

    def at_length(self, k: int) -> list[int]:
        return [i for i, l in enumerate(self.length) if l == k]


@dataclass(frozen=True)
class HomologyComponent:
    degree: int
    word: tuple[int, ...]
    hw: tuple[Fraction, ...]


def hasse(p: Parabolic, max_len: int) -> HasseDiagram:
    """Breadth-first orbit of the lowest form, reflecting at positive nodes."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    start = lowest_form(p)
    index = {start: 0}
    vertices, length, words = [start], [0], [()]
    edges = []
    layer = [0]
    for step in range(1, max_len + 1):
        nxt = []
        for u in layer:
            mu = vertices[u]
            for i, m in enumerate(mu):
                if m <= 0:
                    continue
                nu = reflect(p.rs, i + 1, mu)
                word = words[u] + (i + 1,)
                v = index.get(nu)
                if v is None:
                    v = index[nu] = len(vertices)
                    vertices.append(nu)
                    length.append(step)
                    words.append(word)
                    nxt.append(v)
                elif word < words[v]:
                    words[v] = word
                edges.append((u, v, i + 1))
        layer = nxt
        if not layer:
            break
    return HasseDiagram(tuple(vertices), tuple(edges), tuple(length), tuple(words))


def affine_act(rs: RootSystem, word, lam) -> tuple[Fraction, ...]:
    """w.lam = w(lam + rho) - rho, with the word applied right to left."""
    mu = tuple(x + 1 for x in as_weight(lam, rs.rank))
    for i in reversed(list(word)):
        mu = reflect(rs, i, mu)
    return tuple(x - 1 for x in mu)


def _homology_irreducible(p: Parabolic, lam, k: int) -> list[HomologyComponent]:
    diagram = hasse(p, k)
    out = []
    for v in diagram.at_length(k):
        word = diagram.words[v]
        hw = affine_act(p.rs, word, lam)
        for u, t, node in diagram.edges:
            if t == v:
                other = affine_act(p.rs, diagram.words[u] + (node,), lam)
                if other != hw:
                    raise AssertionError(f"words for one Hasse vertex disagree: {word}")
        if not is_p_dominant(p, hw):
            raise AssertionError(f"homology weight {hw} is not p-dominant")
        out.append(HomologyComponent(k, word, hw))
    return out


def homology(p: Parabolic, lam, k: int) -> list[HomologyComponent]:
    lam = as_weight(lam, p.rs.rank)
    if any(x < 0 or x.denominator != 1 for x in lam):
        raise RootSystemError("homology needs a dominant integral weight")
    if k < 0:
        return []
    slices = p.rs.factor_slices()
    if len(slices) == 1:
        return _homology_irreducible(p, lam, k)
    # Kunneth: sum over degree splittings, factors in order
    per_factor = []
    for f, s in enumerate(slices):
        q = p.factor(f)
        per_factor.append([_homology_irreducible(q, lam[s], d) for d in range(k + 1)])
    out = []
    for split in _compositions(k, len(slices)):
        pieces = [per_factor[f][d] for f, d in enumerate(split)]
        for combo in product(*pieces):
            word, hw = (), ()
            for s, c in zip(slices, combo):
                word += tuple(i + s.start for i in c.word)
                hw += c.hw
            out.append(HomologyComponent(k, word, hw))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def adjoint_weights(rs: RootSystem) -> list[tuple[Fraction, ...]]:
    """Highest weight of each simple ideal, as a weight of the whole system."""
    out = []
    for f, s in enumerate(rs.factor_slices()):
        theta = highest_root(rs.factor(f)).fw_coords
        lam = [Fraction(0)] * rs.rank
        lam[s] = [Fraction(x) for x in theta]
        out.append(tuple(lam))
    return out


def harmonic_curvature(p: Parabolic) -> list[HomologyComponent]:
    out = []
    for lam in adjoint_weights(p.rs):
        out.extend(homology(p, lam, 2))
    return out


def laplacian_eigenvalue(rs: RootSystem, lam, mu, form_scale=1) -> Fraction:
    """Kostant Laplacian on the mu-isotypical part of the chains with values in V(lam).

    form_scale rescales the normalized pairing, for when the invariant form
    is inherited from a larger algebra in which these roots are short.
    """
    lam = as_weight(lam, rs.rank)
    mu = as_weight(mu, rs.rank)
    a = tuple(x + 1 for x in lam)
    b = tuple(x + 1 for x in mu)
    return Fraction(form_scale) * (pairing(rs, a, a) - pairing(rs, b, b)) / 2


def bgg_first_order(p: Parabolic, lam):
    h0 = homology(p, lam, 0)[0]
    h1 = homology(p, lam, 1)
    orders = [geometric_weight(p, h0.hw) - geometric_weight(p, c.hw) for c in h1]
    if len(set(orders)) == 1:
        return orders[0]
    return orders
