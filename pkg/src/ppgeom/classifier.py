"""Self-dual symmetric R-spaces and their projective parabolic geometries."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .homology import adjoint_weights, laplacian_eigenvalue
from .parabolic import Parabolic, graded_dims, is_abelian, sigma_height
from .rootsys import (LieType, Root, RootSystem, build, cartan_matrix, highest_root,
                      minus_w0, weyl_dim)


class ClassificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Isotropy:
    rs: RootSystem
    p_crossed: frozenset[int]
    W_hw: tuple[Fraction, ...]
    node_map: dict[int, int]  # big node -> isotropy node

    @property
    def parabolic(self) -> Parabolic:
        return Parabolic(self.rs, self.p_crossed)


@dataclass(frozen=True)
class OrthSequence:
    betas: tuple[Root, ...]  # beta_n, ..., beta_0


@dataclass(frozen=True)
class Dims:
    dim_W: int
    dim_gp: int
    dim_B: int
    half_r_np1: Fraction


@dataclass(frozen=True)
class PPGRecord:
    family: str
    big_type: LieType
    q_crossed: int
    self_dual: bool
    iso_type: LieType
    p_crossed: tuple[int, ...]
    W_hw: tuple[Fraction, ...]
    r: int
    n: int
    dims: Dims
    grading_eigs: tuple[Fraction, Fraction, Fraction]
    real_forms: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        d = asdict(self)
        d["big_type"] = str(self.big_type)
        d["iso_type"] = str(self.iso_type)
        d["p_crossed"] = list(self.p_crossed)
        d["W_hw"] = [_num(x) for x in self.W_hw]
        d["grading_eigs"] = [str(x) for x in self.grading_eigs]
        d["dims"]["half_r_np1"] = _num(self.dims.half_r_np1)
        d["real_forms"] = list(self.real_forms)
        return d


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


REAL_FORMS = {
    "C": ("sp(2n+2,R)",),
    "A": ("sl(2n+2,R)", "su(n+1,n+1)"),
    "D": ("so(2n+2,2n+2)", "so*(4n+4)"),
    "E7": ("e7(7)", "e7(-25)"),
    "BD": ("so(p+2,q+2)",),
}


def symmetric_rspaces(lt) -> list[int]:
    rs = build(lt)
    theta = highest_root(rs)
    return [i + 1 for i, a in enumerate(theta.simple_coords) if a == 1]


def _check_symmetric(q: Parabolic):
    if len(q.crossed) != 1 or not q.rs.lie_type.irreducible or not is_abelian(q):
        raise ClassificationError("expected a single crossed node with abelian nilradical")


def is_self_dual(q: Parabolic) -> bool:
    _check_symmetric(q)
    sigma = minus_w0(q.rs)
    return {sigma[c - 1] for c in q.crossed} == set(q.crossed)


def family_of(q: Parabolic) -> str | None:
    """Family label of a self-dual symmetric R-space, None for n = 0 or non-self-dual."""
    (fam, k), = q.rs.lie_type.factors
    (node,) = q.crossed
    if fam == "C" and node == k:
        return "C"
    if fam == "A" and k % 2 == 1 and node == (k + 1) // 2 and k >= 3:
        return "A"
    if fam == "D" and k % 2 == 0 and node in (k - 1, k):
        return "D"
    if fam == "E" and k == 7 and node == 6:
        return "E7"
    if fam in ("B", "D") and node == 1:
        return "BD"
    return None


# ------------------------------------------------------------------ isotropy

def _isomorphisms(cartan, nodes, target):
    """All bijections nodes -> range(len(target)) carrying cartan to target."""
    k = len(nodes)
    out = []

    def extend(assign, used):
        if len(assign) == k:
            out.append(dict(zip(nodes, assign)))
            return
        a = nodes[len(assign)]
        for pos in range(k):
            if pos in used or target[pos][pos] != 2:
                continue
            ok = all(cartan[a][b] == target[pos][pb] and cartan[b][a] == target[pb][pos]
                     for b, pb in zip(nodes, assign))
            if ok:
                extend(assign + [pos], used | {pos})

    extend([], frozenset())
    return out


def _components(cartan, nodes):
    left, comps = set(nodes), []
    while left:
        seed = min(left)
        comp, stack = {seed}, [seed]
        while stack:
            a = stack.pop()
            for b in list(left):
                if b not in comp and cartan[a][b]:
                    comp.add(b)
                    stack.append(b)
        left -= comp
        comps.append(sorted(comp))
    return comps


def _identify(cartan, comp, prefer, marked):
    """Type and node map of a connected subdiagram; marked nodes pushed to high positions."""
    k = len(comp)
    families = [prefer] + [f for f in "ABCDEFG" if f != prefer]
    for fam in families:
        try:
            LieType(((fam, k),))
        except ValueError:
            continue
        isos = _isomorphisms(cartan, comp, cartan_matrix(fam, k))
        if isos:
            if fam == "A":
                # type A pieces: push the marked node to the far end
                best = max(isos, key=lambda m: sorted((m[a] for a in comp if a in marked),
                                                      reverse=True))
            else:
                # otherwise keep the big diagram's order when possible
                best = min(isos, key=lambda m: sum(m[a] != i for i, a in enumerate(comp)))
            return (fam, k), best
    raise ClassificationError(f"unrecognised subdiagram on nodes {comp}")


def isotropy(q: Parabolic) -> Isotropy:
    _check_symmetric(q)
    (c,) = q.crossed
    rs = q.rs
    fam, k = rs.lie_type.factors[0]
    if fam == "D" and c >= k - 1:
        fam = "A"  # deleting a spin node leaves a chain
    c0 = c - 1
    rest = [i for i in range(rs.rank) if i != c0]
    nbrs = {i for i in rest if rs.cartan[c0][i]}
    factors, node_map, off = [], {}, 0
    for comp in _components(rs.cartan, rest):
        ftype, m = _identify(rs.cartan, comp, fam, nbrs)
        factors.append(ftype)
        for a, pos in m.items():
            node_map[a + 1] = off + pos + 1
        off += ftype[1]
    iso_rs = build(LieType(tuple(factors)))
    theta = highest_root(rs).fw_coords
    w = [Fraction(0)] * iso_rs.rank
    for big, small in node_map.items():
        w[small - 1] = Fraction(theta[big - 1])
    p_crossed = frozenset(node_map[i + 1] for i in nbrs)
    return Isotropy(iso_rs, p_crossed, tuple(w), node_map)


def restrict(iso: Isotropy, alpha: Root) -> tuple[Fraction, ...]:
    """Weight of a big-algebra root space under the isotropy algebra."""
    w = [Fraction(0)] * iso.rs.rank
    for big, small in iso.node_map.items():
        w[small - 1] = Fraction(alpha.fw_coords[big - 1])
    return tuple(w)


# --------------------------------------------------- orthogonal sequences

def _big_pairing(rs: RootSystem, a: Root, b: Root) -> Fraction:
    return rs.root_inner(a, b)


def maximal_orthogonal_seq(q: Parabolic) -> OrthSequence:
    """Cascade of strongly orthogonal q-height one roots, starting from the highest root."""
    _check_symmetric(q)
    rs = q.rs
    betas = [highest_root(rs)]
    while True:
        pos = [a for a in rs.positive_roots
               if sigma_height(q, a) == 1 and all(_big_pairing(rs, a, b) == 0 for b in betas)]
        if not pos:
            return OrthSequence(tuple(betas))
        betas.append(max(pos, key=lambda a: (a.height, a.simple_coords)))


def strongly_orthogonal_seq(q: Parabolic) -> OrthSequence:
    seq = maximal_orthogonal_seq(q)
    (c,) = q.crossed
    if seq.betas[-1] != q.rs.simple_root(c):
        raise ClassificationError("beta_0 != alpha_r, the R-space is not self-dual")
    return seq


def parameters(q: Parabolic) -> tuple[int, int]:
    seq = strongly_orthogonal_seq(q)
    betas = seq.betas
    n = len(betas) - 1
    if n == 0:
        raise ClassificationError("n = 0: the geometry is a point")
    rs = q.rs
    height1 = [a for a in rs.positive_roots if sigma_height(q, a) == 1]
    profile = {}
    for a in height1:
        ps = tuple(_big_pairing(rs, a, b) for b in betas)
        profile[a] = ps
    counts = set()
    for i in range(len(betas)):
        for j in range(i + 1, len(betas)):
            want = tuple(Fraction(1) if t in (i, j) else Fraction(0) for t in range(len(betas)))
            counts.add(sum(1 for ps in profile.values() if ps == want))
    if len(counts) != 1:
        raise ClassificationError(f"off-diagonal Peirce counts depend on the pair: {counts}")
    r = counts.pop()
    if 2 * len(height1) != (n + 1) * (r * n + 2):
        raise ClassificationError("dim g_(1) disagrees with (r, n)")
    return r, n


# --------------------------------------------------------------- records

def grading_eigs(n: int) -> tuple[Fraction, Fraction, Fraction]:
    return (Fraction(2, n + 1), Fraction(-(n - 1), n + 1), Fraction(-2 * n, n + 1))


def xi_p_on_roots(q: Parabolic, n: int) -> list[tuple[Root, Fraction]]:
    """Eigenvalue of xi_p = (2/(n+1)) xi_q - h_0 on each q-height-1 root space."""
    (c,) = q.crossed
    out = []
    for a in q.rs.positive_roots:
        if sigma_height(q, a) == 1:
            out.append((a, Fraction(2, n + 1) - a.fw_coords[c - 1]))
    return out


def form_scale(q: Parabolic, iso: Isotropy) -> Fraction:
    """Ratio of the big algebra's form to the isotropy's normalized one."""
    scales = set()
    for s in iso.rs.factor_slices():
        nodes = [big for big, small in iso.node_map.items() if s.start < small <= s.stop]
        scales.add(max(q.rs.half_norms[b - 1] for b in nodes))
    if len(scales) != 1:
        raise ClassificationError("isotropy factors inherit different normalizations")
    return scales.pop()


def ppg_record(q: Parabolic) -> PPGRecord:
    if not is_self_dual(q):
        raise ClassificationError("ppg_record needs a self-dual R-space")
    family = family_of(q)
    r, n = parameters(q)
    iso = isotropy(q)
    dims = Dims(dim_W=(n + 1) * (r * n + 2) // 2, dim_gp=r * n,
                dim_B=n * (r * n - r + 2) // 2, half_r_np1=Fraction(r * (n + 1), 2))
    checks = {
        "dim_W via weyl_dim": (weyl_dim(iso.rs, iso.W_hw), dims.dim_W),
        "dim_W via q-grading": (graded_dims(q)[1], dims.dim_W),
        "dim_gp via p-grading": (sum(d for k, d in graded_dims(iso.parabolic).dims.items()
                                     if k > 0), dims.dim_gp),
    }
    eigs = grading_eigs(n)
    from collections import Counter
    seen = Counter(e for _, e in xi_p_on_roots(q, n))
    checks["xi_p multiplicities"] = (tuple(seen[e] for e in eigs), (dims.dim_B, r * n, 1))
    checks["xi_p spectrum"] = (set(seen), set(eigs))
    # xi_p also acts by p-height - 2 + 2/(n+1) on the isotropy grading of W
    p_heights = {}
    for a, e in xi_p_on_roots(q, n):
        h = sum(a.simple_coords[big - 1] for big, small in iso.node_map.items()
                if small in iso.p_crossed)
        p_heights.setdefault(e, set()).add(h - 2 + Fraction(2, n + 1))
    checks["xi_p vs p-height"] = ({e: frozenset(v) for e, v in p_heights.items()},
                                 {e: frozenset({e}) for e in eigs})
    bad = {k: v for k, v in checks.items() if v[0] != v[1]}
    if bad:
        raise ClassificationError(f"cross-check mismatch for {q.rs.lie_type} node "
                                  f"{sorted(q.crossed)}: {bad}")
    return PPGRecord(
        family=family, big_type=q.rs.lie_type, q_crossed=next(iter(q.crossed)),
        self_dual=True, iso_type=iso.rs.lie_type, p_crossed=tuple(sorted(iso.p_crossed)),
        W_hw=iso.W_hw, r=r, n=n, dims=dims, grading_eigs=eigs,
        real_forms=REAL_FORMS.get(family, ()))


def _candidate_types(max_rank: int):
    for fam, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 3)):
        for k in range(lo, max_rank + 1):
            yield (fam, k)
    for fam, k in (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)):
        if k <= max_rank:
            yield (fam, k)


def classify_all(max_rank: int) -> list[PPGRecord]:
    if max_rank < 2:
        raise ValueError("max_rank must be at least 2")
    out = []
    for lt in _candidate_types(max_rank):
        rs = build(lt)
        for node in symmetric_rspaces(lt):
            q = Parabolic(rs, frozenset({node}))
            if not is_self_dual(q):
                continue
            if len(strongly_orthogonal_seq(q).betas) < 2:
                continue  # n = 0
            out.append(ppg_record(q))
    return out


# ------------------------------------------------------------- U* and quabla

def udual_weight(q: Parabolic) -> tuple[Fraction, ...]:
    """Highest weight of U* = S^2 W* / Cartan^2 W* in isotropy coordinates."""
    family = family_of(q)
    iso = isotropy(q)
    k = iso.rs.rank
    w = [Fraction(0)] * k
    if family not in REAL_FORMS:
        raise ClassificationError("no U* data for this R-space")
    if family == "C" and k >= 2:
        w[k - 2] = Fraction(2)  # Cartan square of the second exterior power of the dual
    elif family == "A" and k >= 4:
        m = k // 2
        w[m - 2] = w[k - 2] = Fraction(1)
    elif family == "D" and k >= 5:
        w[k - 4] = Fraction(1)  # fourth exterior power of the dual
    elif family == "E7":
        w[0] = Fraction(1)
    return tuple(w)


def udual_data(q: Parabolic) -> tuple[tuple[Fraction, ...], bool]:
    iso = isotropy(q)
    u = udual_weight(q)
    d = weyl_dim(iso.rs, iso.W_hw)
    ok = d * (d + 1) // 2 == weyl_dim(iso.rs, [2 * x for x in iso.W_hw]) + weyl_dim(iso.rs, u)
    if not ok:
        raise ClassificationError("dim S^2 W != dim Cartan^2 W + dim U*")
    return u, ok


def graded_components(q: Parabolic, sign: int = 1) -> list[tuple[int, tuple[Fraction, ...]]]:
    """(p-height, highest weight) of each graded piece of W (sign=1) or W* (sign=-1)."""
    iso = isotropy(q)
    roots = [a for a in q.rs.roots if sigma_height(q, a) == sign]
    p_nodes = [big for big, small in iso.node_map.items() if small in iso.p_crossed]
    free = [big for big, small in iso.node_map.items() if small not in iso.p_crossed]
    pieces = {}
    for a in roots:
        pieces.setdefault(sum(a.simple_coords[b - 1] for b in p_nodes), []).append(a)
    out = []
    for h in sorted(pieces, reverse=True):
        have = {a.simple_coords for a in pieces[h]}
        tops = []
        for a in pieces[h]:
            ups = []
            for b in free:
                up = list(a.simple_coords)
                up[b - 1] += 1
                ups.append(tuple(up) in have)
            if not any(ups):
                tops.append(a)
        # a piece may split, e.g. into a pair of conjugate summands
        out.extend((h, restrict(iso, a)) for a in sorted(tops))
    return out


def _per_height(iso, lam, pieces, scale):
    vals = {}
    for h, mu in pieces:
        vals.setdefault(h, set()).add(laplacian_eigenvalue(iso.rs, lam, mu, scale))
    if any(len(v) != 1 for v in vals.values()):
        raise ClassificationError("summands of one graded piece have different eigenvalues")
    return [vals[h].pop() for h in sorted(vals, reverse=True)]


def quabla_scalars(q: Parabolic) -> dict:
    """Kostant Laplacian eigenvalues on the graded pieces of W, W* and on B*."""
    iso = isotropy(q)
    scale = form_scale(q, iso)
    w_pieces = graded_components(q, 1)
    wd_pieces = graded_components(q, -1)
    top_w, top_wd = w_pieces[0][1], wd_pieces[0][1]
    w_vals = _per_height(iso, top_w, w_pieces, scale)
    wd_vals = _per_height(iso, top_wd, wd_pieces, scale)
    b_dual = tuple(x - y for x, y in zip(wd_pieces[-1][1], top_wd))
    adj = adjoint_weights(iso.rs)[0]
    nric = laplacian_eigenvalue(iso.rs, adj, b_dual, scale)
    return {"W": w_vals, "W*": wd_vals, "B*": nric, "B*_hw": b_dual, "form_scale": scale}
