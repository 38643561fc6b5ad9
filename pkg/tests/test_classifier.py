import json
import time
from fractions import Fraction

import pytest

from ppgeom.classifier import (REAL_FORMS, ClassificationError, classify_all, family_of,
                               graded_components, is_self_dual, isotropy, maximal_orthogonal_seq,
                               parameters, ppg_record, quabla_scalars, strongly_orthogonal_seq,
                               symmetric_rspaces, udual_data)
from ppgeom.parabolic import make_parabolic
from ppgeom.rootsys import build, weyl_dim
from conftest import ints


def expected_self_dual(fam, k):
    """Nodes of the self-dual symmetric R-spaces, from the standard classification."""
    if fam == "A":
        return {(k + 1) // 2} if k % 2 else set()
    if fam == "B":
        return {1}
    if fam == "C":
        return {k}
    if fam == "D":
        return {1, k - 1, k} if k % 2 == 0 else {1}
    return {6} if (fam, k) == ("E", 7) else set()


def expected_records(max_rank):
    out = set()
    for k in range(2, max_rank + 1):
        out.add(("C", f"C{k}", k, 1, k - 1))
        out.add(("BD", f"B{k}", 1, 2 * k - 3, 1))
    for k in range(3, max_rank + 1):
        out.add(("BD", f"D{k}", 1, 2 * k - 4, 1))
    for n in range(1, (max_rank - 1) // 2 + 1):
        out.add(("A", f"A{2 * n + 1}", n + 1, 2, n))
    for n in range(1, (max_rank - 2) // 2 + 1):
        for node in (2 * n + 1, 2 * n + 2):
            out.add(("D", f"D{2 * n + 2}", node, 4, n))
    if max_rank >= 7:
        out.add(("E7", "E7", 6, 8, 2))
    return out


TYPES = [(f, k) for f, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 3)) for k in range(lo, 10)] + \
        [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]


@pytest.mark.parametrize("fam,k", TYPES)
def test_self_duality(fam, k):
    rs = build((fam, k))
    nodes = symmetric_rspaces((fam, k))
    got = {i for i in nodes if is_self_dual(make_parabolic(rs, [i]))}
    assert got == expected_self_dual(fam, k) & set(nodes)


def test_symmetric_rspaces_exceptional():
    assert symmetric_rspaces("E6") == [1, 5]
    assert symmetric_rspaces("E7") == [6]
    assert symmetric_rspaces("E8") == []
    assert symmetric_rspaces("B4") == [1]
    assert symmetric_rspaces("C4") == [4]
    assert symmetric_rspaces("D5") == [1, 4, 5]


def test_classification():
    t = time.perf_counter()
    recs = classify_all(9)
    assert time.perf_counter() - t < 5
    got = {(r.family, str(r.big_type), r.q_crossed, r.r, r.n) for r in recs}
    assert got == expected_records(9)
    assert len(recs) == 34


def test_dims():
    for rec in classify_all(9):
        r, n = rec.r, rec.n
        iso = build(rec.iso_type)
        assert weyl_dim(iso, rec.W_hw) == rec.dims.dim_W == (n + 1) * (r * n + 2) // 2
        assert rec.dims.dim_gp == r * n
        assert rec.dims.dim_B == n * (r * n - r + 2) // 2
        assert rec.dims.half_r_np1 == Fraction(r * (n + 1), 2)
        assert rec.real_forms == REAL_FORMS[rec.family]


def test_e7_record():
    rec = ppg_record(make_parabolic(build("E7"), [6]))
    assert (rec.dims.dim_W, rec.dims.dim_gp, rec.dims.dim_B, rec.dims.half_r_np1) == (27, 16, 10, 12)
    assert str(rec.iso_type) == "E6" and rec.p_crossed == (5,)
    assert ints(rec.W_hw) == (1, 0, 0, 0, 0, 0)
    js = rec.to_json()
    json.dumps(js)
    assert js["family"] == "E7"


def test_grading_eigs():
    rec = ppg_record(make_parabolic(build("C4"), [4]))
    assert rec.grading_eigs == (Fraction(1, 2), Fraction(-1, 2), Fraction(-3, 2))


@pytest.mark.parametrize("k", [4, 6, 8, 10])
def test_sl_orthogonal_sequence(k):
    # for sl(k) crossed at the middle node m: beta_i = alpha_{m-i} + ... + alpha_{m+i}
    m = k // 2
    seq = strongly_orthogonal_seq(make_parabolic(build(f"A{k - 1}"), [m]))
    betas = [b.simple_coords for b in reversed(seq.betas)]
    for i, b in enumerate(betas):
        assert b == tuple(int(m - i <= j + 1 <= m + i) for j in range(k - 1))


@pytest.mark.parametrize("lt,node", [("C5", 5), ("D8", 8), ("E7", 6), ("B5", 1), ("D6", 1)])
def test_sequence_ends_at_crossed_root(lt, node):
    rs = build(lt)
    q = make_parabolic(rs, [node])
    seq = strongly_orthogonal_seq(q)
    assert seq.betas[-1] == rs.simple_root(node)
    assert len(seq.betas) == parameters(q)[1] + 1


def test_non_self_dual_sequence_raises():
    q = make_parabolic(build("E6"), [1])
    assert len(maximal_orthogonal_seq(q).betas) == 2
    with pytest.raises(ClassificationError):
        strongly_orthogonal_seq(q)


def test_family_and_isotropy():
    q = make_parabolic(build("A7"), [4])
    assert family_of(q) == "A"
    iso = isotropy(q)
    assert str(iso.rs.lie_type) == "A3+A3"
    assert sorted(iso.p_crossed) == [3, 6]
    assert ints(iso.W_hw) == (1, 0, 0, 1, 0, 0)


def quabla_expected(r, n):
    return ([0, Fraction(r * n - r + 2, 2), r * n], [0, 1, r], Fraction(r * n + 3 * r - 4, 2))


def test_quabla_all_families():
    seen = set()
    for rec in classify_all(9):
        if rec.n > 6:
            continue
        q = make_parabolic(build(rec.big_type), [rec.q_crossed])
        got = quabla_scalars(q)
        w, wd, b = quabla_expected(rec.r, rec.n)
        assert got["W"] == w and got["W*"] == wd and got["B*"] == b, rec.big_type
        seen.add(rec.family)
    assert seen == {"A", "BD", "C", "D", "E7"}


def test_graded_components_c():
    q = make_parabolic(build("C4"), [4])
    assert [(h, ints(mu)) for h, mu in graded_components(q, 1)] == \
        [(2, (2, 0, 0)), (1, (1, 0, -1)), (0, (0, 0, -2))]
    assert [(h, ints(mu)) for h, mu in graded_components(q, -1)] == \
        [(0, (0, 0, 2)), (-1, (0, 1, 0)), (-2, (0, 2, -2))]


@pytest.mark.parametrize("lt,node", [("C5", 5), ("A7", 4), ("D8", 8), ("E7", 6)])
def test_udual_dimension(lt, node):
    _, ok = udual_data(make_parabolic(build(lt), [node]))
    assert ok


def test_not_symmetric():
    with pytest.raises(ClassificationError):
        is_self_dual(make_parabolic(build("G2"), [1]))


def test_line_bundle_power_is_top_form():
    # L = the one-dimensional piece of W*; r(n+1)/2 copies of it carry the weight of the
    # top exterior power, each root of the nilradical having geometric weight 1 here
    from ppgeom.parabolic import geometric_weight, sigma_height
    for rec in classify_all(9):
        q = make_parabolic(build(rec.big_type), [rec.q_crossed])
        iso = isotropy(q)
        P = iso.parabolic
        height, lw = graded_components(q, -1)[0]
        assert height == 0
        w_L = geometric_weight(P, lw)
        assert w_L == Fraction(2 * rec.n, rec.n + 1)
        nil = [a for a in iso.rs.roots if sigma_height(P, a) == 1]
        assert len(nil) == rec.r * rec.n
        assert all(geometric_weight(P, a.fw_coords) == 1 for a in nil)
        top = [sum(Fraction(a.fw_coords[i]) for a in nil) for i in range(iso.rs.rank)]
        assert geometric_weight(P, top) == rec.r * rec.n == rec.dims.half_r_np1 * w_L
