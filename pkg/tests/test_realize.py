import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppgeom.realize import (SLOTS, VerificationError, bracket, check_closure, check_gradings,
                            check_jacobi, jordan_identity_residual, make_jordan, meyberg_exact_check,
                            meyberg_product, peirce, peirce_frame, quat_covector, quat_frame,
                            quat_pairing, quaternionic_bracket, read_w, sp_realization,
                            verify_appendix_identities, verify_bracket_table, verify_quaternionic,
                            w_element)


@pytest.fixture(scope="module", params=[1, 2, 3])
def R(request):
    return sp_realization(request.param)


def test_dimension_and_slots(R):
    n, N = R.n, R.N
    assert R.dim == N * (2 * N + 1)
    d = R.slot_dims()
    assert d == {"h": n * (n + 1) // 2, "Z": n, "lambda": 1, "X": n, "p0": n * n + 1, "alpha": n,
                 "ell": 1, "eta": n, "theta": n * (n + 1) // 2}


def test_xi_p_labels():
    from fractions import Fraction as F
    from ppgeom.classifier import grading_eigs
    R = sp_realization(3)
    got = {k: R.xi_p_label(k) for k in SLOTS}
    assert got == {"h": F(1, 2), "Z": F(-1, 2), "lambda": F(-3, 2), "X": 1, "p0": 0, "alpha": -1,
                   "ell": F(3, 2), "eta": F(1, 2), "theta": F(-1, 2)}
    assert (got["h"], got["Z"], got["lambda"]) == grading_eigs(3)


def test_closure_jacobi_gradings(R):
    assert check_closure(R)
    assert check_jacobi(R)
    assert check_gradings(R)


def test_sl2_triple():
    R = sp_realization(2)
    assert np.array_equal(bracket(R.h_elt, R.e), 2 * R.e)
    assert np.array_equal(bracket(R.h_elt, R.f), -2 * R.f)


def test_embeddings_round_trip(R):
    rng = np.random.default_rng(7)
    n = R.n
    x = rng.integers(-5, 6, n).astype(float)
    H = rng.integers(-3, 4, (n, n)).astype(float)
    H = H + H.T
    assert np.array_equal(R.read_X(R.X(x)), x)
    assert np.array_equal(R.read_alpha(R.alpha(x)), x)
    assert np.array_equal(R.read_Z(R.Z(x)), x)
    assert np.array_equal(R.read_eta(R.eta(x)), x)
    assert np.allclose(R.read_h(R.h(H)), H)
    assert np.allclose(R.read_theta(R.theta(H)), H)
    assert R.read_lam(R.lam(3.0)) == 3.0 and R.read_ell(R.ell(-2.0)) == -2.0
    for slot, m in {"X": R.X(x), "alpha": R.alpha(x), "Z": R.Z(x), "eta": R.eta(x),
                    "h": R.h(H), "theta": R.theta(H)}.items():
        if np.any(m):
            assert R.slot_of(m) == {slot}


def test_a_acts_by_e(R):
    E = np.arange(R.n * R.n, dtype=float).reshape(R.n, R.n)
    assert np.allclose(R.endo(R.A(E)), E)


def test_bracket_table(R):
    rep = verify_bracket_table(R, samples=200, seed=R.n)
    assert rep.passed, rep.failures[:3]
    assert rep.max_residual <= 1e-9


def test_appendix_identities(R):
    reps = verify_appendix_identities(R, samples=200, seed=R.n)
    assert set(reps) == {"musical", "skew", "flat", "trA", "vfs-bracs"}
    for rep in reps.values():
        assert rep.passed, (rep.name, rep.failures[:3])


def test_report_json():
    rep = verify_bracket_table(sp_realization(1), samples=3)
    js = rep.to_json()
    assert js["id"] == "bracket-table" and js["passed"] and js["samples"] == 3


def test_meyberg(R):
    assert meyberg_exact_check(R, samples=200, seed=R.n)
    S = np.eye(R.N)
    x = w_element(R, S)
    assert np.allclose(read_w(R, meyberg_product(R, x, x)), S)


def test_quaternionic_formula():
    rep = verify_quaternionic(samples=100, max_n=2, seed=0)
    assert rep.passed and rep.max_residual == 0
    one = [1, 0, 0, 0]
    assert list(quaternionic_bracket(1, one, one, one)) == [2, 0, 0, 0]


def test_quat_frame_relations():
    for n in (1, 2, 3):
        assert quat_frame(n).check()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=8, max_size=8),
       st.lists(st.integers(-5, 5), min_size=8, max_size=8))
def test_quat_pairing_covector(a, x):
    assert quat_pairing(a, x) == quat_covector(a) @ np.array(x)


JORDAN = [("sym_real", 3, 1), ("herm_complex", 3, 2), ("herm_quat", 3, 4), ("spin", 5, 4)]


@pytest.mark.parametrize("kind,size,r", JORDAN)
def test_peirce_dims(kind, size, r):
    dims = peirce_frame(make_jordan(kind, size))
    k = 2 if kind == "spin" else size
    for i in range(k):
        assert dims[(i, i)] == 1
        for j in range(i + 1, k):
            assert dims[(i, j)] == r


@pytest.mark.parametrize("kind,size,r", JORDAN)
def test_single_idempotent_peirce(kind, size, r):
    J = make_jordan(kind, size)
    e = J.idempotent_frame()[0]
    J0, Jh, J1 = peirce(J, e)
    assert J1.shape[1] == 1
    assert Jh.shape[1] == r * ((2 if kind == "spin" else size) - 1)


@pytest.mark.parametrize("kind,size,r", JORDAN)
def test_trace_form_positive(kind, size, r):
    J = make_jordan(kind, size)
    E = np.eye(J.dim)
    G = np.array([[J.trace_form(u, v) for v in E] for u in E])
    assert np.allclose(G, G.T)
    assert np.linalg.eigvalsh(G).min() > 0
    rng = np.random.default_rng(3)
    for _ in range(100):
        x, y = rng.normal(size=(2, J.dim))
        assert J.trace_form(x, x) > 0
        assert J.trace_form(x, y) == pytest.approx(x @ G @ y, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("kind,size,r", JORDAN)
def test_jordan_identity(kind, size, r):
    J = make_jordan(kind, size)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x, y = rng.normal(size=(2, J.dim))
        assert jordan_identity_residual(J, x, y) < 1e-10
        assert np.allclose(J.product(J.unit, x), x)


def test_not_idempotent():
    J = make_jordan("sym_real", 2)
    with pytest.raises(ValueError):
        peirce(J, 2 * J.unit)


def test_bad_kind():
    with pytest.raises(ValueError):
        make_jordan("octonion", 3)
    with pytest.raises(ValueError):
        sp_realization(0)


def test_verification_error_is_assertion():
    assert issubclass(VerificationError, AssertionError)
    assert len(SLOTS) == 9
