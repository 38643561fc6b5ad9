"""Pointwise linear algebra of metrisability pencils.

A metric point of type r is stored in its native form:

* r = 1: a real symmetric n x n matrix;
* r = 2: a complex hermitian n x n matrix;
* r = 4: a complex antisymmetric 2n x 2n matrix (the 2-form picture of a
  quaternion-hermitian form), in the basis where the identity form is a
  direct sum of [[0, 1], [-1, 0]] blocks.

Along a pencil h_t = hbar - t h the pfaffian is a polynomial of degree n and
the adjugate a polynomial of degree n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np
import sympy

from ._exact import frac_matrix, nullspace


class PencilError(ValueError):
    pass


class SignedRadicandError(PencilError):
    pass


def _interleave(n: int) -> np.ndarray:
    """Permutation Q with Q J Q^T block-diagonal, J = [[0, I], [-I, 0]]."""
    Q = np.zeros((2 * n, 2 * n))
    for i in range(n):
        Q[2 * i, i] = 1
        Q[2 * i + 1, n + i] = 1
    return Q


def _std_J(n: int) -> np.ndarray:
    I = np.eye(n)
    return np.block([[0 * I, I], [-I, 0 * I]])


@dataclass(frozen=True, eq=False)
class MetricPoint:
    r: int
    n: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.r not in (1, 2, 4):
            raise PencilError("r must be 1, 2 or 4")
        m = np.asarray(self.matrix)
        size = 2 * self.n if self.r == 4 else self.n
        if m.shape != (size, size):
            raise PencilError(f"expected a {size} x {size} matrix for r={self.r}, n={self.n}")
        tol = 1e-9 * max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        if self.r == 1 and (np.iscomplexobj(m) and np.max(np.abs(m.imag)) > tol or np.max(np.abs(m - m.T)) > tol):
            raise PencilError("r=1 metric must be real symmetric")
        if self.r == 2 and np.max(np.abs(m - m.conj().T)) > tol:
            raise PencilError("r=2 metric must be hermitian")
        if self.r == 4:
            if np.max(np.abs(m + m.T)) > tol:
                raise PencilError("r=4 metric must be an antisymmetric 2-form")
            chi = _chi_of(m, self.n)
            A, B = chi[:self.n, :self.n], chi[:self.n, self.n:]
            ok = (np.max(np.abs(chi - chi.conj().T)) <= tol
                  and np.max(np.abs(chi[self.n:, self.n:] - A.conj())) <= tol
                  and np.max(np.abs(chi[self.n:, :self.n] + B.conj())) <= tol)
            if not ok:
                raise PencilError("r=4 form fails the quaternionic reality condition")

    @classmethod
    def identity(cls, r: int, n: int) -> "MetricPoint":
        if r == 4:
            return cls.from_quaternionic(np.eye(n), np.zeros((n, n)))
        return cls(r, n, np.eye(n, dtype=complex if r == 2 else float))

    @classmethod
    def from_quaternionic(cls, A, B) -> "MetricPoint":
        """Form with complex matrix [[A, B], [-conj B, conj A]]; A hermitian, B antisymmetric."""
        A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
        n = len(A)
        chi = np.block([[A, B], [-B.conj(), A.conj()]])
        Q = _interleave(n)
        return cls(4, n, Q @ _std_J(n) @ chi @ Q.T)

    def hermitian(self) -> np.ndarray:
        """Hermitian (or symmetric) Gram matrix of the form."""
        if self.r == 4:
            return _chi_of(self.matrix, self.n)
        return np.asarray(self.matrix)

    def real_form(self) -> np.ndarray:
        """The underlying real symmetric bilinear form on R^{rn}."""
        H = self.hermitian()
        if self.r == 1:
            return np.asarray(H, dtype=float)
        return np.block([[H.real, -H.imag], [H.imag, H.real]])

    def real_det(self) -> float:
        return float(np.linalg.det(self.real_form()))

    def __sub__(self, other):
        return MetricPoint(self.r, self.n, np.asarray(self.matrix) - np.asarray(other.matrix))

    def scaled(self, t) -> "MetricPoint":
        return MetricPoint(self.r, self.n, t * np.asarray(self.matrix))


def _chi_of(omega, n):
    Q = _interleave(n)
    return -_std_J(n) @ Q.T @ np.asarray(omega) @ Q


@dataclass(frozen=True, eq=False)
class PencilPoint:
    h: MetricPoint
    hbar: MetricPoint

    def __post_init__(self):
        if (self.h.r, self.h.n) != (self.hbar.r, self.hbar.n):
            raise PencilError("h and hbar must have the same shape")

    @property
    def r(self) -> int:
        return self.h.r

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def A(self) -> np.ndarray:
        """The endomorphism with hbar = h(A., .), on the hermitian representation."""
        return np.linalg.solve(self.h.hermitian(), self.hbar.hermitian())

    def at(self, t) -> MetricPoint:
        return self.hbar - self.h.scaled(t)


# --------------------------------------------------------------------------


def real_root(x: float, k: int) -> float:
    """Real k-th root; negative radicands are only allowed for odd k."""
    if x >= 0:
        return x ** (1.0 / k)
    if k % 2:
        return -((-x) ** (1.0 / k))
    raise SignedRadicandError(f"negative radicand {x} under an even root of order {k}")


def endo_A(g: MetricPoint, gbar: MetricPoint) -> np.ndarray:
    """(det gbar / det g)^(1/r(n+1)) gbar^-1 g, with real determinants."""
    if (g.r, g.n) != (gbar.r, gbar.n):
        raise PencilError("g and gbar must have the same shape")
    d = g.real_det()
    if abs(d) <= 1e-300 or abs(pfaffian(g)) <= 1e-12 * max(1.0, np.max(np.abs(g.matrix))) ** g.n:
        raise PencilError("g is degenerate")
    c = real_root(gbar.real_det() / d, g.r * (g.n + 1))
    return c * np.linalg.solve(gbar.hermitian(), g.hermitian())


def pfaffian_matrix(M) -> complex:
    """Pfaffian of an antisymmetric matrix by pivoted elimination."""
    A = np.array(M, dtype=complex)
    m = len(A)
    if m % 2:
        return 0j
    pf = 1 + 0j
    for k in range(0, m - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp]] = A[[kp, k + 1]]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0:
            return 0j
        pf *= A[k, k + 1]
        if k + 2 < m:
            tau = A[k, k + 2:] / A[k, k + 1]
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


def pfaffian(h: MetricPoint) -> float:
    """(det h)^(1/r) as a polynomial invariant: det for r=1, 2 and the Pfaffian for r=4."""
    if h.r == 4:
        val = pfaffian_matrix(h.matrix)
    else:
        val = np.linalg.det(h.matrix) if h.n else 1.0
    return float(np.real(val))


def _minor(M, rows, cols):
    keep_r = [i for i in range(len(M)) if i not in rows]
    keep_c = [j for j in range(len(M)) if j not in cols]
    return M[np.ix_(keep_r, keep_c)]


def adjugate(h: MetricPoint) -> np.ndarray:
    """The adjugate h* with h* h = pf(h) id, built from minors so it is polynomial in h."""
    M = np.asarray(h.matrix)
    size = len(M)
    out = np.zeros((size, size), dtype=complex if np.iscomplexobj(M) or h.r == 4 else float)
    if h.r in (1, 2):
        if size == 1:
            return np.ones((1, 1), dtype=out.dtype)
        for i in range(size):
            for j in range(size):
                out[j, i] = (-1) ** (i + j) * np.linalg.det(_minor(M, [i], [j]))
        return out.real if h.r == 1 else out
    for i in range(size):
        for j in range(i + 1, size):
            v = (-1) ** (i + j + 1) * pfaffian_matrix(_minor(M, [i, j], [i, j]))
            out[j, i] = v
            out[i, j] = -v
    return out


def _fit_degree(ts, values, tol=1e-8) -> tuple[int, np.ndarray]:
    """Lowest degree polynomial reproducing the samples, with its coefficients (low to high)."""
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values)
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.max(np.abs(values)) <= tol * scale * 1e-4:
        return -1, np.zeros(1)
    for d in range(len(ts)):
        V = np.vander(ts, d + 1, increasing=True)
        coef, *_ = np.linalg.lstsq(V, values, rcond=None)
        if np.max(np.abs(V @ coef - values)) <= tol * scale:
            return d, coef
    raise PencilError("samples are not polynomial")


def default_samples(n: int) -> list[float]:
    return list(np.linspace(-1.0, 1.0, n + 4))


def pencil_polynomials(P: PencilPoint, t_samples=None):
    """Pfaffian coefficients and adjugate degree along h_t = hbar - t h."""
    ts = list(default_samples(P.n) if t_samples is None else t_samples)
    if len(set(ts)) < P.n + 1:
        raise PencilError("need at least n+1 distinct samples")
    pf_vals = [pfaffian(P.at(t)) for t in ts]
    pf_deg, pf_coef = _fit_degree(ts, pf_vals)
    adjs = np.array([adjugate(P.at(t)) for t in ts])
    scale = max(1.0, float(np.max(np.abs(adjs))))
    adj_deg = -1
    for idx in np.ndindex(adjs.shape[1:]):
        col = adjs[(slice(None),) + idx]
        if np.max(np.abs(col)) <= 1e-12 * scale:
            continue
        d, _ = _fit_degree(ts, col * (1.0 / scale))
        adj_deg = max(adj_deg, d)
    return pf_deg, pf_coef, adj_deg


def pencil_degrees(P: PencilPoint, t_samples=None) -> tuple[int, int]:
    pf_deg, _, adj_deg = pencil_polynomials(P, t_samples)
    return pf_deg, adj_deg


def _clusters(values, rel=1e-7):
    values = sorted(values, key=lambda z: (z.real, z.imag))
    groups = []
    for v in values:
        for g in groups:
            if abs(v - g[0]) <= rel * max(1.0, abs(g[0])):
                g.append(v)
                break
        else:
            groups.append([v])
    return groups


def eigenvalues(P: PencilPoint) -> np.ndarray:
    """Eigenvalues of A on the real representation."""
    h, hb = P.h.real_form(), P.hbar.real_form()
    try:
        L = np.linalg.cholesky(h)
    except np.linalg.LinAlgError:
        pass
    try:
        return np.linalg.eigvals(np.linalg.solve(h, hb))
    except np.linalg.LinAlgError:
        raise PencilError("h is degenerate") from None
    Li = np.linalg.inv(L)
    return np.linalg.eigvalsh(Li @ hb @ Li.T).astype(complex)


def multiplicity_check(P: PencilPoint, rel=1e-7) -> bool:
    """Every root multiplicity of the real characteristic polynomial of A is divisible by r."""
    if P.r == 1:
        return True
    return all(len(g) % P.r == 0 for g in _clusters(eigenvalues(P), rel))


# --------------------------------------------------------------------------
# generalized eigenspaces


def _is_rational(A) -> bool:
    return all(isinstance(x, (int, np.integer, Fraction)) or
               (isinstance(x, (float, np.floating)) and float(x).is_integer())
               for x in np.asarray(A, dtype=object).ravel())


def _krylov_polynomial(A, v, t):
    """Monic annihilating polynomial of v under A."""
    vecs = [v]
    while True:
        w = [sum(A[i][j] * vecs[-1][j] for j in range(len(v))) for i in range(len(v))]
        cols = vecs + [w]
        M = [[c[i] for c in cols] for i in range(len(v))]
        ns = nullspace(M)
        if ns:
            c = ns[0]
            lead = c[-1]
            return sympy.Poly([sympy.Rational(x.numerator, x.denominator) / sympy.Rational(lead.numerator, lead.denominator)
                               for x in reversed(c)], t, domain="QQ")
        vecs.append(w)


def minimal_polynomial(A) -> sympy.Poly:
    A = frac_matrix(np.asarray(A, dtype=object).tolist())
    t = sympy.Symbol("t")
    size = len(A)
    polys = [_krylov_polynomial(A, [Fraction(int(i == k)) for i in range(size)], t) for k in range(size)]
    return reduce(lambda p, q: p.lcm(q), polys).monic()


def _poly_at_matrix(p: sympy.Poly, A):
    size = len(A)
    out = np.zeros((size, size), dtype=object)
    out[:] = Fraction(0)
    eye = np.array([[Fraction(int(i == j)) for j in range(size)] for i in range(size)], dtype=object)
    for c in p.all_coeffs():
        out = out.dot(A) + eye * Fraction(int(c.p), int(c.q))
    return out


def gen_eigenprojection(A, xi):
    """Projection onto the generalized xi-eigenspace of A, as a polynomial in A.

    Rational input is handled exactly (entries returned as Fractions);
    otherwise the computation runs in floating point.
    """
    if _is_rational(A) and isinstance(xi, (int, np.integer, Fraction)):
        return _gen_eigenprojection_exact(A, Fraction(xi))
    return _gen_eigenprojection_float(np.asarray(A, dtype=complex), complex(xi))


def _gen_eigenprojection_exact(A, xi):
    Af = np.array(frac_matrix(np.asarray(A, dtype=object).tolist()), dtype=object)
    t = sympy.Symbol("t")
    m_A = minimal_polynomial(Af)
    lin = sympy.Poly(t - sympy.Rational(xi.numerator, xi.denominator), t, domain="QQ")
    m, q = 0, m_A
    while True:
        quo, rem = q.div(lin)
        if not rem.is_zero:
            break
        q, m = quo, m + 1
    if m == 0:
        raise PencilError(f"{xi} is not an eigenvalue")
    # a q + b (t - xi)^m = 1
    a, _, g = q.gcdex(lin ** m)
    if g.as_expr() != 1:
        raise PencilError("Euclid step failed")
    return _poly_at_matrix(a * q, Af)


def _gen_eigenprojection_float(A, xi, rel=1e-2):
    # defective eigenvalues split by about eps^(1/k) in floating point, so eigenvalues
    # within rel of the spectral radius are treated as one cluster
    size = len(A)
    eig = np.linalg.eigvals(A)
    tol = rel * max(1.0, float(np.max(np.abs(eig))))
    dist = np.abs(eig - xi)
    near = dist <= tol
    m = int(np.sum(near))
    if m == 0:
        raise PencilError(f"{xi} is not an eigenvalue")
    if m < size and np.min(dist[~near]) <= 2 * tol:
        raise PencilError(f"eigenvalues near {xi} are not separated")
    M = np.linalg.matrix_power(A - np.mean(eig[near]) * np.eye(size), m)
    # P = V (W^H V)^-1 W^H with V = ker M and W = ker M^H: identity on ker M, zero on im M
    V = np.linalg.svd(M)[2][size - m:].conj().T
    W = np.linalg.svd(M.conj().T)[2][size - m:].conj().T
    P = V @ np.linalg.solve(W.conj().T @ V, W.conj().T)
    return P.real if np.max(np.abs(P.imag)) < 1e-9 * max(1.0, np.max(np.abs(P))) else P


def jordan_block(k: int, xi) -> np.ndarray:
    J = np.zeros((k, k), dtype=object)
    J[:] = 0
    for i in range(k):
        J[i, i] = xi
        if i + 1 < k:
            J[i, i + 1] = 1
    return J


def jordan_block_inverse(k: int, xi) -> np.ndarray:
    """Upper-triangular Toeplitz inverse of J_k(xi)."""
    if xi == 0:
        raise PencilError("J_k(0) is singular")
    exact = isinstance(xi, (int, np.integer, Fraction))
    x = Fraction(xi) if exact else float(xi)
    out = np.zeros((k, k), dtype=object if exact else float)
    if exact:
        out[:] = Fraction(0)
    for i in range(k):
        for j in range(i, k):
            out[i, j] = (-1) ** (j - i) / x ** (j - i + 1)
    return out


# --------------------------------------------------------------------------
# interlacing


def _require_spd(M, name):
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        raise PencilError(f"{name} is not positive definite") from None


@dataclass(frozen=True)
class InterlacingResult:
    eigenvalues: tuple[float, ...]
    roots: tuple[float, ...]
    coefficients: tuple[float, ...]  # low to high degree
    agrees: bool
    interlaced: bool

    @property
    def ok(self) -> bool:
        return self.agrees and self.interlaced


def interlacing(P: PencilPoint, X, tol=1e-6) -> InterlacingResult:
    """Roots of t -> h_t*(X, X) against the eigenvalues of A, for a riemannian pencil."""
    if P.r != 1:
        raise PencilError("interlacing is implemented for r = 1")
    h = np.asarray(P.h.matrix, dtype=float)
    hb = np.asarray(P.hbar.matrix, dtype=float)
    _require_spd(h, "h")
    _require_spd(hb, "hbar")
    X = np.asarray(X, dtype=float)
    n = P.n
    L = np.linalg.cholesky(h)
    Li = np.linalg.inv(L)
    xi, W = np.linalg.eigh(Li @ hb @ Li.T)
    V = Li.T @ W  # V^T h V = I, V^T hbar V = diag(xi)
    det_h = np.linalg.det(h)
    g = (V.T @ X) ** 2 / det_h
    poly = np.poly1d([0.0])
    for i in range(n):
        term = np.poly1d([1.0])
        for j in range(n):
            if j != i:
                term = term * np.poly1d([-1.0, xi[j]])
        poly = poly + term * float(g[i])
    poly = poly * float(det_h ** 2)
    coef = poly.coeffs[::-1]
    coef = np.pad(coef, (0, max(0, n - len(coef))))
    ts = default_samples(n)
    vals = [X @ adjugate(P.at(t)) @ X for t in ts]
    V_ = np.vander(ts, n, increasing=True)
    fit, *_ = np.linalg.lstsq(V_, vals, rcond=None)
    scale = max(1.0, float(np.max(np.abs(vals))))
    agrees = (np.max(np.abs(V_ @ fit - vals)) <= 1e-8 * scale
              and np.max(np.abs(fit - coef[:n])) <= 1e-8 * max(1.0, float(np.max(np.abs(coef)))))
    roots = np.sort(np.roots(poly.coeffs).real) if n > 1 else np.array([])
    span = max(1.0, float(np.max(np.abs(xi))))
    interlaced = len(roots) == n - 1 and all(
        xi[i] - tol * span <= roots[i] <= xi[i + 1] + tol * span for i in range(n - 1))
    return InterlacingResult(tuple(xi), tuple(roots), tuple(coef), bool(agrees), bool(interlaced))


def interlacing_check(P: PencilPoint, X) -> bool:
    return interlacing(P, X).ok


# --------------------------------------------------------------------------


def metric_from_solution(h: MetricPoint) -> np.ndarray:
    """g = pf(h)^-1 h^-1, on the hermitian representation."""
    return np.linalg.inv(h.hermitian()) / pfaffian(h)


def solution_from_metric(g_herm, r: int, n: int) -> np.ndarray:
    """h = (det g)^(1/r(n+1)) g^-1 with the real determinant of g."""
    g_herm = np.asarray(g_herm)
    real = g_herm if r == 1 else np.block([[g_herm.real, -g_herm.imag], [g_herm.imag, g_herm.real]])
    return real_root(float(np.linalg.det(real)), r * (n + 1)) * np.linalg.inv(g_herm)


def random_metric(rng, r: int, n: int, definite: bool = False, scale: int = 3) -> MetricPoint:
    """Random nondegenerate metric point with small integer (Gaussian integer) entries."""
    while True:
        h = _random_metric(rng, r, n, definite, scale)
        if abs(pfaffian(h)) >= 0.5:
            return h


def _random_metric(rng, r, n, definite, scale):
    def ri(*shape):
        return rng.integers(-scale, scale + 1, shape).astype(float)

    def herm():
        if r == 1:
            S = ri(n, n)
            return S + S.T
        S = ri(n, n) + 1j * ri(n, n)
        return S + S.conj().T

    if r == 4:
        A = herm_c = (lambda S: S + S.conj().T)(ri(n, n) + 1j * ri(n, n))
        B = ri(n, n) + 1j * ri(n, n)
        B = B - B.T
        if definite:
            chi = np.block([[A, B], [-B.conj(), A.conj()]])
            shift = max(0.0, -float(np.min(np.linalg.eigvalsh(chi)))) + 1 + rng.integers(0, 3)
            A = herm_c + shift * np.eye(n)
        return MetricPoint.from_quaternionic(A, B)
    H = herm()
    if definite:
        shift = max(0.0, -float(np.min(np.linalg.eigvalsh(H)))) + 1 + rng.integers(0, 3)
        H = H + shift * np.eye(n)
    return MetricPoint(r, n, H)
