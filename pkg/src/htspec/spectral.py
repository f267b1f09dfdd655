"""Eigensolvers and exact spectral checkers.

Two independent routes compute extreme eigenvalues: a dense symmetric solver
used as the oracle at small dimension, and a Lanczos iteration with full
reorthogonalization that only touches the matrix through products, so the
Gram matrix ``M M^T`` is never formed.  The two must agree to tight
tolerance; that cross-check is part of the test suite, so neither route may
be silently rewired into the other.

The checkers encode identities that hold exactly (up to floating point
rounding) for every sample: Cauchy interlacing for principal minors and for
row/column deletions of rectangular matrices, the residual-ball enclosure
``dist(spec(A), <v, A v>) <= |(A - <v, A v>) v|`` for any unit ``v`` with the
companion eigenvector bound, and the principal-submatrix bound on eigenvalues
with localized eigenvectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .localization import is_localized
from .matrices import SparseMatrix, gram_matvec, matvec, top_entries

DENSE_DIM_LIMIT = 2048

SOLVER_DENSE = "dense"
SOLVER_LANCZOS = "lanczos"

INTERLACE_HERMITIAN_MINOR = "hermitian_minor"
INTERLACE_ROW_DELETION = "row_deletion"
INTERLACE_COL_DELETION = "col_deletion"

SUBRADIUS_EXACT = "exact"
SUBRADIUS_RANDOM = "random_sample"

_SUBRADIUS_ENUM_CAP = 10 ** 6


@dataclass
class SpectralResult:
    """Eigenvalues in descending order with orthonormal eigenvectors.

    Vector signs are fixed so each column's largest-magnitude coordinate is
    positive.  ``residual_norms[l] = |A v_l - lambda_l v_l|``.  ``converged``
    is False when the iteration hit its cap before meeting the tolerance; the
    partial quantities are still reported.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    solver: str
    residual_norms: np.ndarray
    iterations: int = 0
    restarts: int = 0
    converged: bool = True

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "residuals": [float(x) for x in self.residual_norms],
            "solver": self.solver,
            "iterations": int(self.iterations),
        }


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    for col in range(vectors.shape[1]):
        idx = int(np.argmax(np.abs(vectors[:, col])))
        if vectors[idx, col] < 0:
            vectors[:, col] = -vectors[:, col]
    return vectors


def eig_dense_symmetric(a: np.ndarray, dense_limit: int = DENSE_DIM_LIMIT) -> SpectralResult:
    """Full spectrum of a symmetric matrix, descending, via the dense
    tridiagonalization + implicit-shift path (LAPACK).  Oracle route."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dim = a.shape[0]
    if dim > dense_limit:
        raise ValueError(f"dimension {dim} exceeds dense limit {dense_limit}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > 1e-12 * scale:
        raise ValueError(f"matrix is not symmetric within tolerance (max asymmetry {asym})")
    try:
        w, vecs = np.linalg.eigh(0.5 * (a + a.T))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"dense eigensolver failed to converge: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    vecs = _fix_signs(vecs[:, order])
    residuals = np.linalg.norm(a @ vecs - vecs * w, axis=0)
    return SpectralResult(
        eigenvalues=w,
        eigenvectors=vecs,
        solver=SOLVER_DENSE,
        residual_norms=residuals,
        iterations=dim,
        converged=True,
    )


def _operator(m: SparseMatrix):
    """Matrix product closure and its dimension: plain product for symmetric
    input, Gram product ``M M^T v`` for rectangular input."""
    if m.symmetric:
        return (lambda v: matvec(m, v)), m.rows
    return (lambda v: gram_matvec(m, v)), m.rows


def top_eigs(
    m: SparseMatrix,
    k: int,
    tol: float = 1e-10,
    seed: int = 0,
    max_iter: int | None = None,
) -> SpectralResult:
    """Top ``k`` eigenvalues (largest, descending) by Lanczos with full
    reorthogonalization.

    Symmetric matrices are iterated directly; rectangular ones through the
    Gram product, so the result is the top of ``M M^T``.  The start vector is
    drawn from ``PCG64(seed)``, making the run deterministic.  Convergence
    requires every reported pair to satisfy
    ``|A v - lambda v| <= tol * max(1, |lambda|)``; if the iteration cap
    (default ``10 k + 400``, never beyond the dimension) is reached first, the
    best estimates are returned with ``converged = False``.  Exhausting the
    Krylov space triggers a restart with a fresh orthogonalized direction.
    """
    apply_op, dim = _operator(m)
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer: {k!r}")
    if k > min(dim, 50):
        raise ValueError(f"k = {k} exceeds min(dim, 50) = {min(dim, 50)}")
    if not (math.isfinite(tol) and tol >= 1e-12):
        raise ValueError(f"tol must be >= 1e-12: {tol!r}")
    cap = max_iter if max_iter is not None else 10 * k + 400
    cap = min(max(cap, k + 2), dim)

    rng = np.random.Generator(np.random.PCG64(seed))
    basis = np.empty((dim, min(cap, 64)), dtype=np.float64)

    def ensure_capacity(j: int) -> None:
        nonlocal basis
        if j >= basis.shape[1]:
            grown = np.empty((dim, min(cap, basis.shape[1] * 2)), dtype=np.float64)
            grown[:, : basis.shape[1]] = basis
            basis = grown

    q = rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    basis[:, 0] = q
    alphas: list[float] = []
    betas: list[float] = []
    restarts = 0
    converged = False
    j = 0
    while j < cap:
        w = apply_op(basis[:, j])
        alpha = float(basis[:, j] @ w)
        alphas.append(alpha)
        w = w - alpha * basis[:, j]
        if j > 0 and betas[j - 1] != 0.0:
            w = w - betas[j - 1] * basis[:, j - 1]
        # Full reorthogonalization; a second pass removes the residue the
        # first leaves when w is nearly inside the span.
        for _ in range(2):
            w = w - basis[:, : j + 1] @ (basis[:, : j + 1].T @ w)
        beta = float(np.linalg.norm(w))

        if j + 1 >= k:
            theta, y = eigh_tridiagonal(np.array(alphas), np.array(betas[:j]))
            top = np.argsort(-theta, kind="stable")[:k]
            bounds = beta * np.abs(y[-1, top])
            if np.all(bounds <= tol * np.maximum(1.0, np.abs(theta[top]))):
                converged = True
                j += 1
                break

        if j + 1 == cap:
            j += 1
            break

        if beta <= 1e-13 * max(1.0, max(abs(a) for a in alphas)):
            # Krylov space exhausted: restart in the orthogonal complement.
            fresh = rng.standard_normal(dim)
            for _ in range(2):
                fresh = fresh - basis[:, : j + 1] @ (basis[:, : j + 1].T @ fresh)
            fnorm = float(np.linalg.norm(fresh))
            if fnorm <= 1e-13:
                j += 1
                break
            betas.append(0.0)
            restarts += 1
            ensure_capacity(j + 1)
            basis[:, j + 1] = fresh / fnorm
        else:
            betas.append(beta)
            ensure_capacity(j + 1)
            basis[:, j + 1] = w / beta
        j += 1

    steps = len(alphas)
    theta, y = eigh_tridiagonal(np.array(alphas), np.array(betas[: steps - 1]))
    top = np.argsort(-theta, kind="stable")[: min(k, steps)]
    values = theta[top]
    vectors = basis[:, :steps] @ y[:, top]
    vectors /= np.linalg.norm(vectors, axis=0)
    vectors = _fix_signs(vectors)
    residuals = np.empty(values.size)
    for col in range(values.size):
        residuals[col] = np.linalg.norm(apply_op(vectors[:, col]) - values[col] * vectors[:, col])
    converged = bool(converged or steps == dim)
    converged = bool(converged and np.all(residuals <= tol * np.maximum(1.0, np.abs(values))))
    return SpectralResult(
        eigenvalues=values,
        eigenvectors=vectors,
        solver=SOLVER_LANCZOS,
        residual_norms=residuals,
        iterations=steps,
        restarts=restarts,
        converged=converged,
    )


def _singular_values(obj) -> np.ndarray:
    if isinstance(obj, SparseMatrix):
        obj = obj.to_dense()
    arr = np.asarray(obj, dtype=np.float64)
    if arr.ndim == 1:
        return np.sort(arr)[::-1]
    return np.linalg.svd(arr, compute_uv=False)


def _hermitian_values(obj) -> np.ndarray:
    if isinstance(obj, SpectralResult):
        return np.asarray(obj.eigenvalues, dtype=np.float64)
    if isinstance(obj, SparseMatrix):
        obj = obj.to_dense()
    arr = np.asarray(obj, dtype=np.float64)
    if arr.ndim == 1:
        return np.sort(arr)[::-1]
    return np.sort(np.linalg.eigvalsh(0.5 * (arr + arr.T)))[::-1]


def check_interlacing(parent, minor, mode: str) -> dict:
    """Verify a Cauchy interlacing chain; returns ``{"holds", "max_violation"}``.

    ``hermitian_minor``: eigenvalues of a symmetric matrix and a principal
    minor one smaller interlace.  ``row_deletion`` / ``col_deletion``: singular
    values of a ``p x n`` matrix and of the matrix with one row (column)
    removed satisfy ``s_i(A) >= s_i(A') >= s_{i+1}(A)``.  Inputs may be
    matrices (dense or sparse) or precomputed value arrays; ``hermitian_minor``
    also accepts :class:`SpectralResult`.  Tolerance is ``1e-9`` relative to
    the largest parent value.
    """
    if mode == INTERLACE_HERMITIAN_MINOR:
        big = _hermitian_values(parent)
        small = _hermitian_values(minor)
    elif mode in (INTERLACE_ROW_DELETION, INTERLACE_COL_DELETION):
        big = _singular_values(parent)
        small = _singular_values(minor)
    else:
        raise ValueError(f"unknown interlacing mode: {mode!r}")
    if small.size != big.size - 1 and mode == INTERLACE_HERMITIAN_MINOR:
        raise ValueError(
            f"minor must be one dimension smaller: {big.size} vs {small.size}"
        )
    if mode != INTERLACE_HERMITIAN_MINOR and small.size < big.size - 1:
        raise ValueError(
            f"deletion minor has too few singular values: {big.size} vs {small.size}"
        )
    scale = max(1.0, float(np.max(np.abs(big))) if big.size else 0.0)
    violation = 0.0
    for i in range(big.size - 1):
        violation = max(violation, float(small[i] - big[i]))
        violation = max(violation, float(big[i + 1] - small[i]))
    return {"holds": bool(violation <= 1e-9 * scale), "max_violation": violation}


@dataclass(frozen=True)
class PerturbationCheck:
    """Residual-ball enclosure for an approximate eigenpair.

    ``zeta`` is the Rayleigh quotient of the probe vector, ``epsilon`` its
    residual norm; some true eigenvalue lies within ``epsilon`` of ``zeta``
    (``holds_a``).  When exactly one eigenvalue sits in that ball and the rest
    are at distance ``d > epsilon``, ``vector_bound`` reports the companion
    estimate ``|v_eps - P_v v_eps| <= 2 epsilon / (d - epsilon)``.
    """

    zeta: float
    epsilon: float
    nearest_eig_distance: float
    holds_a: bool
    vector_bound: dict | None = None


def _apply_matrix(a, v: np.ndarray) -> np.ndarray:
    if isinstance(a, SparseMatrix):
        if a.symmetric:
            return matvec(a, v)
        return gram_matvec(a, v)
    return np.asarray(a, dtype=np.float64) @ v


def perturbation_check(a, v: np.ndarray, spectrum: SpectralResult) -> PerturbationCheck:
    """Evaluate the enclosure above for unit ``v`` against a complete spectrum.

    ``a`` may be dense symmetric, a symmetric :class:`SparseMatrix`, or a
    rectangular one (then the operator is its Gram matrix).  The spectrum must
    be complete; the eigenvector part is skipped when the spectrum carries no
    vectors.
    """
    v = np.asarray(v, dtype=np.float64)
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"probe vector must be unit norm: |v| = {nrm}")
    av = _apply_matrix(a, v)
    if av.shape != v.shape:
        raise ValueError("probe vector length does not match the operator")
    dim = v.size
    values = np.asarray(spectrum.eigenvalues, dtype=np.float64)
    if values.size != dim:
        raise ValueError(
            f"spectrum is incomplete: {values.size} eigenvalues for dimension {dim}"
        )
    zeta = float(v @ av)
    eps = float(np.linalg.norm(av - zeta * v))
    dist = np.abs(values - zeta)
    nearest = float(dist.min())
    holds_a = nearest <= eps + 1e-9

    vector_bound = None
    vectors = spectrum.eigenvectors
    if vectors is not None and vectors.shape == (dim, dim):
        in_ball = np.nonzero(dist <= eps)[0]
        if in_ball.size == 1:
            others = np.delete(dist, in_ball[0])
            if others.size:
                d = float(others.min())
                if d > eps:
                    v_eps = vectors[:, in_ball[0]]
                    lhs = float(np.linalg.norm(v_eps - (v @ v_eps) * v))
                    rhs = 2.0 * eps / (d - eps)
                    vector_bound = {
                        "lhs": lhs,
                        "rhs": rhs,
                        "gap": d,
                        "holds": bool(lhs <= rhs + 1e-9),
                    }
    return PerturbationCheck(
        zeta=zeta,
        epsilon=eps,
        nearest_eig_distance=nearest,
        holds_a=holds_a,
        vector_bound=vector_bound,
    )


def residual_vector(m: SparseMatrix, l: int = 1) -> tuple[np.ndarray, float]:
    """Gram-matrix residual at the row of the ``l``-th largest entry.

    With ``(i, j)`` the position of the ``l``-th entry, returns
    ``r = M M^T e_i - |m_ij|^2 e_i`` and its norm.  The ``i``-th coordinate of
    ``r`` equals the sum of squares of the other entries in row ``i``.
    """
    entries, truncated = top_entries(m, l)
    if truncated:
        raise ValueError(f"matrix stores fewer than {l} entries")
    ent = entries[l - 1]
    e = np.zeros(m.rows)
    e[ent.i] = 1.0
    r = gram_matvec(m, e)
    r[ent.i] -= ent.magnitude ** 2
    return r, float(np.linalg.norm(r))


def principal_subradius(
    a: np.ndarray,
    L: int,
    mode: str = SUBRADIUS_EXACT,
    trials: int = 1000,
    seed: int = 0,
) -> float:
    """Largest spectral radius over principal ``L x L`` submatrices.

    ``exact`` enumerates all supports (refused beyond 1e6 of them);
    ``random_sample`` draws ``trials`` supports and gives a lower bound.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dim = a.shape[0]
    if not 1 <= L <= dim:
        raise ValueError(f"L must lie in [1, {dim}]: {L}")
    if mode == SUBRADIUS_EXACT:
        if math.comb(dim, L) > _SUBRADIUS_ENUM_CAP:
            raise ValueError(
                f"C({dim}, {L}) = {math.comb(dim, L)} supports exceed the enumeration cap"
            )
        supports = itertools.combinations(range(dim), L)
    elif mode == SUBRADIUS_RANDOM:
        rng = np.random.Generator(np.random.PCG64(seed))
        supports = (
            np.sort(rng.choice(dim, size=L, replace=False)) for _ in range(trials)
        )
    else:
        raise ValueError(f"unknown subradius mode: {mode!r}")

    best = 0.0
    batch: list[np.ndarray] = []
    for sup in supports:
        idx = np.fromiter(sup, dtype=np.int64, count=L)
        batch.append(a[np.ix_(idx, idx)])
        if len(batch) == 512:
            best = max(best, float(np.max(np.abs(np.linalg.eigvalsh(np.array(batch))))))
            batch = []
    if batch:
        best = max(best, float(np.max(np.abs(np.linalg.eigvalsh(np.array(batch))))))
    return best


def localization_bound_check(
    a: np.ndarray, lam: float, v: np.ndarray, L: int, eta: float
) -> dict:
    """Check ``|lam| <= (rho_L(A) + sqrt(eta) |A|) / sqrt(1 - eta)`` for an
    eigenpair with ``(L, eta)``-localized eigenvector.

    Precondition failures (not localized, not an eigenpair) are reported in
    the result, not raised, so sweeps can tally them.
    """
    a = np.asarray(a, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    pre: dict[str, bool] = {}
    pre["unit"] = abs(float(np.linalg.norm(v)) - 1.0) <= 1e-10
    pre["localized"] = bool(is_localized(v, L, eta)) if pre["unit"] else False
    res = float(np.linalg.norm(a @ v - lam * v))
    pre["eigenpair"] = res <= 1e-8 * max(1.0, abs(lam))
    op_norm = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (a + a.T)))))
    rho_l = principal_subradius(a, L, mode=SUBRADIUS_EXACT)
    if eta >= 1.0:
        rhs = math.inf
    else:
        rhs = (rho_l + math.sqrt(eta) * op_norm) / math.sqrt(1.0 - eta)
    lhs = abs(lam)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "rho_L": rho_l,
        "op_norm": op_norm,
        "holds": bool(lhs <= rhs * (1.0 + 1e-12) + 1e-12),
        "preconditions": pre,
        "preconditions_ok": all(pre.values()),
    }
