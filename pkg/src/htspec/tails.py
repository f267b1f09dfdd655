"""Heavy-tailed entry laws, sparsity masks, and random matrix sampling.

Entries are symmetric real random variables specified through the two-sided
tail ``P(|x| > t) = min(1, L(t) * t**-alpha)`` for ``t >= support_min``,
where ``L`` is a slowly varying factor.  Two families are supported:

* ``constant``:  ``L(t) = c``
* ``log_power``: ``L(t) = c * log(e + t)**beta``

Sampling is by inversion of the tail.  When ``standardize`` is set (legal
only for ``alpha > 2``) the variable is divided by the square root of its
second moment, so entries have mean zero and variance one; ``tail`` and
``quantile_abs`` then describe the rescaled variable.

Matrices combine i.i.d. entries with a sparsity mask.  Every row draws its
mask and its values from per-row streams derived with :func:`seeding.mix64`
from the ensemble seed, so a sampled matrix is a pure function of its
:class:`EnsembleSpec`: independent of traversal order, reproducible across
processes, and the nonzero pattern does not change when only the entry law
changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.sparse import coo_matrix

from .seeding import MASK64, mix64

SV_CONSTANT = "constant"
SV_LOG_POWER = "log_power"

RECTANGULAR = "rectangular"
HERMITIAN = "hermitian"

BERNOULLI = "bernoulli"
BAND = "band"
FIXED_COUNT = "fixed_count"

# Stream tags inside one matrix draw; mask and values never share a stream.
_TAG_MASK = 0
_TAG_VALUE = 1

# log_power tails with beta > ~3.146 * alpha are not monotone near the
# support edge; reject conservatively at 3 * alpha.
_LOG_POWER_BETA_CAP = 3.0


@dataclass(frozen=True)
class TailLaw:
    """Symmetric law with regularly varying two-sided tail of index ``alpha``."""

    alpha: float
    sv_kind: str = SV_CONSTANT
    sv_c: float = 1.0
    sv_beta: float = 0.0
    support_min: float = 1.0
    standardize: bool = False

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be finite and positive: {self.alpha!r}")
        if self.sv_kind not in (SV_CONSTANT, SV_LOG_POWER):
            raise ValueError(f"unknown slowly varying kind: {self.sv_kind!r}")
        if not (math.isfinite(self.sv_c) and self.sv_c > 0):
            raise ValueError(f"sv_c must be finite and positive: {self.sv_c!r}")
        if not math.isfinite(self.sv_beta):
            raise ValueError(f"sv_beta must be finite: {self.sv_beta!r}")
        if self.sv_kind == SV_CONSTANT and self.sv_beta != 0.0:
            raise ValueError("constant slowly varying factor takes sv_beta = 0")
        if self.sv_kind == SV_LOG_POWER and self.sv_beta > _LOG_POWER_BETA_CAP * self.alpha:
            raise ValueError(
                f"sv_beta = {self.sv_beta} too large for alpha = {self.alpha}: "
                "tail would not be nonincreasing"
            )
        if not (math.isfinite(self.support_min) and self.support_min > 0):
            raise ValueError(f"support_min must be finite and positive: {self.support_min!r}")
        if self.standardize and self.alpha <= 2:
            raise ValueError(
                f"standardization requires a finite second moment (alpha > 2), got alpha = {self.alpha}"
            )


def _sv_factor(law: TailLaw, t: np.ndarray) -> np.ndarray:
    if law.sv_kind == SV_CONSTANT:
        return np.broadcast_to(np.float64(law.sv_c), np.shape(t))
    return law.sv_c * np.log(np.e + t) ** law.sv_beta


def _tail_uncapped(law: TailLaw, t: np.ndarray) -> np.ndarray:
    """``L(t) * t**-alpha`` on the raw (unstandardized) scale, no cap at 1."""
    return _sv_factor(law, t) * t ** -law.alpha


@lru_cache(maxsize=None)
def _sigma(law: TailLaw) -> float:
    """Scale divisor applied to raw samples: sqrt(E[x^2]) when standardizing."""
    if not law.standardize:
        return 1.0
    return math.sqrt(variance_unstandardized(law))


def _as_float_array(x, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return np.atleast_1d(arr), scalar


def tail(law: TailLaw, t):
    """Two-sided tail ``P(|x| > t)`` of the law, on its sampling scale.

    For a standardized law this is the tail of the rescaled variable,
    ``G_raw(t * sigma)``.  Accepts scalars or arrays; ``t`` must be
    nonnegative, with ``tail(law, 0) = 1``.
    """
    arr, scalar = _as_float_array(t, "t")
    if np.any(arr < 0):
        raise ValueError("t must be nonnegative")
    raw = arr * _sigma(law)
    clipped = np.maximum(raw, law.support_min)
    g = np.minimum(1.0, _tail_uncapped(law, clipped))
    out = np.where(raw < law.support_min, 1.0, g)
    return float(out[0]) if scalar else out


def _quantile_raw(law: TailLaw, u: np.ndarray) -> np.ndarray:
    """Smallest ``t`` with ``L(t) t**-alpha <= u``, floored at ``support_min``.

    Guarantees ``tail(q) <= u`` exactly in floating point.
    """
    s = law.support_min
    if law.sv_kind == SV_CONSTANT:
        q = np.maximum(s, (law.sv_c / u) ** (1.0 / law.alpha))
    else:
        at_support = _tail_uncapped(law, np.float64(s))
        q = np.full_like(u, s)
        active = u < at_support
        if np.any(active):
            ua = u[active]
            lo = np.full_like(ua, s)
            # For beta <= 0 the constant-L quantile already dominates; for
            # beta > 0 double until the uncapped tail drops below u.
            hi = np.maximum(2.0 * s, (law.sv_c / ua) ** (1.0 / law.alpha))
            for _ in range(200):
                bad = _tail_uncapped(law, hi) > ua
                if not np.any(bad):
                    break
                hi = np.where(bad, 2.0 * hi, hi)
            for _ in range(70):
                mid = 0.5 * (lo + hi)
                above = _tail_uncapped(law, mid) > ua
                lo = np.where(above, mid, lo)
                hi = np.where(above, hi, mid)
            q[active] = hi
    # Nudge up by ulps if rounding left the tail a hair above u.
    beyond = q > s
    for _ in range(4):
        bad = beyond & (_tail_uncapped(law, q) > u)
        if not np.any(bad):
            break
        q = np.where(bad, np.nextafter(q, np.inf), q)
    return q


def quantile_abs(law: TailLaw, u):
    """Smallest ``t`` with ``tail(law, t) <= u``, for ``u`` in (0, 1].

    Inverse of :func:`tail` on the law's sampling scale: standardized laws
    return the quantile of the rescaled variable.  ``quantile_abs(law, 1.0)``
    is the lower endpoint of the support of ``|x|``.
    """
    arr, scalar = _as_float_array(u, "u")
    if np.any((arr <= 0) | (arr > 1)):
        raise ValueError("u must lie in (0, 1]")
    q = _quantile_raw(law, arr) / _sigma(law)
    return float(q[0]) if scalar else q


def variance_unstandardized(law: TailLaw) -> float:
    """Second moment ``E[x^2]`` of the raw (unstandardized) symmetric law.

    Requires ``alpha > 2``.  The constant family has the closed form
    ``t0^2 + 2 c t0^(2-alpha) / (alpha - 2)`` with ``t0`` the point where the
    uncapped tail reaches 1; the log-power family is integrated numerically.
    """
    if law.alpha <= 2:
        raise ValueError(f"E[x^2] is infinite for alpha <= 2 (alpha = {law.alpha})")
    t0 = float(_quantile_raw(law, np.atleast_1d(np.float64(1.0)))[0])
    if law.sv_kind == SV_CONSTANT:
        return t0 * t0 + 2.0 * law.sv_c * t0 ** (2.0 - law.alpha) / (law.alpha - 2.0)
    integral, _ = integrate.quad(
        lambda t: 2.0 * t * float(_tail_uncapped(law, np.float64(t))),
        t0,
        np.inf,
        epsabs=0.0,
        epsrel=1e-11,
        limit=200,
    )
    return t0 * t0 + integral


def sample_entries(law: TailLaw, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` i.i.d. entries: sign * quantile_abs(U), U uniform on (0, 1].

    Stream layout per call: ``size`` magnitude uniforms, then ``size`` sign
    uniforms.
    """
    u = 1.0 - rng.random(size)
    mags = _quantile_raw(law, u) / _sigma(law)
    signs = np.where(rng.random(size) < 0.5, 1.0, -1.0)
    return signs * mags


def sample_entry(law: TailLaw, rng: np.random.Generator) -> float:
    """Draw one entry of the law."""
    return float(sample_entries(law, rng, 1)[0])


@dataclass(frozen=True)
class SparsitySpec:
    """Nonzero-pattern generator for one matrix row.

    ``bernoulli`` keeps each position independently with probability
    ``n**(mu - 1)``; ``band`` keeps ``|i - j| <= halfwidth`` deterministically;
    ``fixed_count`` keeps a uniformly random set of ``count`` positions.  The
    exponent ``mu`` also enters the extreme-value normalizations, so it is
    carried for every kind.
    """

    kind: str = BERNOULLI
    mu: float = 1.0
    halfwidth: int | None = None
    count: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (BERNOULLI, BAND, FIXED_COUNT):
            raise ValueError(f"unknown sparsity kind: {self.kind!r}")
        if not (math.isfinite(self.mu) and 0.0 <= self.mu <= 1.0):
            raise ValueError(f"mu must lie in [0, 1]: {self.mu!r}")
        if self.kind == BAND:
            if self.halfwidth is None or self.halfwidth < 0:
                raise ValueError("band sparsity needs halfwidth >= 0")
        elif self.halfwidth is not None:
            raise ValueError("halfwidth only applies to band sparsity")
        if self.kind == FIXED_COUNT:
            if self.count is None or self.count < 1:
                raise ValueError("fixed_count sparsity needs count >= 1")
        elif self.count is not None:
            raise ValueError("count only applies to fixed_count sparsity")

    @classmethod
    def bernoulli(cls, mu: float) -> "SparsitySpec":
        return cls(kind=BERNOULLI, mu=mu)

    @classmethod
    def band(cls, halfwidth: int, mu: float = 1.0) -> "SparsitySpec":
        return cls(kind=BAND, mu=mu, halfwidth=halfwidth)

    @classmethod
    def fixed_count(cls, count: int, mu: float = 1.0) -> "SparsitySpec":
        return cls(kind=FIXED_COUNT, mu=mu, count=count)


@dataclass(frozen=True)
class EnsembleSpec:
    """Complete description of one random matrix draw.

    ``rectangular`` gives a ``p x n`` matrix with ``p = round(rho * n)``;
    ``hermitian`` gives an ``n x n`` symmetric matrix whose upper triangle
    (diagonal included) is i.i.d. and mirrored below.
    """

    shape: str
    n: int
    law: TailLaw
    sparsity: SparsitySpec
    seed: int
    rho: float = 1.0

    def __post_init__(self) -> None:
        if self.shape not in (RECTANGULAR, HERMITIAN):
            raise ValueError(f"unknown shape: {self.shape!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer: {self.n!r}")
        if not (math.isfinite(self.rho) and 0.0 < self.rho <= 1.0):
            raise ValueError(f"rho must lie in (0, 1]: {self.rho!r}")
        if self.shape == HERMITIAN and self.rho != 1.0:
            raise ValueError("hermitian matrices are square; rho must be 1")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ValueError(f"seed must be an integer in [0, 2**64): {self.seed!r}")
        if self.p < 1:
            raise ValueError(f"rho * n rounds to zero rows (rho={self.rho}, n={self.n})")

    @property
    def p(self) -> int:
        if self.shape == HERMITIAN:
            return self.n
        return int(math.floor(self.rho * self.n + 0.5))


def _mask_columns(sparsity: SparsitySpec, i: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if sparsity.kind == BERNOULLI:
        prob = float(n) ** (sparsity.mu - 1.0)
        return np.nonzero(rng.random(n) < prob)[0]
    if sparsity.kind == BAND:
        w = sparsity.halfwidth
        return np.arange(max(0, i - w), min(n, i + w + 1))
    if sparsity.count > n:
        raise ValueError(f"fixed_count count = {sparsity.count} exceeds n = {n}")
    cols = rng.choice(n, size=sparsity.count, replace=False)
    cols.sort()
    return cols


def sample_matrix(spec: EnsembleSpec):
    """Sample the sparse matrix described by ``spec``.

    Row ``i`` derives a mask stream and a value stream from the ensemble seed via
    ``mix64``; the value stream always emits ``n`` magnitude uniforms then
    ``n`` sign uniforms, and only the masked positions are kept.  The entry at
    ``(i, j)`` therefore depends only on ``(seed, i, j)``, and the mask only on
    ``(seed, sparsity, i, j)``.
    """
    # Imported here: matrices.py needs no sampling machinery.
    from .matrices import SparseMatrix

    law, sparsity = spec.law, spec.sparsity
    n, p = spec.n, spec.p
    hermitian = spec.shape == HERMITIAN
    mask_root = mix64(spec.seed, _TAG_MASK)
    value_root = mix64(spec.seed, _TAG_VALUE)

    row_idx: list[np.ndarray] = []
    col_idx: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    for i in range(p):
        mask_rng = np.random.Generator(np.random.PCG64(mix64(mask_root, i)))
        cols = _mask_columns(sparsity, i, n, mask_rng)
        if hermitian:
            cols = cols[cols >= i]
        value_rng = np.random.Generator(np.random.PCG64(mix64(value_root, i)))
        u_mag = value_rng.random(n)
        u_sign = value_rng.random(n)
        if cols.size == 0:
            continue
        mags = _quantile_raw(law, 1.0 - u_mag[cols]) / _sigma(law)
        signs = np.where(u_sign[cols] < 0.5, 1.0, -1.0)
        row_idx.append(np.full(cols.size, i, dtype=np.int64))
        col_idx.append(cols.astype(np.int64))
        vals.append(signs * mags)

    if row_idx:
        rows = np.concatenate(row_idx)
        cols = np.concatenate(col_idx)
        data = np.concatenate(vals)
    else:
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
        data = np.empty(0, dtype=np.float64)

    if hermitian:
        off = rows != cols
        mirror_rows = cols[off]
        mirror_cols = rows[off]
        rows = np.concatenate([rows, mirror_rows])
        cols = np.concatenate([cols, mirror_cols])
        data = np.concatenate([data, data[off]])

    csr = coo_matrix((data, (rows, cols)), shape=(p, n)).tocsr()
    csr.sort_indices()
    return SparseMatrix.from_scipy(csr, symmetric=hermitian)
