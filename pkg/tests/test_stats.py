import math

import numpy as np
import pytest

from htspec import stats
from htspec.limits import COVARIANCE, HERMITIAN_KIND, c_np, mp_cdf
from htspec.matrices import SparseMatrix
from htspec.stats import (
    Ecdf,
    concentration_check,
    esd,
    ks_statistic,
    large_entry_collision_scan,
    poisson_count_test,
)
from htspec.tails import EnsembleSpec, SparsitySpec, TailLaw, sample_matrix


# ---------------------------------------------------------------------------
# empirical CDF and KS distance


def test_ecdf_right_continuous_step():
    f = Ecdf.from_samples([0.5])
    assert f(0.4) == 0.0
    assert f(0.5) == 1.0
    assert f(0.6) == 1.0
    np.testing.assert_array_equal(f(np.array([0.0, 0.5, 1.0])), [0.0, 1.0, 1.0])


def test_ecdf_ties_and_ordering():
    f = Ecdf.from_samples([2.0, 1.0, 2.0, 3.0])
    assert f(1.0) == 0.25
    assert f(2.0) == 0.75
    assert f(2.5) == 0.75
    assert f(3.0) == 1.0


def test_ecdf_validation():
    with pytest.raises(ValueError):
        Ecdf.from_samples([])
    with pytest.raises(ValueError):
        Ecdf.from_samples([1.0, np.nan])
    with pytest.raises(ValueError):
        Ecdf.from_samples([[1.0, 2.0]])


def test_ks_single_point_against_uniform():
    # one sample at the median of U(0,1): D = max(|1 - 1/2|, |0 - 1/2|) = 1/2
    assert ks_statistic([0.5], lambda x: x) == pytest.approx(0.5)


def test_ks_two_points_against_uniform():
    # quartile samples: both step mismatches equal 1/4
    assert ks_statistic([0.25, 0.75], lambda x: x) == pytest.approx(0.25)


def test_ks_of_sample_against_own_ecdf():
    rng = np.random.Generator(np.random.PCG64(3))
    samples = rng.standard_normal(40)
    f = Ecdf.from_samples(samples)
    # the only mismatch is the left limit at each jump, 1/n
    assert ks_statistic(samples, f) == pytest.approx(1.0 / 40.0)


def test_ks_null_distribution_monte_carlo():
    # sqrt(n) * D for uniform samples: about 5% of trials exceed 1.358
    rng = np.random.Generator(np.random.PCG64(99))
    n, trials = 500, 200
    scaled = np.array(
        [math.sqrt(n) * ks_statistic(rng.random(n), lambda x: x) for _ in range(trials)]
    )
    frac = float(np.mean(scaled > 1.358))
    assert 0.005 <= frac <= 0.12
    # the module critical value is deliberately conservative
    assert float(np.mean(scaled > stats.KS_CRIT_95)) <= frac


def test_ks_validation():
    with pytest.raises(ValueError):
        ks_statistic([], lambda x: x)
    with pytest.raises(ValueError):
        ks_statistic([1.0, np.inf], lambda x: x)
    with pytest.raises(ValueError):
        ks_statistic([1.0, 2.0], lambda x: 0.5)


# ---------------------------------------------------------------------------
# Poisson count test


def test_poisson_count_test_hand_example():
    # alpha = 2 covariance: expected exceedances of x are x^(-1)
    pts = [[2.0, 0.7, 0.3], [1.5], [0.9, 0.8]]
    out = poisson_count_test(pts, (0.5, 1.0), 2.0, COVARIANCE)
    assert [rec["threshold"] for rec in out] == [0.5, 1.0]

    first = out[0]
    assert first["expected"] == pytest.approx(2.0)
    assert first["observed_mean"] == pytest.approx(5.0 / 3.0)
    assert first["observed_var"] == pytest.approx(1.0 / 3.0)
    assert first["z_score"] == pytest.approx((5.0 / 3.0 - 2.0) / math.sqrt(2.0 / 3.0))

    second = out[1]
    assert second["expected"] == pytest.approx(1.0)
    assert second["observed_mean"] == pytest.approx(2.0 / 3.0)
    assert second["z_score"] == pytest.approx(-1.0 / 3.0 / math.sqrt(1.0 / 3.0))


def test_poisson_count_test_hermitian_exponent():
    out = poisson_count_test([[3.0]], (2.0,), 1.0, HERMITIAN_KIND)
    assert out[0]["expected"] == pytest.approx(0.5)  # x^(-alpha) = 1/2
    assert out[0]["observed_mean"] == 1.0


def test_poisson_count_test_strict_exceedance():
    # points exactly at the threshold do not count
    out = poisson_count_test([[1.0, 1.0]], (1.0,), 2.0, COVARIANCE)
    assert out[0]["observed_mean"] == 0.0


def test_poisson_count_test_empty_replicate_allowed():
    out = poisson_count_test([[], [2.0]], (1.0,), 2.0, COVARIANCE)
    assert out[0]["observed_mean"] == pytest.approx(0.5)


def test_poisson_count_test_validation():
    with pytest.raises(ValueError):
        poisson_count_test([], (1.0,), 2.0, COVARIANCE)
    with pytest.raises(ValueError):
        poisson_count_test([[1.0]], (), 2.0, COVARIANCE)


# ---------------------------------------------------------------------------
# empirical spectral distribution


def test_esd_counts_preserved_and_clipped():
    # rho = 1: support [0, 4], bins cover [0, 6]; the value 100 is clipped in
    h = esd([1.0, 2.0, 3.0, 100.0], 1.0, 12, 1.0)
    assert h.counts.sum() == 4
    assert h.bin_edges[0] == 0.0
    assert h.bin_edges[-1] == pytest.approx(6.0)
    assert h.counts[-1] == 1  # the clipped outlier
    np.testing.assert_allclose(h.values, [1.0, 2.0, 3.0, 100.0])


def test_esd_scale_division():
    h = esd([10.0, 20.0], 10.0, 4, 1.0)
    np.testing.assert_allclose(h.values, [1.0, 2.0])


def test_esd_matches_marchenko_pastur_for_gaussian():
    # pooled eigenvalues of five 300 x 300 Wishart matrices against the
    # square-case law; fixed seed makes the distance deterministic
    rng = np.random.Generator(np.random.PCG64(42))
    n = 300
    pooled = np.concatenate(
        [np.linalg.eigvalsh(x @ x.T) for x in rng.standard_normal((5, n, n))]
    )
    h = esd(pooled, float(n), 64, 1.0)
    assert h.counts.sum() == 5 * n
    assert h.ks_mp <= 0.02


def test_esd_ks_consistency_with_direct_call():
    vals = np.array([0.5, 1.5, 2.5, 3.5])
    h = esd(vals, 1.0, 8, 1.0)
    assert h.ks_mp == pytest.approx(ks_statistic(vals, lambda x: mp_cdf(x, 1.0)))


def test_esd_to_csv(tmp_path):
    h = esd([1.0, 2.0], 1.0, 4, 1.0)
    path = tmp_path / "esd.csv"
    h.to_csv(path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "bin_lo,bin_hi,count"
    assert len(lines) == 5
    total = sum(int(line.split(",")[2]) for line in lines[1:])
    assert total == 2
    lo, hi, _ = lines[1].split(",")
    assert float(lo) == 0.0 and float(hi) == pytest.approx(1.5)


def test_esd_validation():
    with pytest.raises(ValueError):
        esd([1.0], 0.0, 4, 1.0)
    with pytest.raises(ValueError):
        esd([1.0], 1.0, 0, 1.0)
    with pytest.raises(ValueError):
        esd([], 1.0, 4, 1.0)
    with pytest.raises(ValueError):
        esd([np.nan], 1.0, 4, 1.0)


# ---------------------------------------------------------------------------
# concentration check


def test_concentration_check_exact_and_miss():
    assert concentration_check([5.0, 6.0], 10, 0.55, 0.01)
    assert not concentration_check([5.0], 10, 0.6, 0.1)  # |0.5 - 0.6| > 0.06
    assert concentration_check([5.0], 10, 0.6, 0.2)


def test_concentration_check_validation():
    with pytest.raises(ValueError):
        concentration_check([], 10, 0.5, 0.1)
    with pytest.raises(ValueError):
        concentration_check([1.0], 0, 0.5, 0.1)
    with pytest.raises(ValueError):
        concentration_check([1.0], 10, 1.5, 0.1)
    with pytest.raises(ValueError):
        concentration_check([1.0], 10, 0.5, 0.0)


# ---------------------------------------------------------------------------
# collision scan


def build_sparse(dense):
    return SparseMatrix.from_dense(np.asarray(dense, dtype=np.float64))


def test_collision_scan_hand_example():
    m = build_sparse([[3.0, 0.0, 4.0], [0.0, 5.0, 0.0], [2.0, 0.0, 0.0]])
    out = large_entry_collision_scan(m, 2.5)
    assert out == {"row_collisions": 1, "col_collisions": 0}
    out = large_entry_collision_scan(m, 1.0)
    assert out == {"row_collisions": 1, "col_collisions": 1}
    out = large_entry_collision_scan(m, 10.0)
    assert out == {"row_collisions": 0, "col_collisions": 0}


def test_collision_scan_counts_magnitudes():
    m = build_sparse([[-3.0, -4.0], [0.0, 0.0]])
    out = large_entry_collision_scan(m, 2.0)
    assert out["row_collisions"] == 1


def test_collision_scan_validation():
    m = build_sparse([[1.0]])
    with pytest.raises(ValueError):
        large_entry_collision_scan(m, 0.0)
    with pytest.raises(ValueError):
        large_entry_collision_scan(m, math.inf)


def test_collision_scan_frequency_matches_poisson_line_model():
    # Full square matrix (mu = 1), alpha = 1, n = 500: an entry exceeds
    # c_np**g with probability q = (p * n)**(-g) exactly, so each of the
    # n + p lines holds >= 2 such entries with probability
    # 1 - (1-q)**n - n*q*(1-q)**(n-1), and the chance that any line does is
    # 0.2468 at g = 0.8 (expected number of colliding lines 0.2834).  At
    # g = 0.95 the same model gives 0.0069, so large entries are isolated.
    law = TailLaw(alpha=1.0)
    n = 500
    cnp = c_np(law, n, n, 1.0)
    hits80 = hits95 = 0
    R = 200
    for r in range(R):
        spec = EnsembleSpec(
            shape="rectangular", n=n, law=law,
            sparsity=SparsitySpec.bernoulli(1.0), seed=1000 + r,
        )
        m = sample_matrix(spec)
        s80 = large_entry_collision_scan(m, cnp**0.8)
        s95 = large_entry_collision_scan(m, cnp**0.95)
        hits80 += (s80["row_collisions"] + s80["col_collisions"]) > 0
        hits95 += (s95["row_collisions"] + s95["col_collisions"]) > 0
    freq80 = hits80 / R
    freq95 = hits95 / R
    # 0.2468 +/- 4 binomial standard errors at R = 200
    assert 0.1249 <= freq80 <= 0.3687, freq80
    assert freq95 <= 0.05, freq95


# ---------------------------------------------------------------------------
# uniform pass/fail records


def test_record_schema_and_boundary():
    rec = stats.test_record("crit", 1.25, 1.0, 0.25)
    assert rec == {
        "name": "crit",
        "observed": 1.25,
        "expected": 1.0,
        "tolerance": 0.25,
        "pass": True,
    }
    assert not stats.test_record("crit", 1.3, 1.0, 0.25)["pass"]
