import math

import numpy as np
import pytest

from frogmodel import walk_oracle as wo


def dp_first_passage_pmf(n, K):
    """Independent oracle: exact pmf of tau_n by stepping the barrier-killed
    walk distribution forward one step at a time."""
    q = np.zeros(2 * K + 1)
    q[K] = 1.0  # index K == position 0
    pmf = {}
    for t in range(1, K + 1):
        hit = 0.5 * q[K + n - 1]
        q = 0.5 * (np.roll(q, 1) + np.roll(q, -1))
        q[0] = q[-1] = 0.0
        q[K + n:] = 0.0
        pmf[t] = hit
    return pmf


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_pmf_matches_path_enumeration(n):
    K = 24
    tab = wo.first_passage_pmf(n, K)
    dp = dp_first_passage_pmf(n, K)
    for k in range(n, K + 1):
        assert tab.prob(k) == pytest.approx(dp[k], abs=1e-15)


def test_tau2_at_4_is_one_eighth():
    assert wo.first_passage_pmf(2, 8).prob(4) == pytest.approx(0.125, abs=1e-15)


def test_pmf_parity_and_normalization():
    tab = wo.first_passage_pmf(3, 2001)
    assert tab.prob(4) == 0.0 and tab.prob(2) == 0.0
    assert tab.probs.sum() + tab.tail_mass == pytest.approx(1.0, abs=1e-12)


def test_tail_consistent_with_pmf():
    n, K = 2, 600
    tab = wo.first_passage_pmf(n, K)
    for t in (10, 100, 400):
        head = sum(tab.prob(k) for k in range(n, t + 1))
        assert 1.0 - head == pytest.approx(wo.tau_n_survival(n, t), abs=1e-12)


def test_tau_n_survival_edge_cases():
    assert wo.tau_n_survival(1, 0) == 1.0
    assert wo.tau_n_survival(1, 1) == pytest.approx(0.5)
    assert wo.tau_n_survival(3, 2) == 1.0  # cannot reach 3 in 2 steps
    # vectorized call agrees with scalars
    ts = np.array([0, 1, 5, 50, 1000])
    vec = wo.tau_n_survival(2, ts)
    for t, v in zip(ts, vec):
        assert v == wo.tau_n_survival(2, int(t))


def test_tau_n_survival_large_t_no_overflow():
    v = wo.tau_n_survival(5, 10**14)
    # diffusive decay c n / sqrt(t)
    assert 0.0 < v < 1e-5
    assert v == pytest.approx(math.sqrt(2 / math.pi) * 5 / math.sqrt(10**14),
                              rel=1e-3)


def test_tau1_limit_constant():
    for t, tol in ((100, 3e-3), (10000, 3e-5)):
        assert math.sqrt(t) * wo.tau1_survival(t) == pytest.approx(
            math.sqrt(2 / math.pi), abs=tol)


def test_gen_func_series_identity():
    ks = np.arange(1, 4001, 2)
    pmf = np.exp(wo.log_first_passage_prob(1, ks))
    for s in (0.3, 0.7, 0.95):
        assert float(np.sum(pmf * s ** ks)) == pytest.approx(wo.gen_func(s),
                                                             abs=1e-12)
    assert wo.gen_func(1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        wo.gen_func(0.0)


def test_gen_func_arr_matches_scalar():
    s = np.array([0.1, 0.5, 0.99])
    np.testing.assert_allclose(wo.gen_func_arr(s),
                               [wo.gen_func(x) for x in s], rtol=1e-14)


def test_choose_truncation_certifies_target():
    for n, eps in ((1, 1e-3), (4, 1e-3)):
        K = wo.choose_truncation(n, eps)
        assert wo.tau_n_survival(n, K) <= eps
        assert (K - n) % 2 == 0


def test_simulate_displacement_reproducible():
    a = wo.simulate_displacement(1.0, 0.9, seed=11, replicate=2)
    b = wo.simulate_displacement(1.0, 0.9, seed=11, replicate=2)
    assert a == b
    c = wo.simulate_displacement(1.0, 0.9, seed=11, replicate=3)
    d_right, d_star = a
    assert 0 <= d_right <= d_star
    # batch slices agree with singles
    dr, ds = wo.simulate_displacement_batch(1.0, 0.9, seed=11, reps=4,
                                            first_replicate=2)
    assert (int(dr[0]), int(ds[0])) == a
    assert (int(dr[1]), int(ds[1])) == c


def test_first_passage_table_csv(tmp_path):
    tab = wo.first_passage_pmf(2, 10)
    path = tmp_path / "pmf.csv"
    tab.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "k,prob"
    assert len(lines) == 1 + len(tab.ks)
