import datetime

import numpy as np
import pytest

from koalition_py.errors import ModelError
from koalition_py.pooling import PooledSample
from koalition_py.posterior import (
    DRAW_CHUNK,
    DirichletPosterior,
    party_key,
    posterior_from,
    sample_shares,
)

ALPHA = {"A": 400.5, "B": 300.5, "C": 200.5, "other": 100.5}


@pytest.fixture
def posterior():
    return DirichletPosterior(alpha=dict(ALPHA))


def test_conjugate_update_adds_prior():
    pooled = PooledSample(
        as_of=datetime.date(2018, 3, 1),
        window_days=14,
        counts={"A": 400, "B": 300, "C": 200, "other": 100},
        n_eff=1000,
        polls_used=(("X", datetime.date(2018, 3, 1)),),
    )
    posterior = posterior_from(pooled, 0.5)
    assert posterior.alpha == ALPHA
    assert posterior.source is pooled
    assert posterior.concentration == 1002.0


def test_prior_must_be_positive():
    pooled = PooledSample(datetime.date(2018, 3, 1), 14, {"A": 1, "other": 0}, 1, ())
    with pytest.raises(ModelError) as info:
        posterior_from(pooled, 0.0)
    assert info.value.code == "bad-prior"


def test_moments(posterior):
    mean = posterior.mean()
    variance = posterior.variance()
    assert mean["A"] == pytest.approx(400.5 / 1002)
    assert variance["A"] == pytest.approx(mean["A"] * (1 - mean["A"]) / 1003)


def test_draws_are_share_vectors(posterior):
    draws = sample_shares(posterior, 5000, seed=1)
    assert draws.draws.shape == (5000, 4)
    assert draws.party_ids == ("A", "B", "C", "other")
    assert np.allclose(draws.draws.sum(axis=1), 1.0)
    assert (draws.draws >= 0).all()


def test_sample_mean_matches_posterior_mean(posterior):
    draws = sample_shares(posterior, 20000, seed=7)
    mean = posterior.mean()
    variance = posterior.variance()
    for party_id in posterior.party_ids:
        tolerance = 4 * np.sqrt(variance[party_id] / 20000)
        assert abs(draws.column(party_id).mean() - mean[party_id]) < tolerance


def test_same_seed_same_draws(posterior):
    first = sample_shares(posterior, 3000, seed=42).draws
    second = sample_shares(posterior, 3000, seed=42).draws
    other = sample_shares(posterior, 3000, seed=43).draws
    assert np.array_equal(first, second)
    assert not np.array_equal(first, other)


def test_thread_count_does_not_change_draws(posterior):
    m = 3 * DRAW_CHUNK + 17
    single = sample_shares(posterior, m, seed=42, workers=1).draws
    threaded = sample_shares(posterior, m, seed=42, workers=4).draws
    assert np.array_equal(single, threaded)


def test_shorter_request_is_a_prefix(posterior):
    long = sample_shares(posterior, DRAW_CHUNK + 500, seed=3).draws
    short = sample_shares(posterior, 1000, seed=3).draws
    assert np.array_equal(long[:1000], short)


def test_party_order_permutes_columns(posterior):
    permuted = DirichletPosterior(
        alpha={p: ALPHA[p] for p in ("C", "A", "other", "B")}
    )
    base = sample_shares(posterior, 2000, seed=5)
    moved = sample_shares(permuted, 2000, seed=5)
    for party_id in ALPHA:
        assert np.allclose(base.column(party_id), moved.column(party_id), rtol=1e-12)


# "plumless" and "buckeroo" share a CRC-32 checksum
@pytest.mark.parametrize(
    "first, second", [("plumless", "buckeroo"), ("a", "\x00a"), ("Grüne", "Grune")]
)
def test_party_keys_are_distinct(first, second):
    assert party_key(first) != party_key(second)
    equal = DirichletPosterior(alpha={first: 50.0, second: 50.0, "other": 50.0})
    draws = sample_shares(equal, 500, seed=11)
    assert not np.array_equal(draws.column(first), draws.column(second))


@pytest.mark.parametrize(
    "m, seed, code",
    [(0, 1, "empty-request"), (10, -1, "bad-seed"), (10, 2 ** 64, "bad-seed")],
)
def test_invalid_requests(posterior, m, seed, code):
    with pytest.raises(ModelError) as info:
        sample_shares(posterior, m, seed)
    assert info.value.code == code
