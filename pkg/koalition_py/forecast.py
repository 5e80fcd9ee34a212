"""Extrapolation of a nowcast to election day.

    There is no model of how the electoral mood moves until election day.
    Instead the data content of the posterior is shrunk with the horizon
    ``h`` (days to the election): ``s(h) = 1 / (1 + h / tau)`` and
    ``alpha' = prior + s(h) * (alpha - prior)``. The posterior mean barely
    moves while the concentration falls, so every marginal variance grows
    with the horizon.

    Events that have not happened yet (a scandal, a letter published a week
    before the vote) cannot be quantified from polls. The widened bands
    express generic drift only; they are not a bound on what such an event
    can do to the result.

.. platform:: Unix, Windows, Mac
"""

import datetime
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
from loguru import logger
from scipy.stats import beta

from .errors import ModelError
from .poe_engine import (
    check_draws,
    estimate_poe,
    nearest_rank,
    over_dates,
    seat_distribution,
)
from .posterior import (
    DEFAULT_PRIOR_ALPHA,
    DirichletPosterior,
    posterior_from,
    prior_vector,
    sample_shares,
)

DEFAULT_TAU = 60.0
DEFAULT_GRID_DAYS = 7


@dataclass(frozen=True)
class ForecastSpec:
    """Target and scale of a forecast.

    :param election_date: Election day.
    :param as_of: Date of the nowcast being extrapolated.
    :param tau: Horizon in days at which half of the data content is left.
    """

    election_date: datetime.date
    as_of: datetime.date
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if self.election_date < self.as_of:
            raise ModelError(
                "election %s is before %s" % (self.election_date, self.as_of),
                code="past-election",
            )
        if not self.tau > 0:
            raise ModelError("tau must be positive", code="bad-tau")

    @property
    def horizon(self):
        return (self.election_date - self.as_of).days


def shrink_factor(horizon, tau=DEFAULT_TAU):
    """``1 / (1 + h / tau)``: 1 at h = 0, strictly decreasing towards 0."""
    if horizon < 0:
        raise ModelError("negative horizon %s" % horizon, code="past-election")
    return 1.0 / (1.0 + horizon / tau)


def inflate(posterior, spec, prior_alpha=DEFAULT_PRIOR_ALPHA):
    """Widen a nowcast posterior to the forecast horizon of ``spec``.

    :param posterior: :class:`~koalition_py.posterior.DirichletPosterior`.
    :param spec: :class:`ForecastSpec`.
    :param prior_alpha: The prior the posterior was built with.
    :rtype: :class:`~koalition_py.posterior.DirichletPosterior`
    """
    if spec.horizon < 0:
        raise ModelError("election is in the past", code="past-election")
    prior = prior_vector(prior_alpha, posterior.party_ids)
    if any(posterior.alpha[p] < prior[p] for p in posterior.party_ids):
        raise ModelError(
            "posterior has less content than its prior", code="negative-data"
        )
    factor = shrink_factor(spec.horizon, spec.tau)
    if factor == 1.0:
        return posterior
    alpha = {
        p: prior[p] + factor * (posterior.alpha[p] - prior[p])
        for p in posterior.party_ids
    }
    return DirichletPosterior(alpha=alpha, source=posterior.source)


@dataclass(frozen=True)
class FanPoint:
    date: datetime.date
    mean: float
    low: float
    high: float

    @property
    def width(self):
        return self.high - self.low


@dataclass(frozen=True)
class FanChart:
    """Per-party bands from the earliest poll to election day."""

    series: Dict[str, List[FanPoint]]
    as_of: datetime.date
    election_date: datetime.date
    threshold: float
    m: int
    seed: int


def _summary(values):
    values = np.sort(values)
    return (
        float(values.mean()),
        nearest_rank(values, 0.025),
        nearest_rank(values, 0.975),
    )


def _band(draws):
    return {
        party_id: _summary(draws.draws[:, column])
        for column, party_id in enumerate(draws.party_ids)
    }


def marginal_levels(posterior, draws):
    """Probability levels of the band edges under each party's Beta marginal.

    The marginal of party ``k`` is ``Beta(alpha_k, sum(alpha) - alpha_k)``.
    Returns party id to ``(low, high)`` levels, ``None`` for a lone party.
    """
    total = posterior.concentration
    levels = {}
    for column, party_id in enumerate(draws.party_ids):
        a = posterior.alpha[party_id]
        if total - a <= 0:
            levels[party_id] = None
            continue
        ordered = np.sort(draws.draws[:, column])
        edges = [nearest_rank(ordered, 0.025), nearest_rank(ordered, 0.975)]
        low, high = beta.cdf(edges, a, total - a)
        levels[party_id] = (float(low), float(high))
    return levels


def _widened_band(posterior, levels):
    """Band of an inflated posterior at the levels of the nowcast band.

    The edges are the Beta quantiles of two fixed levels, so they move with
    the horizon only and carry no new sampling noise.
    """
    total = posterior.concentration
    mean = posterior.mean()
    band = {}
    for party_id, edges in levels.items():
        if edges is None:
            band[party_id] = (mean[party_id], 1.0, 1.0)
            continue
        a = posterior.alpha[party_id]
        low, high = beta.ppf(edges, a, total - a)
        band[party_id] = (mean[party_id], float(low), float(high))
    return band


def fan_dates(start, as_of, election_date, grid_days):
    """Grid from ``start`` to ``election_date`` that always contains ``as_of``."""
    step = datetime.timedelta(days=grid_days)
    dates = set()
    current = start
    while current <= election_date:
        dates.add(current)
        current += step
    dates.update({as_of, election_date})
    return sorted(d for d in dates if start <= d <= election_date)


def fan_chart_data(
    polls,
    rules,
    spec,
    pooling,
    grid_days=DEFAULT_GRID_DAYS,
    m=10000,
    seed=0,
    prior_alpha=DEFAULT_PRIOR_ALPHA,
    registry=None,
    workers=1,
):
    """Mean and 95% band of every party share over time.

    Up to ``spec.as_of`` the band is the nowcast of each grid date. After it
    the nowcast of ``as_of`` is inflated with the growing horizon and its
    band is carried to every horizon at the marginal Beta levels of its
    edges, so all future bands come from one draw set. Future means are the
    exact means of the inflated posterior.

    :rtype: :class:`FanChart`
    """
    if not polls:
        raise ModelError("at least one poll is required", code="no-data")
    check_draws(m)
    start = min(poll.publish_date for poll in polls)
    dates = fan_dates(start, spec.as_of, spec.election_date, grid_days)
    history = over_dates(
        polls,
        [d for d in dates if d <= spec.as_of],
        pooling,
        prior_alpha,
        registry,
        lambda posterior, _: posterior,
    )
    posteriors = dict(history.points)
    if spec.as_of not in posteriors:
        # Surfaces the pooling error for the forecast origin itself
        posteriors[spec.as_of] = posterior_from(
            pooling.pool(polls, spec.as_of, registry=registry), prior_alpha
        )
    nowcast = posteriors.pop(spec.as_of)
    nowcast_draws = sample_shares(nowcast, m, seed, workers=workers)
    levels = marginal_levels(nowcast, nowcast_draws)
    bands = {spec.as_of: _band(nowcast_draws)}
    for date, posterior in posteriors.items():
        bands[date] = _band(sample_shares(posterior, m, seed, workers=workers))
    for date in dates:
        if date > spec.as_of:
            horizon = ForecastSpec(date, spec.as_of, spec.tau)
            widened = inflate(nowcast, horizon, prior_alpha)
            bands[date] = _widened_band(widened, levels)

    series = {party_id: [] for party_id in nowcast.party_ids}
    for date in sorted(bands):
        for party_id, (mean, low, high) in bands[date].items():
            series[party_id].append(FanPoint(date, mean, low, high))
    logger.info(
        "fan chart {} dates, as_of={} election={}",
        len(bands),
        spec.as_of,
        spec.election_date,
    )
    return FanChart(
        series=series,
        as_of=spec.as_of,
        election_date=spec.election_date,
        threshold=rules.threshold,
        m=m,
        seed=seed,
    )


def forecast_poe(
    polls,
    rules,
    event,
    spec,
    pooling,
    m,
    seed,
    prior_alpha=DEFAULT_PRIOR_ALPHA,
    registry=None,
    workers=1,
):
    """PoE of an event on election day, from the polls known at ``spec.as_of``.

    :rtype: :class:`~koalition_py.poe_engine.PoEResult`
    """
    pooled = pooling.pool(polls, spec.as_of, registry=registry)
    posterior = inflate(posterior_from(pooled, prior_alpha), spec, prior_alpha)
    logger.info("forecast_poe horizon={} tau={}", spec.horizon, spec.tau)
    return estimate_poe(posterior, rules, event, m, seed, workers=workers)


def forecast_distribution_series(
    polls,
    dates,
    rules,
    coalition,
    election_date,
    pooling,
    m,
    seed,
    tau=DEFAULT_TAU,
    prior_alpha=DEFAULT_PRIOR_ALPHA,
    registry=None,
    workers=1,
):
    """Seat share distribution on election day of the forecast made at each date.

    :rtype: :class:`~koalition_py.poe_engine.TimeSeries`
    """
    check_draws(m)

    def forecast(posterior, as_of):
        spec = ForecastSpec(election_date, as_of, tau)
        widened = inflate(posterior, spec, prior_alpha)
        return seat_distribution(widened, rules, coalition, m, seed, workers)

    return over_dates(polls, dates, pooling, prior_alpha, registry, forecast)
