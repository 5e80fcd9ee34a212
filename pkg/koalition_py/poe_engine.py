"""Monte-Carlo estimation of Probabilities of Events (PoE).

    Posterior draws are pushed through the threshold and the seat
    apportionment. Every event of one call is evaluated on the same draws, so
    identities such as ``PoE(E) + PoE(not E) == 1`` and coalition
    monotonicity hold exactly, not only up to Monte-Carlo error.

.. platform:: Unix, Windows, Mac
"""

import datetime
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Tuple

import numpy as np
from loguru import logger

from .electoral import (
    SeatAllocation,
    allocate_matrix,
    majority_matrix,
    subset_sufficient_matrix,
    threshold_matrix,
)
from .errors import InsufficientDrawsError, ModelError, PoolingError
from .posterior import posterior_from, sample_shares

MIN_DRAWS = 1000
DENSITY_GRID_POINTS = 512
# Bandwidth used when all draws coincide (Silverman's rule gives zero)
MIN_BANDWIDTH = 1e-3
DEFAULT_PARLIAMENTS = 6


class EventKind(Enum):
    COALITION_MAJORITY = "coalition-majority"
    PARTY_ABOVE_THRESHOLD = "party-above-threshold"
    STRONGEST_PARTY = "strongest-party"


@dataclass(frozen=True)
class EventSpec:
    """Event of interest evaluated on every simulated election.

    :param kind: :class:`EventKind` (or its string value).
    :param parties: Coalition members, or the single party of the other kinds.
    :param negated: Evaluate the complement of the event.
    """

    kind: EventKind
    parties: Tuple[str, ...]
    negated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", EventKind(self.kind))
        object.__setattr__(self, "parties", tuple(dict.fromkeys(self.parties)))
        if not self.parties:
            raise ModelError("event needs at least one party", code="bad-event")
        if self.kind is not EventKind.COALITION_MAJORITY and len(self.parties) != 1:
            raise ModelError(
                "%s takes exactly one party" % self.kind.value, code="bad-event"
            )

    @classmethod
    def coalition(cls, parties):
        return cls(EventKind.COALITION_MAJORITY, tuple(parties))

    def complement(self):
        return replace(self, negated=not self.negated)


@dataclass(frozen=True)
class PoEResult:
    probability: float
    mc_stderr: float
    subset_probability: float
    m: int
    seed: int

    @classmethod
    def from_hits(cls, hits, subset_hits, m, seed):
        probability = hits / m
        return cls(
            probability=probability,
            mc_stderr=math.sqrt(probability * (1 - probability) / m),
            subset_probability=subset_hits / m,
            m=m,
            seed=seed,
        )


@dataclass(frozen=True)
class SeatShareDistribution:
    """Joint seat share of a coalition over all draws.

    ``density`` is ``(grid, heights)`` on 512 points of [0, 1]. The area
    under the density to the right of ``majority_cut`` is ``majority_mass``
    of the whole, so a fill starting there shows the majority draws.
    """

    draws: np.ndarray
    density: Tuple[np.ndarray, np.ndarray]
    ci95: Tuple[float, float]
    majority_mass: float
    m: int = 0
    seed: int = 0
    majority_cut: float = 0.5


@dataclass(frozen=True)
class Simulation:
    """Draws of one engine call and the parliaments they produce.

    :param shares: ``(m, K)`` raw share draws.
    :param seats: ``(m, K)`` seat allocations.
    :param hung: ``(m,)`` rows in which no party passed the threshold.
    """

    party_ids: Tuple[str, ...]
    shares: np.ndarray
    seats: np.ndarray
    eligible: np.ndarray
    hung: np.ndarray
    rules: object
    m: int
    seed: int

    @property
    def hung_fraction(self):
        return float(self.hung.mean())

    def columns(self, parties):
        unknown = [p for p in parties if p not in self.party_ids]
        if unknown:
            raise ModelError(
                "unknown party id(s): %s" % ", ".join(unknown), code="unknown-party"
            )
        return [self.party_ids.index(p) for p in parties]

    def allocation(self, row):
        return SeatAllocation(
            seats={p: int(s) for p, s in zip(self.party_ids, self.seats[row])},
            eligible=frozenset(
                p for p, keep in zip(self.party_ids, self.eligible[row]) if keep
            ),
        )

    def event_mask(self, event):
        """Per-draw truth value of the (possibly negated) event."""
        columns = self.columns(event.parties)
        if event.kind is EventKind.COALITION_MAJORITY:
            mask = majority_matrix(self.seats, columns, self.rules)
        elif event.kind is EventKind.PARTY_ABOVE_THRESHOLD:
            mask = self.eligible[:, columns[0]]
        else:
            named = self.shares[:, :-1]
            mask = np.argmax(named, axis=1) == columns[0]
        return ~mask if event.negated else mask

    def coalition_share(self, coalition):
        """Joint seat share per draw; 0 for hung parliaments."""
        columns = self.columns(coalition)
        return self.seats[:, columns].sum(axis=1) / self.rules.house_size


def check_draws(m):
    if m < MIN_DRAWS:
        raise InsufficientDrawsError(
            "%d draws requested, at least %d are needed" % (m, MIN_DRAWS)
        )


def simulate(posterior, rules, m, seed, workers=1):
    """Sample ``m`` elections and apportion their seats.

    The other bucket is the last party of the posterior and never eligible.

    :rtype: :class:`Simulation`
    """
    draws = sample_shares(posterior, m, seed, workers=workers)
    other_index = len(draws.party_ids) - 1
    renormalized, eligible = threshold_matrix(draws.draws, rules, other_index)
    seats = allocate_matrix(renormalized, eligible, rules)
    hung = ~eligible.any(axis=1)
    if hung.any():
        logger.warning("{} of {} simulated parliaments are hung", int(hung.sum()), m)
    return Simulation(
        party_ids=draws.party_ids,
        shares=draws.draws,
        seats=seats,
        eligible=eligible,
        hung=hung,
        rules=rules,
        m=m,
        seed=seed,
    )


def evaluate_poe(simulation, event):
    """PoE of one event on an existing simulation.

    For coalition majorities the subset probability counts draws where a
    proper subset already holds a majority. With non-negative seats such a
    draw is always a full-coalition majority too, so "subset has a majority"
    and "subset and coalition have a majority" are the same quantity.
    """
    mask = simulation.event_mask(event)
    subset_hits = 0
    if event.kind is EventKind.COALITION_MAJORITY and not event.negated:
        columns = simulation.columns(event.parties)
        subset = subset_sufficient_matrix(simulation.seats, columns, simulation.rules)
        subset_hits = int((subset & mask).sum())
    return PoEResult.from_hits(
        int(mask.sum()), subset_hits, simulation.m, simulation.seed
    )


def estimate_poes(posterior, rules, events, m, seed, workers=1):
    """PoE of several events on shared draws."""
    check_draws(m)
    simulation = simulate(posterior, rules, m, seed, workers=workers)
    return [evaluate_poe(simulation, event) for event in events]


def estimate_poe(posterior, rules, event, m, seed, workers=1):
    """Probability of one event.

    :param posterior: :class:`~koalition_py.posterior.DirichletPosterior`.
    :param rules: :class:`~koalition_py.electoral.ElectionRules`.
    :param event: :class:`EventSpec`.
    :param int m: Number of draws, at least 1000.
    :param int seed: Seed of the draw stream.
    :rtype: :class:`PoEResult`
    :raises InsufficientDrawsError: when ``m < 1000``.
    """
    logger.info("estimate_poe m={} seed={}", m, seed)
    return estimate_poes(posterior, rules, [event], m, seed, workers=workers)[0]


def silverman_bandwidth(values, weights=None):
    """Silverman's rule of thumb ``0.9 * min(sd, IQR / 1.34) * n ** -0.2``."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 2:
        return MIN_BANDWIDTH
    sd = values.std(ddof=1)
    q75, q25 = np.percentile(values, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    bandwidth = 0.9 * spread * n ** (-0.2)
    return bandwidth if bandwidth > 0 else MIN_BANDWIDTH


def reflected_kde(values, grid, bandwidth):
    """Gaussian kernel density on [0, 1], reflected at both boundaries.

    Draws are binned by their distinct values first (seat shares take at most
    ``house_size + 1`` values), so the cost does not grow with ``m``.
    """
    points, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    weights = counts / counts.sum()
    heights = np.zeros_like(grid)
    norm = 1.0 / (bandwidth * math.sqrt(2 * math.pi))
    for mirrored in (points, -points, 2.0 - points):
        z = (grid[:, None] - mirrored[None, :]) / bandwidth
        heights += (np.exp(-0.5 * z * z) * weights[None, :]).sum(axis=1) * norm
    return heights


def nearest_rank(sorted_values, q):
    """Nearest-rank quantile of an ascending array."""
    n = sorted_values.size
    rank = min(max(int(math.ceil(q * n)), 1), n)
    return float(sorted_values[rank - 1])


def tail_cut(grid, heights, mass):
    """Point of ``grid`` right of which the piecewise linear density holds
    ``mass`` of its area.

    The density is linear between grid points, so inside the crossing cell
    the tail area is a quadratic in the cut and is solved exactly.
    """
    grid = np.asarray(grid, dtype=float)
    heights = np.asarray(heights, dtype=float)
    widths = np.diff(grid)
    cells = (heights[1:] + heights[:-1]) / 2 * widths
    total = float(cells.sum())
    if total <= 0 or mass <= 0:
        return float(grid[-1])
    target = min(mass, 1.0) * total
    # tail[i] is the area right of grid[i]
    tail = np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]])
    index = int(np.searchsorted(-tail, -target, side="right")) - 1
    index = min(max(index, 0), grid.size - 2)
    need = target - tail[index + 1]
    h0, h1 = heights[index], heights[index + 1]
    width = widths[index]
    slope = h1 - h0
    if abs(slope) < 1e-12 * max(h0, h1, 1.0):
        span = need / (width * h1) if h1 > 0 else 1.0
    else:
        discriminant = max(h1 * h1 - 2 * slope * need / width, 0.0)
        span = (h1 - math.sqrt(discriminant)) / slope
    span = min(max(span, 0.0), 1.0)
    return float(grid[index + 1] - span * width)


def distribution_of(simulation, coalition):
    """:class:`SeatShareDistribution` of a coalition on an existing simulation."""
    values = simulation.coalition_share(coalition)
    ordered = np.sort(values)
    grid = np.linspace(0.0, 1.0, DENSITY_GRID_POINTS)
    heights = reflected_kde(values, grid, silverman_bandwidth(values))
    columns = simulation.columns(coalition)
    majority = majority_matrix(simulation.seats, columns, simulation.rules)
    majority_mass = float(majority.sum()) / simulation.m
    return SeatShareDistribution(
        draws=values,
        density=(grid, heights),
        ci95=(nearest_rank(ordered, 0.025), nearest_rank(ordered, 0.975)),
        majority_mass=majority_mass,
        m=simulation.m,
        seed=simulation.seed,
        majority_cut=tail_cut(grid, heights, majority_mass),
    )


def seat_distribution(posterior, rules, coalition, m, seed, workers=1):
    """Distribution of the joint seat share of a coalition.

    :rtype: :class:`SeatShareDistribution`
    """
    check_draws(m)
    simulation = simulate(posterior, rules, m, seed, workers=workers)
    return distribution_of(simulation, tuple(coalition))


def sample_parliaments(posterior, rules, k=DEFAULT_PARLIAMENTS, seed=0, workers=1):
    """The first ``k`` parliaments of the draw stream.

    :rtype: :py:class:`list` of :class:`~koalition_py.electoral.SeatAllocation`
    """
    if k < 1:
        raise ModelError("at least one parliament is required", code="empty-request")
    simulation = simulate(posterior, rules, k, seed, workers=workers)
    return [simulation.allocation(row) for row in range(k)]


@dataclass(frozen=True)
class TimeSeries:
    """Per-date results plus the dates skipped for lack of polls."""

    points: List[Tuple[datetime.date, object]]
    skipped: List[datetime.date] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    @property
    def dates(self):
        return [point[0] for point in self.points]

    @property
    def values(self):
        return [point[1] for point in self.points]


def over_dates(polls, dates, pooling, prior_alpha, registry, compute):
    """Pool and update for every date and apply ``compute`` to the posterior.

    Dates whose window holds no poll are skipped and reported.
    """
    dates = list(dates)
    if any(later < earlier for earlier, later in zip(dates, dates[1:])):
        raise ModelError("dates must be ascending", code="unsorted-dates")
    points = []
    skipped = []
    for as_of in dates:
        try:
            pooled = pooling.pool(polls, as_of, registry=registry)
        except PoolingError:
            logger.warning("no polls in window for {}, date skipped", as_of)
            skipped.append(as_of)
            continue
        points.append((as_of, compute(posterior_from(pooled, prior_alpha), as_of)))
    if not points:
        raise ModelError("no date has polls inside its window", code="no-data")
    return TimeSeries(points=points, skipped=skipped)


def poe_series(
    polls,
    dates,
    rules,
    event,
    pooling,
    m,
    seed,
    prior_alpha=0.5,
    registry=None,
    workers=1,
):
    """PoE of an event for every date: pool, update, estimate.

    :param pooling: :class:`~koalition_py.pooling.PoolingConfig`.
    :rtype: :class:`TimeSeries` of ``(date, PoEResult)``
    :raises ModelError: ``no-data`` when every date has an empty window.
    """
    check_draws(m)
    logger.info(
        "poe_series dates={} m={} seed={} window={}",
        len(dates),
        m,
        seed,
        pooling.window_days,
    )
    return over_dates(
        polls,
        dates,
        pooling,
        prior_alpha,
        registry,
        lambda posterior, _: estimate_poe(posterior, rules, event, m, seed, workers),
    )


def distribution_series(
    polls,
    dates,
    rules,
    coalition,
    pooling,
    m,
    seed,
    prior_alpha=0.5,
    registry=None,
    workers=1,
):
    """Seat share distribution of a coalition for every date.

    :rtype: :class:`TimeSeries` of ``(date, SeatShareDistribution)``
    """
    check_draws(m)
    return over_dates(
        polls,
        dates,
        pooling,
        prior_alpha,
        registry,
        lambda posterior, _: seat_distribution(
            posterior, rules, coalition, m, seed, workers
        ),
    )
