"""Pooling of recent polls into per-party pseudo-counts.

    The newest poll of every pollster inside a time window contributes its
    respondents, split by party with largest-remainder rounding. The summed
    counts can be deflated by a dependence factor, which stands in for the
    between-pollster correlation the poll of polls cannot observe.

.. platform:: Unix, Windows, Mac
"""

import datetime
from dataclasses import dataclass
from typing import Mapping, Tuple

import numpy as np
from loguru import logger

from .errors import ConfigError, PoolingError

DEFAULT_WINDOW_DAYS = 14
DEFAULT_DEPENDENCE_FACTOR = 1.0


def largest_remainder(quotas, total):
    """Round non-negative quotas to integers that add up to ``total``.

    Every entry gets the floor of its quota, the missing units go to the
    largest fractional parts. Ties go to the lower index.

    :param quotas: Sequence of non-negative floats.
    :param int total: Required sum of the result.
    :rtype: :py:class:`numpy.ndarray` of int64
    """
    quotas = np.asarray(quotas, dtype=float)
    counts = np.floor(quotas).astype(np.int64)
    missing = int(total - counts.sum())
    if missing > 0:
        order = np.argsort(-(quotas - counts), kind="stable")
        counts[order[:missing]] += 1
    elif missing < 0:
        # Only reachable through float noise in quotas summing above total
        order = np.argsort(quotas - counts, kind="stable")
        for index in order:
            if missing == 0:
                break
            if counts[index] > 0:
                counts[index] -= 1
                missing += 1
    return counts


def _scale_counts(counts, target):
    """Scale integer counts to sum to ``target`` with exact integer arithmetic."""
    total = int(counts.sum())
    products = counts.astype(object) * target
    floors = np.array([value // total for value in products], dtype=np.int64)
    remainders = np.array([value % total for value in products], dtype=np.int64)
    missing = int(target - floors.sum())
    order = np.argsort(-remainders, kind="stable")
    floors[order[:missing]] += 1
    return floors


@dataclass(frozen=True)
class PooledSample:
    """Pseudo-counts of the polls pooled for one date.

    :param as_of: Pooling date.
    :param window_days: Width of the pooling window.
    :param counts: Party id to pseudo-count, in registry order.
    :param n_eff: Effective sample size, equal to the sum of ``counts``.
    :param polls_used: ``(pollster, publish_date)`` of every contributing poll.
    """

    as_of: datetime.date
    window_days: int
    counts: Mapping[str, int]
    n_eff: int
    polls_used: Tuple[Tuple[str, datetime.date], ...]

    def __post_init__(self):
        assert sum(self.counts.values()) == self.n_eff


def _newest_per_pollster(polls):
    newest = {}
    for poll in polls:
        # Same pollster and date: larger sample wins, then the smaller share vector
        key = (poll.publish_date, poll.sample_size, [-v for v in poll.shares.values()])
        current = newest.get(poll.pollster)
        if current is None or key > current[0]:
            newest[poll.pollster] = (key, poll)
    return [newest[pollster][1] for pollster in sorted(newest)]


def in_window(poll, as_of, window_days):
    return as_of - datetime.timedelta(days=window_days) < poll.publish_date <= as_of


def pool(
    polls,
    as_of,
    window_days=DEFAULT_WINDOW_DAYS,
    dependence_factor=DEFAULT_DEPENDENCE_FACTOR,
    registry=None,
):
    """Pool the newest in-window poll of every pollster.

    :param polls: Validated :class:`~koalition_py.data_access.Poll` objects.
    :param datetime.date as_of: Last day of the window (inclusive).
    :param int window_days: Polls with ``as_of - window_days < date <= as_of``
        are eligible.
    :param float dependence_factor: Fraction in (0, 1] applied to the summed
        counts.
    :param registry: Optional registry fixing the party order; defaults to
        the key order of the first poll.
    :rtype: :class:`PooledSample`
    :raises PoolingError: When no poll falls inside the window.
    """
    if window_days < 1:
        raise ConfigError("window_days must be positive", code="bad-window")
    if not 0 < dependence_factor <= 1:
        raise ConfigError(
            "dependence_factor must be in (0, 1]", code="bad-dependence-factor"
        )

    selected = _newest_per_pollster(
        poll for poll in polls if in_window(poll, as_of, window_days)
    )
    if not selected:
        error = PoolingError(
            "no polls in the %d days up to %s" % (window_days, as_of.isoformat())
        )
        error.as_of = as_of
        error.window_days = window_days
        raise error

    party_ids = registry.ids if registry is not None else tuple(selected[0].shares)
    totals = np.zeros(len(party_ids), dtype=np.int64)
    for poll in selected:
        quotas = [poll.sample_size * poll.shares.get(p, 0.0) for p in party_ids]
        totals += largest_remainder(quotas, poll.sample_size)

    respondents = int(totals.sum())
    target = int(np.floor(dependence_factor * respondents + 0.5))
    if target < 1:
        raise PoolingError(
            "dependence_factor %g leaves no information" % dependence_factor,
            code="no-information",
        )
    if target != respondents:
        totals = _scale_counts(totals, target)

    logger.debug(
        "pooled {} polls as of {}: n={} n_eff={}",
        len(selected),
        as_of,
        respondents,
        target,
    )
    return PooledSample(
        as_of=as_of,
        window_days=window_days,
        counts={p: int(c) for p, c in zip(party_ids, totals)},
        n_eff=target,
        polls_used=tuple((poll.pollster, poll.publish_date) for poll in selected),
    )


@dataclass(frozen=True)
class PoolingConfig:
    window_days: int = DEFAULT_WINDOW_DAYS
    dependence_factor: float = DEFAULT_DEPENDENCE_FACTOR

    def __post_init__(self):
        if int(self.window_days) < 1:
            raise ConfigError("window_days must be positive", code="bad-window")
        if not 0 < self.dependence_factor <= 1:
            raise ConfigError(
                "dependence_factor must be in (0, 1]", code="bad-dependence-factor"
            )

    def pool(self, polls, as_of, registry=None):
        return pool(
            polls,
            as_of,
            window_days=self.window_days,
            dependence_factor=self.dependence_factor,
            registry=registry,
        )
