"""German-style election mechanics.

    Parties below the vote threshold and the "other" bucket are removed, the
    remaining shares are renormalized and seats are apportioned with a
    highest-averages divisor method (Sainte-Laguë/Schepers by default,
    D'Hondt as alternative). The matrix functions work on many simulated
    elections at once and are what the Monte-Carlo engine uses; the scalar
    functions wrap them for single allocations.

.. platform:: Unix, Windows, Mac
"""

import itertools
from dataclasses import dataclass
from typing import FrozenSet, Mapping

import numpy as np

from .errors import ConfigError, ModelError

DEFAULT_THRESHOLD = 0.05
DEFAULT_HOUSE_SIZE = 598


def sainte_lague(seats):
    """Sainte-Laguë (Webster, Schepers) divisor: 1, 3, 5, ..."""
    return 2 * seats + 1


def d_hondt(seats):
    """D'Hondt (Jefferson) divisor: 1, 2, 3, ..."""
    return seats + 1


DIVISORS = {
    "sainte-lague": sainte_lague,
    "dhondt": d_hondt,
}

# Offset added before flooring the first estimate of every method, so the
# estimate is already a valid apportionment of its own total
_ROUNDING_OFFSET = {
    "sainte-lague": 0.5,
    "dhondt": 0.0,
}


@dataclass(frozen=True)
class ElectionRules:
    threshold: float = DEFAULT_THRESHOLD
    house_size: int = DEFAULT_HOUSE_SIZE
    method: str = "sainte-lague"

    def __post_init__(self):
        if not 0 <= self.threshold < 0.5:
            raise ConfigError("threshold must be in [0, 0.5)", code="bad-threshold")
        if int(self.house_size) < 1:
            raise ConfigError("house_size must be positive", code="bad-house-size")
        if self.method not in DIVISORS:
            raise ConfigError(
                "unknown apportionment method %r" % self.method, code="bad-method"
            )

    @property
    def divisor(self):
        return DIVISORS[self.method]

    @property
    def majority_seats(self):
        """Smallest seat count that is a majority."""
        return self.house_size // 2 + 1


@dataclass(frozen=True)
class EligibleShares:
    """Renormalized shares of the parties that passed the threshold."""

    shares: Mapping[str, float]
    hung: bool


@dataclass(frozen=True)
class SeatAllocation:
    seats: Mapping[str, int]
    eligible: FrozenSet[str]

    @property
    def hung(self):
        return not self.eligible

    @property
    def total(self):
        return sum(self.seats.values())


def threshold_matrix(draws, rules, other_index):
    """Apply the threshold to every row of a share matrix.

    :param draws: ``(m, K)`` array of share vectors.
    :param rules: :class:`ElectionRules`.
    :param int other_index: Column of the "other" bucket, never eligible.
    :return: ``(renormalized, eligible)``; rows without an eligible party are
        all zero in ``renormalized``.
    """
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    eligible = draws >= rules.threshold
    if other_index is not None:
        eligible[:, other_index] = False
    kept = np.where(eligible, draws, 0.0)
    totals = kept.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        renormalized = np.where(totals > 0, kept / totals, 0.0)
    # A party passing with an exact zero share cannot be renormalized
    eligible &= totals > 0
    return renormalized, eligible


def allocate_matrix(shares, eligible, rules):
    """Highest-averages apportionment of ``rules.house_size`` seats per row.

    Starts from the rounded quota, which is already a valid apportionment of
    its own total, then moves single seats until the total matches and no
    unawarded quotient outranks an awarded one. Quotients are ranked by
    value, ties by lower column index, which reproduces the sequential
    highest-averages procedure with registry-order tie-breaks.

    :param shares: ``(m, K)`` renormalized eligible shares.
    :param eligible: ``(m, K)`` boolean mask.
    :rtype: ``(m, K)`` :py:class:`numpy.ndarray` of int64
    """
    shares = np.atleast_2d(np.asarray(shares, dtype=float))
    eligible = np.atleast_2d(np.asarray(eligible, dtype=bool))
    house = int(rules.house_size)
    divisor = rules.divisor
    offset = _ROUNDING_OFFSET[rules.method]

    seats = np.floor(shares * house + offset).astype(np.int64)
    seats[~eligible] = 0
    active = eligible.any(axis=1)
    values = np.where(eligible, shares, -np.inf)
    columns = shares.shape[1]
    reversed_columns = np.arange(columns)[::-1]

    rows = np.nonzero(active)[0]
    while rows.size:
        sub_seats = seats[rows]
        sub_values = values[rows]
        sub_eligible = eligible[rows]
        next_quotient = np.where(
            sub_eligible, sub_values / divisor(sub_seats), -np.inf
        )
        with np.errstate(divide="ignore"):
            last_quotient = np.where(
                sub_eligible & (sub_seats > 0),
                sub_values / divisor(sub_seats - 1),
                np.inf,
            )
        # argmax picks the lowest index on ties, the reversed argmin the highest
        best = np.argmax(next_quotient, axis=1)
        worst = reversed_columns[np.argmin(last_quotient[:, ::-1], axis=1)]
        index = np.arange(rows.size)
        best_value = next_quotient[index, best]
        worst_value = last_quotient[index, worst]

        total = sub_seats.sum(axis=1)
        deficit = total < house
        surplus = total > house
        swap = (~deficit & ~surplus) & (
            (best_value > worst_value) | ((best_value == worst_value) & (best < worst))
        )
        grow = deficit | swap
        shrink = surplus | swap
        sub_seats[index[grow], best[grow]] += 1
        sub_seats[index[shrink], worst[shrink]] -= 1
        seats[rows] = sub_seats
        rows = rows[grow | shrink]
    return seats


def apply_threshold(shares, rules, other_bucket_id=None):
    """Drop sub-threshold parties and the other bucket, renormalize the rest.

    A party exactly at the threshold passes (the comparison is strict:
    ``share < threshold`` drops).

    :param shares: Party id to share, in registry order, summing to 1.
    :param rules: :class:`ElectionRules`.
    :param other_bucket_id: Id of the residual bucket; defaults to the last
        party of ``shares``.
    :rtype: :class:`EligibleShares`
    """
    party_ids = list(shares)
    if other_bucket_id is None:
        other_bucket_id = party_ids[-1]
    vector = np.array([shares[p] for p in party_ids], dtype=float)
    other_index = party_ids.index(other_bucket_id)
    renormalized, eligible = threshold_matrix(vector, rules, other_index)
    kept = {
        p: float(renormalized[0, i]) for i, p in enumerate(party_ids) if eligible[0, i]
    }
    return EligibleShares(shares=kept, hung=not kept)


def allocate_seats(eligible_shares, rules, party_ids=None):
    """Apportion the house among eligible parties.

    :param eligible_shares: :class:`EligibleShares` or a party to share
        mapping of eligible parties; its order is the tie-break order.
    :param rules: :class:`ElectionRules`.
    :param party_ids: Full party order of the result; defaults to the
        eligible parties.
    :rtype: :class:`SeatAllocation`
    """
    if isinstance(eligible_shares, EligibleShares):
        eligible_shares = eligible_shares.shares
    if party_ids is None:
        party_ids = list(eligible_shares)
    party_ids = list(party_ids)
    vector = np.array([eligible_shares.get(p, 0.0) for p in party_ids], dtype=float)
    mask = np.array([p in eligible_shares for p in party_ids], dtype=bool)
    total = vector.sum()
    if total > 0:
        vector = vector / total
    else:
        mask[:] = False
    seats = allocate_matrix(vector[None, :], mask[None, :], rules)[0]
    return SeatAllocation(
        seats={p: int(s) for p, s in zip(party_ids, seats)},
        eligible=frozenset(p for p, keep in zip(party_ids, mask) if keep),
    )


def _check_members(alloc, coalition):
    unknown = [p for p in coalition if p not in alloc.seats]
    if unknown:
        raise ModelError(
            "unknown party id(s): %s" % ", ".join(sorted(unknown)),
            code="unknown-party",
        )


def coalition_seats(alloc, coalition):
    """Sum of the seats held by the coalition members."""
    _check_members(alloc, coalition)
    return sum(alloc.seats[p] for p in coalition)


def has_majority(seats, rules):
    """True iff ``seats`` is strictly more than half of the house."""
    return 2 * seats > rules.house_size


def subset_sufficient(alloc, coalition, rules):
    """True iff a proper subset of the coalition already holds a majority.

    Checks the maximum over all proper subsets. Since seats are never
    negative this maximum is the coalition total minus its smallest member,
    which :func:`subset_sufficient_matrix` uses for whole simulations.
    """
    members = list(dict.fromkeys(coalition))
    if not members:
        raise ModelError("coalition needs at least one party", code="empty-coalition")
    _check_members(alloc, members)
    best = 0
    for size in range(1, len(members)):
        for subset in itertools.combinations(members, size):
            best = max(best, sum(alloc.seats[p] for p in subset))
    return has_majority(best, rules)


def majority_matrix(seats, columns, rules):
    """Per-row coalition majority for a seat matrix."""
    return 2 * seats[:, columns].sum(axis=1) > rules.house_size


def subset_sufficient_matrix(seats, columns, rules):
    """Per-row "a proper subset already has a majority" for a seat matrix."""
    if len(columns) < 2:
        return np.zeros(seats.shape[0], dtype=bool)
    member_seats = seats[:, columns]
    best_subset = member_seats.sum(axis=1) - member_seats.min(axis=1)
    return 2 * best_subset > rules.house_size
