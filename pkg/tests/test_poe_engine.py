import datetime

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.special import betainc

from koalition_py.data_access import Poll, validate_poll
from koalition_py.electoral import ElectionRules
from koalition_py.errors import InsufficientDrawsError, ModelError
from koalition_py.poe_engine import (
    DENSITY_GRID_POINTS,
    EventKind,
    EventSpec,
    estimate_poe,
    estimate_poes,
    poe_series,
    sample_parliaments,
    seat_distribution,
    simulate,
    tail_cut,
)
from koalition_py.pooling import PoolingConfig
from koalition_py.posterior import DirichletPosterior


def random_posterior(rng, parties=("A", "B", "C", "D", "E", "other")):
    alpha = rng.uniform(20, 400, size=len(parties))
    return DirichletPosterior(alpha=dict(zip(parties, alpha.tolist())))


def test_event_and_complement_add_up_to_one(nowcast):
    rules = ElectionRules()
    event = EventSpec.coalition(("CDU", "SPD"))
    result, complement = estimate_poes(
        nowcast, rules, [event, event.complement()], m=100000, seed=42
    )
    hits = round(result.probability * result.m)
    misses = round(complement.probability * complement.m)
    assert hits + misses == 100000
    assert result.probability + complement.probability == pytest.approx(1.0, abs=1e-12)


def test_two_outcome_split_is_an_exact_identity():
    rules = ElectionRules(threshold=0.0, house_size=599)
    posterior = DirichletPosterior(alpha={"A": 480.0, "B": 500.0, "other": 1.0})
    event = EventSpec.coalition(("A",))
    result, complement = estimate_poes(
        posterior, rules, [event, event.complement()], m=100000, seed=286
    )
    assert 0.2 < result.probability < 0.4
    assert result.probability + complement.probability == pytest.approx(1.0, abs=1e-12)


def test_two_party_majority_matches_beta_tail():
    rng = np.random.default_rng(20)
    # With an odd house, two parties and no threshold the larger party
    # holds the majority, and A / (A + B) is Beta(a, b) distributed
    rules = ElectionRules(threshold=0.0, house_size=599)
    m = 100000
    for trial in range(20):
        a, b = rng.uniform(50, 600, size=2)
        posterior = DirichletPosterior(alpha={"A": a, "B": b, "other": 2.0})
        result = estimate_poe(
            posterior, rules, EventSpec.coalition(("A",)), m=m, seed=trial
        )
        exact = 1.0 - betainc(a, b, 0.5)
        tolerance = max(3 * np.sqrt(exact * (1 - exact) / m), 1.0 / m)
        assert abs(result.probability - exact) <= tolerance


def test_superset_never_less_likely_than_subset():
    rng = np.random.default_rng(5)
    rules = ElectionRules()
    pairs = [
        (("A",), ("A", "B")),
        (("A", "B"), ("A", "B", "C")),
        (("B", "D"), ("B", "C", "D", "E")),
    ]
    for trial in range(100):
        posterior = random_posterior(rng)
        events = [EventSpec.coalition(c) for pair in pairs for c in pair]
        results = estimate_poes(posterior, rules, events, m=1000, seed=trial)
        for index in range(0, len(results), 2):
            assert results[index + 1].probability >= results[index].probability


def test_subset_probability_is_bounded_by_probability():
    rng = np.random.default_rng(9)
    rules = ElectionRules()
    for trial in range(20):
        result = estimate_poe(
            random_posterior(rng),
            rules,
            EventSpec.coalition(("A", "B", "C")),
            m=2000,
            seed=trial,
        )
        assert 0.0 <= result.subset_probability <= result.probability <= 1.0


def test_party_below_threshold_never_gets_seats(point_mass):
    rules = ElectionRules()
    posterior = point_mass({"A": 0.04999, "B": 0.5, "C": 0.35001, "other": 0.1})
    simulation = simulate(posterior, rules, m=1000, seed=1)
    assert (simulation.seats[:, 0] == 0).all()
    entry = estimate_poe(
        posterior,
        rules,
        EventSpec(EventKind.PARTY_ABOVE_THRESHOLD, ("A",)),
        m=1000,
        seed=1,
    )
    assert entry.probability == 0.0


def test_hung_parliament_has_no_majority(point_mass):
    rules = ElectionRules()
    posterior = point_mass({"A": 0.04, "B": 0.04, "C": 0.04, "other": 0.88})
    simulation = simulate(posterior, rules, m=1000, seed=2)
    assert simulation.hung_fraction == 1.0
    result = estimate_poe(
        posterior, rules, EventSpec.coalition(("A", "B", "C")), m=1000, seed=2
    )
    assert result.probability == 0.0


def test_strongest_party_event(point_mass):
    rules = ElectionRules()
    posterior = point_mass({"A": 0.2, "B": 0.45, "C": 0.25, "other": 0.1})
    strongest = EventSpec(EventKind.STRONGEST_PARTY, ("B",))
    assert estimate_poe(posterior, rules, strongest, m=1000, seed=0).probability == 1


def test_too_few_draws():
    posterior = DirichletPosterior(alpha={"A": 10.0, "other": 10.0})
    with pytest.raises(InsufficientDrawsError) as info:
        estimate_poe(posterior, ElectionRules(), EventSpec.coalition(("A",)), 999, 0)
    assert info.value.exit_code == 1


@pytest.mark.parametrize(
    "kind, parties",
    [(EventKind.COALITION_MAJORITY, ()), (EventKind.STRONGEST_PARTY, ("A", "B"))],
)
def test_malformed_events(kind, parties):
    with pytest.raises(ModelError):
        EventSpec(kind, parties)


def test_unknown_party_in_event(nowcast):
    with pytest.raises(ModelError) as info:
        estimate_poe(nowcast, ElectionRules(), EventSpec.coalition(("X",)), 1000, 0)
    assert info.value.code == "unknown-party"


def test_thread_count_does_not_change_estimates(nowcast):
    event = EventSpec.coalition(("CDU", "SPD"))
    single = estimate_poe(nowcast, ElectionRules(), event, 10000, 42, workers=1)
    threaded = estimate_poe(nowcast, ElectionRules(), event, 10000, 42, workers=3)
    assert single == threaded


def test_seat_distribution(nowcast):
    rules = ElectionRules()
    coalition = ("CDU", "SPD")
    dist = seat_distribution(nowcast, rules, coalition, m=5000, seed=4)
    poe = estimate_poe(nowcast, rules, EventSpec.coalition(coalition), 5000, 4)
    grid, heights = dist.density
    assert grid.shape == heights.shape == (DENSITY_GRID_POINTS,)
    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert trapezoid(heights, grid) == pytest.approx(1.0, abs=0.02)
    assert dist.ci95[0] <= dist.ci95[1]
    assert dist.majority_mass == poe.probability
    assert ((dist.draws >= 0) & (dist.draws <= 1)).all()


def test_degenerate_distribution_keeps_a_bandwidth(point_mass):
    rules = ElectionRules()
    posterior = point_mass({"A": 0.04, "B": 0.04, "other": 0.92})
    dist = seat_distribution(posterior, rules, ("A", "B"), m=1000, seed=0)
    assert dist.ci95 == (0.0, 0.0)
    assert dist.majority_mass == 0.0
    assert np.isfinite(dist.density[1]).all()


def tail_area(grid, heights, cut):
    upper = grid > cut
    x = np.concatenate([[cut], grid[upper]])
    y = np.concatenate([[np.interp(cut, grid, heights)], heights[upper]])
    return trapezoid(y, x) / trapezoid(heights, grid)


@pytest.mark.parametrize(
    "heights, mass, cut",
    [
        ([1.0, 1.0, 1.0], 0.3, 0.7),
        ([0.0, 2.0, 0.0], 0.08, 0.8),
        ([0.0, 2.0, 0.0], 1.0, 0.0),
        ([0.0, 2.0, 0.0], 0.0, 1.0),
    ],
)
def test_tail_cut(heights, mass, cut):
    grid = np.linspace(0.0, 1.0, len(heights))
    assert tail_cut(grid, np.array(heights), mass) == pytest.approx(cut)


def test_majority_cut_holds_the_majority_mass():
    # 299 of 598 seats is half the house but not a majority
    rules = ElectionRules()
    posterior = DirichletPosterior(
        alpha={"A": 4700.0, "B": 4700.0, "C": 300.0, "other": 300.0}
    )
    for m in (2000, 20000):
        dist = seat_distribution(posterior, rules, ("A",), m=m, seed=9)
        grid, heights = dist.density
        assert 0 < dist.majority_mass < 1
        assert tail_area(grid, heights, dist.majority_cut) == pytest.approx(
            dist.majority_mass, abs=1e-6
        )


def test_sample_parliaments(nowcast):
    allocs = sample_parliaments(nowcast, ElectionRules(), k=6, seed=42)
    assert len(allocs) == 6
    for alloc in allocs:
        assert alloc.total == 598
        assert "other" not in alloc.eligible


def test_poe_series_skips_dates_without_polls(small_registry):
    registry = small_registry
    shares = {"A": 0.5, "B": 0.3, "C": 0.1}
    polls = [
        validate_poll(Poll("X", datetime.date(2018, 3, day), 1000, shares), registry)
        for day in (1, 8)
    ]
    dates = [
        datetime.date(2018, 2, 1),
        datetime.date(2018, 3, 2),
        datetime.date(2018, 3, 9),
    ]
    series = poe_series(
        polls,
        dates,
        ElectionRules(),
        EventSpec.coalition(("A",)),
        PoolingConfig(),
        m=1000,
        seed=0,
        registry=registry,
    )
    assert series.skipped == [datetime.date(2018, 2, 1)]
    assert series.dates == dates[1:]
    assert all(0 <= result.probability <= 1 for result in series.values)


def test_poe_series_errors(small_registry):
    poll = validate_poll(
        Poll("X", datetime.date(2018, 3, 1), 1000, {"A": 0.5, "B": 0.3, "C": 0.1}),
        small_registry,
    )
    event = EventSpec.coalition(("A",))
    with pytest.raises(ModelError) as info:
        poe_series(
            [poll],
            [datetime.date(2017, 1, 1)],
            ElectionRules(),
            event,
            PoolingConfig(),
            1000,
            0,
        )
    assert info.value.code == "no-data"
    with pytest.raises(ModelError) as info:
        poe_series(
            [poll],
            [datetime.date(2018, 3, 2), datetime.date(2018, 3, 1)],
            ElectionRules(),
            event,
            PoolingConfig(),
            1000,
            0,
        )
    assert info.value.code == "unsorted-dates"


def test_registry_order_does_not_change_poe(nowcast):
    order = ("AfD", "LINKE", "FDP", "GRUENE", "SPD", "CDU", "other")
    permuted = DirichletPosterior(alpha={p: nowcast.alpha[p] for p in order})
    rules = ElectionRules()
    events = [
        EventSpec.coalition(("CDU", "SPD")),
        EventSpec.coalition(("CDU", "GRUENE", "FDP")),
        EventSpec(EventKind.PARTY_ABOVE_THRESHOLD, ("FDP",)),
        EventSpec(EventKind.STRONGEST_PARTY, ("CDU",)),
    ]
    base = estimate_poes(nowcast, rules, events, m=5000, seed=8)
    moved = estimate_poes(permuted, rules, events, m=5000, seed=8)
    for first, second in zip(base, moved):
        assert first.probability == second.probability
        assert first.subset_probability == second.subset_probability


def constant_polls(registry, days):
    shares = {"A": 0.48, "B": 0.3, "C": 0.12}
    return [
        validate_poll(Poll("X", datetime.date(2018, 3, day), 1000, shares), registry)
        for day in days
    ]


def test_poe_series_is_flat_for_constant_polls(small_registry):
    polls = constant_polls(small_registry, range(1, 29, 3))
    dates = [datetime.date(2018, 3, day) for day in range(1, 31)]
    series = poe_series(
        polls,
        dates,
        ElectionRules(),
        EventSpec.coalition(("A",)),
        PoolingConfig(),
        m=2000,
        seed=6,
        registry=small_registry,
    )
    assert series.dates == dates
    assert 0 < series.values[0].probability < 1
    assert all(result == series.values[0] for result in series.values)


def test_dates_with_the_same_window_share_a_poe(small_registry):
    polls = constant_polls(small_registry, [1]) + [
        validate_poll(
            Poll("Y", datetime.date(2018, 3, 2), 800, {"A": 0.5, "B": 0.3}),
            small_registry,
        )
    ]
    # Both windows hold exactly the two polls above
    dates = [datetime.date(2018, 3, 3), datetime.date(2018, 3, 10)]
    first, second = poe_series(
        polls,
        dates,
        ElectionRules(),
        EventSpec.coalition(("A", "C")),
        PoolingConfig(),
        m=2000,
        seed=2,
        registry=small_registry,
    ).values
    assert first == second
