"""Command line front end of koalition_py.

    ``koalition-py nowcast|forecast|plot|parliaments`` reads a poll table and
    a configuration file, runs the engine and writes a JSON report or an SVG
    figure. Errors are written to standard error as one JSON object per line
    and mapped to the exit codes 1 (usage), 2 (data) and 3 (config).

.. platform:: Unix, Windows, Mac
"""

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np
from loguru import logger

from . import svg_graph
from .config import load_config
from .data_access import CONFIG_DATA_FILE, get_data_path, read_polls
from .errors import DataError, KoalitionError, UsageError
from .forecast import (
    DEFAULT_GRID_DAYS,
    ForecastSpec,
    fan_chart_data,
    forecast_distribution_series,
    inflate,
    shrink_factor,
)
from .poe_engine import (
    DEFAULT_PARLIAMENTS,
    EventKind,
    EventSpec,
    check_draws,
    distribution_of,
    distribution_series,
    evaluate_poe,
    nearest_rank,
    poe_series,
    sample_parliaments,
    simulate,
)
from .posterior import posterior_from

PROGRAM = "koalition-py"
LOG_LEVEL_VARIABLE = "KOALITION_LOG_LEVEL"
DECIMALS = 6

CAVEAT = (
    "The forecast widens the nowcast with the time left until election day. "
    "Events that have not happened yet are not modelled and can move the "
    "result beyond the reported bands."
)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        error = UsageError(message)
        error.usage = self.format_usage().strip()
        raise error


def _date(text):
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError("invalid date %r, expected YYYY-MM-DD" % text)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("%r is not a positive integer" % text)
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def build_parser():
    parser = _ArgumentParser(
        prog=PROGRAM,
        description="Nowcasts and forecasts of coalition majorities from polls.",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    common = _ArgumentParser(add_help=False)
    common.add_argument("--polls", required=True, type=Path, metavar="FILE")
    common.add_argument(
        "--config",
        type=Path,
        default=get_data_path(CONFIG_DATA_FILE),
        metavar="FILE",
        help="INI configuration (default: the bundled Bundestag example)",
    )
    common.add_argument(
        "--as-of", type=_date, metavar="DATE", help="default: date of the newest poll"
    )
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--draws", type=_positive, metavar="INT")
    common.add_argument("--workers", type=_positive, metavar="N")
    common.add_argument("--out", type=Path, metavar="PATH")
    common.add_argument("--coalition", metavar="NAME")
    common.add_argument("--verbose", action="store_true")

    commands.add_parser("nowcast", parents=[common], help="PoE of every coalition")
    forecast = commands.add_parser(
        "forecast", parents=[common], help="PoE on election day"
    )
    forecast.add_argument("--election-date", type=_date, metavar="DATE")

    plot = commands.add_parser("plot", parents=[common], help="render an SVG figure")
    plot.add_argument("--figure", required=True, choices=svg_graph.FIGURES)
    plot.add_argument("--election-date", type=_date, metavar="DATE")
    plot.add_argument("--scale", choices=("logit", "linear"), default="logit")
    plot.add_argument("--grid-days", type=_positive, default=DEFAULT_GRID_DAYS)
    plot.add_argument("--k", type=_positive, default=DEFAULT_PARLIAMENTS)

    parliaments = commands.add_parser(
        "parliaments", parents=[common], help="simulated parliaments"
    )
    parliaments.add_argument("--k", type=_positive, default=DEFAULT_PARLIAMENTS)
    return parser


def configure_logging(verbose=False):
    """Route every log record to standard error as one JSON object per line."""
    level = os.environ.get(LOG_LEVEL_VARIABLE) or ("INFO" if verbose else "WARNING")
    logger.remove()
    try:
        logger.add(sys.stderr, level=level.upper(), serialize=True)
    except ValueError:
        logger.add(sys.stderr, level="WARNING", serialize=True)
        raise UsageError("unknown log level %r in %s" % (level, LOG_LEVEL_VARIABLE))


def rounded(value):
    """Round floats of a JSON-ready structure to the report precision."""
    if isinstance(value, dict):
        return {key: rounded(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [rounded(item) for item in value]
    if isinstance(value, (float, np.floating)):
        return round(float(value), DECIMALS)
    if isinstance(value, np.integer):
        return int(value)
    return value


def to_json(report):
    return json.dumps(rounded(report), sort_keys=True, indent=2) + "\n"


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


class _Run:
    """Inputs of one command resolved from the flags and the configuration."""

    def __init__(self, args):
        self.args = args
        self.config = load_config(args.config)
        self.registry = self.config.registry
        self.polls = read_polls(args.polls, self.registry)
        if not self.polls:
            raise DataError(
                "poll file holds no polls", code="no-polls", path=args.polls
            )
        self.as_of = args.as_of or self.polls[-1].publish_date
        self.seed = args.seed
        self.m = args.draws or self.config.draws
        self.workers = args.workers or self.config.workers
        self.rules = self.config.rules
        self.pooling = self.config.pooling
        self.prior_alpha = self.config.prior_alpha
        logger.info(
            "{} seed={} m={} window={} as_of={}",
            args.command,
            self.seed,
            self.m,
            self.pooling.window_days,
            self.as_of,
        )

    @property
    def election_date(self):
        date = getattr(self.args, "election_date", None) or self.config.election_date
        if date is None:
            raise UsageError("--election-date is required (or [model] election_date)")
        return date

    @property
    def coalition(self):
        return self.config.coalition(self.args.coalition)

    @property
    def coalition_name(self):
        return self.args.coalition or next(iter(self.config.coalitions))

    def pooled(self):
        return self.pooling.pool(self.polls, self.as_of, registry=self.registry)

    def history_dates(self):
        """Dates every ``grid_days`` back from ``as_of`` to the first poll."""
        step = datetime.timedelta(days=self.args.grid_days)
        first = self.polls[0].publish_date
        dates = []
        date = self.as_of
        while date >= first:
            dates.append(date)
            date -= step
        return sorted(dates)

    def header(self):
        return {
            "command": self.args.command,
            "as_of": self.as_of.isoformat(),
            "seed": self.seed,
            "m": self.m,
            "window_days": self.pooling.window_days,
            "dependence_factor": self.pooling.dependence_factor,
            "prior_alpha": self.prior_alpha,
            "threshold": self.rules.threshold,
            "house_size": self.rules.house_size,
            "method": self.rules.method,
        }


def probability_report(run, posterior, pooled):
    """Coalition PoEs, party intervals and entry probabilities on shared draws."""
    check_draws(run.m)
    simulation = simulate(posterior, run.rules, run.m, run.seed, workers=run.workers)
    coalitions = {}
    for name, members in run.config.coalitions.items():
        result = evaluate_poe(simulation, EventSpec.coalition(members))
        coalitions[name] = {
            "parties": list(members),
            "probability": result.probability,
            "mc_stderr": result.mc_stderr,
            "subset_probability": result.subset_probability,
        }
    parties = {}
    mean = posterior.mean()
    for column, party_id in enumerate(simulation.party_ids):
        ordered = np.sort(simulation.shares[:, column])
        entry = {
            "mean": mean[party_id],
            "low": nearest_rank(ordered, 0.025),
            "high": nearest_rank(ordered, 0.975),
        }
        if party_id != run.registry.other_bucket_id:
            event = EventSpec(EventKind.PARTY_ABOVE_THRESHOLD, (party_id,))
            entry["entry_probability"] = evaluate_poe(simulation, event).probability
        parties[party_id] = entry
    return {
        "coalitions": coalitions,
        "parties": parties,
        "diagnostics": {
            "polls_used": [
                {"pollster": pollster, "date": date.isoformat()}
                for pollster, date in pooled.polls_used
            ],
            "n_eff": pooled.n_eff,
            "hung_fraction": simulation.hung_fraction,
        },
    }


def nowcast(run):
    pooled = run.pooled()
    posterior = posterior_from(pooled, run.prior_alpha)
    report = run.header()
    report.update(probability_report(run, posterior, pooled))
    return to_json(report)


def forecast(run):
    spec = ForecastSpec(run.election_date, run.as_of, run.config.tau)
    pooled = run.pooled()
    posterior = inflate(posterior_from(pooled, run.prior_alpha), spec, run.prior_alpha)
    report = run.header()
    report.update(probability_report(run, posterior, pooled))
    report.update(
        {
            "election_date": spec.election_date.isoformat(),
            "horizon_days": spec.horizon,
            "tau": spec.tau,
            "shrink_factor": shrink_factor(spec.horizon, spec.tau),
            "caveat": CAVEAT,
        }
    )
    return to_json(report)


def parliaments(run):
    posterior = posterior_from(run.pooled(), run.prior_alpha)
    allocs = sample_parliaments(
        posterior, run.rules, k=run.args.k, seed=run.seed, workers=run.workers
    )
    members = run.coalition if run.config.coalitions else ()
    report = run.header()
    report["m"] = len(allocs)
    report["parliaments"] = [
        {
            "seats": dict(alloc.seats),
            "hung": alloc.hung,
            "coalition_seats": sum(alloc.seats[p] for p in members),
        }
        for alloc in allocs
    ]
    return to_json(report)


def plot(run):
    """Render the figure named by ``--figure``."""
    theme = svg_graph.Theme.from_registry(run.registry)
    figure = run.args.figure
    if figure == "classic":
        known = [poll for poll in run.polls if poll.publish_date <= run.as_of]
        if not known:
            raise UsageError("no poll published on or before %s" % run.as_of)
        return svg_graph.render_classic_bars(known[-1], theme).text

    if figure == "fan":
        spec = ForecastSpec(run.election_date, run.as_of, run.config.tau)
        known = [poll for poll in run.polls if poll.publish_date <= run.as_of]
        fan = fan_chart_data(
            known,
            run.rules,
            spec,
            run.pooling,
            grid_days=run.args.grid_days,
            m=run.m,
            seed=run.seed,
            prior_alpha=run.prior_alpha,
            registry=run.registry,
            workers=run.workers,
        )
        return svg_graph.render_fan_chart(fan, known, theme).text

    coalition = run.coalition
    if figure in ("ridgeline", "poe-timeline", "forecast-ridgeline"):
        dates = run.history_dates()
        arguments = dict(
            pooling=run.pooling,
            m=run.m,
            seed=run.seed,
            prior_alpha=run.prior_alpha,
            registry=run.registry,
            workers=run.workers,
        )
        if figure == "poe-timeline":
            series = poe_series(
                run.polls,
                dates,
                run.rules,
                EventSpec.coalition(coalition),
                **arguments
            )
            return svg_graph.render_poe_timeline(series, theme, run.args.scale).text
        nowcasts = distribution_series(
            run.polls, dates, run.rules, coalition, **arguments
        )
        if figure == "ridgeline":
            return svg_graph.render_ridgeline(nowcasts, theme).text
        forecasts = forecast_distribution_series(
            run.polls,
            nowcasts.dates,
            run.rules,
            coalition,
            run.election_date,
            tau=run.config.tau,
            **arguments
        )
        return svg_graph.render_forecast_ridgeline(nowcasts, forecasts, theme).text

    posterior = posterior_from(run.pooled(), run.prior_alpha)
    if figure == "parliaments":
        allocs = sample_parliaments(
            posterior, run.rules, k=run.args.k, seed=run.seed, workers=run.workers
        )
        return svg_graph.render_parliaments(
            allocs, coalition, run.registry, theme, seed=run.seed, as_of=run.as_of
        ).text

    check_draws(run.m)
    simulation = simulate(posterior, run.rules, run.m, run.seed, workers=run.workers)
    if figure == "density":
        dist = distribution_of(simulation, coalition)
        return svg_graph.render_seat_density(
            dist, theme, as_of=run.as_of, title=run.coalition_name
        ).text
    results = [
        (members, evaluate_poe(simulation, EventSpec.coalition(members)))
        for members in run.config.coalitions.values()
    ]
    return svg_graph.render_poe_bars(
        results, run.registry, theme, posterior.mean(), as_of=run.as_of
    ).text


COMMANDS = {
    "nowcast": nowcast,
    "forecast": forecast,
    "parliaments": parliaments,
    "plot": plot,
}


def _report_error(body):
    sys.stderr.write(json.dumps(body, sort_keys=True) + "\n")


def run(argv=None):
    """Run one command and return the process exit code.

    :param argv: Arguments without the program name; defaults to ``sys.argv``.
    :rtype: :py:class:`int`
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        _write(COMMANDS[args.command](_Run(args)), args.out)
    except SystemExit as stop:
        return stop.code or 0
    except KoalitionError as error:
        body = error.to_dict()
        usage = getattr(error, "usage", None)
        if usage:
            body["usage"] = usage
        _report_error(body)
        return error.exit_code
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
