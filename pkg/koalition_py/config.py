"""Module to read and write the run configuration.

    The configuration is an INI file with the sections ``parties``,
    ``registry``, ``rules``, ``pooling``, ``model`` and ``coalitions``.
    An annotated example ships as ``koalition_py/data/bundestag.cfg``::

        [parties]
        CDU = CDU/CSU | #000000
        SPD = SPD | #e3000f
        other = Other | #bbbbbb

        [registry]
        other_bucket = other

        [rules]
        threshold = 0.05
        house_size = 598
        method = sainte-lague

        [coalitions]
        grand = CDU, SPD

    Keys are case sensitive. Absent keys take the package defaults.

.. platform:: Unix, Windows, Mac
"""

import configparser
import datetime
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Tuple

from .data_access import Party, PartyRegistry
from .electoral import DEFAULT_HOUSE_SIZE, DEFAULT_THRESHOLD, ElectionRules
from .errors import ConfigError
from .forecast import DEFAULT_TAU
from .pooling import DEFAULT_DEPENDENCE_FACTOR, DEFAULT_WINDOW_DAYS, PoolingConfig
from .posterior import DEFAULT_DRAWS, DEFAULT_PRIOR_ALPHA

SECTIONS = {
    "parties": None,
    "registry": ("other_bucket",),
    "rules": ("threshold", "house_size", "method"),
    "pooling": ("window_days", "dependence_factor"),
    "model": ("prior_alpha", "draws", "tau", "workers", "election_date"),
    "coalitions": None,
}


@dataclass(frozen=True)
class Config:
    """Everything a run needs besides the poll file and the command line.

    :param coalitions: Coalition name to member party ids, in display order.
    """

    registry: PartyRegistry
    rules: ElectionRules = ElectionRules()
    pooling: PoolingConfig = PoolingConfig()
    prior_alpha: float = DEFAULT_PRIOR_ALPHA
    draws: int = DEFAULT_DRAWS
    tau: float = DEFAULT_TAU
    workers: int = 1
    election_date: Optional[datetime.date] = None
    coalitions: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.prior_alpha > 0:
            raise ConfigError("prior_alpha must be positive", code="bad-prior")
        if self.draws < 1:
            raise ConfigError("draws must be positive", code="bad-value")
        if not self.tau > 0:
            raise ConfigError("tau must be positive", code="bad-tau")
        if self.workers < 1:
            raise ConfigError("workers must be positive", code="bad-value")
        for name, members in self.coalitions.items():
            if not members:
                raise ConfigError(
                    "coalition %r has no members" % name, code="empty-coalition"
                )
            unknown = [p for p in members if p not in self.registry.named_ids]
            if unknown:
                raise ConfigError(
                    "coalition %r names unknown party id(s): %s"
                    % (name, ", ".join(unknown)),
                    code="unknown-party",
                )

    def coalition(self, name=None):
        """Members of the named coalition, or of the first one when ``name`` is
        ``None``.
        """
        if not self.coalitions:
            raise ConfigError("no coalitions configured", code="unknown-coalition")
        if name is None:
            name = next(iter(self.coalitions))
        if name not in self.coalitions:
            raise ConfigError("unknown coalition %r" % name, code="unknown-coalition")
        return self.coalitions[name]


def _parser():
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str
    return parser


def _value(parser, section, key, convert, default, path):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key).strip()
    try:
        return convert(raw)
    except ValueError:
        raise ConfigError(
            "[%s] %s: invalid value %r" % (section, key, raw),
            code="bad-value",
            path=path,
        )


def _parse_party(party_id, raw, path):
    name, sep, color = raw.partition("|")
    if not sep:
        raise ConfigError(
            "[parties] %s: expected 'Display Name | #RRGGBB'" % party_id,
            code="bad-value",
            path=path,
        )
    return Party(party_id, name.strip(), color.strip())


def parse_config(text, path=None):
    """Parse configuration text.

    :param str text: INI document.
    :param path: File the text came from, for error messages.
    :rtype: :class:`Config`
    :raises ConfigError: On syntax errors, unknown sections or keys, invalid
        values or coalitions naming unknown parties.
    """
    parser = _parser()
    try:
        parser.read_string(text, source=str(path) if path else "<config>")
    except configparser.Error as error:
        raise ConfigError(str(error).splitlines()[0], code="syntax", path=path)

    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(
                "unknown section [%s]" % section, code="bad-key", path=path
            )
        allowed = SECTIONS[section]
        if allowed is None:
            continue
        for key in parser.options(section):
            if key not in allowed:
                raise ConfigError(
                    "unknown key %r in [%s]" % (key, section), code="bad-key", path=path
                )

    if not parser.has_section("parties") or not parser.options("parties"):
        raise ConfigError("[parties] must list at least one party", path=path)
    parties = tuple(
        _parse_party(party_id, parser.get("parties", party_id), path)
        for party_id in parser.options("parties")
    )
    other = _value(parser, "registry", "other_bucket", str, parties[-1].id, path)
    try:
        registry = PartyRegistry(parties, other)
    except ValueError as error:
        raise ConfigError(str(error), code="bad-registry", path=path)

    try:
        return _build(parser, registry, path)
    except ConfigError as error:
        error.path = path
        raise


def _build(parser, registry, path):
    rules = ElectionRules(
        threshold=_value(parser, "rules", "threshold", float, DEFAULT_THRESHOLD, path),
        house_size=_value(parser, "rules", "house_size", int, DEFAULT_HOUSE_SIZE, path),
        method=_value(parser, "rules", "method", str, "sainte-lague", path),
    )
    pooling = PoolingConfig(
        window_days=_value(
            parser, "pooling", "window_days", int, DEFAULT_WINDOW_DAYS, path
        ),
        dependence_factor=_value(
            parser,
            "pooling",
            "dependence_factor",
            float,
            DEFAULT_DEPENDENCE_FACTOR,
            path,
        ),
    )
    coalitions = {}
    if parser.has_section("coalitions"):
        for name in parser.options("coalitions"):
            raw = parser.get("coalitions", name)
            coalitions[name] = tuple(p.strip() for p in raw.split(",") if p.strip())

    return Config(
        registry=registry,
        rules=rules,
        pooling=pooling,
        prior_alpha=_value(
            parser, "model", "prior_alpha", float, DEFAULT_PRIOR_ALPHA, path
        ),
        draws=_value(parser, "model", "draws", int, DEFAULT_DRAWS, path),
        tau=_value(parser, "model", "tau", float, DEFAULT_TAU, path),
        workers=_value(parser, "model", "workers", int, 1, path),
        election_date=_value(
            parser, "model", "election_date", datetime.date.fromisoformat, None, path
        ),
        coalitions=coalitions,
    )


def load_config(path):
    """Read a configuration file.

    :param path: Path of the INI file.
    :rtype: :class:`Config`
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise ConfigError(
            "cannot read config: %s" % error.strerror, code="io", path=path
        )
    return parse_config(text, path=path)


def dump_config(config):
    """Write a configuration back to INI text; parses to an equal :class:`Config`."""
    parser = _parser()
    parser["parties"] = {
        party.id: "%s | %s" % (party.name, party.color)
        for party in config.registry.parties
    }
    parser["registry"] = {"other_bucket": config.registry.other_bucket_id}
    parser["rules"] = {
        "threshold": repr(float(config.rules.threshold)),
        "house_size": str(int(config.rules.house_size)),
        "method": config.rules.method,
    }
    parser["pooling"] = {
        "window_days": str(int(config.pooling.window_days)),
        "dependence_factor": repr(float(config.pooling.dependence_factor)),
    }
    model = {
        "prior_alpha": repr(float(config.prior_alpha)),
        "draws": str(int(config.draws)),
        "tau": repr(float(config.tau)),
        "workers": str(int(config.workers)),
    }
    if config.election_date is not None:
        model["election_date"] = config.election_date.isoformat()
    parser["model"] = model
    parser["coalitions"] = {
        name: ", ".join(members) for name, members in config.coalitions.items()
    }
    lines = []
    for section in parser.sections():
        lines.append("[%s]" % section)
        lines += ["%s = %s" % (k, v) for k, v in parser.items(section)]
        lines.append("")
    return "\n".join(lines)
