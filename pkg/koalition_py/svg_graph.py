"""Module to render poll and engine outputs as SVG figures.

    Every figure is built from plain elements and written with fixed
    number formatting, so identical inputs give byte-identical documents.
    No statistics are computed here: densities, intervals and probabilities
    come from the engine modules.

    Elements carry stable ``class`` attributes (``bar``, ``poe-bar``,
    ``subset-bar``, ``density``, ``majority``, ``ci95``, ``ridge``, ...)
    so figures can be inspected structurally.

.. platform:: Unix, Windows, Mac
"""

import datetime
import math
import re
from dataclasses import dataclass, field
from typing import Mapping
from xml.sax.saxutils import escape

import numpy as np

from .errors import ConfigError

SVG_NAMESPACE = "http://www.w3.org/2000/svg"

MAJORITY_COLOR = "#3a6fc4"
CI_COLOR = "#ff8c00"
SUBSET_COLOR = "#d3d3d3"
QUARTILE_COLOR = "#888888"
DEFAULT_PARTY_COLOR = "#bbbbbb"
TEXT_COLOR = "#333333"

# Probabilities are clamped to this range before the logit transform
LOGIT_CLAMP = (0.01, 0.99)
TIMELINE_GRIDLINES = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)

MARGIN_LEFT = 90
MARGIN_RIGHT = 30
MARGIN_TOP = 40
MARGIN_BOTTOM = 40

_COLOR_PATTERN = re.compile(r"^#[0-9A-Fa-f]{6}$")


@dataclass(frozen=True)
class Theme:
    """Sizes, fonts and colors shared by all figures.

    :param party_colors: Party id to ``#RRGGBB``.
    :param party_names: Party id to display name.
    """

    width: int = 800
    height: int = 480
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: int = 12
    party_colors: Mapping[str, str] = field(default_factory=dict)
    party_names: Mapping[str, str] = field(default_factory=dict)
    majority_color: str = MAJORITY_COLOR
    ci_color: str = CI_COLOR
    subset_color: str = SUBSET_COLOR
    quartile_color: str = QUARTILE_COLOR
    quartile_dash: str = "4 3"

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.font_size <= 0:
            raise ConfigError("theme dimensions must be positive", code="bad-theme")
        colors = [
            self.majority_color,
            self.ci_color,
            self.subset_color,
            self.quartile_color,
        ] + list(self.party_colors.values())
        for color in colors:
            if not _COLOR_PATTERN.match(color):
                raise ConfigError("invalid color %r" % color, code="bad-theme")

    @classmethod
    def from_registry(cls, registry, **kwargs):
        return cls(
            party_colors={party.id: party.color for party in registry.parties},
            party_names={party.id: party.name for party in registry.parties},
            **kwargs
        )

    def color(self, party_id):
        return self.party_colors.get(party_id, DEFAULT_PARTY_COLOR)

    def name(self, party_id):
        return self.party_names.get(party_id, party_id)


@dataclass(frozen=True)
class SvgDocument:
    text: str

    def __str__(self):
        return self.text


##
# Element builder
##


def number(value):
    """Fixed two-decimal representation, without negative zero."""
    return format(round(float(value), 2) + 0.0, ".2f")


def _attribute_name(key):
    return key.rstrip("_").replace("_", "-")


def _attribute_value(value):
    if isinstance(value, (float, np.floating)):
        return number(value)
    return escape(str(value), {'"': "&quot;"})


class Element:
    def __init__(self, tag, children=None, text=None, **attr):
        self.tag = tag
        self.children = list(children or [])
        self.text = text
        self.attr = attr

    def svg(self):
        props = "".join(
            ' %s="%s"' % (_attribute_name(k), _attribute_value(v))
            for k, v in self.attr.items()
        )
        if not self.children and self.text is None:
            return "<%s%s/>" % (self.tag, props)
        inner = escape(self.text) if self.text is not None else ""
        inner += "".join(child.svg() for child in self.children)
        return "<%s%s>%s</%s>" % (self.tag, props, inner, self.tag)


class Comment(Element):
    def __init__(self, text):
        super().__init__("comment", text=text)

    def svg(self):
        return "<!-- %s -->" % self.text.replace("--", "- -")


def path_data(points, close=False):
    """``M x,y L x,y ...`` for a polyline."""
    parts = []
    for index, (x, y) in enumerate(points):
        parts.append("%s%s,%s" % ("M" if index == 0 else "L", number(x), number(y)))
    if close:
        parts.append("Z")
    return " ".join(parts)


def provenance(seed=None, m=None, as_of=None):
    def show(value):
        if value is None:
            return "none"
        if isinstance(value, datetime.date):
            return value.isoformat()
        return str(value)

    return Comment(
        "koalition seed=%s m=%s as_of=%s" % (show(seed), show(m), show(as_of))
    )


def document(theme, children, width=None, height=None):
    width = theme.width if width is None else width
    height = theme.height if height is None else height
    root = Element(
        "svg",
        xmlns=SVG_NAMESPACE,
        version="1.1",
        width=width,
        height=height,
        viewBox="0 0 %d %d" % (width, height),
        font_family=theme.font_family,
        font_size=theme.font_size,
    )
    head = root.svg()[: -len("/>")] + ">"
    body = "\n".join(child.svg() for child in children)
    return SvgDocument("%s\n%s\n</svg>\n" % (head, body))


def text(x, y, label, anchor="start", **attr):
    return Element(
        "text", text=label, x=float(x), y=float(y), text_anchor=anchor, **attr
    )


def percent(share):
    """Share as a percent label: 0.17 gives ``17%``, 0.325 gives ``32.5%``."""
    label = "%.1f" % (share * 100)
    if label.endswith(".0"):
        label = label[:-2]
    return label + "%"


def _clip(value, low, high):
    return min(max(value, low), high)


class _Frame:
    """Plot area inside the margins, mapping data onto pixels."""

    def __init__(self, left, top, width, height):
        self.left = left
        self.top = top
        self.width = width
        self.height = height

    @property
    def right(self):
        return self.left + self.width

    @property
    def bottom(self):
        return self.top + self.height

    def x(self, fraction):
        return self.left + _clip(fraction, 0.0, 1.0) * self.width

    def y(self, fraction):
        return self.bottom - _clip(fraction, 0.0, 1.0) * self.height


def _frame(theme, width=None, height=None):
    width = theme.width if width is None else width
    height = theme.height if height is None else height
    return _Frame(
        MARGIN_LEFT,
        MARGIN_TOP,
        width - MARGIN_LEFT - MARGIN_RIGHT,
        height - MARGIN_TOP - MARGIN_BOTTOM,
    )


def _date_scale(start, end, frame):
    span = (end - start).days

    def x(date):
        if span <= 0:
            return frame.right
        return frame.x((date - start).days / span)

    return x


##
# Figures
##


def render_classic_bars(poll, theme, title=None):
    """Bar chart of the shares reported by one poll.

    :param poll: :class:`~koalition_py.data_access.Poll`.
    :param theme: :class:`Theme`.
    :rtype: :class:`SvgDocument`
    """
    frame = _frame(theme)
    parties = list(poll.shares)
    slot = frame.width / max(len(parties), 1)
    top = max(max(poll.shares.values(), default=0.0), 1e-9)
    if title is None:
        title = "%s, %s" % (poll.pollster, poll.publish_date.isoformat())
    children = [
        provenance(as_of=poll.publish_date),
        text(frame.left, MARGIN_TOP / 2, title, class_="title"),
        Element(
            "line",
            class_="axis",
            x1=float(frame.left),
            y1=float(frame.bottom),
            x2=float(frame.right),
            y2=float(frame.bottom),
            stroke=TEXT_COLOR,
        ),
    ]
    for index, party_id in enumerate(parties):
        share = poll.shares[party_id]
        height = frame.height * share / top
        x = frame.left + index * slot + slot * 0.15
        children.append(
            Element(
                "rect",
                class_="bar",
                data_party=party_id,
                x=float(x),
                y=float(frame.bottom - height),
                width=float(slot * 0.7),
                height=float(height),
                fill=theme.color(party_id),
            )
        )
        children.append(
            text(
                x + slot * 0.35,
                frame.bottom - height - 4,
                percent(share),
                anchor="middle",
                class_="label",
                data_party=party_id,
            )
        )
        children.append(
            text(
                x + slot * 0.35,
                frame.bottom + 16,
                theme.name(party_id),
                anchor="middle",
                class_="party",
            )
        )
    return document(theme, children)


def _strongest_member(coalition, mean_shares):
    # Ties keep the first member in coalition order
    best = coalition[0]
    for party_id in coalition[1:]:
        if mean_shares.get(party_id, 0.0) > mean_shares.get(best, 0.0):
            best = party_id
    return best


def render_poe_bars(results, registry, theme, mean_shares, as_of=None):
    """Horizontal bars of coalition majority probabilities.

    The bar is colored like the coalition member with the highest posterior
    mean share. A light gray segment from the base marks the probability
    that a proper subset of the coalition already has a majority.

    :param results: Sequence of ``(coalition, PoEResult)``; coalitions are
        tuples of party ids.
    :param registry: :class:`~koalition_py.data_access.PartyRegistry` used
        for the member order of the labels.
    :param mean_shares: Party id to posterior mean share.
    :rtype: :class:`SvgDocument`
    """
    frame = _frame(theme)
    results = list(results)
    slot = frame.height / max(len(results), 1)
    seed = results[0][1].seed if results else None
    m = results[0][1].m if results else None
    children = [provenance(seed=seed, m=m, as_of=as_of)]
    for quarter in (0.0, 0.25, 0.5, 0.75, 1.0):
        children.append(
            Element(
                "line",
                class_="gridline",
                x1=frame.x(quarter),
                y1=float(frame.top),
                x2=frame.x(quarter),
                y2=float(frame.bottom),
                stroke=theme.quartile_color,
                stroke_width=0.5,
            )
        )
        children.append(
            text(frame.x(quarter), frame.bottom + 16, percent(quarter), "middle")
        )
    for index, (coalition, result) in enumerate(results):
        coalition = tuple(coalition)
        members = sorted(
            coalition,
            key=lambda p: registry.index(p) if p in registry else len(registry),
        )
        strongest = _strongest_member(coalition, mean_shares)
        y = frame.top + index * slot + slot * 0.15
        height = slot * 0.7
        children.append(
            Element(
                "rect",
                class_="poe-bar",
                data_coalition="+".join(coalition),
                x=float(frame.left),
                y=float(y),
                width=frame.x(result.probability) - frame.left,
                height=float(height),
                fill=theme.color(strongest),
            )
        )
        if result.subset_probability > 0:
            children.append(
                Element(
                    "rect",
                    class_="subset-bar",
                    data_coalition="+".join(coalition),
                    x=float(frame.left),
                    y=float(y),
                    width=frame.x(result.subset_probability) - frame.left,
                    height=float(height),
                    fill=theme.subset_color,
                )
            )
        children.append(
            text(
                frame.left - 6,
                y + height / 2 + 4,
                " + ".join(theme.name(p) for p in members),
                anchor="end",
                class_="label",
            )
        )
        children.append(
            text(
                frame.x(result.probability) + 4,
                y + height / 2 + 4,
                percent(result.probability),
                class_="value",
            )
        )
    return document(theme, children)


def _density_shapes(grid, heights, frame, scale, dist, theme, fill):
    """Density outline and, when a majority has mass, its blue area.

    The blue area starts at ``dist.majority_cut``, so its share of the
    outline is the majority mass of the draws.
    """
    grid = np.asarray(grid, dtype=float)
    heights = np.asarray(heights, dtype=float)

    def y(height):
        return frame.bottom - _clip(height / scale, 0.0, 1.0) * frame.height

    outline = [(frame.x(grid[0]), frame.bottom)]
    outline += [(frame.x(g), y(h)) for g, h in zip(grid, heights)]
    outline.append((frame.x(grid[-1]), frame.bottom))
    shapes = [
        Element(
            "path",
            class_="density",
            d=path_data(outline, close=True),
            fill=fill,
            stroke=TEXT_COLOR,
            stroke_width=1,
        )
    ]
    if dist.majority_mass > 0:
        cut = dist.majority_cut
        upper = grid > cut
        start = float(np.interp(cut, grid, heights))
        area = [(frame.x(cut), frame.bottom), (frame.x(cut), y(start))]
        area += [(frame.x(g), y(h)) for g, h in zip(grid[upper], heights[upper])]
        area.append((frame.x(grid[-1]), frame.bottom))
        shapes.append(
            Element(
                "path",
                class_="majority",
                d=path_data(area, close=True),
                fill=theme.majority_color,
            )
        )
    return shapes


def _ci_bar(ci95, frame, y, height, theme):
    low, high = ci95
    return Element(
        "rect",
        class_="ci95",
        x=frame.x(low),
        y=float(y),
        width=frame.x(high) - frame.x(low),
        height=float(height),
        fill=theme.ci_color,
    )


def _reference_line(frame, top, bottom):
    return Element(
        "line",
        class_="reference",
        x1=frame.x(0.5),
        y1=float(top),
        x2=frame.x(0.5),
        y2=float(bottom),
        stroke="#000000",
        stroke_width=1,
    )


def _share_axis(frame, y):
    ticks = []
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        ticks.append(text(frame.x(tick), y, percent(tick), "middle", class_="tick"))
    return ticks


def render_seat_density(dist, theme, as_of=None, title=None):
    """Density of a coalition's joint seat share.

    :param dist: :class:`~koalition_py.poe_engine.SeatShareDistribution`.
    :rtype: :class:`SvgDocument`
    """
    frame = _frame(theme)
    # Room under the curve for the interval bar
    curve = _Frame(frame.left, frame.top, frame.width, frame.height - 14)
    grid, heights = dist.density
    scale = max(float(np.max(heights)), 1e-12)
    children = [provenance(seed=dist.seed, m=dist.m, as_of=as_of)]
    if title:
        children.append(text(frame.left, MARGIN_TOP / 2, title, class_="title"))
    children += _density_shapes(grid, heights, curve, scale, dist, theme, "#ffffff")
    children.append(_ci_bar(dist.ci95, curve, curve.bottom + 4, 6, theme))
    children.append(_reference_line(curve, frame.top, frame.bottom))
    children += _share_axis(frame, frame.bottom + 16)
    return document(theme, children)


def render_parliaments(allocs, coalition, registry, theme, seed=None, as_of=None):
    """One stacked seat bar per simulated parliament.

    Coalition parties come first, in the given order, followed by the other
    parties in registry order. Dashed lines mark the quartiles of the house.

    :param allocs: Sequence of :class:`~koalition_py.electoral.SeatAllocation`.
    :param coalition: Ordered party ids of the coalition of interest.
    :rtype: :class:`SvgDocument`
    """
    frame = _frame(theme)
    allocs = list(allocs)
    coalition = tuple(coalition)
    order = list(coalition) + [p for p in registry.ids if p not in coalition]
    slot = frame.height / max(len(allocs), 1)
    children = [provenance(seed=seed, m=len(allocs), as_of=as_of)]
    for index, alloc in enumerate(allocs):
        y = frame.top + index * slot + slot * 0.2
        height = slot * 0.6
        group = Element("g", class_="parliament", data_index=index)
        if alloc.hung:
            group.children.append(
                Element(
                    "rect",
                    class_="empty-bar",
                    x=float(frame.left),
                    y=float(y),
                    width=float(frame.width),
                    height=float(height),
                    fill="none",
                    stroke=theme.quartile_color,
                )
            )
            group.children.append(
                text(frame.x(0.5), y + height / 2 + 4, "hung", "middle", class_="hung")
            )
            children.append(group)
            continue
        house = alloc.total
        seated = 0
        for party_id in order:
            seats = alloc.seats.get(party_id, 0)
            if seats <= 0:
                continue
            x0 = frame.x(seated / house)
            seated += seats
            x1 = frame.x(seated / house)
            group.children.append(
                Element(
                    "rect",
                    class_="seat-segment",
                    data_party=party_id,
                    data_seats=seats,
                    x=x0,
                    y=float(y),
                    width=x1 - x0,
                    height=float(height),
                    fill=theme.color(party_id),
                )
            )
        held = sum(alloc.seats.get(p, 0) for p in coalition)
        group.children.append(
            text(
                frame.left - 6,
                y + height / 2 + 4,
                "%d/%d" % (held, house),
                anchor="end",
                class_="label",
            )
        )
        children.append(group)
    for quarter in (0.25, 0.5, 0.75):
        children.append(
            Element(
                "line",
                class_="quartile",
                x1=frame.x(quarter),
                y1=float(frame.top),
                x2=frame.x(quarter),
                y2=float(frame.bottom),
                stroke=theme.quartile_color,
                stroke_dasharray=theme.quartile_dash,
            )
        )
    return document(theme, children)


def _ridges(series, theme, width, height, scale):
    """Ridges of a date series, oldest at the top, newest drawn last."""
    frame = _frame(theme, width, height)
    series = sorted(series, key=lambda point: point[0])
    # Ridges are 1.8 steps tall; the first one starts at the top of the frame
    step = frame.height / (len(series) + 0.8)
    elements = []
    for index, (date, dist) in enumerate(series):
        baseline = frame.top + (index + 1.8) * step
        ridge = _Frame(frame.left, baseline - 1.8 * step, frame.width, 1.8 * step)
        grid, heights = dist.density
        group = Element("g", class_="ridge", data_date=date.isoformat())
        group.children += _density_shapes(
            grid, heights, ridge, scale, dist, theme, "#ffffff"
        )
        group.children.append(_ci_bar(dist.ci95, ridge, baseline + 1, 3, theme))
        group.children.append(
            text(frame.left - 6, baseline, date.isoformat(), "end", class_="date")
        )
        elements.append(group)
    elements.append(_reference_line(frame, frame.top, frame.bottom))
    elements += _share_axis(frame, frame.bottom + 16)
    return elements


def _series_scale(*serieses):
    peaks = [
        float(np.max(dist.density[1])) for series in serieses for _, dist in series
    ]
    return max(peaks + [1e-12])


def _series_provenance(series):
    if not series:
        return provenance()
    last_date, last = max(series, key=lambda point: point[0])
    return provenance(seed=last.seed, m=last.m, as_of=last_date)


def render_ridgeline(series, theme):
    """Seat share densities over time, newest at the bottom.

    :param series: Sequence of ``(date, SeatShareDistribution)`` in any order.
    :rtype: :class:`SvgDocument`
    """
    series = list(series)
    children = [_series_provenance(series)]
    scale = _series_scale(series)
    children += _ridges(series, theme, theme.width, theme.height, scale)
    return document(theme, children)


def logit_position(probability):
    """Vertical position in [0, 1] of a probability on the logit axis."""
    low, high = LOGIT_CLAMP
    p = _clip(probability, low, high)
    limit = math.log(high / (1 - high))
    return (math.log(p / (1 - p)) + limit) / (2 * limit)


def render_poe_timeline(series, theme, scale="logit"):
    """PoE of an event over time.

    :param series: Sequence of ``(date, PoEResult)``.
    :param str scale: ``logit`` (default) or ``linear``. On the logit axis
        values are clamped to [1%, 99%] for positioning only.
    :rtype: :class:`SvgDocument`
    """
    if scale not in ("logit", "linear"):
        raise ConfigError("unknown timeline scale %r" % scale, code="bad-scale")
    position = logit_position if scale == "logit" else (lambda p: _clip(p, 0.0, 1.0))
    series = sorted(series, key=lambda point: point[0])
    frame = _frame(theme)
    children = [
        provenance(
            seed=series[-1][1].seed if series else None,
            m=series[-1][1].m if series else None,
            as_of=series[-1][0] if series else None,
        )
    ]
    for value in TIMELINE_GRIDLINES:
        y = frame.y(position(value))
        children.append(
            Element(
                "line",
                class_="gridline",
                data_value=percent(value),
                x1=float(frame.left),
                y1=y,
                x2=float(frame.right),
                y2=y,
                stroke=theme.quartile_color,
                stroke_width=1 if value == 0.5 else 0.5,
            )
        )
        children.append(
            text(frame.left - 6, y + 4, percent(value), "end", class_="tick")
        )
    if series:
        x = _date_scale(series[0][0], series[-1][0], frame)
        points = [(x(date), frame.y(position(r.probability))) for date, r in series]
        children.append(
            Element(
                "path",
                class_="poe-line",
                d=path_data(points),
                fill="none",
                stroke=theme.majority_color,
                stroke_width=2,
            )
        )
        for (date, result), (px, py) in zip(series, points):
            children.append(
                Element(
                    "circle",
                    class_="poe-point",
                    data_date=date.isoformat(),
                    data_probability="%.6f" % result.probability,
                    cx=px,
                    cy=py,
                    r=3,
                    fill=theme.majority_color,
                )
            )
        children.append(
            text(frame.left, frame.bottom + 16, series[0][0].isoformat(), class_="tick")
        )
        children.append(
            text(
                frame.right,
                frame.bottom + 16,
                series[-1][0].isoformat(),
                "end",
                class_="tick",
            )
        )
    return document(theme, children)


def render_fan_chart(fan, polls, theme):
    """Party shares over time with 95% bands up to election day.

    :param fan: :class:`~koalition_py.forecast.FanChart`.
    :param polls: Polls drawn as dots, one per party and poll.
    :rtype: :class:`SvgDocument`
    """
    frame = _frame(theme)
    dates = [point.date for points in fan.series.values() for point in points]
    dates += [poll.publish_date for poll in polls]
    start = min(dates) if dates else fan.as_of
    x = _date_scale(start, fan.election_date, frame)
    ceiling = max(
        [p.high for points in fan.series.values() for p in points]
        + [poll.shares.get(party_id, 0.0) for poll in polls for party_id in fan.series]
        + [fan.threshold, 0.05]
    )
    ceiling = math.ceil(ceiling * 20 - 1e-9) / 20

    def y(share):
        return frame.y(share / ceiling)

    children = [provenance(seed=fan.seed, m=fan.m, as_of=fan.as_of)]
    for step in range(int(ceiling * 10 + 1e-9) + 1):
        tick = step / 10
        children.append(
            text(frame.left - 6, y(tick) + 4, percent(tick), "end", class_="tick")
        )
    children.append(
        Element(
            "line",
            class_="threshold",
            x1=float(frame.left),
            y1=y(fan.threshold),
            x2=float(frame.right),
            y2=y(fan.threshold),
            stroke=theme.quartile_color,
            stroke_dasharray=theme.quartile_dash,
        )
    )
    for party_id, points in fan.series.items():
        upper = [(x(p.date), y(p.high)) for p in points]
        lower = [(x(p.date), y(p.low)) for p in reversed(points)]
        children.append(
            Element(
                "path",
                class_="band",
                data_party=party_id,
                d=path_data(upper + lower, close=True),
                fill=theme.color(party_id),
                fill_opacity=0.25,
                stroke="none",
            )
        )
        children.append(
            Element(
                "path",
                class_="mean",
                data_party=party_id,
                d=path_data([(x(p.date), y(p.mean)) for p in points]),
                fill="none",
                stroke=theme.color(party_id),
                stroke_width=1.5,
            )
        )
    for poll in polls:
        for party_id in fan.series:
            if party_id not in poll.shares:
                continue
            children.append(
                Element(
                    "circle",
                    class_="poll-dot",
                    data_party=party_id,
                    cx=x(poll.publish_date),
                    cy=y(poll.shares[party_id]),
                    r=1.5,
                    fill=theme.color(party_id),
                )
            )
    children.append(
        Element(
            "line",
            class_="as-of",
            x1=x(fan.as_of),
            y1=float(frame.top),
            x2=x(fan.as_of),
            y2=float(frame.bottom),
            stroke="#000000",
        )
    )
    children.append(
        text(frame.left, frame.bottom + 16, start.isoformat(), class_="tick")
    )
    children.append(
        text(
            frame.right,
            frame.bottom + 16,
            fan.election_date.isoformat(),
            "end",
            class_="tick",
        )
    )
    return document(theme, children)


def render_forecast_ridgeline(nowcast, forecast, theme):
    """Nowcast ridges (left pane) next to the election-day forecasts (right).

    Both panes share the vertical date axis and the density scale.

    :param nowcast: Sequence of ``(date, SeatShareDistribution)``.
    :param forecast: The forecasts made at the same dates.
    :rtype: :class:`SvgDocument`
    """
    nowcast = list(nowcast)
    forecast = list(forecast)
    pane_width = theme.width // 2
    scale = _series_scale(nowcast, forecast)
    children = [_series_provenance(nowcast)]
    panes = (("nowcast", nowcast), ("forecast", forecast))
    for index, (name, series) in enumerate(panes):
        children.append(
            text(
                pane_width * index + MARGIN_LEFT,
                MARGIN_TOP / 2,
                name.capitalize(),
                class_="title",
            )
        )
        children.append(
            Element(
                "g",
                _ridges(series, theme, pane_width, theme.height, scale),
                class_="pane",
                data_pane=name,
                transform="translate(%d,0)" % (pane_width * index),
            )
        )
    return document(theme, children)


FIGURES = (
    "classic",
    "poe-bars",
    "density",
    "parliaments",
    "ridgeline",
    "poe-timeline",
    "fan",
    "forecast-ridgeline",
)
