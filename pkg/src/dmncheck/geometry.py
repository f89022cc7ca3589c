"""Geometric view of decision tables.

Rules become iso-oriented hyper-rectangles, one axis per input column.
Numeric columns map onto the number line directly.  Categorical columns
are coded: the k-th known category of a column occupies the half-open
unit interval [k..k+1), so distinct categories never share a point and
a multi-valued entry such as ``VG,G`` becomes [0..2).

The category order is deterministic: facet declaration order first,
then first appearance scanning the rules top to bottom.  Boolean
columns with an unrestricted facet use the canonical order
``false, true``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Optional, Sequence

from .errors import CodecError, DimensionError
from .intervals import Interval1D, IntervalSet, interval
from .sfeel import (Alternative, AnyValue, Condition, Kind, Match, Not,
                    lower_to_intervals)

if TYPE_CHECKING:  # pragma: no cover
    from .model import DecisionTable, Rule


@dataclass(frozen=True)
class HyperRect:
    """A non-empty box: one interval per input column, in column order."""

    intervals: tuple[Interval1D, ...]

    def __len__(self) -> int:
        return len(self.intervals)

    def intersect(self, other: "HyperRect") -> Optional["HyperRect"]:
        if len(self.intervals) != len(other.intervals):
            raise DimensionError(
                f"cannot intersect a {len(self.intervals)}-dimensional box "
                f"with a {len(other.intervals)}-dimensional one")
        pieces = []
        for a, b in zip(self.intervals, other.intervals):
            piece = a.intersect(b)
            if piece is None:
                return None
            pieces.append(piece)
        return HyperRect(tuple(pieces))

    def contains_point(self, point: Sequence) -> bool:
        if len(point) != len(self.intervals):
            raise DimensionError("point dimensionality mismatch")
        return all(iv.contains(x) for iv, x in zip(self.intervals, point))


def intersect_rects(a: HyperRect, b: HyperRect) -> Optional[HyperRect]:
    """Component-wise intersection; None when any component is empty."""
    return a.intersect(b)


def _condition_literals(cond: Condition) -> list:
    if isinstance(cond, (Match, Not)):
        return [cond.value]
    if isinstance(cond, Alternative):
        out = []
        for part in cond.parts:
            out.extend(_condition_literals(part))
        return out
    return []


@dataclass(frozen=True)
class CategoryCodec:
    """Ordered category lists for every categorical column of a table."""

    columns: dict[str, tuple]

    def has(self, column: str) -> bool:
        return column in self.columns

    def categories(self, column: str) -> tuple:
        try:
            return self.columns[column]
        except KeyError:
            raise CodecError(f"column {column!r} has no categorical codec") \
                from None

    def encode(self, column: str, literal) -> int:
        cats = self.categories(column)
        for i, cat in enumerate(cats):
            if cat == literal and type(cat) is type(literal):
                return i
        raise CodecError(f"literal {literal!r} is not a known category of "
                         f"column {column!r}")

    def interval_for(self, column: str, literal) -> Interval1D:
        k = self.encode(column, literal)
        return Interval1D(k, True, k + 1, False)

    def decode(self, column: str, iv: Interval1D) -> list:
        """Categories whose unit intervals meet the given interval."""
        cats = self.categories(column)
        out = []
        for i, cat in enumerate(cats):
            unit = Interval1D(i, True, i + 1, False)
            if unit.intersect(iv) is not None:
                out.append(cat)
        return out


def build_codec(table: "DecisionTable") -> CategoryCodec:
    """Deterministic codec over all categorical columns of the table."""
    columns: dict[str, tuple] = {}
    rule_entries = {
        attr.name: [rule.input_entries[i] for rule in table.rules]
        for i, attr in enumerate(table.inputs)
    }
    for i, attr in enumerate(table.outputs):
        rule_entries[attr.name] = [Match(rule.output_entries[i])
                                   for rule in table.rules]
    for attr in table.inputs + table.outputs:
        if not attr.kind.is_categorical:
            continue
        ordered: list = []
        if attr.kind is Kind.BOOLEAN and isinstance(attr.facet, AnyValue):
            ordered = [False, True]
        for literal in _condition_literals(attr.facet):
            if literal not in ordered:
                ordered.append(literal)
        for cond in rule_entries[attr.name]:
            for literal in _condition_literals(cond):
                if literal not in ordered:
                    ordered.append(literal)
        if not ordered:
            # Column never names a category: collapse its (infinite)
            # domain to a single representative so geometry stays finite.
            ordered = ["<any>"] if attr.kind is Kind.STRING else [False, True]
        columns[attr.name] = tuple(ordered)
    return CategoryCodec(columns)


def _column_set(cond: Condition, attr, codec: CategoryCodec) -> IntervalSet:
    categories = codec.categories(attr.name) if attr.kind.is_categorical \
        else None
    return lower_to_intervals(cond, attr.kind, categories)


def build_universe(table: "DecisionTable",
                   codec: CategoryCodec) -> tuple[IntervalSet, ...]:
    """Legal-value interval set per input column (the facet image)."""
    return tuple(_column_set(attr.facet, attr, codec)
                 for attr in table.inputs)


def rule_to_rects(rule: "Rule", table: "DecisionTable",
                  codec: CategoryCodec) -> list[HyperRect]:
    """Boxes covered by a rule, clipped to the column facets.

    Each column contributes the members of ``entry ∩ facet``; the boxes
    are the cross product of one member per column.  A column whose
    intersection is empty yields no boxes at all.
    """
    per_column: list[tuple[Interval1D, ...]] = []
    for attr, cond in zip(table.inputs, rule.input_entries):
        entry = _column_set(cond, attr, codec)
        facet = _column_set(attr.facet, attr, codec)
        members = entry.intersect(facet).members
        if not members:
            return []
        per_column.append(members)
    return [HyperRect(combo) for combo in product(*per_column)]


def encode_point(table: "DecisionTable", codec: CategoryCodec,
                 config: dict) -> tuple:
    """Geometric coordinates of an input configuration."""
    point = []
    for attr in table.inputs:
        value = config[attr.name]
        if attr.kind.is_categorical:
            point.append(codec.encode(attr.name, value))
        else:
            point.append(value)
    return tuple(point)
