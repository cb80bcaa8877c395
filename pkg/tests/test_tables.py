"""Category/value tables and percentage conversion."""

from __future__ import annotations

import pytest

from corpusdiff.tables import MetricTable, percentages


def test_percentages_with_explicit_categories() -> None:
    table = percentages({"A": 2, "B": 1}, "sections", categories=["B", "A", "C"])
    assert table.rows == [
        ("B", pytest.approx(100 / 3)),
        ("A", pytest.approx(200 / 3)),
        ("C", 0.0),
    ]
    assert sum(v for _, v in table.rows) == pytest.approx(100.0)


def test_percentages_default_order_by_count_then_name() -> None:
    table = percentages({"A": 2, "B": 1, "C": 2}, "x")
    assert table.categories() == ["A", "C", "B"]


def test_percentages_rejects_empty() -> None:
    with pytest.raises(ValueError):
        percentages({}, "x")
    with pytest.raises(ValueError):
        percentages({"A": 0}, "x")


def test_value_lookup_and_round_trip() -> None:
    table = MetricTable(name="t", rows=[("A", 1.5), ("B", 2.5)], unit="score")
    assert table.value("B") == 2.5
    with pytest.raises(KeyError):
        table.value("Z")
    again = MetricTable.from_dict(table.to_dict())
    assert again == table
