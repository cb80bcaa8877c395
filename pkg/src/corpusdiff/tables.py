"""Named category -> value tables, the unit of corpus comparison."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(slots=True)
class MetricTable:
    name: str
    rows: list[tuple[str, float]]
    unit: str = "percent"  # percent | ratio | score

    def value(self, category: str) -> float:
        for cat, val in self.rows:
            if cat == category:
                return val
        raise KeyError(category)

    def categories(self) -> list[str]:
        return [cat for cat, _ in self.rows]

    def to_dict(self) -> dict:
        return {"name": self.name, "unit": self.unit, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> "MetricTable":
        return cls(
            name=data["name"],
            unit=data["unit"],
            rows=[(cat, float(val)) for cat, val in data["rows"]],
        )


def percentages(counts: dict[str, int], name: str, categories: list[str] | None = None) -> MetricTable:
    """Turn counts into a percent table summing to 100.

    With an explicit category list, absent categories appear with 0 and
    rows follow that list; otherwise rows are sorted by descending value,
    ties alphabetical.
    """
    total = sum(counts.values())
    if total == 0:
        raise ValueError(f"empty counts for table {name!r}")
    if categories is None:
        cats = sorted(counts, key=lambda c: (-counts[c], c))
    else:
        cats = list(categories)
    rows = [(cat, 100.0 * counts.get(cat, 0) / total) for cat in cats]
    return MetricTable(name=name, rows=rows, unit="percent")
