"""Residual reports: named identity checks with tolerances and verdicts."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List

__all__ = ["ResidualItem", "ResidualReport"]


@dataclass(frozen=True)
class ResidualItem:
    name: str
    anchor: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }


@dataclass
class ResidualReport:
    """Ordered list of :class:`ResidualItem` plus free-form metadata.

    Serialization is deterministic: items keep insertion order, metadata keys
    are sorted, and floats are written with ``repr`` precision.
    """

    items: List[ResidualItem] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)

    def add(self, name: str, anchor: str, residual: float, tolerance: float) -> ResidualItem:
        item = ResidualItem(name, anchor, float(residual), float(tolerance))
        self.items.append(item)
        return item

    def extend(self, other: "ResidualReport") -> None:
        self.items.extend(other.items)

    @property
    def all_passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def failures(self) -> List[ResidualItem]:
        return [item for item in self.items if not item.passed]

    def as_dict(self) -> dict:
        return {
            "items": [item.as_dict() for item in self.items],
            "metadata": dict(sorted(self.metadata.items())),
            "summary": {
                "total": len(self.items),
                "passed": sum(item.passed for item in self.items),
                "failed": len(self.failures),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "anchor", "residual", "tolerance", "verdict"])
        for item in self.items:
            writer.writerow([item.name, item.anchor, repr(item.residual),
                             repr(item.tolerance), item.verdict])
        return buf.getvalue()

    def summary_lines(self) -> List[str]:
        return [
            f"[{item.verdict.upper()}] {item.name}: residual={item.residual:.3e} "
            f"tol={item.tolerance:.1e}"
            for item in self.items
        ]
