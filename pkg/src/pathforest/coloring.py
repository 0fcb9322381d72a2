"""Edge coloring rules.

Only the weight labels carry colors in the source figures, so which color an
edge gets is a configurable rule. ``target-diff`` is the default.
"""

from __future__ import annotations

import enum
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .construct import Edge
from .model import Node, WeightTriple


class ColoringRule(enum.Enum):
    TARGET_DIFF = "target-diff"
    SHARED_SUPPORT = "shared-support"
    ENDPOINT_DIFF = "endpoint-diff"

    @property
    def needs_weights(self) -> bool:
        return self is ColoringRule.SHARED_SUPPORT


@dataclass(frozen=True)
class TableRule:
    """User-supplied rule: explicit colors per target, a built-in rule elsewhere.

    An edge gets the union of the table colors of its targets; an edge none of
    whose targets appear in the table falls back to ``fallback``.
    """

    name: str
    by_target: Mapping[Node, frozenset[int]] = field(default_factory=dict)
    fallback: ColoringRule = ColoringRule.TARGET_DIFF

    @property
    def needs_weights(self) -> bool:
        return self.fallback.needs_weights

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "fallback": self.fallback.value,
            "targets": {
                f"{t.i},{t.j}": sorted(ms) for t, ms in sorted(self.by_target.items())
            },
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> TableRule:
        targets: dict[Node, frozenset[int]] = {}
        for key, colors in doc.get("targets", {}).items():
            i, j = (int(x) for x in key.split(","))
            ms = frozenset(int(m) for m in colors)
            if not ms <= {0, 1, 2}:
                raise ValueError(f"colors for target {key} must be residues 0..2")
            targets[Node(i, j)] = ms
        return cls(
            name=str(doc["name"]),
            by_target=targets,
            fallback=ColoringRule(doc.get("fallback", ColoringRule.TARGET_DIFF.value)),
        )


Rule = ColoringRule | TableRule

BUILTIN_RULES = tuple(ColoringRule)


def parse_rule(text: str) -> Rule:
    """A built-in rule name, or a path to a JSON rule table."""
    try:
        return ColoringRule(text)
    except ValueError:
        pass
    path = Path(text)
    if not path.is_file():
        names = ", ".join(r.value for r in ColoringRule)
        raise ValueError(f"unknown rule {text!r} (built-ins: {names}; or a rule-table file)")
    return TableRule.from_dict(json.loads(path.read_text()))


def rule_name(rule: Rule) -> str:
    return rule.value if isinstance(rule, ColoringRule) else rule.name


def color_of_edge(
    edge: Edge, rule: Rule, weights: Mapping[Node, WeightTriple] | None = None
) -> frozenset[int]:
    if isinstance(rule, TableRule):
        hits = [rule.by_target[t] for t in edge.targets if t in rule.by_target]
        if hits:
            return frozenset().union(*hits)
        return color_of_edge(edge, rule.fallback, weights)
    if rule is ColoringRule.TARGET_DIFF:
        if not edge.targets:
            raise ValueError(f"edge {edge.endpoints} has no target to color by")
        return frozenset((t.i - t.j) % 3 for t in edge.targets)
    if rule is ColoringRule.ENDPOINT_DIFF:
        a = edge.endpoints[0]
        return frozenset({(a.i - a.j) % 3})
    if rule is ColoringRule.SHARED_SUPPORT:
        if weights is None:
            raise ValueError("shared-support coloring needs a weight table")
        a, b = edge.endpoints
        return weights[a].support() & weights[b].support()
    raise TypeError(f"not a coloring rule: {rule!r}")
