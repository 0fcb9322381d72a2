"""Index sets, nodes, variants and colors shared by every other module."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple


class Node(NamedTuple):
    """A grid cell ``(i, j)`` with ``1 <= i, j <= d``.

    Tuple ordering gives the canonical lexicographic order on ``(i, j)``.
    """

    i: int
    j: int

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


class VariantKind(enum.Enum):
    ORIGINAL = "original"
    CORRECTED = "corrected-s1"
    ALTERNATIVE = "alternative-s2"


class MidRule(enum.Enum):
    """Midpoint rule used by the alternative construction."""

    UNIFORM_CEIL = "uniform-ceil"
    KEEP_FLOOR_EXCEPTION = "keep-floor"


@dataclass(frozen=True)
class VariantConfig:
    kind: VariantKind = VariantKind.CORRECTED
    alt_mid_rule: MidRule = MidRule.UNIFORM_CEIL

    def excluded_vertex(self, d: int) -> Node:
        """The single grid cell missing from the vertex set for dimension ``d``."""
        if self.kind is VariantKind.ALTERNATIVE:
            return Node(1, 1)
        return Node(d, d)

    @property
    def label(self) -> str:
        if self.kind is VariantKind.ALTERNATIVE:
            return f"{self.kind.value}:{self.alt_mid_rule.value}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> VariantConfig:
        """Inverse of :attr:`label`; also accepts a bare kind name."""
        kind, _, mid = text.partition(":")
        try:
            config = cls(VariantKind(kind))
            if mid:
                if config.kind is not VariantKind.ALTERNATIVE:
                    raise ValueError(f"mid rule only applies to alternative-s2: {text!r}")
                config = cls(config.kind, MidRule(mid))
        except ValueError as exc:
            raise ValueError(f"unknown variant {text!r}") from exc
        return config


ORIGINAL = VariantConfig(VariantKind.ORIGINAL)
CORRECTED = VariantConfig(VariantKind.CORRECTED)
ALTERNATIVE = VariantConfig(VariantKind.ALTERNATIVE)
ALTERNATIVE_KEEP_FLOOR = VariantConfig(VariantKind.ALTERNATIVE, MidRule.KEEP_FLOOR_EXCEPTION)

VARIANTS = (ORIGINAL, CORRECTED, ALTERNATIVE, ALTERNATIVE_KEEP_FLOOR)


class Color(enum.IntEnum):
    """Residue ``m`` in Z/3 together with its fixed display color."""

    RED = 0
    BLUE = 1
    GREEN = 2

    @property
    def display(self) -> str:
        return self.name.lower()


# Label order used in figures and tables: red, green, blue.
DISPLAY_ORDER = (Color.RED, Color.GREEN, Color.BLUE)


class WeightTriple(NamedTuple):
    """Exact weights indexed by residue: ``triple[m]``."""

    m0: int
    m1: int
    m2: int

    def support(self) -> frozenset[int]:
        return frozenset(m for m in range(3) if self[m])

    def scaled(self, factor: int) -> WeightTriple:
        return WeightTriple(self.m0 * factor, self.m1 * factor, self.m2 * factor)


def check_dim(d: int) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
    return d


@lru_cache(maxsize=8, typed=True)
def grid(d: int) -> tuple[Node, ...]:
    """All of L x L in canonical order; ``grid(d)[(i-1)*d + (j-1)] == (i, j)``."""
    return tuple(Node(i, j) for i in range(1, d + 1) for j in range(1, d + 1))


@lru_cache(maxsize=16, typed=True)
def index_sets(d: int, variant: VariantConfig) -> tuple[tuple[Node, ...], tuple[Node, ...]]:
    """Return ``(I, J)``: the vertex set and the target set, canonically ordered.

    ``J`` always drops ``(d, d)``; ``I`` drops the variant's excluded corner.
    """
    check_dim(d)
    cells = grid(d)
    top = Node(d, d)
    skip = variant.excluded_vertex(d)
    vertices = tuple(n for n in cells if n != skip)
    targets = tuple(n for n in cells if n != top)
    return vertices, targets


def sign_half(x: int) -> int:
    """Sign of ``x + 1/2`` for integer ``x``; never zero."""
    return 1 if x >= 0 else -1


def in_grid(node: Node, d: int) -> bool:
    return 1 <= node.i <= d and 1 <= node.j <= d
