"""Vertex orderings and the bandwidth objectives evaluated over them.

Positions are 1-based throughout the public surface: an ordering maps
vertex v (0-based index) to a position in {1..n}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .instance import InteractionMatrix

SCHEMA_ORDERING = "bandopt-ordering/1"


@dataclass(frozen=True)
class Ordering:
    """A bijection from vertices onto positions 1..n; perm[v] = position of v."""

    perm: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if n == 0:
            raise ValueError("ordering must cover at least one vertex")
        if any(not isinstance(p, int) for p in self.perm) or sorted(self.perm) != list(
            range(1, n + 1)
        ):
            raise ValueError(f"perm must be a bijection onto 1..{n}, got {self.perm}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @staticmethod
    def identity(n: int) -> "Ordering":
        return Ordering(tuple(range(1, n + 1)))

    def reversed(self) -> "Ordering":
        """Mirror ordering: position p becomes n+1-p."""
        n = self.n
        return Ordering(tuple(n + 1 - p for p in self.perm))

    def vertex_at(self) -> tuple[int, ...]:
        """Inverse map: entry p-1 is the vertex placed at position p."""
        at = [0] * self.n
        for v, p in enumerate(self.perm):
            at[p - 1] = v
        return tuple(at)


@dataclass(frozen=True)
class Bandwidth:
    """A weighted bandwidth value and one vertex pair attaining it."""

    value: float
    argpair: tuple[int, int] | None

    def __float__(self) -> float:
        return self.value


def weighted_bandwidth(U: InteractionMatrix, ordering: Ordering) -> Bandwidth:
    """max over all vertex pairs of u[i][j] * |position difference|.

    Ties in the attaining pair report the lexicographically smallest (i, j).
    A 1-vertex ordering has bandwidth 0 and no pair.
    """
    n = U.n
    if ordering.n != n:
        raise ValueError(f"ordering covers {ordering.n} vertices, matrix has {n}")
    if n == 1:
        return Bandwidth(0.0, None)
    perm = ordering.perm
    u = U.u
    best = -1.0
    best_pair: tuple[int, int] | None = None
    for i in range(n):
        pi = perm[i]
        row = u[i]
        for j in range(i + 1, n):
            val = row[j] * abs(pi - perm[j])
            if val > best:
                best = val
                best_pair = (i, j)
    return Bandwidth(float(best), best_pair)


def classic_bandwidth(bonds: Iterable[tuple[int, int]], ordering: Ordering) -> int:
    """max over bonds of |position difference|; 0 for an empty bond set."""
    n = ordering.n
    perm = ordering.perm
    best = 0
    for i, j in bonds:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bond ({i}, {j}) references a vertex outside 0..{n - 1}")
        best = max(best, abs(perm[i] - perm[j]))
    return best


def permute_matrix(U: InteractionMatrix, ordering: Ordering) -> InteractionMatrix:
    """Reorder rows/columns so entry [p(i)-1][p(j)-1] holds u[i][j]."""
    if ordering.n != U.n:
        raise ValueError(f"ordering covers {ordering.n} vertices, matrix has {U.n}")
    idx = np.asarray(ordering.perm) - 1
    out = np.empty_like(U.u)
    out[np.ix_(idx, idx)] = U.u
    out.setflags(write=False)
    return InteractionMatrix(n=U.n, u=out)


def rcm_gap(obj_rcm: float, opt: float) -> float:
    """Heuristic excess over the optimum, in percent: (obj_rcm - opt)/opt * 100."""
    if opt <= 0:
        raise ValueError(f"optimal objective must be positive, got {opt}")
    return (obj_rcm - opt) / opt * 100.0


def ordering_to_json(ordering: Ordering) -> str:
    doc = {"schema": SCHEMA_ORDERING, "perm": list(ordering.perm)}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def ordering_from_json(text: str) -> Ordering:
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_ORDERING:
        raise ValueError(f'expected an object with schema "{SCHEMA_ORDERING}"')
    perm = doc.get("perm")
    if not isinstance(perm, list):
        raise ValueError('field "perm" must be a list of positions')
    return Ordering(tuple(int(p) for p in perm))


def save_ordering(ordering: Ordering, path: str | Path) -> None:
    Path(path).write_text(ordering_to_json(ordering), encoding="utf-8")


def load_ordering(path: str | Path) -> Ordering:
    return ordering_from_json(Path(path).read_text(encoding="utf-8"))
