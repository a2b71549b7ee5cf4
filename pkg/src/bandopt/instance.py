"""Geometric problem instances and their 1/d^6 interaction matrices.

An instance is a set of 2-D sites with a short-range bond structure whose
mean vertex degree targets a coordination number of 4.  The interaction
matrix is always dense: every pair of sites interacts with weight 1/d^6.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SCHEMA_INSTANCE = "bandopt-instance/1"

DEFAULT_R_MIN = 0.7

# Mean-degree window asserted for generated instances.  The coordination
# target of 4 is only attainable once there are enough sites, so the check
# applies from this size upward; smaller instances are simply complete or
# near-complete graphs.
DEGREE_WINDOW = (3.5, 4.5)
DEGREE_CHECK_MIN_N = 10

_KNN = 4
_REPAIR_MIN_DEGREE = 3
_ATTEMPTS_PER_SITE = 1000


class GenerationError(RuntimeError):
    """A valid instance could not be produced for the given parameters."""


class SchemaError(ValueError):
    """An instance file violates the on-disk schema.

    The offending field is available as ``field_name``.
    """

    def __init__(self, field_name: str, message: str):
        super().__init__(message)
        self.field_name = field_name


class CoincidentSitesError(ValueError):
    """Two sites coincide, so a pairwise distance is zero."""

    def __init__(self, i: int, j: int):
        super().__init__(f"sites {i} and {j} coincide; pairwise distances must be > 0")
        self.pair = (i, j)


@dataclass(frozen=True)
class GenParams:
    """Generation parameters: square box side and minimum site separation."""

    L: float
    r_min: float = DEFAULT_R_MIN

    @staticmethod
    def defaults(n: int) -> "GenParams":
        # unit density keeps nearest-neighbour distances O(1)
        return GenParams(L=math.sqrt(n), r_min=DEFAULT_R_MIN)


@dataclass(frozen=True)
class Instance:
    """An immutable 2-D point set with its bonded-neighbor structure.

    ``sites`` are dimensionless coordinates, ``bonds`` are unordered vertex
    pairs stored as (i, j) with i < j.
    """

    id: str
    seed: int
    params: GenParams
    sites: tuple[tuple[float, float], ...]
    bonds: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.sites)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.bonds:
            deg[i] += 1
            deg[j] += 1
        return deg

    def mean_degree(self) -> float:
        return 2.0 * len(self.bonds) / self.n if self.n else 0.0

    def min_pairwise_distance(self) -> float:
        pts = np.asarray(self.sites)
        d2 = _pairwise_squared_distances(pts)
        n = len(pts)
        return float(np.sqrt(d2[np.triu_indices(n, k=1)].min())) if n > 1 else math.inf


@dataclass(frozen=True)
class InteractionMatrix:
    """Symmetric matrix of pairwise interaction weights u[i][j] = 1/d_ij^6.

    The diagonal is zero and every off-diagonal entry is strictly positive.
    The underlying array is marked read-only; share it freely.
    """

    n: int
    u: np.ndarray

    @staticmethod
    def from_array(u: np.ndarray) -> "InteractionMatrix":
        """Wrap and validate a raw weight matrix not derived from geometry."""
        u = np.asarray(u, dtype=float)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {u.shape}")
        n = u.shape[0]
        if not np.all(np.isfinite(u)):
            raise ValueError("weight matrix entries must be finite")
        if not np.array_equal(u, u.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(u) != 0.0):
            raise ValueError("weight matrix diagonal must be zero")
        if n > 1:
            off = u[~np.eye(n, dtype=bool)]
            if np.any(off <= 0.0):
                raise ValueError("off-diagonal weights must be strictly positive")
        u = u.copy()
        u.setflags(write=False)
        return InteractionMatrix(n=n, u=u)


def _pairwise_squared_distances(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _sample_separated_points(
    n: int, params: GenParams, rng: np.random.Generator
) -> list[tuple[float, float]]:
    """Rejection-sample n points in the box with pairwise separation >= r_min."""
    r2 = params.r_min * params.r_min
    pts: list[tuple[float, float]] = []
    budget = _ATTEMPTS_PER_SITE * n
    attempts = 0
    while len(pts) < n:
        if attempts >= budget:
            raise GenerationError(
                f"could not place {n} sites at separation {params.r_min} in a "
                f"{params.L:.4g} x {params.L:.4g} box after {budget} attempts "
                f"({len(pts)} placed)"
            )
        attempts += 1
        xy = rng.random(2)
        x = params.L * float(xy[0])
        y = params.L * float(xy[1])
        if all((x - px) ** 2 + (y - py) ** 2 >= r2 for px, py in pts):
            pts.append((x, y))
    return pts


def _mutual_knn_bonds(sites: list[tuple[float, float]]) -> set[tuple[int, int]]:
    """Mutual k-nearest-neighbor bonds with degree repair and density top-up."""
    n = len(sites)
    pts = np.asarray(sites)
    d2 = _pairwise_squared_distances(pts)
    k = min(_KNN, n - 1)

    # k nearest neighbours of each vertex, ties broken by index
    neighbor_rank = [
        sorted(range(n), key=lambda j, i=i: (d2[i, j], j)) for i in range(n)
    ]
    nearest: list[set[int]] = []
    for i in range(n):
        ranked = [j for j in neighbor_rank[i] if j != i]
        nearest.append(set(ranked[:k]))

    bonds = {
        (min(i, j), max(i, j))
        for i in range(n)
        for j in nearest[i]
        if i in nearest[j]
    }

    # repair: vertices left under-coordinated get their nearest non-neighbors
    deg = [0] * n
    for i, j in bonds:
        deg[i] += 1
        deg[j] += 1
    target = min(_REPAIR_MIN_DEGREE, n - 1)
    for v in range(n):
        if deg[v] >= target:
            continue
        for w in neighbor_rank[v]:
            if deg[v] >= target:
                break
            if w == v:
                continue
            bond = (min(v, w), max(v, w))
            if bond in bonds:
                continue
            bonds.add(bond)
            deg[v] += 1
            deg[w] += 1

    # top-up: mutual proximity alone can undershoot the density target, so
    # keep adding the shortest missing bond until the mean degree clears it
    if 2 * len(bonds) < DEGREE_WINDOW[0] * n:
        spare = sorted(
            (
                (d2[i, j], i, j)
                for i in range(n)
                for j in range(i + 1, n)
                if (i, j) not in bonds
            ),
        )
        for _, i, j in spare:
            if 2 * len(bonds) >= DEGREE_WINDOW[0] * n:
                break
            bonds.add((i, j))
    return bonds


def generate(n: int, seed: int, params: GenParams | None = None) -> Instance:
    """Generate a deterministic amorphous point set with ~4-coordinated bonds.

    The same (n, seed, params) always reproduces the identical instance,
    byte-for-byte under ``save``.  Raises GenerationError when the points
    cannot be packed or the bond structure misses the coordination target.
    """
    if n < 2:
        raise ValueError(f"need at least 2 sites, got n={n}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if params is None:
        params = GenParams.defaults(n)
    if params.L <= 0 or params.r_min <= 0:
        raise ValueError("box side and minimum separation must be positive")
    if n * params.r_min**2 > 0.6 * params.L**2:
        raise GenerationError(
            f"packing infeasible: n*r_min^2 = {n * params.r_min ** 2:.4g} is not "
            f"comfortably below L^2 = {params.L ** 2:.4g}"
        )

    rng = np.random.default_rng(seed)
    sites = _sample_separated_points(n, params, rng)
    bonds = _mutual_knn_bonds(sites)

    inst = Instance(
        id=f"inst-n{n}-s{seed}",
        seed=seed,
        params=params,
        sites=tuple(sites),
        bonds=frozenset(bonds),
    )
    lo, hi = DEGREE_WINDOW
    if n >= DEGREE_CHECK_MIN_N and not lo <= inst.mean_degree() <= hi:
        raise GenerationError(
            f"bond structure off target: mean degree {inst.mean_degree():.3f} "
            f"outside [{lo}, {hi}] for n={n}, seed={seed}"
        )
    return inst


def interaction_matrix(inst: Instance) -> InteractionMatrix:
    """Dense interaction matrix over all site pairs: u[i][j] = 1/d_ij^6."""
    pts = np.asarray(inst.sites)
    n = len(pts)
    d2 = _pairwise_squared_distances(pts)
    off = ~np.eye(n, dtype=bool)
    zero = np.argwhere((d2 == 0.0) & off)
    if len(zero):
        i, j = (int(v) for v in zero[0])
        raise CoincidentSitesError(min(i, j), max(i, j))
    u = np.zeros((n, n))
    u[off] = 1.0 / d2[off] ** 3
    u.setflags(write=False)
    return InteractionMatrix(n=n, u=u)


def to_json(inst: Instance) -> str:
    """Serialize with stable key order; identical instances give identical bytes."""
    doc = {
        "schema": SCHEMA_INSTANCE,
        "id": inst.id,
        "seed": inst.seed,
        "params": {"L": inst.params.L, "r_min": inst.params.r_min},
        "sites": [[x, y] for x, y in inst.sites],
        "bonds": [[i, j] for i, j in sorted(inst.bonds)],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def save(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(to_json(inst), encoding="utf-8")


def _require(doc: dict, key: str, kind: type, where: str = "instance") -> object:
    if key not in doc:
        raise SchemaError(key, f'missing required field "{key}" in {where}')
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(key, f'field "{key}" must be a number')
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(key, f'field "{key}" must be of type {kind.__name__}')
    return value


def from_json(text: str) -> Instance:
    """Parse and validate an instance document.

    Raises SchemaError naming the violated field, or CoincidentSitesError
    when two parsed coordinates coincide.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("document", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("document", "top-level value must be an object")

    schema = _require(doc, "schema", str)
    if schema != SCHEMA_INSTANCE:
        raise SchemaError(
            "schema", f'unsupported schema "{schema}", expected "{SCHEMA_INSTANCE}"'
        )
    inst_id = _require(doc, "id", str)
    seed = _require(doc, "seed", int)
    if not 0 <= seed < 2**64:
        raise SchemaError("seed", f"seed {seed} is not a 64-bit unsigned integer")

    raw_params = _require(doc, "params", dict)
    L = _require(raw_params, "L", float, where="params")
    r_min = _require(raw_params, "r_min", float, where="params")
    if L <= 0 or r_min <= 0:
        raise SchemaError("params", "params.L and params.r_min must be positive")

    raw_sites = _require(doc, "sites", list)
    if not raw_sites:
        raise SchemaError("sites", '"sites" must be a non-empty list')
    sites: list[tuple[float, float]] = []
    for idx, entry in enumerate(raw_sites):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in entry)
        ):
            raise SchemaError("sites", f"sites[{idx}] must be a pair of numbers")
        x, y = float(entry[0]), float(entry[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise SchemaError("sites", f"sites[{idx}] has a non-finite coordinate")
        sites.append((x, y))
    n = len(sites)
    for i in range(n):
        for j in range(i + 1, n):
            if sites[i] == sites[j]:
                raise CoincidentSitesError(i, j)

    raw_bonds = _require(doc, "bonds", list)
    bonds: set[tuple[int, int]] = set()
    for idx, entry in enumerate(raw_bonds):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in entry)
        ):
            raise SchemaError("bonds", f"bonds[{idx}] must be a pair of integers")
        i, j = entry
        if not (0 <= i < n and 0 <= j < n):
            raise SchemaError("bonds", f"bonds[{idx}] references a vertex outside 0..{n - 1}")
        if i >= j:
            raise SchemaError("bonds", f"bonds[{idx}] must satisfy i < j")
        if (i, j) in bonds:
            raise SchemaError("bonds", f"bonds[{idx}] duplicates pair ({i}, {j})")
        bonds.add((i, j))

    return Instance(
        id=inst_id,
        seed=seed,
        params=GenParams(L=L, r_min=r_min),
        sites=tuple(sites),
        bonds=frozenset(bonds),
    )


def load(path: str | Path) -> Instance:
    return from_json(Path(path).read_text(encoding="utf-8"))
