"""Exact weighted bandwidth minimization.

Three routes to the optimum live here: a native branch-and-bound over
position assignments (the production solver), an exhaustive brute-force
oracle for small instances, and an exporter of the equivalent mixed
integer linear program in LP text format for external solvers.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from pathlib import Path

import numpy as np

from .instance import InteractionMatrix
from .metrics import Ordering, weighted_bandwidth

SCHEMA_RESULT = "bandopt-result/1"

STATUS_OPTIMAL = "optimal"
STATUS_TIMEOUT = "feasible-timeout"

_BRUTE_FORCE_MAX_N = 10
_CHECK_MASK = 1023  # periodic deadline/stop checks every 1024 node evaluations


@dataclass(frozen=True)
class SolveConfig:
    """Solver switches.

    ``use_lower_bound`` enables seeding the bound and terminating as soon as
    the incumbent matches it; ``use_symmetry_breaking`` confines the anchor
    vertex to the first half of the positions.  ``anchor_vertex`` of None
    picks the vertex with the largest interaction row sum.  ``threads`` of 1
    (the default) gives reproducible node counts.
    """

    use_lower_bound: bool = True
    use_symmetry_breaking: bool = True
    time_limit: float = 3600.0
    node_limit: int | None = None
    anchor_vertex: int | None = None
    threads: int = 1


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an exact solve (or of the oracle enumeration)."""

    ordering: Ordering
    objective: float
    lower_bound: float
    status: str
    nodes_explored: int
    wall_time: float


def _validate_config(n: int, cfg: SolveConfig) -> None:
    if cfg.time_limit <= 0:
        raise ValueError(f"time_limit must be positive, got {cfg.time_limit}")
    if cfg.node_limit is not None and cfg.node_limit < 1:
        raise ValueError(f"node_limit must be at least 1, got {cfg.node_limit}")
    if cfg.threads < 1:
        raise ValueError(f"threads must be at least 1, got {cfg.threads}")
    if cfg.anchor_vertex is not None and not 0 <= cfg.anchor_vertex < n:
        raise ValueError(f"anchor_vertex {cfg.anchor_vertex} outside 0..{n - 1}")


def theoretical_lower_bound(U: InteractionMatrix) -> float:
    """Largest off-diagonal weight: some pair always sits at distance >= 1."""
    if U.n < 2:
        raise ValueError("lower bound needs at least one vertex pair")
    return float(U.u.max())


def default_anchor(U: InteractionMatrix) -> int:
    """Vertex with the largest interaction row sum, ties by lowest index."""
    return int(np.argmax(U.u.sum(axis=1)))


@lru_cache(maxsize=4)
def _positions_table(n: int) -> np.ndarray:
    """All permutations of positions 1..n in lexicographic order."""
    table = np.array(list(permutations(range(1, n + 1))), dtype=np.int8)
    table.setflags(write=False)
    return table


def brute_force(U: InteractionMatrix) -> SolveResult:
    """Enumerate every ordering; independent oracle for the exact solvers.

    Returns the lexicographically smallest optimal permutation.  Refuses
    n > 10 outright (factorial enumeration).
    """
    n = U.n
    if n < 1:
        raise ValueError("matrix must cover at least one vertex")
    if n > _BRUTE_FORCE_MAX_N:
        raise ValueError(
            f"brute force enumerates n! orderings; refusing n={n} > {_BRUTE_FORCE_MAX_N}"
        )
    t0 = time.perf_counter()
    if n == 1:
        return SolveResult(
            ordering=Ordering.identity(1),
            objective=0.0,
            lower_bound=0.0,
            status=STATUS_OPTIMAL,
            nodes_explored=1,
            wall_time=time.perf_counter() - t0,
        )
    perms = _positions_table(n)
    u = U.u
    obj = np.zeros(len(perms))
    for i in range(n):
        for j in range(i + 1, n):
            np.maximum(obj, u[i, j] * np.abs(perms[:, i] - perms[:, j]), out=obj)
    best = int(np.argmin(obj))  # first minimum = lexicographically smallest
    return SolveResult(
        ordering=Ordering(tuple(int(p) for p in perms[best])),
        objective=float(obj[best]),
        lower_bound=theoretical_lower_bound(U),
        status=STATUS_OPTIMAL,
        nodes_explored=len(perms),
        wall_time=time.perf_counter() - t0,
    )


class _Stop(Exception):
    """Internal signal: abandon the current worker's search."""


def _greedy_probe(u: list[list[float]], n: int) -> tuple[tuple[int, ...], float]:
    """Construct one ordering by the search's own branching rule.

    Starts from vertex 0 and repeatedly appends the unplaced vertex with
    the strongest interaction to the placed set (ties by index).  Seeding
    the incumbent with this dive makes the first feasible solution
    independent of the pruning configuration.
    """
    pos = [0] * n
    pos[0] = 1
    placed = [0]
    objective = 0.0
    for p in range(2, n + 1):
        best_v = -1
        best_s = -1.0
        for v in range(n):
            if pos[v]:
                continue
            row = u[v]
            s = 0.0
            for w in placed:
                x = row[w]
                if x > s:
                    s = x
            if s > best_s:
                best_s = s
                best_v = v
        v = best_v
        row = u[v]
        for w in placed:
            term = row[w] * (p - pos[w])
            if term > objective:
                objective = term
        pos[v] = p
        placed.append(v)
    return tuple(pos), objective


class _Search:
    """State shared by all workers of one branch-and-bound run."""

    def __init__(
        self,
        u: list[list[float]],
        cfg: SolveConfig,
        anchor: int,
        lower_bound: float,
        seed: Ordering,
        seed_objective: float,
        deadline: float,
    ):
        self.n = len(u)
        self.u = u
        self.sym = cfg.use_symmetry_breaking
        self.use_lb = cfg.use_lower_bound
        self.lb = lower_bound
        self.anchor = anchor
        self.half = (self.n + 1) // 2
        self.deadline = deadline
        self.node_limit = cfg.node_limit
        self.lock = threading.Lock()
        self.done = threading.Event()
        self.timed_out = False
        self.approx_nodes = 0
        # incumbent cell: updates only on strict improvement, under the lock
        self.incumbent_obj = seed_objective
        self.incumbent_perm = seed.perm


class _Worker:
    """Depth-first search over a set of root subtrees.

    Positions are filled left to right; candidates are tried strongest
    interaction with the placed set first, ties by index.  A node is one
    evaluated position assignment.
    """

    def __init__(self, search: _Search, serial: bool):
        self.s = search
        self.serial = serial
        self.nodes = 0
        self._reported = 0
        self.pos = [0] * search.n
        self.placed: list[int] = []

    def run(self, roots: list[int]) -> None:
        s = self.s
        try:
            if time.monotonic() >= s.deadline:
                s.timed_out = True
                s.done.set()
                return
            for v in roots:
                if s.done.is_set():
                    raise _Stop
                self._count_node()
                if 0.0 >= s.incumbent_obj:
                    continue
                self.pos[v] = 1
                self.placed.append(v)
                self._extend(1, 0.0)
                self.placed.pop()
                self.pos[v] = 0
        except _Stop:
            pass

    def _count_node(self) -> None:
        self.nodes += 1
        s = self.s
        if self.serial and s.node_limit is not None and self.nodes >= s.node_limit:
            s.timed_out = True
            s.done.set()
            raise _Stop
        if self.nodes & _CHECK_MASK == 0:
            self._periodic()

    def _periodic(self) -> None:
        s = self.s
        if s.done.is_set():
            raise _Stop
        if time.monotonic() >= s.deadline:
            s.timed_out = True
            s.done.set()
            raise _Stop
        if not self.serial and s.node_limit is not None:
            with s.lock:
                s.approx_nodes += self.nodes - self._reported
                self._reported = self.nodes
                if s.approx_nodes >= s.node_limit:
                    s.timed_out = True
                    s.done.set()
            if s.done.is_set():
                raise _Stop

    def _offer(self, objective: float, v: int, p: int) -> None:
        s = self.s
        with s.lock:
            if objective < s.incumbent_obj:
                perm = list(self.pos)
                perm[v] = p
                s.incumbent_obj = objective
                s.incumbent_perm = tuple(perm)
                if s.use_lb and objective == s.lb:
                    s.done.set()
        if s.done.is_set():
            raise _Stop

    def _extend(self, depth: int, partial: float) -> None:
        s = self.s
        n = s.n
        u = s.u
        pos = self.pos
        placed = self.placed
        p = depth + 1

        if s.sym and pos[s.anchor] == 0 and p == s.half:
            candidates = [s.anchor]
        else:
            candidates = [v for v in range(n) if pos[v] == 0]
            if len(candidates) > 1:
                scored = []
                for v in candidates:
                    row = u[v]
                    strongest = 0.0
                    for w in placed:
                        x = row[w]
                        if x > strongest:
                            strongest = x
                    scored.append((-strongest, v))
                scored.sort()
                candidates = [v for _, v in scored]

        last = p == n
        for v in candidates:
            self._count_node()
            row = u[v]
            new = partial
            for w in placed:
                term = row[w] * (p - pos[w])
                if term > new:
                    new = term
            if new >= s.incumbent_obj:
                continue
            if last:
                self._offer(new, v, p)
            else:
                pos[v] = p
                placed.append(v)
                self._extend(depth + 1, new)
                placed.pop()
                pos[v] = 0


def branch_and_bound(
    U: InteractionMatrix,
    cfg: SolveConfig | None = None,
    warm_start: Ordering | None = None,
) -> SolveResult:
    """Depth-first exact solve with bound seeding and symmetry pruning.

    The incumbent starts from the better of ``warm_start`` (the identity
    ordering when absent) and a greedy construction dive, then is
    reversal-normalized so the anchor sits in the first half of the
    positions.  Hitting a time or node limit returns the incumbent with
    status "feasible-timeout"; natural termination is "optimal".
    """
    if cfg is None:
        cfg = SolveConfig()
    n = U.n
    if n < 1:
        raise ValueError("matrix must cover at least one vertex")
    _validate_config(n, cfg)
    t0 = time.perf_counter()
    if n == 1:
        return SolveResult(
            ordering=Ordering.identity(1),
            objective=0.0,
            lower_bound=0.0,
            status=STATUS_OPTIMAL,
            nodes_explored=0,
            wall_time=time.perf_counter() - t0,
        )

    lower_bound = theoretical_lower_bound(U)
    anchor = cfg.anchor_vertex if cfg.anchor_vertex is not None else default_anchor(U)
    seed = warm_start if warm_start is not None else Ordering.identity(n)
    if seed.n != n:
        raise ValueError(f"warm start covers {seed.n} vertices, matrix has {n}")
    half = (n + 1) // 2
    u_rows: list[list[float]] = [[float(x) for x in row] for row in U.u]
    seed_objective = weighted_bandwidth(U, seed).value
    probe_perm, probe_objective = _greedy_probe(u_rows, n)
    if probe_objective < seed_objective:
        seed = Ordering(probe_perm)
        seed_objective = probe_objective
    if seed.perm[anchor] > half:
        seed = seed.reversed()

    if cfg.use_lower_bound and seed_objective == lower_bound:
        return SolveResult(
            ordering=seed,
            objective=seed_objective,
            lower_bound=lower_bound,
            status=STATUS_OPTIMAL,
            nodes_explored=0,
            wall_time=time.perf_counter() - t0,
        )

    search = _Search(
        u_rows, cfg, anchor, lower_bound, seed, seed_objective, t0 + cfg.time_limit
    )
    if cfg.use_symmetry_breaking and half == 1:
        roots = [anchor]
    else:
        roots = list(range(n))

    if cfg.threads <= 1 or len(roots) == 1:
        worker = _Worker(search, serial=cfg.threads <= 1)
        worker.run(roots)
        workers = [worker]
    else:
        k = min(cfg.threads, len(roots))
        workers = [_Worker(search, serial=False) for _ in range(k)]
        threads = [
            threading.Thread(target=w.run, args=(roots[i::k],), daemon=True)
            for i, w in enumerate(workers)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    objective = search.incumbent_obj
    bound_certified = cfg.use_lower_bound and objective == lower_bound
    status = STATUS_TIMEOUT if search.timed_out and not bound_certified else STATUS_OPTIMAL
    return SolveResult(
        ordering=Ordering(search.incumbent_perm),
        objective=objective,
        lower_bound=lower_bound,
        status=status,
        nodes_explored=sum(w.nodes for w in workers),
        wall_time=time.perf_counter() - t0,
    )


def _wrap_row(text: str, width: int = 240) -> list[str]:
    """Split one constraint row at token boundaries; continuations indented."""
    if len(text) <= width:
        return [text]
    tokens = text.split(" ")
    lines: list[str] = []
    current = tokens[0]
    for tok in tokens[1:]:
        if len(current) + 1 + len(tok) > width:
            lines.append(current)
            current = "   " + tok
        else:
            current += " " + tok
    lines.append(current)
    return lines


def export_lp(
    U: InteractionMatrix, cfg: SolveConfig | None, path: str | Path
) -> None:
    """Write the position-assignment MILP in LP text format.

    Variables: continuous ``b`` plus binaries ``x_v{v}_i{i}`` (n^2 + 1
    total).  Rows: ``pos{i}`` and ``vtx{v}`` assignment constraints, one
    ``bw_{u}_{v}`` row per ordered vertex pair (both orientations realize
    the absolute position difference), and, when enabled, the ``lb`` bound
    row and the ``sym`` anchor row.
    """
    if cfg is None:
        cfg = SolveConfig()
    n = U.n
    if n < 2:
        raise ValueError("LP export needs at least 2 vertices")
    _validate_config(n, cfg)
    anchor = cfg.anchor_vertex if cfg.anchor_vertex is not None else default_anchor(U)
    half = (n + 1) // 2
    u = U.u

    def var(v: int, i: int) -> str:
        return f"x_v{v}_i{i}"

    rows: list[str] = []
    rows.append(f"\\ weighted bandwidth minimization over {n} sites")
    rows.append("Minimize")
    rows.append(" obj: b")
    rows.append("Subject To")
    for i in range(1, n + 1):
        terms = " + ".join(var(v, i) for v in range(n))
        rows.extend(_wrap_row(f" pos{i}: {terms} = 1"))
    for v in range(n):
        terms = " + ".join(var(v, i) for i in range(1, n + 1))
        rows.extend(_wrap_row(f" vtx{v}: {terms} = 1"))
    for a in range(n):
        for b_v in range(n):
            if a == b_v:
                continue
            d6 = 1.0 / float(u[a, b_v])
            parts = []
            for i in range(1, n + 1):
                coeff = "" if i == 1 else f"{i} "
                parts.append(f"+ {coeff}{var(a, i)}")
            for i in range(1, n + 1):
                coeff = "" if i == 1 else f"{i} "
                parts.append(f"- {coeff}{var(b_v, i)}")
            parts.append(f"- {d6!r} b <= 0")
            rows.extend(_wrap_row(f" bw_{a}_{b_v}: " + " ".join(parts)))
    if cfg.use_lower_bound:
        rows.append(f" lb: b >= {theoretical_lower_bound(U)!r}")
    if cfg.use_symmetry_breaking:
        parts = []
        for i in range(1, n + 1):
            coeff = "" if i == 1 else f"{i} "
            parts.append(("+ " if i > 1 else "") + f"{coeff}{var(anchor, i)}")
        rows.extend(_wrap_row(" sym: " + " ".join(parts) + f" <= {half}"))
    rows.append("Bounds")
    rows.append(" b >= 0")
    rows.append("Binaries")
    names = [var(v, i) for v in range(n) for i in range(1, n + 1)]
    for start in range(0, len(names), 8):
        rows.append(" " + " ".join(names[start : start + 8]))
    rows.append("End")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def result_to_json(result: SolveResult) -> str:
    doc = {
        "schema": SCHEMA_RESULT,
        "objective": result.objective,
        "lower_bound": result.lower_bound,
        "status": result.status,
        "nodes": result.nodes_explored,
        "wall_time_s": result.wall_time,
        "ordering": list(result.ordering.perm),
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def result_from_json(text: str) -> SolveResult:
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_RESULT:
        raise ValueError(f'expected an object with schema "{SCHEMA_RESULT}"')
    return SolveResult(
        ordering=Ordering(tuple(int(p) for p in doc["ordering"])),
        objective=float(doc["objective"]),
        lower_bound=float(doc["lower_bound"]),
        status=str(doc["status"]),
        nodes_explored=int(doc["nodes"]),
        wall_time=float(doc["wall_time_s"]),
    )


def save_result(result: SolveResult, path: str | Path) -> None:
    Path(path).write_text(result_to_json(result), encoding="utf-8")


def load_result(path: str | Path) -> SolveResult:
    return result_from_json(Path(path).read_text(encoding="utf-8"))
