"""Necessary conditions for an incidence structure to be a polytope.

Passing every check does not prove polytopality; the report says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from . import lattice as lat
from .errors import NonPolytopalError
from .lattice import IncidencePolytope

CHECK_NAMES = ("incidence", "graded", "diamond", "ridges", "euler", "balinski")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SanityReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def summary(self) -> str:
        if self.ok:
            return "necessary conditions passed"
        return "failed: " + ", ".join(
            f"{r.name} ({r.detail})" if r.detail else r.name
            for r in self.results if not r.passed)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "summary": self.summary(),
                "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                           for r in self.results]}


def vertex_connectivity_at_least(n: int, edges: Sequence[Tuple[int, int]], k: int) -> bool:
    """Whether the graph has no vertex cut of size < ``k``.

    Complete graphs count as (n-1)-connected.  Otherwise the minimum-degree
    vertex ``v`` reduces the question to local connectivities between ``v``
    and its non-neighbours and between non-adjacent neighbours of ``v``
    (Esfahanian-Hakimi).  Local connectivities are max flows on the split
    graph with unit vertex capacities.
    """
    if k <= 0:
        return True
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    degs = [a.bit_count() for a in adj]
    if min(degs, default=0) < k:
        return False
    if all(d == n - 1 for d in degs):
        return n - 1 >= k

    rows, cols, caps = [], [], []
    for v in range(n):
        rows.append(2 * v)
        cols.append(2 * v + 1)
        caps.append(1)
    for u, v in edges:
        rows += [2 * u + 1, 2 * v + 1]
        cols += [2 * v, 2 * u]
        caps += [n, n]
    cap = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(2 * n, 2 * n))

    def local(s: int, t: int) -> int:
        return maximum_flow(cap, 2 * s + 1, 2 * t).flow_value

    v = min(range(n), key=lambda i: (degs[i], i))
    for w in range(n):
        if w != v and not adj[v] >> w & 1 and local(v, w) < k:
            return False
    nbrs = [u for u in range(n) if adj[v] >> u & 1]
    for i, x in enumerate(nbrs):
        for y in nbrs[i + 1:]:
            if not adj[x] >> y & 1 and local(x, y) < k:
                return False
    return True


def euler_ok(f: Sequence[int], d: int) -> bool:
    return sum((-1) ** k * fk for k, fk in enumerate(f)) == 1 - (-1) ** d


def sanity_check(P: IncidencePolytope, max_faces: Optional[int] = None) -> SanityReport:
    """Run every necessary-condition check and collect pass/fail entries.

    :class:`~polyexcess.errors.ResourceLimitError` from lattice enumeration
    propagates; it is not a verdict on the input.
    """
    report = SanityReport()
    add = report.results.append
    issues = lat.incidence_problems(P)
    add(CheckResult("incidence", not issues, "; ".join(issues)))

    cap = lat.MAX_FACES if max_faces is None else max_faces
    raw = lat._lattice_raw(P, cap)
    problems = raw.problems
    graded = problems.get("graded", []) + problems.get("atoms", []) + problems.get("coatoms", [])
    add(CheckResult("graded", not graded, "; ".join(graded)))
    add(CheckResult("diamond", "diamond" not in problems, "; ".join(problems.get("diamond", []))))

    if graded:
        for name in ("ridges", "euler", "balinski"):
            add(CheckResult(name, False, "lattice not graded"))
        return report

    assembled = lat._assemble(P, raw)
    bad_ridges = [r for r in assembled.masks(P.dim - 2) if len(assembled.up[r]) != 2] if P.dim >= 2 else []
    add(CheckResult("ridges", not bad_ridges,
                    f"{len(bad_ridges)} ridges not in exactly two facets" if bad_ridges else ""))
    f = assembled.f_vector
    add(CheckResult("euler", euler_ok(f, P.dim), "" if euler_ok(f, P.dim) else f"f-vector {f}"))

    edges = sorted(tuple(lat.bitset.members(m)) for m in assembled.masks(1)
                   if m.bit_count() == 2) if P.dim >= 1 else []
    conn = vertex_connectivity_at_least(P.n_vertices, edges, P.dim)
    add(CheckResult("balinski", conn, "" if conn else f"graph is not {P.dim}-connected"))
    if report.ok:
        P._cache["lattice"] = assembled
        P._cache["sane"] = True
    return report


def require_sane(P: IncidencePolytope, max_faces: Optional[int] = None) -> IncidencePolytope:
    report = sanity_check(P, max_faces)
    if not report.ok:
        raise NonPolytopalError(f"{P.provenance or 'polytope'}: {report.summary()}")
    return P
