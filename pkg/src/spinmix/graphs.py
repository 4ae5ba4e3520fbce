"""Graphs, pinnings, distances, and the self-avoiding-walk tree construction."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import GraphFormatError, PinningError
from .numerics import ExactComplex

PLUS = "+"
MINUS = "-"


def flip_spin(s: str) -> str:
    return MINUS if s == PLUS else PLUS


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with optional vertex fields.

    ``fields`` (when present) carries a nonzero external-field scalar per
    vertex; it is a parsing artifact used by the CLI to build parameters and
    is never read by the partition-function operations directly.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    fields: tuple[ExactComplex, ...] | None = None
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("vertex count must be nonnegative")
        seen = set()
        normalized = []
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"vertex id out of range in edge {e}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)
            normalized.append(key)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        if self.fields is not None:
            flds = tuple(ExactComplex._coerce(x) for x in self.fields)
            if len(flds) != self.n:
                raise GraphFormatError("field vector length must equal vertex count")
            if any(x.is_zero() for x in flds):
                raise GraphFormatError("field values must be nonzero")
            object.__setattr__(self, "fields", flds)
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    # -- basic queries -------------------------------------------------------

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def distances_from(self, v: int) -> list[int | float]:
        """BFS distances; unreachable vertices get math.inf."""
        dist: list[int | float] = [math.inf] * self.n
        dist[v] = 0
        q = deque([v])
        while q:
            x = q.popleft()
            for y in self._adj[x]:
                if dist[y] == math.inf:
                    dist[y] = dist[x] + 1
                    q.append(y)
        return dist

    def distance(self, u: int, v: int) -> float:
        return self.distances_from(u)[v]

    def diameter(self) -> int:
        """Largest finite pairwise distance (0 for edgeless graphs)."""
        best = 0
        for v in range(self.n):
            for d in self.distances_from(v):
                if d != math.inf:
                    best = max(best, int(d))
        return best

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return sum(1 for d in self.distances_from(0) if d != math.inf) == self.n

    def is_forest(self) -> bool:
        return len(self.edges) == self.n - len(self.components())

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == self.n - 1

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = []
            q = deque([s])
            seen[s] = True
            while q:
                x = q.popleft()
                comp.append(x)
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        q.append(y)
            comps.append(sorted(comp))
        return comps

    # -- derived graphs ------------------------------------------------------

    def delete_vertices(self, vs: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on the complement of ``vs`` plus the old->new map."""
        drop = set(vs)
        keep = [v for v in range(self.n) if v not in drop]
        remap = {old: new for new, old in enumerate(keep)}
        edges = tuple((remap[u], remap[v]) for u, v in self.edges
                      if u not in drop and v not in drop)
        flds = None
        if self.fields is not None:
            flds = tuple(self.fields[v] for v in keep)
        return Graph(len(keep), edges, flds), remap

    def tree_path(self, u: int, v: int) -> list[int]:
        """Vertices of the unique u-v path (graph must be acyclic there)."""
        parent: dict[int, int | None] = {u: None}
        q = deque([u])
        while q:
            x = q.popleft()
            if x == v:
                break
            for y in self._adj[x]:
                if y not in parent:
                    parent[y] = x
                    q.append(y)
        if v not in parent:
            raise ValueError(f"no path between {u} and {v}")
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path[::-1]

    def to_json(self) -> dict:
        doc: dict = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.fields is not None:
            doc["fields"] = [[x.re.numerator, x.re.denominator,
                              x.im.numerator, x.im.denominator] for x in self.fields]
        return doc


def parse_graph(document: str | dict) -> Graph:
    """Parse {"n": int, "edges": [[u,v],...], "fields": [[rn,rd,in,id],...]?}."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed graph document: {exc}") from exc
    if not isinstance(document, dict):
        raise GraphFormatError("graph document must be a JSON object")
    if "n" not in document or not isinstance(document["n"], int):
        raise GraphFormatError("graph document needs an integer 'n'")
    raw_edges = document.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphFormatError("'edges' must be a list of pairs")
    edges = []
    for e in raw_edges:
        if not (isinstance(e, list) and len(e) == 2
                and all(isinstance(x, int) for x in e)):
            raise GraphFormatError(f"bad edge entry {e!r}")
        edges.append((e[0], e[1]))
    fields = None
    if document.get("fields") is not None:
        fields = []
        for entry in document["fields"]:
            if not (isinstance(entry, list) and len(entry) == 4
                    and all(isinstance(x, int) for x in entry)):
                raise GraphFormatError(f"bad field entry {entry!r}")
            rn, rd, im_n, im_d = entry
            if rd == 0 or im_d == 0:
                raise GraphFormatError("zero denominator in field entry")
            fields.append(ExactComplex(Fraction(rn, rd), Fraction(im_n, im_d)))
    return Graph(document["n"], tuple(edges), tuple(fields) if fields else None)


# ---------------------------------------------------------------------------
# Pinnings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pinning:
    """Partial configuration: a frozen map from vertices to spins.

    Spins are "+"/"-" for the 2-spin system; the q-spin operations reuse the
    same container with integer spins 1..q.
    """

    pins: tuple[tuple[int, object], ...] = ()

    def __post_init__(self):
        items = tuple(sorted(self.pins))
        verts = [v for v, _ in items]
        if len(set(verts)) != len(verts):
            raise PinningError("a vertex may be pinned at most once")
        object.__setattr__(self, "pins", items)

    @classmethod
    def of(cls, mapping: Mapping[int, object] | None = None) -> "Pinning":
        return cls(tuple((mapping or {}).items()))

    def domain(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.pins)

    def __contains__(self, v: int) -> bool:
        return any(u == v for u, _ in self.pins)

    def __len__(self):
        return len(self.pins)

    def get(self, v: int, default=None):
        for u, s in self.pins:
            if u == v:
                return s
        return default

    def items(self):
        return self.pins

    def as_dict(self) -> dict[int, object]:
        return dict(self.pins)

    def with_pin(self, v: int, spin) -> "Pinning":
        if v in self:
            raise PinningError(f"vertex {v} is already pinned")
        return Pinning(self.pins + ((v, spin),))

    def without(self, vs: Iterable[int]) -> "Pinning":
        drop = set(vs)
        return Pinning(tuple((v, s) for v, s in self.pins if v not in drop))

    def restricted(self, keep: Iterable[int]) -> "Pinning":
        keep = set(keep)
        return Pinning(tuple((v, s) for v, s in self.pins if v in keep))

    def remapped(self, mapping: Mapping[int, int]) -> "Pinning":
        return Pinning(tuple((mapping[v], s) for v, s in self.pins if v in mapping))

    def flipped(self) -> "Pinning":
        return Pinning(tuple((v, flip_spin(s)) for v, s in self.pins))

    def to_json(self) -> dict:
        return {"pins": {str(v): s for v, s in self.pins}}


def parse_pinning(document: str | dict) -> Pinning:
    """Parse {"pins": {"<vertex>": "+"|"-"}}."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed pinning document: {exc}") from exc
    if not isinstance(document, dict) or not isinstance(document.get("pins", {}), dict):
        raise GraphFormatError("pinning document must be {'pins': {...}}")
    pins = []
    for key, spin in document.get("pins", {}).items():
        try:
            v = int(key)
        except ValueError as exc:
            raise GraphFormatError(f"bad vertex key {key!r}") from exc
        if spin not in (PLUS, MINUS):
            raise GraphFormatError(f"bad spin {spin!r} for vertex {key}")
        pins.append((v, spin))
    return Pinning(tuple(pins))


def is_feasible(g: Graph, p: Pinning, beta_is_zero: bool, gamma_is_zero: bool) -> bool:
    """A pinning is infeasible only when a hard edge constraint is violated:
    two adjacent + pins at beta=0, or two adjacent - pins at gamma=0."""
    if not (beta_is_zero or gamma_is_zero):
        return True
    assigned = p.as_dict()
    for u, v in g.edges:
        su = assigned.get(u)
        sv = assigned.get(v)
        if su is None or sv is None:
            continue
        if beta_is_zero and su == PLUS and sv == PLUS:
            return False
        if gamma_is_zero and su == MINUS and sv == MINUS:
            return False
    return True


def is_proper(g: Graph, p: Pinning, v: int,
              beta_is_zero: bool, gamma_is_zero: bool) -> bool:
    """True iff v is unpinned and both one-vertex extensions stay feasible."""
    if v in p:
        return False
    if beta_is_zero and any(p.get(w) == PLUS for w in g.neighbors(v)):
        return False
    if gamma_is_zero and any(p.get(w) == MINUS for w in g.neighbors(v)):
        return False
    return True


def disagreement_distance(g: Graph, v: int, s: Pinning, t: Pinning) -> int | float:
    """Shortest-path distance from v to the set where s and t differ.

    The set is (dom s \\ dom t) | (dom t \\ dom s) | {w : s(w) != t(w)}.
    Returns math.inf when the set is empty or unreachable from v.
    """
    ds, dt = s.as_dict(), t.as_dict()
    diff = {w for w in set(ds) | set(dt) if ds.get(w) != dt.get(w)}
    if any(not (0 <= w < g.n) for w in diff):
        raise PinningError("pinned vertex outside the graph")
    if not diff:
        return math.inf
    dist = g.distances_from(v)
    best = min(dist[w] for w in diff)
    return int(best) if best != math.inf else math.inf


# ---------------------------------------------------------------------------
# Self-avoiding-walk trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SawTree:
    """A rooted SAW tree with its back-mapping and induced pinning.

    ``origin[x]`` is the source vertex that tree vertex x copies.
    ``pinning`` combines the mapped source pins with the spins imposed on
    cycle-closing leaves.
    """

    tree: Graph
    root: int
    origin: tuple[int, ...]
    pinning: Pinning

    def copies_of(self, source_vertex: int) -> tuple[int, ...]:
        return tuple(x for x, o in enumerate(self.origin) if o == source_vertex)


def build_saw_tree(g: Graph, root: int, p: Pinning,
                   beta_is_zero: bool = False,
                   gamma_is_zero: bool = False) -> SawTree:
    """Enumerate all self-avoiding walks from ``root`` into a rooted tree.

    Walk expansion is deterministic: children are generated in ascending
    source-vertex order and tree ids are assigned in BFS order. A walk stops
    when it reaches a pinned vertex (the copy becomes a leaf carrying that
    pin) or when the next vertex already lies on the walk, in which case a
    copy of that vertex is appended as a leaf with an imposed spin. The
    imposed spin compares the edge closing the cycle against the edge the
    walk originally left the revisited vertex by, both ordered by vertex
    index: "+" when the closing neighbor's index exceeds the continuing
    neighbor's index, "-" otherwise.
    """
    tree, cuts = _build_saw(g, root, p, beta_is_zero, gamma_is_zero, max_depth=None)
    assert not cuts
    return tree


def build_saw_tree_truncated(g: Graph, root: int, p: Pinning, depth: int,
                             beta_is_zero: bool = False,
                             gamma_is_zero: bool = False
                             ) -> tuple[SawTree, tuple[int, ...]]:
    """SAW tree cut at walk length ``depth``; also returns the cut vertices.

    A cut vertex is a depth-``depth`` tree vertex whose walk could still be
    extended in the full construction. Callers decide what boundary spin to
    impose on cuts (the Weitz approximator pins them to "-").
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return _build_saw(g, root, p, beta_is_zero, gamma_is_zero, max_depth=depth)


def _build_saw(g, root, p, beta_is_zero, gamma_is_zero, max_depth):
    if not (0 <= root < g.n):
        raise GraphFormatError(f"root {root} out of range")
    if root in p:
        raise PinningError("SAW root must be unpinned")
    if not is_feasible(g, p, beta_is_zero, gamma_is_zero):
        raise PinningError("infeasible pinning")

    origin = [root]
    parent: list[int | None] = [None]
    depth = [0]
    tree_edges: list[tuple[int, int]] = []
    pins: list[tuple[int, str]] = []
    cuts: list[int] = []
    queue = deque([0])
    while queue:
        x = queue.popleft()
        w = origin[x]
        # walk from root to x, as source vertices
        chain: list[int] = []
        node: int | None = x
        while node is not None:
            chain.append(origin[node])
            node = parent[node]
        walk = chain[::-1]
        on_walk = {v: i for i, v in enumerate(walk)}
        parent_origin = walk[-2] if len(walk) >= 2 else None
        if max_depth is not None and depth[x] >= max_depth:
            for y in g.neighbors(w):
                if y != parent_origin:
                    cuts.append(x)
                    break
            continue
        for y in g.neighbors(w):
            if y == parent_origin:
                continue
            child = len(origin)
            origin.append(y)
            parent.append(x)
            depth.append(depth[x] + 1)
            tree_edges.append((x, child))
            if y in p:
                pins.append((child, p.get(y)))
            elif y in on_walk:
                continuing = walk[on_walk[y] + 1]
                pins.append((child, PLUS if w > continuing else MINUS))
            else:
                queue.append(child)
    tree = Graph(len(origin), tuple(tree_edges))
    saw = SawTree(tree=tree, root=0, origin=tuple(origin), pinning=Pinning(tuple(pins)))
    return saw, tuple(cuts)
