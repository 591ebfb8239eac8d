"""Clustering, superclustering and tree-partition data structures.

A level-i clustering partitions a subset of the vertices into clusters,
each with a center and a BFS tree of depth <= i rooted at that center.
A superclustering groups clusters; each supercluster carries a connecting
tree in G, and the trees of distinct superclusters are edge-disjoint.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set

from .graph import Edge, Graph, canon


@dataclass
class Clustering:
    """Partition of a vertex subset into centered, tree-backed clusters."""

    level: int
    membership: Dict[int, int]        # vertex -> center
    parents: Dict[int, Optional[int]]  # vertex -> tree parent (None at center)
    depth_bound: int

    @property
    def centers(self) -> Set[int]:
        return {c for c in self.membership.values()}

    @property
    def clustered(self) -> Set[int]:
        return set(self.membership)

    def members(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for v, c in self.membership.items():
            out.setdefault(c, []).append(v)
        return {c: sorted(vs) for c, vs in out.items()}

    def tree_edges(self) -> Set[Edge]:
        return {
            canon(v, p) for v, p in self.parents.items() if p is not None
        }

    def children(self) -> Dict[int, List[int]]:
        ch: Dict[int, List[int]] = {v: [] for v in self.membership}
        for v, p in self.parents.items():
            if p is not None:
                ch[p].append(v)
        return {v: sorted(c) for v, c in ch.items()}

    def depths(self) -> Dict[int, int]:
        d: Dict[int, int] = {}
        for c in self.centers:
            d[c] = 0
        pending = [v for v in self.membership if v not in d]
        # parents form trees, so repeated relaxation terminates
        while pending:
            nxt = []
            for v in pending:
                p = self.parents[v]
                if p in d:
                    d[v] = d[p] + 1
                else:
                    nxt.append(v)
            if len(nxt) == len(pending):
                raise ValueError("broken parent pointers in clustering")
            pending = nxt
        return d

    def validate(self, g: Graph) -> None:
        members = self.members()
        for c, vs in members.items():
            if c not in vs:
                raise ValueError(f"center {c} not inside its own cluster")
        for v, p in self.parents.items():
            if p is None:
                if self.membership[v] != v:
                    raise ValueError(f"non-center {v} lacks a parent")
                continue
            if self.membership.get(p) != self.membership[v]:
                raise ValueError(f"tree edge ({v},{p}) crosses clusters")
            if not g.has_edge(v, p):
                raise ValueError(f"tree edge ({v},{p}) not in graph")
        for v, d in self.depths().items():
            if d > self.depth_bound:
                raise ValueError(
                    f"vertex {v} at tree depth {d} > bound {self.depth_bound}"
                )

    @staticmethod
    def singletons(vertices) -> "Clustering":
        return Clustering(
            level=0,
            membership={v: v for v in vertices},
            parents={v: None for v in vertices},
            depth_bound=0,
        )


@dataclass
class Supercluster:
    """A group of cluster centers joined by a bounded-depth tree in G."""

    sc_id: int                      # ID of the maximum-ID member vertex
    clusters: FrozenSet[int]        # member cluster centers
    tree_edges: FrozenSet[Edge]     # connecting tree T(SC) in G
    root: int
    depth_bound: int

    def tree_vertices(self) -> Set[int]:
        vs = {self.root}
        for u, v in self.tree_edges:
            vs.add(u)
            vs.add(v)
        return vs

    def tree_depth(self) -> int:
        """Depth of the connecting tree from its root (0 for a lone vertex)."""
        adj: Dict[int, List[int]] = {}
        for u, v in self.tree_edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if not adj:
            return 0
        seen = {self.root: 0}
        q = deque([self.root])
        while q:
            x = q.popleft()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen[y] = seen[x] + 1
                    q.append(y)
        if set(adj) - set(seen):
            raise ValueError(f"supercluster {self.sc_id} tree is disconnected")
        return max(seen.values())


@dataclass
class Superclustering:
    """A covering, cluster-disjoint grouping of one clustering's clusters."""

    level: int
    superclusters: List[Supercluster]
    vertex_bound: int       # N0/N2 bound on N_V for non-singletons
    cluster_bound: int      # N1 bound on N_C for non-singletons
    count_bound: int        # bound on the number of superclusters

    def by_id(self) -> Dict[int, Supercluster]:
        return {sc.sc_id: sc for sc in self.superclusters}

    def vertex_sets(self, clustering: Clustering) -> Dict[int, Set[int]]:
        members = clustering.members()
        out = {}
        for sc in self.superclusters:
            vs: Set[int] = set()
            for c in sc.clusters:
                vs.update(members.get(c, ()))
            out[sc.sc_id] = vs
        return out


@dataclass
class WeightedTree:
    """Vertex-weighted tree within G, input of the balanced partitioning."""

    edges: FrozenSet[Edge]
    root: int
    weights: Dict[int, int]
    bound: int  # B

    def vertices(self) -> Set[int]:
        vs = {self.root}
        for u, v in self.edges:
            vs.add(u)
            vs.add(v)
        return vs

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {v: [] for v in self.vertices()}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: sorted(ns) for v, ns in adj.items()}

    def validate(self) -> None:
        vs = self.vertices()
        if len(self.edges) != len(vs) - 1:
            raise ValueError("edge count does not match a tree")
        adj = self.adjacency()
        seen = {self.root}
        q = deque([self.root])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    q.append(y)
        if seen != vs:
            raise ValueError("tree is disconnected")
        for v in vs:
            w = self.weights.get(v, 0)
            if w < 0:
                raise ValueError(f"negative weight at {v}")
            if w > self.bound:
                raise ValueError(
                    f"vertex {v} weight {w} exceeds bound B={self.bound}"
                )


@dataclass
class TreePart:
    root: int
    owned: FrozenSet[int]       # V-hat(T_j)
    edges: FrozenSet[Edge]      # subtree edges

    @property
    def tree_vertices(self) -> Set[int]:
        vs = {self.root} | set(self.owned)
        for u, v in self.edges:
            vs.add(u)
            vs.add(v)
        return vs


@dataclass
class TreePartition:
    """Output of the balanced tree partitioning; part 0 is the one possibly
    light part, rooted at the input tree's root."""

    parts: List[TreePart]
    leftover_index: int = 0

    def weight(self, part: TreePart, weights: Dict[int, int]) -> int:
        return sum(weights.get(v, 0) for v in part.owned)
