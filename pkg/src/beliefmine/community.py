"""Hashtag co-occurrence graph, Louvain communities, layout and profiles.

Edge weights count tweet pairs sharing a hashtag: w(u, v) = sum over
hashtags h of n_u(h) * n_v(h), where n_u(h) is how many of u's tweets
carry h. Louvain is the standard two-phase greedy modularity
maximizer with a seeded node visit order; equal-gain ties go to the
lowest community id so runs are reproducible.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .corpus import YES, LinkedPair, TweetRecord
from .errors import EmptyGraph


@dataclass
class HashtagGraph:
    """Weighted undirected user graph; each edge stored once with u < v."""

    adj: dict[str, dict[str, int]] = field(default_factory=dict)

    def add_node(self, node: str) -> None:
        self.adj.setdefault(node, {})

    def add_edge(self, u: str, v: str, weight: int = 1) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed")
        if weight < 1:
            raise ValueError("edge weight must be >= 1")
        self.add_node(u)
        self.add_node(v)
        self.adj[u][v] = self.adj[u].get(v, 0) + weight
        self.adj[v][u] = self.adj[v].get(u, 0) + weight

    @property
    def nodes(self) -> list[str]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[str, str, int]]:
        out = []
        for u in sorted(self.adj):
            for v, w in self.adj[u].items():
                if u < v:
                    out.append((u, v, w))
        return out

    def degree(self, node: str) -> int:
        return sum(self.adj[node].values())

    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges())

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())


def build_graph(
    records: list[TweetRecord],
    keep_isolated: bool = False,
    binary_weights: bool = False,
) -> HashtagGraph:
    """Co-occurrence graph over authors; users without hashtags are dropped
    unless keep_isolated is set."""
    per_user: dict[str, Counter] = defaultdict(Counter)
    authors = []
    for rec in records:
        authors.append(rec.author)
        for tag in set(rec.hashtags):
            per_user[rec.author][tag] += 1

    graph = HashtagGraph()
    if keep_isolated:
        for author in authors:
            graph.add_node(author)
    else:
        for author in per_user:
            graph.add_node(author)

    by_tag: dict[str, list[str]] = defaultdict(list)
    for user, counts in per_user.items():
        for tag in counts:
            by_tag[tag].append(user)

    weights: dict[tuple[str, str], int] = defaultdict(int)
    for tag, users in by_tag.items():
        users = sorted(users)
        for i, u in enumerate(users):
            for v in users[i + 1 :]:
                weights[(u, v)] += per_user[u][tag] * per_user[v][tag]
    for (u, v), w in weights.items():
        graph.add_edge(u, v, 1 if binary_weights else w)
    return graph


def modularity(graph: HashtagGraph, communities: dict[str, int]) -> float:
    """Newman modularity of an assignment, recomputed from scratch."""
    m = graph.total_weight()
    if m == 0:
        return 0.0
    intra: Counter = Counter()
    degree_sum: Counter = Counter()
    for node in graph.adj:
        degree_sum[communities[node]] += graph.degree(node)
    for u, v, w in graph.edges():
        if communities[u] == communities[v]:
            intra[communities[u]] += w
    q = 0.0
    for com in degree_sum:
        q += intra.get(com, 0) / m - (degree_sum[com] / (2.0 * m)) ** 2
    return q


@dataclass
class Partition:
    communities: dict[str, int]
    modularity: float
    level_modularities: list[float] = field(default_factory=list)

    def groups(self) -> dict[int, list[str]]:
        grouped: dict[int, list[str]] = defaultdict(list)
        for node in sorted(self.communities):
            grouped[self.communities[node]].append(node)
        return dict(grouped)


def _one_level(
    adj: dict[int, dict[int, float]], m2: float, rng: random.Random, resolution: float
) -> dict[int, int]:
    """Greedy local moves until no node improves modularity."""
    degree = {
        i: sum(w for j, w in nbrs.items() if j != i) + 2.0 * nbrs.get(i, 0.0)
        for i, nbrs in adj.items()
    }
    com = {i: i for i in adj}
    sigma_tot = dict(degree)

    improved = True
    while improved:
        improved = False
        order = sorted(adj)
        rng.shuffle(order)
        for i in order:
            ci = com[i]
            k_i = degree[i]
            neigh: dict[int, float] = defaultdict(float)
            for j, w in adj[i].items():
                if j != i:
                    neigh[com[j]] += w
            sigma_tot[ci] -= k_i
            # score(c) ~ dQ of inserting i into c, up to a constant factor
            best_c = ci
            best_score = neigh.get(ci, 0.0) - sigma_tot[ci] * k_i * resolution / m2
            for c in sorted(neigh):
                score = neigh[c] - sigma_tot[c] * k_i * resolution / m2
                if score > best_score or (score == best_score and c < best_c):
                    best_score = score
                    best_c = c
            sigma_tot[best_c] = sigma_tot.get(best_c, 0.0) + k_i
            com[i] = best_c
            if best_c != ci:
                improved = True
    return com


def _aggregate(
    adj: dict[int, dict[int, float]], com: dict[int, int]
) -> tuple[dict[int, dict[int, float]], dict[int, int]]:
    relabel: dict[int, int] = {}
    for i in sorted(adj):
        relabel.setdefault(com[i], len(relabel))
    new_adj: dict[int, dict[int, float]] = {relabel[c]: {} for c in relabel}
    for i in adj:
        ci = relabel[com[i]]
        for j, w in adj[i].items():
            if j < i:
                continue  # visit each undirected pair once (self-loops included)
            cj = relabel[com[j]]
            if ci == cj:
                new_adj[ci][ci] = new_adj[ci].get(ci, 0.0) + w
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
                new_adj[cj][ci] = new_adj[cj].get(ci, 0.0) + w
    mapped = {i: relabel[com[i]] for i in adj}
    return new_adj, mapped


def louvain(graph: HashtagGraph, seed: int = 0, resolution: float = 1.0) -> Partition:
    """Two-phase Louvain; raises EmptyGraph when there is nothing to cluster."""
    if graph.edge_count() == 0:
        raise EmptyGraph("graph has no edges")
    nodes = graph.nodes
    ids = {node: i for i, node in enumerate(nodes)}
    adj: dict[int, dict[int, float]] = {
        ids[u]: {ids[v]: float(w) for v, w in graph.adj[u].items()} for u in nodes
    }
    m2 = sum(
        sum(w for j, w in nbrs.items() if j != i) + 2.0 * nbrs.get(i, 0.0)
        for i, nbrs in adj.items()
    )
    rng = random.Random(seed)

    assignment = {i: i for i in adj}  # original index -> current community
    level_qs: list[float] = []
    while True:
        com = _one_level(adj, m2, rng, resolution)
        adj, mapped = _aggregate(adj, com)
        assignment = {i: mapped[assignment[i]] for i in assignment}
        q = modularity(graph, {node: assignment[ids[node]] for node in nodes})
        if level_qs and q - level_qs[-1] <= 1e-9:
            break
        level_qs.append(q)
        if len(adj) == 1:
            break

    raw = {node: assignment[ids[node]] for node in nodes}
    dense: dict[int, int] = {}
    for node in nodes:
        dense.setdefault(raw[node], len(dense))
    communities = {node: dense[raw[node]] for node in nodes}
    return Partition(
        communities=communities,
        modularity=modularity(graph, communities),
        level_modularities=level_qs,
    )


def layout(
    graph: HashtagGraph, iterations: int = 50, seed: int = 0
) -> dict[str, tuple[float, float]]:
    """Fruchterman-Reingold force-directed layout inside the unit frame.

    Ideal distance k = sqrt(area / |V|) with area 1; repulsion k^2/d for
    all pairs, attraction d^2/k scaled by edge weight, displacement capped
    by a linearly cooling temperature.
    """
    nodes = graph.nodes
    n = len(nodes)
    if n == 0:
        return {}
    if n == 1:
        return {nodes[0]: (0.5, 0.5)}

    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    k = float(np.sqrt(1.0 / n))
    idx = {node: i for i, node in enumerate(nodes)}
    weight = np.zeros((n, n))
    for u, v, w in graph.edges():
        weight[idx[u], idx[v]] = w
        weight[idx[v], idx[u]] = w

    temp = 0.1
    dt = temp / (iterations + 1)
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.clip(dist, 0.01, None, out=dist)
        np.fill_diagonal(dist, 1.0)
        coeff = k * k / (dist * dist) - weight * dist / k
        np.fill_diagonal(coeff, 0.0)
        disp = (delta * coeff[:, :, None]).sum(axis=1)
        length = np.linalg.norm(disp, axis=1)
        np.clip(length, 1e-12, None, out=length)
        pos += disp / length[:, None] * np.minimum(length, temp)[:, None]
        np.clip(pos, 0.0, 1.0, out=pos)
        temp -= dt
    return {node: (float(pos[i, 0]), float(pos[i, 1])) for node, i in idx.items()}


@dataclass
class CommunityProfile:
    community_id: int
    size: int
    top_hashtags: list[tuple[str, int]]
    percent_belief: float | None


def profile(
    partition: Partition,
    records: list[TweetRecord],
    labeled: list[tuple[LinkedPair, str]],
    top_k: int = 8,
) -> list[CommunityProfile]:
    """Per-community top hashtags (by tweet count) and belief percentage.

    Belief is measured over labeled responses whose source tweet's author
    sits in the community.
    """
    members = partition.groups()
    member_sets = {cid: set(nodes) for cid, nodes in members.items()}

    tag_counts: dict[int, Counter] = {cid: Counter() for cid in members}
    node_of = partition.communities
    for rec in records:
        cid = node_of.get(rec.author)
        if cid is None:
            continue
        for tag in set(rec.hashtags):
            tag_counts[cid][tag] += 1

    yes_counts: Counter = Counter()
    total_counts: Counter = Counter()
    for pair, label in labeled:
        cid = node_of.get(pair.source_tweet.author)
        if cid is None:
            continue
        total_counts[cid] += 1
        if label == YES:
            yes_counts[cid] += 1

    profiles = []
    for cid in sorted(members):
        ranked = sorted(tag_counts[cid].items(), key=lambda kv: (-kv[1], kv[0]))
        percent = (
            100.0 * yes_counts[cid] / total_counts[cid] if total_counts[cid] else None
        )
        profiles.append(
            CommunityProfile(
                community_id=cid,
                size=len(member_sets[cid]),
                top_hashtags=ranked[:top_k],
                percent_belief=percent,
            )
        )
    return profiles


def to_dot(graph: HashtagGraph, partition: Partition | None = None) -> str:
    """DOT serialization with weight attributes for external rendering."""
    lines = ["graph hashtag_communities {"]
    for node in graph.nodes:
        if partition is not None:
            cid = partition.communities.get(node)
            lines.append(f'  "{node}" [community={cid}];')
        else:
            lines.append(f'  "{node}";')
    for u, v, w in graph.edges():
        lines.append(f'  "{u}" -- "{v}" [weight={w}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
