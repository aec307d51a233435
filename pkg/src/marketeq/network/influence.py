"""Independent-cascade influence networks: exact expectation, sampling and sparsity."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from marketeq.errors import GuardExceededError, InvalidGameError
from marketeq.rational import format_rational, parse_rational

logger = logging.getLogger(__name__)

MAX_UNCERTAIN_EDGES = 25
SAMPLE_BATCH = 4096


@dataclass(frozen=True)
class InfluenceNetwork:
    """
    Directed network on nodes `0..nodes-1` whose edges carry activation probabilities.

    Args:
        nodes (`int`):
            Number of nodes.
        workers (`Tuple[int, ...]`):
            The node of every worker, in worker order.
        edges (`Tuple[Tuple[int, int, Fraction], ...]`):
            Directed edges `(u, v, p)` with `0 < p <= 1`.
    """

    nodes: int
    workers: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "workers", tuple(int(u) for u in self.workers))
        object.__setattr__(
            self,
            "edges",
            tuple((int(u), int(v), Fraction(p)) for u, v, p in self.edges),
        )
        if self.nodes < 0:
            raise InvalidGameError(f"Node count must be non-negative, got {self.nodes}")
        if len(set(self.workers)) != len(self.workers):
            raise InvalidGameError("Worker nodes must be distinct")
        for u in self.workers:
            if not 0 <= u < self.nodes:
                raise InvalidGameError(f"Worker node {u} outside 0..{self.nodes - 1}")
        for u, v, p in self.edges:
            if not (0 <= u < self.nodes and 0 <= v < self.nodes):
                raise InvalidGameError(f"Edge ({u}, {v}) has an endpoint outside the network")
            if not 0 < p <= 1:
                raise InvalidGameError(f"Edge ({u}, {v}) has probability {p} outside (0, 1]")

    @property
    def n(self) -> int:
        return len(self.workers)

    @property
    def is_deterministic(self) -> bool:
        return all(p == 1 for _, _, p in self.edges)

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.nodes))
        for u, v, p in self.edges:
            if graph.has_edge(u, v):
                # parallel edges combine into one independent attempt
                q = graph[u][v]["p"]
                graph[u][v]["p"] = 1 - (1 - q) * (1 - p)
            else:
                graph.add_edge(u, v, p=p)
        return graph

    def seed_nodes(self, seeds: Iterable[int]) -> FrozenSet[int]:
        nodes = set()
        for j in seeds:
            if not 0 <= j < self.n:
                raise InvalidGameError(f"Seed worker {j} outside 0..{self.n - 1}")
            nodes.add(self.workers[j])
        return frozenset(nodes)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InfluenceNetwork":
        try:
            edges = []
            for edge in data.get("edges", []):
                p = parse_rational(edge[2]) if len(edge) > 2 else Fraction(1)
                edges.append((edge[0], edge[1], p))
            return cls(
                nodes=int(data["nodes"]),
                workers=tuple(data["workers"]),
                edges=tuple(edges),
            )
        except (KeyError, TypeError, IndexError) as e:
            raise InvalidGameError(f"Malformed network document: {e}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": self.nodes,
            "workers": list(self.workers),
            "edges": [[u, v, format_rational(p)] for u, v, p in self.edges],
        }


@dataclass(frozen=True)
class InfluenceEstimate:
    """Monte-Carlo estimate of expected influence"""

    mean: float
    stderr: float
    samples: int
    seed: Optional[int] = field(default=None)


def _reached(adjacency: Dict[int, List[int]], seeds: FrozenSet[int]) -> set:
    reached = set(seeds)
    stack = list(seeds)
    while stack:
        u = stack.pop()
        for v in adjacency.get(u, ()):
            if v not in reached:
                reached.add(v)
                stack.append(v)
    return reached


def influence_exact(
    network: InfluenceNetwork, seeds: Iterable[int], unsafe_limits: bool = False
) -> Fraction:
    """Expected number of activated nodes outside the seed set, computed exactly.

    Deterministic edges are always live; only the uncertain edges reachable from
    the seeds are percolated, so the enumeration guard applies to those alone.
    """
    return _influence_exact(network, network.seed_nodes(seeds), unsafe_limits)


@lru_cache(maxsize=65536)
def _influence_exact(
    network: InfluenceNetwork, seeds: FrozenSet[int], unsafe_limits: bool
) -> Fraction:
    if not seeds:
        return Fraction(0)
    graph = network.graph
    relevant = set(seeds)
    for s in seeds:
        relevant |= nx.descendants(graph, s)

    certain: Dict[int, List[int]] = {}
    uncertain: List[Tuple[int, int, Fraction]] = []
    for u, v, data in graph.edges(data=True):
        if u not in relevant:
            continue
        if data["p"] == 1:
            certain.setdefault(u, []).append(v)
        else:
            uncertain.append((u, v, data["p"]))

    if not uncertain:
        return Fraction(len(_reached(certain, seeds)) - len(seeds))
    if len(uncertain) > MAX_UNCERTAIN_EDGES and not unsafe_limits:
        raise GuardExceededError("uncertain edges", len(uncertain), MAX_UNCERTAIN_EDGES)

    logger.debug("Percolating %d uncertain edges", len(uncertain))
    expected = Fraction(0)
    for live in range(1 << len(uncertain)):
        probability = Fraction(1)
        adjacency = {u: list(vs) for u, vs in certain.items()}
        for e, (u, v, p) in enumerate(uncertain):
            if live >> e & 1:
                probability *= p
                adjacency.setdefault(u, []).append(v)
            else:
                probability *= 1 - p
        if probability:
            expected += probability * (len(_reached(adjacency, seeds)) - len(seeds))
    return expected


def _sample_batch(
    child: np.random.SeedSequence,
    size: int,
    tails: np.ndarray,
    heads: np.ndarray,
    probabilities: np.ndarray,
    nodes: int,
    seed_nodes: List[int],
) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(child))
    live = rng.random((size, len(tails))) < probabilities
    active = np.zeros((size, nodes), dtype=bool)
    active[:, seed_nodes] = True
    changed = True
    while changed:
        changed = False
        for e in range(len(tails)):
            fresh = active[:, tails[e]] & live[:, e] & ~active[:, heads[e]]
            if fresh.any():
                active[:, heads[e]] |= fresh
                changed = True
    active[:, seed_nodes] = False
    return active.sum(axis=1)


def influence_monte_carlo(
    network: InfluenceNetwork,
    seeds: Iterable[int],
    samples: int,
    seed: Optional[int] = None,
    workers: int = 1,
) -> InfluenceEstimate:
    """Estimate expected influence by sampling percolations.

    Samples are drawn in fixed-size batches, each from its own Philox stream
    spawned from `seed`, so the estimate does not depend on `workers`.
    """
    if samples < 1:
        raise InvalidGameError(f"samples must be at least 1, got {samples}")
    seed_nodes = sorted(network.seed_nodes(seeds))
    edges = list(network.graph.edges(data=True))
    tails = np.array([u for u, _, _ in edges], dtype=np.int64)
    heads = np.array([v for _, v, _ in edges], dtype=np.int64)
    probabilities = np.array([float(d["p"]) for _, _, d in edges], dtype=np.float64)

    sizes = [SAMPLE_BATCH] * (samples // SAMPLE_BATCH)
    if samples % SAMPLE_BATCH:
        sizes.append(samples % SAMPLE_BATCH)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(args):
        child, size = args
        return _sample_batch(
            child, size, tails, heads, probabilities, network.nodes, seed_nodes
        )

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        counts = np.concatenate(list(pool.map(run, zip(children, sizes))))

    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return InfluenceEstimate(mean=mean, stderr=stderr, samples=samples, seed=seed)


def reach_counts(network: InfluenceNetwork) -> Dict[int, int]:
    """Number of workers with a directed path to each node, a worker never reaching itself"""
    counts = {u: 0 for u in range(network.nodes)}
    for w in network.workers:
        for u in nx.descendants(network.graph, w):
            counts[u] += 1
    return counts


def sparsity(network: InfluenceNetwork) -> int:
    """Smallest t such that the network is t-sparse"""
    return max(reach_counts(network).values(), default=0)
