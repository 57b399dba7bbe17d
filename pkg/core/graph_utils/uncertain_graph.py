from collections import deque
import numpy as np
import networkx as nx

from core.utils.errors import ReliabilityError, UnknownNode


class UncertainGraph:
    """Directed graph whose edges exist independently with probability p in (0, 1].

    Nodes are dense ids ``0..n-1``; ``labels[i]`` keeps the name a node had in the
    source it was read or derived from. Edges are positional: edge ``i`` is
    ``(sources[i], targets[i], probs[i])`` and ``edge_origin[i]`` is its index in the
    graph it was derived from (itself for freshly built graphs). Instances are
    never mutated after construction.
    """

    def __init__(self, n, edges, labels=None, weights=None, edge_origin=None):
        self.n = int(n)
        edges = list(edges)
        m = len(edges)
        self.sources = np.fromiter((e[0] for e in edges), dtype=np.int64, count=m)
        self.targets = np.fromiter((e[1] for e in edges), dtype=np.int64, count=m)
        self.probs = np.fromiter((e[2] for e in edges), dtype=np.float64, count=m)
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        self.edge_origin = np.arange(m, dtype=np.int64) if edge_origin is None else np.asarray(edge_origin, dtype=np.int64)
        self.labels = list(range(self.n)) if labels is None else list(labels)
        self._validate()

        self.out_edges = [[] for _ in range(self.n)]
        self.in_edges = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(zip(self.sources.tolist(), self.targets.tolist())):
            self.out_edges[u].append(i)
            self.in_edges[v].append(i)
        # plain lists for the per-edge hot loops of the samplers
        self.source_list = self.sources.tolist()
        self.target_list = self.targets.tolist()
        self.prob_list = self.probs.tolist()
        self._label_index = {label: i for i, label in enumerate(self.labels)}

    def _validate(self):
        m = len(self.probs)
        if len(self.labels) != self.n:
            raise ReliabilityError(f"{len(self.labels)} labels for {self.n} nodes")
        if len(self.edge_origin) != m:
            raise ReliabilityError("edge_origin length differs from edge count")
        if m == 0:
            return
        if self.sources.min() < 0 or self.targets.min() < 0 or max(self.sources.max(), self.targets.max()) >= self.n:
            raise ReliabilityError("edge endpoint outside 0..n-1")
        if np.any(self.sources == self.targets):
            raise ReliabilityError("self-loops are not allowed")
        if not np.all((self.probs > 0.0) & (self.probs <= 1.0)):
            bad = int(np.flatnonzero(~((self.probs > 0.0) & (self.probs <= 1.0)))[0])
            raise ReliabilityError(f"edge {bad} has probability {self.probs[bad]} outside (0, 1]")
        pairs = self.sources * self.n + self.targets
        if len(np.unique(pairs)) != m:
            raise ReliabilityError("duplicate (source, target) edge")

    # ------------
    # basic access
    # ------------

    @property
    def m(self):
        return len(self.probs)

    def edge(self, i):
        return self.source_list[i], self.target_list[i], self.prob_list[i]

    def edges(self):
        return list(zip(self.source_list, self.target_list, self.prob_list))

    def node_id(self, label):
        """Dense id of a node given its label (labels are matched as given, then as text)."""
        if label in self._label_index:
            return self._label_index[label]
        text = str(label)
        for key, idx in self._label_index.items():
            if str(key) == text:
                return idx
        raise UnknownNode(f"unknown node {label!r}")

    def out_degree(self, u):
        return len(self.out_edges[u])

    def check_node(self, u):
        if not 0 <= u < self.n:
            raise UnknownNode(f"node id {u} outside 0..{self.n - 1}")

    # ------------
    # derived graphs
    # ------------

    def with_probabilities(self, probs):
        edges = zip(self.source_list, self.target_list, np.asarray(probs, dtype=np.float64).tolist())
        return UncertainGraph(self.n, edges, labels=self.labels, edge_origin=self.edge_origin)

    def subgraph(self, keep_edges, prob_overrides=None, keep_nodes=None):
        """Graph restricted to ``keep_edges`` (indexes into this graph).

        ``prob_overrides`` maps edge index -> new probability. With ``keep_nodes``
        the node set is renumbered densely in the given order and labels carry over;
        otherwise all nodes are kept. ``edge_origin`` points back into this graph.
        """
        prob_overrides = prob_overrides or {}
        if keep_nodes is None:
            remap = None
            n, labels = self.n, self.labels
        else:
            keep_nodes = list(keep_nodes)
            remap = {u: i for i, u in enumerate(keep_nodes)}
            n, labels = len(keep_nodes), [self.labels[u] for u in keep_nodes]
        edges, origin = [], []
        for e in keep_edges:
            u, v, p = self.source_list[e], self.target_list[e], prob_overrides.get(e, self.prob_list[e])
            if remap is not None:
                u, v = remap[u], remap[v]
            edges.append((u, v, p))
            origin.append(e)
        return UncertainGraph(n, edges, labels=labels, edge_origin=origin)

    def conditioned(self, present=(), absent=()):
        """Edges in ``present`` get probability 1, edges in ``absent`` are removed."""
        absent = set(absent)
        keep = [e for e in range(self.m) if e not in absent]
        return self.subgraph(keep, prob_overrides={e: 1.0 for e in present})

    def reachable_from(self, s, usable=None):
        """Nodes reachable from ``s`` when every edge accepted by ``usable`` is present."""
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.out_edges[u]:
                if usable is not None and not usable(e):
                    continue
                v = self.target_list[e]
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    def to_networkx(self):
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_weighted_edges_from(self.edges(), weight='p')
        return g

    def __repr__(self):
        return f"UncertainGraph(n={self.n}, m={self.m})"
