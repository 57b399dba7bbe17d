import math
import os
from dataclasses import dataclass, field
from itertools import permutations
import numpy as np

from core.utils.config_utils import default_seed, load_key
from core.utils.decorator import console, timed_estimate
from core.utils.errors import IndexFormatError, LossyWidthError, UnknownNode
from core.utils.models import PROBTREE_MAGIC, PROBTREE_VERSION, PROBTREE_INNER_NAMES
from core.utils.rng import RandomStream
from core.estimator_backend.lazy_prop import lp_plus_estimate
from core.estimator_backend.mc import mc_estimate
from core.estimator_backend.rhh import rhh_estimate
from core.estimator_backend.rss import rss_estimate
from core.graph_utils.uncertain_graph import UncertainGraph

ROOT = -1
_INNER = {'mc': mc_estimate, 'lp+': lp_plus_estimate, 'rhh': rhh_estimate, 'rss': rss_estimate}


@dataclass(frozen=True)
class AggregatedEdge:
    """Directed edge whose probability folds in two-hop paths through eliminated nodes.

    ``base`` is the probability of the original edge (None when the edge only
    exists through aggregation); ``provenance`` holds one ``(bag id, path
    probability)`` factor per bag that contributed. The probability is the
    noisy-or of everything, summed in log space in bag order so that dropping a
    factor and adding it back gives the same float.
    """
    source: int
    target: int
    base: float = None
    provenance: tuple = ()

    @property
    def p(self):
        if not self.provenance:
            return 0.0 if self.base is None else self.base
        factors = ([] if self.base is None else [self.base]) + [c for _, c in self.provenance]
        if max(factors) >= 1.0:
            return 1.0
        # log space keeps contributions far below machine epsilon
        return -math.expm1(math.fsum(math.log1p(-f) for f in factors))

    def with_contribution(self, bag_id, c):
        factors = dict(self.provenance)
        factors[bag_id] = c
        return AggregatedEdge(self.source, self.target, self.base, tuple(sorted(factors.items())))

    def without(self, bag_ids):
        """Same edge minus the factors of ``bag_ids``; None when nothing remains."""
        kept = tuple((b, c) for b, c in self.provenance if b not in bag_ids)
        if self.base is None and not kept:
            return None
        return AggregatedEdge(self.source, self.target, self.base, kept)


@dataclass
class Bag:
    id: int
    covered: int
    nodes: tuple
    edges: list = field(default_factory=list)
    parent: int = ROOT
    level: int = 1


@dataclass
class ProbTreeIndex:
    n: int
    width: int
    bags: list
    root_nodes: tuple
    root_edges: list
    lossy: bool = False

    def __post_init__(self):
        self.covered_by = np.full(self.n, ROOT, dtype=np.int64)
        for bag in self.bags:
            self.covered_by[bag.covered] = bag.id

    @property
    def depth(self):
        return max((bag.level for bag in self.bags), default=0)

# ------------
# index construction
# ------------

def _skeleton(graph):
    nbrs = [set() for _ in range(graph.n)]
    for u, v in zip(graph.source_list, graph.target_list):
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def _next_node(nbrs, remaining, w):
    best = None
    for v in remaining:
        d = len(nbrs[v])
        if 1 <= d <= w and (best is None or (d, v) < best):
            best = (d, v)
    return None if best is None else best[1]


def build_fwd_index(graph, w=None, lossy=None):
    """Fixed-width decomposition with bottom-up pairwise aggregation.

    Nodes of skeleton degree 1..w are peeled lowest degree first (lowest id on
    ties). Each peeled node takes its incident directed edges into a new bag and
    every two-hop path a -> v -> b among its neighbors is folded into edge a -> b.
    Whatever cannot be peeled is the root.
    """
    w = int(load_key('probtree.width')) if w is None else int(w)
    lossy = bool(load_key('probtree.lossy')) if lossy is None else bool(lossy)
    if w < 1:
        raise ValueError("width must be at least 1")
    if w > 2:
        if not lossy:
            raise LossyWidthError(w)
        console.print(f"[yellow]width {w} > 2: query graphs are approximations[/]")

    nbrs = _skeleton(graph)
    live = {(u, v): AggregatedEdge(u, v, p) for u, v, p in graph.edges()}
    remaining = set(range(graph.n))
    bags = []
    while True:
        v = _next_node(nbrs, remaining, w)
        if v is None:
            break
        bag_id = len(bags)
        around = sorted(nbrs[v])
        edges = []
        for x in around:
            for key in ((v, x), (x, v)):
                if key in live:
                    edges.append(live.pop(key))
        incoming = {e.source: e.p for e in edges if e.target == v}
        outgoing = {e.target: e.p for e in edges if e.source == v}
        for a, b in permutations(around, 2):
            if a in incoming and b in outgoing:
                c = incoming[a] * outgoing[b]
                if c == 0.0:
                    continue
                current = live.get((a, b)) or AggregatedEdge(a, b)
                live[(a, b)] = current.with_contribution(bag_id, c)
        for a in around:
            nbrs[a].discard(v)
            nbrs[a].update(x for x in around if x != a)
        nbrs[v] = set()
        remaining.discard(v)
        bags.append(Bag(id=bag_id, covered=v, nodes=(v, *around), edges=edges))

    covered_by = {bag.covered: bag.id for bag in bags}
    for bag in bags:
        holders = [covered_by[x] for x in bag.nodes[1:] if x in covered_by]
        bag.parent = min(holders) if holders else ROOT
    # parents are always created later, so walk backwards
    for bag in reversed(bags):
        bag.level = 1 if bag.parent == ROOT else bags[bag.parent].level + 1
    return ProbTreeIndex(n=graph.n, width=w, bags=bags, root_nodes=tuple(sorted(remaining)),
                         root_edges=sorted(live.values(), key=lambda e: (e.source, e.target)),
                         lossy=lossy)

# ------------
# query graph
# ------------

def lifted_bags(index, s, t):
    """Bags covering s or t together with all of their ancestors."""
    lifted = set()
    for u in (s, t):
        b = int(index.covered_by[u])
        while b != ROOT and b not in lifted:
            lifted.add(b)
            b = index.bags[b].parent
    return lifted


def extract_query_graph(index, s, t):
    """Root merged with every lifted bag; contributions of lifted bags are taken back out.

    The result is labelled with node ids of the indexed graph.
    """
    for u in (s, t):
        if not 0 <= u < index.n:
            raise UnknownNode(f"node id {u} outside 0..{index.n - 1}")
    lifted = lifted_bags(index, s, t)
    nodes = set(index.root_nodes)
    edges = list(index.root_edges)
    for b in sorted(lifted):
        nodes.update(index.bags[b].nodes)
        edges.extend(index.bags[b].edges)
    order = sorted(nodes)
    remap = {u: i for i, u in enumerate(order)}
    kept = []
    for edge in edges:
        edge = edge.without(lifted)
        if edge is not None:
            kept.append((remap[edge.source], remap[edge.target], edge.p))
    return UncertainGraph(len(order), kept, labels=order)


@timed_estimate
def probtree_estimate(index, s, t, K, inner=None, rng=None, params=None):
    """Run the inner estimator on the query graph of (s, t); ``params`` go to rhh/rss."""
    inner = load_key('probtree.inner') if inner is None else inner
    rng = rng or RandomStream(default_seed())
    if inner not in _INNER:
        raise ValueError(f"inner estimator must be one of {PROBTREE_INNER_NAMES}, got {inner!r}")
    query = extract_query_graph(index, s, t)
    extra = {'params': params} if params is not None and inner in ('rhh', 'rss') else {}
    return _INNER[inner](query, query.node_id(s), query.node_id(t), K, rng=rng, **extra)

# ------------
# serialization
# ------------

def _edge_table(edges, holder):
    rows = [(holder, e.source, e.target, np.nan if e.base is None else e.base) for e in edges]
    prov = [(c, b, p) for c, e in enumerate(edges) for b, p in e.provenance]
    return rows, prov


def save_probtree(index, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    rows, prov = [], []
    for holder, edges in [(ROOT, index.root_edges)] + [(b.id, b.edges) for b in index.bags]:
        r, p = _edge_table(edges, holder)
        prov.extend((len(rows) + c, b, q) for c, b, q in p)
        rows.extend(r)
    sizes = [len(b.nodes) for b in index.bags]
    arrays = [
        np.array([PROBTREE_VERSION, index.n, index.width, int(index.lossy), len(index.bags)], dtype=np.int64),
        np.array([(b.covered, b.parent, b.level) for b in index.bags], dtype=np.int64).reshape(-1, 3),
        np.array(sizes, dtype=np.int64),
        np.array([x for b in index.bags for x in b.nodes], dtype=np.int64),
        np.array(index.root_nodes, dtype=np.int64),
        np.array([r[:3] for r in rows], dtype=np.int64).reshape(-1, 3),
        np.array([r[3] for r in rows], dtype=np.float64),
        np.array([p[:2] for p in prov], dtype=np.int64).reshape(-1, 2),
        np.array([p[2] for p in prov], dtype=np.float64),
    ]
    with open(path, 'wb') as f:
        f.write(PROBTREE_MAGIC)
        for a in arrays:
            np.save(f, a, allow_pickle=False)


def load_probtree(path):
    with open(path, 'rb') as f:
        if f.read(len(PROBTREE_MAGIC)) != PROBTREE_MAGIC:
            raise IndexFormatError(f"{path} is not a ProbTree index")
        try:
            header, bag_rows, sizes, flat_nodes, root_nodes, edge_rows, bases, prov_rows, prov_p = \
                (np.load(f, allow_pickle=False) for _ in range(9))
        except (ValueError, EOFError) as e:
            raise IndexFormatError(f"{path}: truncated or corrupt ({e})") from e
    version, n, width, lossy, num_bags = header.tolist()
    if version != PROBTREE_VERSION:
        raise IndexFormatError(f"{path}: index version {version}, expected {PROBTREE_VERSION}")

    factors = {}
    for (row, b), q in zip(prov_rows.tolist(), prov_p.tolist()):
        factors.setdefault(row, []).append((b, q))
    held = {}
    for i, ((holder, u, v), base) in enumerate(zip(edge_rows.tolist(), bases.tolist())):
        edge = AggregatedEdge(u, v, None if np.isnan(base) else base, tuple(sorted(factors.get(i, []))))
        held.setdefault(holder, []).append(edge)

    bags, offset = [], 0
    for i, ((covered, parent, level), size) in enumerate(zip(bag_rows.tolist(), sizes.tolist())):
        nodes = tuple(flat_nodes[offset:offset + size].tolist())
        offset += size
        bags.append(Bag(id=i, covered=covered, nodes=nodes, edges=held.get(i, []), parent=parent, level=level))
    if len(bags) != num_bags:
        raise IndexFormatError(f"{path}: header says {num_bags} bags, found {len(bags)}")
    return ProbTreeIndex(n=n, width=width, bags=bags, root_nodes=tuple(root_nodes.tolist()),
                         root_edges=held.get(ROOT, []), lossy=bool(lossy))
