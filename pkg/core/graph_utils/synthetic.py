from core.graph_utils.uncertain_graph import UncertainGraph


def random_graph(n, m, rng, low=0.1, high=0.9):
    """Directed graph with ``m`` distinct non-loop edges, p ~ U[low, high].

    Edges are drawn without replacement from the n(n-1) ordered pairs.
    """
    slots = n * (n - 1)
    if m > slots:
        raise ValueError(f"{m} edges do not fit in a simple digraph on {n} nodes")
    picks = rng.generator.choice(slots, size=m, replace=False)
    probs = rng.generator.uniform(low, high, size=m)
    edges = []
    for slot, p in zip(picks.tolist(), probs.tolist()):
        u, k = divmod(slot, n - 1)
        v = k if k < u else k + 1
        edges.append((u, v, p))
    return UncertainGraph(n, edges)


def chain_graph(probs):
    """0 -> 1 -> ... -> len(probs)."""
    return UncertainGraph(len(probs) + 1, [(i, i + 1, p) for i, p in enumerate(probs)])
