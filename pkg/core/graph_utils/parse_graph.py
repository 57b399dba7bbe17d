import io
from core.graph_utils.uncertain_graph import UncertainGraph
from core.utils.errors import GraphFormatError, UnknownNode


def _iter_lines(text):
    if isinstance(text, str):
        text = io.StringIO(text)
    for line_no, line in enumerate(text, start=1):
        stripped = line.split('#', 1)[0].strip()
        if stripped:
            yield line_no, stripped.split()


def parse_edge_list(text, weighted=False):
    """Read ``source target probability`` lines into an UncertainGraph.

    Node labels are renumbered densely in order of first appearance and line
    order becomes edge order. With ``weighted=True`` the third column is a raw
    weight (any positive number); probabilities are left at 1.0 until a
    probability model is applied.
    """
    labels, index = [], {}
    edges, weights, seen = [], [], set()

    def node(label):
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for line_no, fields in _iter_lines(text):
        if len(fields) != 3:
            raise GraphFormatError(line_no, f"expected 'source target {'weight' if weighted else 'probability'}', got {len(fields)} fields")
        src, dst, raw = fields
        try:
            value = float(raw)
        except ValueError:
            raise GraphFormatError(line_no, f"not a number: {raw!r}") from None
        if src == dst:
            raise GraphFormatError(line_no, f"self-loop on {src!r}")
        if weighted:
            if not value > 0:
                raise GraphFormatError(line_no, f"weight {raw} must be positive")
        elif not 0.0 < value <= 1.0:
            raise GraphFormatError(line_no, f"probability {raw} out of range (0, 1]")
        if (src, dst) in seen:
            raise GraphFormatError(line_no, f"duplicate edge {src} -> {dst}")
        seen.add((src, dst))
        u, v = node(src), node(dst)
        edges.append((u, v, 1.0 if weighted else value))
        weights.append(value)

    return UncertainGraph(len(labels), edges, labels=labels, weights=weights if weighted else None)


def read_graph(path, weighted=False):
    with open(path, 'r', encoding='utf-8') as f:
        return parse_edge_list(f, weighted=weighted)


def format_edge_list(graph):
    """Inverse of parse_edge_list; probabilities with 17 significant digits."""
    lines = [f"{graph.labels[u]} {graph.labels[v]} {p:.17g}" for u, v, p in graph.edges()]
    return "".join(line + "\n" for line in lines)


def write_graph(graph, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(format_edge_list(graph))

# ------------
# workload files: "s t" per line, original labels
# ------------

def parse_workload(text, graph):
    pairs = []
    for line_no, fields in _iter_lines(text):
        if len(fields) not in (2, 3):
            raise GraphFormatError(line_no, "expected 's t' or 's t hops'")
        try:
            s, t = graph.node_id(fields[0]), graph.node_id(fields[1])
        except UnknownNode as e:
            raise GraphFormatError(line_no, str(e)) from None
        hops = int(fields[2]) if len(fields) == 3 else None
        pairs.append((s, t, hops))
    return pairs


def format_workload(graph, pairs):
    return "".join(f"{graph.labels[s]} {graph.labels[t]}\n" for s, t, *_ in pairs)
