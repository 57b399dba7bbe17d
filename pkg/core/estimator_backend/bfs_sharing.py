import os
from collections import deque
from dataclasses import dataclass
import numpy as np

from core.graph_utils.possible_world import PossibleWorld
from core.utils.decorator import timed_estimate
from core.utils.errors import IndexFormatError, IndexTooNarrow
from core.utils.models import BFS_INDEX_MAGIC, Estimate

WORD_BITS = 64
# edges sampled per numpy call while building
BUILD_CHUNK = 1024


@dataclass
class EdgeBitIndex:
    """One L-bit vector per edge, packed little-endian into uint64 words.

    Bit i of edge e's vector (word i // 64, bit i % 64) says whether e exists in
    the i-th pre-sampled world.
    """
    L: int
    bits: np.ndarray  # shape (m, ceil(L / 64)), uint64

    @property
    def words(self):
        return self.bits.shape[1]

    @property
    def nbytes(self):
        return len(BFS_INDEX_MAGIC) + 16 + self.bits.nbytes


@dataclass
class NodeStateVectors:
    """Per-query reach vectors I_v and the visited set U."""
    reach: np.ndarray  # shape (n, words), uint64
    visited: np.ndarray  # shape (n,), bool
    propagations: int = 0


def _words_for(L):
    return (L + WORD_BITS - 1) // WORD_BITS


def _pack_rows(rows):
    """Pack a (m, L) boolean matrix into (m, ceil(L/64)) little-endian uint64 words."""
    m, L = rows.shape
    padded = np.zeros((m, _words_for(L) * WORD_BITS), dtype=bool)
    padded[:, :L] = rows
    packed = np.packbits(padded, axis=1, bitorder='little')
    return np.ascontiguousarray(packed).view('<u8').astype(np.uint64)


def _prefix_mask(K, words):
    """Word mask with the first K bits set."""
    full, rest = divmod(K, WORD_BITS)
    mask = np.zeros(words, dtype=np.uint64)
    mask[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rest:
        mask[full] = np.uint64((1 << rest) - 1)
    return mask


def popcount(words):
    return int(np.unpackbits(np.ascontiguousarray(words).view(np.uint8)).sum())

# ------------
# offline index
# ------------

def build_index(graph, L, rng):
    if L < 1:
        raise ValueError("L must be at least 1")
    bits = np.zeros((graph.m, _words_for(L)), dtype=np.uint64)
    for start in range(0, graph.m, BUILD_CHUNK):
        stop = min(start + BUILD_CHUNK, graph.m)
        rows = rng.uniforms((stop - start, L)) < graph.probs[start:stop, None]
        bits[start:stop] = _pack_rows(rows)
    return EdgeBitIndex(L=int(L), bits=bits)


def refresh_index(index, graph, rng):
    """Redraw every bit with the same width; keeps successive queries independent."""
    return build_index(graph, index.L, rng)


def materialize_world(index, k):
    """World k of the index as a PossibleWorld."""
    word, bit = divmod(k, WORD_BITS)
    return PossibleWorld(((index.bits[:, word] >> np.uint64(bit)) & np.uint64(1)).astype(bool))


def save_index(index, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'wb') as f:
        f.write(BFS_INDEX_MAGIC)
        f.write(np.array([index.L, index.bits.shape[0]], dtype='<u8').tobytes())
        f.write(index.bits.astype('<u8').tobytes())


def load_index(path):
    with open(path, 'rb') as f:
        magic = f.read(len(BFS_INDEX_MAGIC))
        if magic != BFS_INDEX_MAGIC:
            raise IndexFormatError(f"{path} is not a BFS-sharing index")
        L, m = np.frombuffer(f.read(16), dtype='<u8').tolist()
        words = _words_for(L)
        payload = f.read()
    if len(payload) != m * words * 8:
        raise IndexFormatError(f"{path}: expected {m * words * 8} payload bytes, found {len(payload)}")
    bits = np.frombuffer(payload, dtype='<u8').astype(np.uint64).reshape(m, words)
    return EdgeBitIndex(L=int(L), bits=bits)

# ------------
# online query
# ------------

def cascade_update(v, u, state, index, graph, edge):
    """OR (I_v AND bits(edge)) into I_u, edge being v->u, and push any change
    through visited out-neighbors.

    Runs to a fixpoint: a node is re-queued whenever its vector gains a bit.
    """
    reach, visited = state.reach, state.visited
    incoming = reach[v] & index.bits[edge, :reach.shape[1]]
    updated = reach[u] | incoming
    if np.array_equal(updated, reach[u]):
        return state
    reach[u] = updated
    state.propagations += 1
    queue = deque([u])
    while queue:
        w = queue.popleft()
        for e in graph.out_edges[w]:
            x = graph.target_list[e]
            if not visited[x]:
                continue
            gained = reach[w] & index.bits[e, :reach.shape[1]]
            updated = reach[x] | gained
            if not np.array_equal(updated, reach[x]):
                reach[x] = updated
                state.propagations += 1
                queue.append(x)
    return state


def shared_bfs(index, graph, s, K):
    """Run the shared BFS over the first K worlds and return the node state."""
    if K > index.L:
        raise IndexTooNarrow(K, index.L)
    words = _words_for(K)
    mask = _prefix_mask(K, words)
    state = NodeStateVectors(reach=np.zeros((graph.n, words), dtype=np.uint64),
                             visited=np.zeros(graph.n, dtype=bool))
    reach, visited = state.reach, state.visited
    reach[s] = mask
    visited[s] = True
    worklist = deque(graph.target_list[e] for e in graph.out_edges[s])
    while worklist:
        v = worklist.popleft()
        # duplicates are allowed in the worklist and dropped here
        if visited[v]:
            continue
        visited[v] = True
        acc = np.zeros(words, dtype=np.uint64)
        for e in graph.in_edges[v]:
            u = graph.source_list[e]
            if visited[u]:
                acc |= reach[u] & index.bits[e, :words]
        reach[v] = acc & mask
        for e in graph.out_edges[v]:
            out = graph.target_list[e]
            if not visited[out]:
                worklist.append(out)
            else:
                cascade_update(v, out, state, index, graph, e)
    return state


@timed_estimate
def bfs_sharing_query(index, graph, s, t, K, rng=None):
    graph.check_node(s)
    graph.check_node(t)
    if K > index.L:
        raise IndexTooNarrow(K, index.L)
    if s == t:
        return Estimate(1.0, samples_used=K, seed=rng.seed if rng is not None else 0)
    state = shared_bfs(index, graph, s, K)
    return Estimate(popcount(state.reach[t]) / K, samples_used=K,
                    seed=rng.seed if rng is not None else 0)
