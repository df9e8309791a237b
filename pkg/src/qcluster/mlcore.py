"""Edge weights, exact ML partition and exact heaviest-weight subgraph.

Weights use the +-1 encoding of oracle answers, i.e. ``w = 2z - 1`` for the
0/1 encoding ``z``.  All objectives are exact integers; each unordered pair
is counted once.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import lru_cache

import numpy as np

from .core import Clustering
from .errors import IncompleteGraph, InstanceTooLarge, InvalidInput

__all__ = [
    "WeightedPairGraph",
    "weight_of",
    "weight_from_bit",
    "rgs_table",
    "partition_objective",
    "agreements",
    "ml_partition_exact",
    "ml_blocks",
    "heaviest_subgraph",
    "heaviest_subgraph_bnb",
    "heaviest_subgraph_enum",
    "subset_weight",
    "ML_CAP",
    "SUBGRAPH_CAP",
    "ENUM_CAP",
]

ML_CAP = 12  # Bell(12) = 4,213,597 partitions
SUBGRAPH_CAP = 24
ENUM_CAP = 20


def weight_of(answer: int) -> int:
    """Edge weight for a +-1 oracle answer (the identity on that encoding)."""
    if answer not in (1, -1):
        raise InvalidInput(f"answer must be +1 or -1, got {answer!r}")
    return int(answer)


def weight_from_bit(z: int) -> int:
    """``2z - 1`` for the 0/1 encoding of an answer."""
    if z not in (0, 1):
        raise InvalidInput(f"z must be 0 or 1, got {z!r}")
    return 2 * z - 1


class WeightedPairGraph:
    """Partially queried graph on a vertex subset with +-1 edge weights.

    ``matrix[i, j]`` is the weight between ``vertices[i]`` and ``vertices[j]``;
    0 marks the diagonal and pairs that were never queried.
    """

    __slots__ = ("vertices", "matrix", "_index")

    def __init__(self, vertices: Sequence[int], matrix: np.ndarray):
        self.vertices = tuple(int(v) for v in vertices)
        m = len(self.vertices)
        mat = np.asarray(matrix, dtype=np.int8)
        if mat.shape != (m, m):
            raise InvalidInput(f"matrix shape {mat.shape} does not match {m} vertices")
        if not np.array_equal(mat, mat.T):
            raise InvalidInput("weights must be symmetric")
        if np.any(np.diag(mat) != 0):
            raise InvalidInput("self weights must be 0")
        if not np.isin(mat, (-1, 0, 1)).all():
            raise InvalidInput("weights must be +-1")
        self.matrix = mat
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != m:
            raise InvalidInput("duplicate vertex ids")

    @classmethod
    def from_pairs(cls, vertices: Sequence[int], weights: dict) -> WeightedPairGraph:
        verts = tuple(vertices)
        idx = {v: i for i, v in enumerate(verts)}
        mat = np.zeros((len(verts), len(verts)), dtype=np.int8)
        for (u, v), w in weights.items():
            i, j = idx[u], idx[v]
            mat[i, j] = mat[j, i] = weight_of(int(w))
        return cls(verts, mat)

    @classmethod
    def from_oracle(cls, oracle, vertices: Sequence[int]) -> WeightedPairGraph:
        """Query every pair inside ``vertices`` and wrap the answers."""
        verts = tuple(int(v) for v in vertices)
        m = len(verts)
        mat = np.zeros((m, m), dtype=np.int8)
        if m > 1:
            iu, ju = np.triu_indices(m, 1)
            va = np.asarray(verts, dtype=np.int64)
            ans = oracle.query_many(va[iu], va[ju])
            mat[iu, ju] = ans
            mat[ju, iu] = ans
        return cls(verts, mat)

    def __len__(self) -> int:
        return len(self.vertices)

    def weight(self, u: int, v: int) -> int:
        return int(self.matrix[self._index[u], self._index[v]])

    def is_complete(self) -> bool:
        m = len(self.vertices)
        return int(np.count_nonzero(self.matrix)) == m * (m - 1)

    def require_complete(self) -> None:
        if not self.is_complete():
            raise IncompleteGraph("graph is missing weights for some vertex pairs")

    def subgraph(self, vertices: Iterable[int]) -> WeightedPairGraph:
        verts = tuple(vertices)
        ix = [self._index[v] for v in verts]
        return WeightedPairGraph(verts, self.matrix[np.ix_(ix, ix)])


# ---------------------------------------------------------------- ML partition

@lru_cache(maxsize=16)
def rgs_table(m: int) -> np.ndarray:
    """All restricted-growth strings of length ``m`` in lexicographic order.

    Row ``r`` is the label vector of the ``r``-th set partition; there are
    Bell(m) rows.
    """
    if m < 0:
        raise InvalidInput("m must be non-negative")
    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    table = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int16)  # max label per row
    for _ in range(1, m):
        reps = (top + 2).astype(np.int64)
        parent = np.repeat(np.arange(table.shape[0]), reps)
        starts = np.cumsum(reps) - reps
        child = (np.arange(parent.size) - np.repeat(starts, reps)).astype(np.int8)
        table = np.concatenate([table[parent], child[:, None]], axis=1)
        top = np.maximum(top[parent], child)
    table.setflags(write=False)
    return table


def partition_objective(g: WeightedPairGraph, labels: Sequence[int]) -> int:
    """Total intra-cluster weight, each unordered pair counted once."""
    lab = np.asarray(labels)
    same = lab[:, None] == lab[None, :]
    return int(np.triu(g.matrix.astype(np.int64) * same, 1).sum())


def agreements(g: WeightedPairGraph, labels: Sequence[int]) -> int:
    """Correlation-clustering agreements: intra +1 pairs plus inter -1 pairs."""
    lab = np.asarray(labels)
    same = np.triu(lab[:, None] == lab[None, :], 1)
    cross = np.triu(~(lab[:, None] == lab[None, :]), 1)
    return int(np.count_nonzero(same & (g.matrix > 0)) + np.count_nonzero(cross & (g.matrix < 0)))


def _objectives(matrix: np.ndarray, table: np.ndarray, chunk: int = 1 << 19) -> np.ndarray:
    m = matrix.shape[0]
    out = np.zeros(table.shape[0], dtype=np.int32)
    pairs = [(i, j, int(matrix[i, j])) for i in range(m) for j in range(i + 1, m)]
    for s in range(0, table.shape[0], chunk):
        block = table[s:s + chunk]
        acc = out[s:s + chunk]
        for i, j, w in pairs:
            eq = block[:, i] == block[:, j]
            if w > 0:
                acc += eq
            else:
                acc -= eq
    return out


def ml_partition_exact(g: WeightedPairGraph, cap: int = ML_CAP) -> Clustering:
    """Maximum-likelihood partition of a fully queried graph by exhaustive search.

    Returns a clustering over positions ``0..len(g)-1`` (position ``i`` is
    ``g.vertices[i]``).  Ties go to the first maximizer in restricted-growth
    order.
    """
    m = len(g)
    if m > cap:
        raise InstanceTooLarge(f"{m} vertices exceeds the ML brute-force cap {cap}")
    if m == 0:
        raise InvalidInput("empty graph")
    g.require_complete()
    table = rgs_table(m)
    best = int(np.argmax(_objectives(g.matrix, table)))
    return Clustering(table[best])


def ml_blocks(g: WeightedPairGraph, cap: int = ML_CAP) -> list[frozenset[int]]:
    """:func:`ml_partition_exact` expressed as blocks of element ids."""
    if len(g) == 0:
        return []
    part = ml_partition_exact(g, cap)
    return [frozenset(g.vertices[i] for i in block) for block in part.clusters]


# ----------------------------------------------------------- heaviest subgraph

def subset_weight(g: WeightedPairGraph, members: Iterable[int]) -> int:
    ix = [g._index[v] for v in members]
    sub = g.matrix[np.ix_(ix, ix)].astype(np.int64)
    return int(sub.sum() // 2)


def _better(w, size, key, best) -> bool:
    bw, bsize, bkey = best
    if w != bw:
        return w > bw
    if size != bsize:
        return size < bsize
    return key < bkey


def heaviest_subgraph_enum(g: WeightedPairGraph, cap: int = ENUM_CAP) -> tuple[frozenset[int], int]:
    """Heaviest subgraph by scoring every non-empty vertex subset."""
    m = len(g)
    if m == 0:
        raise InvalidInput("empty graph")
    if m > cap:
        raise InstanceTooLarge(f"{m} vertices exceeds enumeration cap {cap}")
    g.require_complete()
    W = g.matrix.astype(np.float32)
    shifts = np.arange(m, dtype=np.int64)
    best_w = None
    best_masks: list[int] = []
    chunk = 1 << 16
    for s in range(1, 1 << m, chunk):
        masks = np.arange(s, min(s + chunk, 1 << m), dtype=np.int64)
        B = ((masks[:, None] >> shifts) & 1).astype(np.float32)
        w = np.rint(np.einsum("ij,ij->i", B @ W, B) * 0.5).astype(np.int64)
        top = int(w.max())
        if best_w is None or top > best_w:
            best_w, best_masks = top, masks[w == top].tolist()
        elif top == best_w:
            best_masks.extend(masks[w == top].tolist())
    verts = g.vertices
    fewest = min(bin(x).count("1") for x in best_masks)
    keys = [tuple(sorted(verts[i] for i in range(m) if x >> i & 1))
            for x in best_masks if bin(x).count("1") == fewest]
    return frozenset(min(keys)), int(best_w)


def heaviest_subgraph_bnb(g: WeightedPairGraph, cap: int = SUBGRAPH_CAP) -> tuple[frozenset[int], int]:
    """Heaviest subgraph by depth-first branch and bound.

    The optimistic bound credits every undecided vertex with its gain against
    the current set plus its +1 edges to vertices decided after it, clipped
    at zero.
    """
    m = len(g)
    if m == 0:
        raise InvalidInput("empty graph")
    if m > cap:
        raise InstanceTooLarge(f"{m} vertices exceeds subgraph solver cap {cap}")
    g.require_complete()
    posdeg = (g.matrix > 0).sum(axis=1)
    order = sorted(range(m), key=lambda i: (-int(posdeg[i]), i))
    Wo = g.matrix[np.ix_(order, order)].astype(np.int64).tolist()
    ids = [g.vertices[i] for i in order]
    plater = [sum(1 for j2 in range(j + 1, m) if Wo[j][j2] > 0) for j in range(m)]

    best = [0, 1, (min(g.vertices),)]

    def rec(idx: int, members: list[int], cur: int, gain: list[int]) -> None:
        bound = cur
        for j in range(idx, m):
            t = gain[j] + plater[j]
            if t > 0:
                bound += t
        bw = best[0]
        if bound < bw or (bound == bw and len(members) + 1 > best[1]):
            return
        row = Wo[idx]
        new_members = members + [ids[idx]]
        new_cur = cur + gain[idx]
        size = len(new_members)
        if new_cur >= bw:
            key = tuple(sorted(new_members))
            if _better(new_cur, size, key, best):
                best[0], best[1], best[2] = new_cur, size, key
        if idx + 1 < m:
            new_gain = gain[:]
            for j in range(idx + 1, m):
                new_gain[j] += row[j]
            rec(idx + 1, new_members, new_cur, new_gain)
            rec(idx + 1, members, cur, gain)

    rec(0, [], 0, [0] * m)
    return frozenset(best[2]), int(best[0])


def heaviest_subgraph(g: WeightedPairGraph, cap: int = SUBGRAPH_CAP,
                      method: str = "bnb") -> tuple[frozenset[int], int]:
    """Non-empty vertex subset maximizing its internal weight.

    Ties go to the smallest subset, then to the lexicographically smallest
    sorted member list.  ``method`` is ``"bnb"`` or ``"enum"``.
    """
    if method == "bnb":
        return heaviest_subgraph_bnb(g, cap)
    if method == "enum":
        return heaviest_subgraph_enum(g, min(cap, ENUM_CAP))
    raise InvalidInput(f"unknown method {method!r}")
