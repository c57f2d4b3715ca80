"""
Sublevel-set persistence of profiles (1-D) and height maps (2-D cubical
complexes), plus an exact bottleneck distance.

Cubical complexes use the vertex construction: pixels are vertices, each edge
and square takes the maximum of its corner values. H0 essential classes are
finitized at the global maximum of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import DataError, ParameterError


@dataclass(frozen=True)
class PersistenceDiagram:
    dim: int
    pairs: np.ndarray
    global_max: float

    def __post_init__(self):
        p = np.asarray(self.pairs, dtype=float).reshape(-1, 2)
        if len(p):
            order = np.lexsort((p[:, 1], p[:, 0]))
            p = p[order]
        p.setflags(write=False)
        object.__setattr__(self, "pairs", p)

    @property
    def births(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.pairs[:, 1]

    @property
    def lifetimes(self) -> np.ndarray:
        return self.pairs[:, 1] - self.pairs[:, 0]

    def __len__(self):
        return len(self.pairs)

    def shifted(self, c: float) -> "PersistenceDiagram":
        return PersistenceDiagram(self.dim, self.pairs + c, self.global_max + c)


def _heights(obj, ndim):
    h = getattr(obj, "heights", obj)
    h = np.asarray(h, dtype=float)
    if h.ndim != ndim:
        raise ParameterError(f"expected a {ndim}-D input, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise DataError("input contains non-finite values")
    return h


def _finish(dim, pairs, gmax, keep_zero_persistence):
    pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
    if not keep_zero_persistence and len(pairs):
        pairs = pairs[pairs[:, 1] > pairs[:, 0]]
    return PersistenceDiagram(dim, pairs, float(gmax))


def sublevel_pd_profile(profile, keep_zero_persistence: bool = False) -> PersistenceDiagram:
    """
    0-D sublevel persistence of a sampled function on a path graph.

    Vertices enter in order of height (ties by index); when two components
    meet, the one with the later birth dies.
    """
    f = _heights(profile, 1)
    n = len(f)
    if n < 2:
        raise ParameterError("profile needs at least 2 samples")

    order = np.lexsort((np.arange(n), f))
    parent = np.full(n, -1)

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    # rank in the entry order decides elder
    rank = np.empty(n, dtype=int)
    rank[order] = np.arange(n)
    pairs = []
    for v in order:
        parent[v] = v
        for u in (v - 1, v + 1):
            if 0 <= u < n and parent[u] != -1:
                ru, rv = find(u), find(v)
                if ru == rv:
                    continue
                young, old = (ru, rv) if rank[ru] > rank[rv] else (rv, ru)
                pairs.append((f[young], f[v]))
                parent[young] = old
    gmax = f.max()
    ess = [(f[order[0]], gmax)]
    out = _finish(0, pairs, gmax, keep_zero_persistence)
    return PersistenceDiagram(0, np.vstack([out.pairs, ess]), float(gmax))


class CubicalComplex:
    """
    Vertex-construction cubical complex of a 2-D array.

    Cells are numbered vertices first (row-major), then horizontal edges,
    vertical edges and squares.
    """

    def __init__(self, f: np.ndarray):
        f = np.asarray(f, dtype=float)
        R, C = f.shape
        self.f = f
        self.shape = (R, C)
        vid = np.arange(R * C).reshape(R, C)
        self.n_vert = R * C
        self.n_hedge = R * (C - 1)
        self.n_vedge = (R - 1) * C
        self.n_sq = (R - 1) * (C - 1)
        e0 = self.n_vert
        hid = e0 + np.arange(self.n_hedge).reshape(R, C - 1)
        vvid = e0 + self.n_hedge + np.arange(self.n_vedge).reshape(R - 1, C)

        hval = np.maximum(f[:, :-1], f[:, 1:])
        vval = np.maximum(f[:-1, :], f[1:, :])
        sval = np.maximum(hval[:-1, :], hval[1:, :])

        self.values = np.concatenate([f.ravel(), hval.ravel(), vval.ravel(), sval.ravel()])
        self.dims = np.concatenate([
            np.zeros(self.n_vert, int),
            np.ones(self.n_hedge + self.n_vedge, int),
            np.full(self.n_sq, 2),
        ])
        # boundaries as (n, 2) vertex ids for edges and (n, 4) edge ids for squares
        self.edge_bd = np.concatenate([
            np.stack([vid[:, :-1].ravel(), vid[:, 1:].ravel()], axis=1),
            np.stack([vid[:-1, :].ravel(), vid[1:, :].ravel()], axis=1),
        ])
        self.square_bd = np.stack([
            hid[:-1, :].ravel(), hid[1:, :].ravel(),
            vvid[:, :-1].ravel(), vvid[:, 1:].ravel(),
        ], axis=1)

    def filtration_order(self) -> np.ndarray:
        """Cell ids sorted by (value, dim, id)."""
        ids = np.arange(len(self.values))
        return np.lexsort((ids, self.dims, self.values))


def _reduce(columns, col_ids, skip=frozenset()):
    """
    Z/2 column reduction; columns are given in filtration order as sets of row
    positions. Returns {pivot_row: col_id}.
    """
    low_to_col = {}
    reduced = {}
    for cid, col in zip(col_ids, columns):
        if cid in skip:
            continue
        while col:
            p = max(col)
            other = reduced.get(p)
            if other is None:
                reduced[p] = col
                low_to_col[p] = cid
                break
            col ^= other
    return low_to_col


def sublevel_pd_image(surface, max_dim: int = 1,
                      keep_zero_persistence: bool = False) -> list[PersistenceDiagram]:
    """
    H0 (and H1 when ``max_dim == 1``) sublevel diagrams of a height map.

    Squares are reduced first; the edges they kill are then cleared from the
    edge reduction.
    """
    f = _heights(surface, 2)
    if max_dim not in (0, 1):
        raise ParameterError("max_dim must be 0 or 1")
    R, C = f.shape
    if R < 2 or C < 2:
        raise ParameterError("image must be at least 2x2")

    cx = CubicalComplex(f)
    order = cx.filtration_order()
    pos = np.empty_like(order)
    pos[order] = np.arange(len(order))
    vals = cx.values
    gmax = float(f.max())

    e0, s0 = cx.n_vert, cx.n_vert + cx.n_hedge + cx.n_vedge
    dims = cx.dims[order]

    sq_order = order[dims == 2] - s0
    sq_cols_pos = pos[cx.square_bd[sq_order]]
    sq_low = _reduce((set(c) for c in sq_cols_pos.tolist()), (sq_order + s0).tolist())

    cleared = frozenset(order[p] for p in sq_low)
    ed_order = order[dims == 1]
    ed_cols_pos = pos[cx.edge_bd[ed_order - e0]]
    ed_low = _reduce((set(c) for c in ed_cols_pos.tolist()), ed_order.tolist(), cleared)

    h0 = [(vals[order[p]], vals[c]) for p, c in ed_low.items()]
    killed = set(ed_low)
    births = [vals[order[p]] for p in range(len(order))
              if dims[p] == 0 and p not in killed]
    d0 = _finish(0, h0, gmax, keep_zero_persistence)
    d0 = PersistenceDiagram(0, np.vstack([d0.pairs, [(b, gmax) for b in births]]), gmax)
    if max_dim == 0:
        return [d0]

    h1 = [(vals[order[p]], vals[c]) for p, c in sq_low.items()]
    return [d0, _finish(1, h1, gmax, keep_zero_persistence)]


def _diag_dist(p):
    return (p[:, 1] - p[:, 0]) / 2.0


def _perfect_matching_exists(a, b, r, dab, da, db):
    n, m = len(a), len(b)
    size = n + m
    rows, cols = [], []
    ai, bj = np.nonzero(dab <= r)
    rows.extend(ai)
    cols.extend(bj)
    ia = np.nonzero(da <= r)[0]
    rows.extend(ia)
    cols.extend(m + ia)
    jb = np.nonzero(db <= r)[0]
    rows.extend(n + jb)
    cols.extend(jb)
    di, dj = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    rows.extend(n + di.ravel())
    cols.extend(m + dj.ravel())
    g = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(g, perm_type="column")
    return np.all(match >= 0)


def bottleneck_distance(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """
    Exact bottleneck distance with the L-infinity ground metric.

    Binary search over the finite set of candidate values (pairwise distances
    and distances to the diagonal), deciding each candidate by a perfect
    bipartite matching in the graph augmented with diagonal copies.
    """
    if a.dim != b.dim:
        raise ParameterError(f"diagram dimensions differ: {a.dim} vs {b.dim}")
    pa, pb = a.pairs, b.pairs
    # points on the diagonal never cost anything
    pa = pa[pa[:, 1] > pa[:, 0]]
    pb = pb[pb[:, 1] > pb[:, 0]]
    if len(pa) == 0 and len(pb) == 0:
        return 0.0
    da, db = _diag_dist(pa), _diag_dist(pb)
    if len(pa) and len(pb):
        dab = np.max(np.abs(pa[:, None, :] - pb[None, :, :]), axis=2)
    else:
        dab = np.zeros((len(pa), len(pb)))
    cand = np.unique(np.concatenate([dab.ravel(), da, db]))
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_exists(pa, pb, cand[mid], dab, da, db):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])
