"""Exact k-nearest-neighbour search over a sample set.

The index is an axis-aligned, median-split k-d tree built once over the
point locations and immutable afterwards, so any number of threads can
query it concurrently. Queries return exactly the brute-force k nearest
points; equal distances are broken by ingestion order, which keeps every
downstream result reproducible even on gridded data where exact ties are
common.

All distance comparisons happen on squared distances with the tie index as
a secondary key; square roots are taken once, on the final k results.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import EmptyInputError, KTooLargeError
from .model import LocalNeighborhood, QueryPoint, SampleSet

__all__ = ["SpatialIndex", "build_index", "query_knn"]

_LEAF_SIZE = 16


class SpatialIndex:
    """Immutable median-split k-d tree over a :class:`SampleSet`.

    Node record arrays (index ``n`` is the node id):

    - ``axis[n]``    split axis (0 = x, 1 = y), −1 for a leaf
    - ``split[n]``   split coordinate; points left of the node satisfy
      coord ≤ split, points right satisfy coord ≥ split
    - ``left[n]``, ``right[n]``  child node ids
    - ``start[n]``, ``end[n]``   leaf slice into the permuted point arrays

    Use :func:`build_index` to construct one.
    """

    __slots__ = (
        "samples",
        "_perm_xs",
        "_perm_ys",
        "_perm_idx",
        "_axis",
        "_split",
        "_left",
        "_right",
        "_start",
        "_end",
        "_root",
        "_axis_l",
        "_split_l",
        "_left_l",
        "_right_l",
        "_start_l",
        "_end_l",
        "_perm_idx_l",
    )

    def __init__(self, samples: SampleSet):
        self.samples = samples
        n = samples.count

        perm = np.arange(n, dtype=np.intp)
        xs, ys = samples.xs, samples.ys

        axis: list[int] = []
        split: list[float] = []
        left: list[int] = []
        right: list[int] = []
        start: list[int] = []
        end: list[int] = []

        def build(lo: int, hi: int) -> int:
            node = len(axis)
            axis.append(-1)
            split.append(0.0)
            left.append(-1)
            right.append(-1)
            start.append(lo)
            end.append(hi)
            if hi - lo <= _LEAF_SIZE:
                return node

            seg = perm[lo:hi]
            sx = xs[seg]
            sy = ys[seg]
            extent_x = sx.max() - sx.min()
            extent_y = sy.max() - sy.min()
            ax = 0 if extent_x >= extent_y else 1
            vals = sx if ax == 0 else sy

            mid = (hi - lo) // 2
            order = np.argpartition(vals, mid)
            perm[lo:hi] = seg[order]

            axis[node] = ax
            split[node] = float(vals[order[mid]])
            left[node] = build(lo, lo + mid)
            right[node] = build(lo + mid, hi)
            return node

        self._root = build(0, n)

        self._perm_xs = np.ascontiguousarray(xs[perm])
        self._perm_ys = np.ascontiguousarray(ys[perm])
        self._perm_idx = perm
        self._axis = np.array(axis, dtype=np.int8)
        self._split = np.array(split, dtype=np.float64)
        self._left = np.array(left, dtype=np.intp)
        self._right = np.array(right, dtype=np.intp)
        self._start = np.array(start, dtype=np.intp)
        self._end = np.array(end, dtype=np.intp)
        for arr in (
            self._perm_xs,
            self._perm_ys,
            self._perm_idx,
            self._axis,
            self._split,
            self._left,
            self._right,
            self._start,
            self._end,
        ):
            arr.setflags(write=False)
        # Plain-list mirrors of the node records: traversal touches these
        # per node, and list indexing is much cheaper than ndarray scalars.
        self._axis_l = axis
        self._split_l = split
        self._left_l = left
        self._right_l = right
        self._start_l = start
        self._end_l = end
        self._perm_idx_l = perm.tolist()

    @property
    def count(self) -> int:
        return self.samples.count

    def query_raw(self, qx: float, qy: float, k: int) -> tuple[np.ndarray, np.ndarray]:
        """k nearest points to (qx, qy) as (squared_distances, indices).

        Both arrays are sorted ascending by (squared distance, ingestion
        index). This is the allocation-light core used by the batch paths;
        :func:`query_knn` wraps it into a :class:`LocalNeighborhood`.
        """
        n = self.count
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        if k > n:
            raise KTooLargeError(f"k={k} exceeds the number of data points ({n})")

        pxs = self._perm_xs
        pys = self._perm_ys
        pidx = self._perm_idx_l
        node_axis = self._axis_l
        node_split = self._split_l
        node_left = self._left_l
        node_right = self._right_l
        node_start = self._start_l
        node_end = self._end_l
        push = heapq.heappush
        replace = heapq.heapreplace

        # Max-heap of the current best k, keyed by (-d2, -index) so the
        # heap top is the worst candidate under the (d2, index) order.
        heap: list[tuple[float, int]] = []
        worst_d2 = float("inf")
        todo: list[tuple[float, int]] = []  # (split-plane d2 bound, node id)
        node = self._root

        while True:
            ax = node_axis[node]
            if ax < 0:
                s = node_start[node]
                e = node_end[node]
                dx = pxs[s:e] - qx
                dy = pys[s:e] - qy
                d2s = dx * dx + dy * dy
                for d2, idx in zip(d2s.tolist(), pidx[s:e]):
                    if len(heap) < k:
                        push(heap, (-d2, -idx))
                        if len(heap) == k:
                            worst_d2 = -heap[0][0]
                    elif d2 < worst_d2 or (d2 == worst_d2 and idx < -heap[0][1]):
                        replace(heap, (-d2, -idx))
                        worst_d2 = -heap[0][0]
                # Backtrack to the nearest still-viable far subtree. A far
                # side at exactly worst_d2 may hold an equal-distance point
                # with a smaller index, so prune only strictly beyond it.
                while todo:
                    plane_d2, far = todo.pop()
                    if len(heap) < k or plane_d2 <= worst_d2:
                        node = far
                        break
                else:
                    break
            else:
                delta = (qx - node_split[node]) if ax == 0 else (qy - node_split[node])
                if delta <= 0.0:
                    near, far = node_left[node], node_right[node]
                else:
                    near, far = node_right[node], node_left[node]
                todo.append((delta * delta, far))
                node = near

        pairs = sorted((-nd2, -nidx) for nd2, nidx in heap)
        d2_out = np.array([p[0] for p in pairs], dtype=np.float64)
        idx_out = np.array([p[1] for p in pairs], dtype=np.intp)
        return d2_out, idx_out

    def __repr__(self) -> str:
        return f"SpatialIndex(count={self.count}, nodes={self._axis.size})"


def build_index(samples: SampleSet) -> SpatialIndex:
    """Build the k-d tree over a sample set's point locations.

    Construction is deterministic given ingestion order. Raises
    :class:`EmptyInputError` only through SampleSet itself (a sample set
    is never empty).
    """
    if samples.count < 1:
        raise EmptyInputError("cannot index an empty sample set")
    return SpatialIndex(samples)


def query_knn(index: SpatialIndex, q: QueryPoint, k: int) -> LocalNeighborhood:
    """The k nearest data points to ``q`` as a :class:`LocalNeighborhood`.

    Results are sorted ascending by distance with equal distances resolved
    by ingestion order; the neighbourhood's bounding box is tight over the
    returned locations. Raises :class:`KTooLargeError` if ``k`` exceeds
    the number of indexed points.
    """
    d2, idx = index.query_raw(q.x, q.y, k)
    samples = index.samples
    return LocalNeighborhood(
        xs=samples.xs[idx],
        ys=samples.ys[idx],
        values=samples.values[idx],
        distances=np.sqrt(d2),
        indices=idx,
    )
