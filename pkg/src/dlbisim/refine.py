"""Coarsest stable partitions of labeled graphs by worklist refinement.

The initial partition groups nodes by label: concept membership always,
nominal labels when nominals are active, self-loop patterns when local
reflexivity is active.  Refinement then splits until every block is
stable against every block along every splitter role.  Splitter roles
are the role names, plus their inverses when inverse roles are active;
the universal role never splits anything.  With counting active the
stability notion is "equal number of edges into the splitter block",
and the initial partition is additionally refined by per-role degree
vectors, which leaves the fixpoint unchanged (any stable partition is
degree uniform) but licenses the skip-a-maximal-sub-block worklist
economy in the kernel.

Every split can be recorded in a trace: which block split, against
which splitter block along which role, at which step, and into which
count classes.  The witness builder consumes this to assemble concepts
separating two elements that ended up in different blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .core import BisimRelation, FeatureSet, LabeledGraph
from .errors import PartitionMismatchError


@dataclass(frozen=True, eq=False)
class Partition:
    """Blocks of 0..n-1, identified by the ids the kernel assigned."""

    block_of: np.ndarray
    n_blocks: int

    @property
    def n(self) -> int:
        return int(len(self.block_of))

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        order = np.argsort(self.block_of, kind="stable")
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for x in order:
            out[self.block_of[x]].append(int(x))
        return tuple(tuple(members) for members in out)

    @cached_property
    def canonical_order(self) -> tuple[int, ...]:
        """Block ids sorted by their smallest member."""
        return tuple(sorted(range(self.n_blocks), key=lambda b: self.blocks[b][0]))

    @cached_property
    def canonical_of(self) -> np.ndarray:
        """Element to canonical block index (position in canonical_order)."""
        rank = np.zeros(self.n_blocks, dtype=np.int32)
        for i, b in enumerate(self.canonical_order):
            rank[b] = i
        return rank[self.block_of]

    def same_block(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def to_lines(self, names=None) -> list[str]:
        display = (lambda x: names[x]) if names is not None else str
        out = []
        for i, b in enumerate(self.canonical_order):
            out.append("block %d: %s" % (i, " ".join(display(x) for x in self.blocks[b])))
        return out


@dataclass(frozen=True)
class SplitEvent:
    """One block split: parent broke into count classes against a splitter."""

    parent: int
    role: int
    splitter: int
    time: int
    subs: tuple[tuple[int, int], ...]  # (block id, count class) in layout order


@dataclass(eq=False)
class RefinementTrace:
    graph: LabeledGraph
    phi: FeatureSet
    use_counts: bool
    n_split_roles: int
    init_block_of: np.ndarray
    final_block_of: np.ndarray
    n_blocks: int
    events: tuple[SplitEvent, ...]

    def splitter_role(self, idx: int) -> tuple[str, bool]:
        """Role name and inverted flag for a splitter role index."""
        names = self.graph.signature.role_names
        if idx < len(names):
            return names[idx], False
        return names[idx - len(names)], True


def _label_columns(phi: FeatureSet, graph: LabeledGraph) -> list[np.ndarray]:
    cols = [graph.atom_bits.astype(np.int64)]
    if phi.nominals:
        cols.append(graph.nominal_key.astype(np.int64)[:, None])
    if phi.local_refl:
        cols.append(graph.self_bits.astype(np.int64))
    return cols


def _group_rows(cols, n: int) -> tuple[np.ndarray, int]:
    if not cols:
        return np.zeros(n, dtype=np.int32), 1
    matrix = np.hstack(cols)
    if matrix.shape[1] == 0:
        return np.zeros(n, dtype=np.int32), 1
    _, inverse = np.unique(matrix, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1).astype(np.int32)
    return inverse, int(inverse.max()) + 1


def econd_partition(phi: FeatureSet, graph: LabeledGraph) -> Partition:
    """Partition by node labels only; the starting point of refinement."""
    ids, k = _group_rows(_label_columns(phi, graph), graph.n)
    return Partition(ids, k)


def _splitter_structures(phi: FeatureSet, graph: LabeledGraph):
    """Predecessor CSR per splitter role, and per-node degree columns."""
    n_r = graph.n_roles
    fwd_deg = np.diff(graph.fwd_indptr, axis=1).astype(np.int64)  # (n_r, n)
    rev_deg = np.diff(graph.rev_indptr, axis=1).astype(np.int64)
    if phi.inverse:
        pred_indptr = np.vstack([graph.rev_indptr, graph.fwd_indptr + len(graph.rev_indices)])
        pred_indices = np.concatenate([graph.rev_indices, graph.fwd_indices])
        degrees = np.vstack([fwd_deg, rev_deg])
    else:
        pred_indptr = graph.rev_indptr
        pred_indices = graph.rev_indices
        degrees = fwd_deg
    return np.ascontiguousarray(pred_indptr), np.ascontiguousarray(pred_indices), degrees


def compute_partition(phi: FeatureSet, graph: LabeledGraph, want_trace: bool = True,
                      engine: str | None = None) -> tuple[Partition, RefinementTrace | None]:
    """Coarsest partition refining the label partition and stable for phi.

    Returns the partition and, when requested, the split trace.  The
    result is independent of the engine and deterministic: block ids
    depend only on the graph and phi.
    """
    n = graph.n
    nsr = graph.n_roles * (2 if phi.inverse else 1)
    pred_indptr, pred_indices, degrees = _splitter_structures(phi, graph)

    cols = _label_columns(phi, graph)
    if phi.counting:
        cols.append(degrees.T)
    init_ids, nblocks0 = _group_rows(cols, n)

    block_of = init_ids.copy()
    order = np.argsort(init_ids, kind="stable")
    elems = order.astype(np.int32)
    pos = np.zeros(n, dtype=np.int32)
    pos[elems] = np.arange(n, dtype=np.int32)
    sizes = np.bincount(init_ids, minlength=nblocks0)
    bounds = np.zeros(nblocks0 + 1, dtype=np.int64)
    np.cumsum(sizes, out=bounds[1:])
    first = np.zeros(n + 1, dtype=np.int32)
    last = np.zeros(n + 1, dtype=np.int32)
    first[:nblocks0] = bounds[:-1]
    last[:nblocks0] = bounds[1:]

    counts = np.zeros(n, dtype=np.int64)
    touched = np.zeros(n, dtype=np.int32)
    tlist = np.zeros(n, dtype=np.int32)
    tb_cnt = np.zeros(n + 1, dtype=np.int32)
    tb_start = np.zeros(n + 1, dtype=np.int32)
    tb_fill = np.zeros(n + 1, dtype=np.int32)
    affected = np.zeros(n, dtype=np.int32)
    sort_keys = np.zeros(n, dtype=np.int64)
    queue = np.zeros(3 * n * nsr + nsr + 8, dtype=np.int64)
    in_l = np.zeros(max(n * nsr, 1), dtype=np.uint8)

    if want_trace:
        ev_parent = np.zeros(n + 1, dtype=np.int32)
        ev_role = np.zeros(n + 1, dtype=np.int32)
        ev_yblock = np.zeros(n + 1, dtype=np.int32)
        ev_time = np.zeros(n + 1, dtype=np.int64)
        ev_sub_start = np.zeros(n + 2, dtype=np.int32)
        sub_block = np.zeros(2 * n + 2, dtype=np.int32)
        sub_count = np.zeros(2 * n + 2, dtype=np.int64)
    else:
        ev_parent = np.zeros(1, dtype=np.int32)
        ev_role = np.zeros(1, dtype=np.int32)
        ev_yblock = np.zeros(1, dtype=np.int32)
        ev_time = np.zeros(1, dtype=np.int64)
        ev_sub_start = np.zeros(2, dtype=np.int32)
        sub_block = np.zeros(1, dtype=np.int32)
        sub_count = np.zeros(1, dtype=np.int64)

    loop = _kernels.get_refine_loop(engine)
    n_blocks, nev, _ = loop(
        n, nsr, pred_indptr, pred_indices,
        block_of, elems, pos, first, last, nblocks0,
        bool(phi.counting), bool(phi.counting), bool(want_trace),
        counts, touched, tlist, tb_cnt, tb_start, tb_fill, affected,
        sort_keys, queue, in_l,
        ev_parent, ev_role, ev_yblock, ev_time, ev_sub_start,
        sub_block, sub_count,
    )

    partition = Partition(block_of, int(n_blocks))
    trace = None
    if want_trace:
        events = []
        for e in range(int(nev)):
            lo, hi = int(ev_sub_start[e]), int(ev_sub_start[e + 1])
            subs = tuple((int(sub_block[i]), int(sub_count[i])) for i in range(lo, hi))
            events.append(SplitEvent(int(ev_parent[e]), int(ev_role[e]),
                                     int(ev_yblock[e]), int(ev_time[e]), subs))
        trace = RefinementTrace(
            graph, phi, bool(phi.counting), nsr,
            init_ids.copy(), block_of.copy(), int(n_blocks), tuple(events),
        )
    return partition, trace


def partition_to_relation(partition: Partition) -> BisimRelation:
    """The equivalence relation a partition induces, as a pair set."""
    pairs = set()
    for members in partition.blocks:
        for x in members:
            for y in members:
                pairs.add((x, y))
    n = partition.n
    return BisimRelation(n, n, frozenset(pairs))


def check_partition(partition: Partition, n: int) -> None:
    """Raise when the partition does not cover exactly 0..n-1."""
    if partition.n != n:
        raise PartitionMismatchError("partition covers %d elements, interpretation has %d"
                                     % (partition.n, n))
    seen = partition.block_of
    if len(seen) and (seen.min() < 0 or seen.max() >= partition.n_blocks):
        raise PartitionMismatchError("partition block ids out of range")
