"""Partition refinement: engines, traces, determinism, worklist economy."""

import numpy as np
import pytest

from dlbisim import _kernels
from dlbisim.bisim import is_bisimulation, naive_largest_bisimulation
from dlbisim.core import FeatureSet, Signature, build_interpretation, to_labeled_graph
from dlbisim.errors import PartitionMismatchError
from dlbisim.refine import (
    Partition,
    check_partition,
    compute_partition,
    econd_partition,
    partition_to_relation,
)

import helpers as H


def blocks_as_sets(partition):
    return {frozenset(b) for b in partition.blocks}


class TestInitialPartition:
    sig = Signature(("A",), ("r",), ("a",))
    interp = build_interpretation(
        sig, 4, {"A": {0, 1}}, {"r": {(1, 1), (2, 3)}}, {"a": 0})
    graph = to_labeled_graph(interp)

    def test_atoms_only(self):
        part = econd_partition(FeatureSet(), self.graph)
        assert blocks_as_sets(part) == {frozenset({0, 1}), frozenset({2, 3})}

    def test_nominals_refine(self):
        part = econd_partition(FeatureSet.from_string("O"), self.graph)
        assert blocks_as_sets(part) == {frozenset({0}), frozenset({1}), frozenset({2, 3})}

    def test_self_loops_refine(self):
        part = econd_partition(FeatureSet.from_string("S"), self.graph)
        assert blocks_as_sets(part) == {frozenset({0}), frozenset({1}), frozenset({2, 3})}

    def test_empty_labels_one_block(self):
        sig = Signature((), ("r",), ())
        interp = build_interpretation(sig, 3, {}, {"r": {(0, 1)}}, {})
        part = econd_partition(FeatureSet(), to_labeled_graph(interp))
        assert part.n_blocks == 1


class TestPartitionContainer:
    part = Partition(np.array([2, 0, 2, 1], dtype=np.int32), 3)

    def test_blocks(self):
        assert self.part.blocks == ((1,), (3,), (0, 2))
        assert self.part.canonical_order == (2, 0, 1)
        assert self.part.canonical_of.tolist() == [0, 1, 0, 2]
        assert self.part.same_block(0, 2)
        assert not self.part.same_block(0, 1)

    def test_to_lines(self):
        names = ["w", "x", "y", "z"]
        assert self.part.to_lines(names) == [
            "block 0: w y", "block 1: x", "block 2: z"]
        assert self.part.to_lines() == ["block 0: 0 2", "block 1: 1", "block 2: 3"]

    def test_relation_is_equivalence(self):
        rel = partition_to_relation(self.part)
        pairs = rel.pairs
        assert all((x, x) in pairs for x in range(4))
        assert all((y, x) in pairs for x, y in pairs)
        assert all((x, z) in pairs
                   for x, y in pairs for y2, z in pairs if y == y2)

    def test_check_partition(self):
        check_partition(self.part, 4)
        with pytest.raises(PartitionMismatchError):
            check_partition(self.part, 5)
        with pytest.raises(PartitionMismatchError):
            check_partition(Partition(np.array([0, 7], dtype=np.int32), 2), 2)


class TestAgainstNaiveOracle:
    def test_random_instances(self):
        rng = H.seeded(401)
        for _ in range(60):
            interp = H.small_instance(rng, max_n=9)
            graph = to_labeled_graph(interp)
            for phi in H.ALL_PHIS:
                part, _ = compute_partition(phi, graph, want_trace=False)
                rel = partition_to_relation(part)
                oracle = naive_largest_bisimulation(phi, interp, interp)
                assert rel.pairs == oracle.pairs, str(phi)

    def test_worklist_economy_regression(self):
        # one maximal sink block; if a presence-mode worklist ever skipped
        # it, the two root elements would stay together
        sig = Signature(("A", "B"), ("r",), ())
        interp = build_interpretation(
            sig, 8,
            {"A": {2, 3, 4, 5, 6}, "B": {7}},
            {"r": {(0, 2), (0, 7), (1, 7)}},
            {})
        graph = to_labeled_graph(interp)
        for phi in H.ALL_PHIS:
            part, _ = compute_partition(phi, graph, want_trace=False)
            oracle = naive_largest_bisimulation(phi, interp, interp)
            assert partition_to_relation(part).pairs == oracle.pairs, str(phi)
        part, _ = compute_partition(FeatureSet(), graph, want_trace=False)
        assert not part.same_block(0, 1)

    def test_no_roles_stays_at_labels(self):
        rng = H.seeded(402)
        for _ in range(10):
            interp = H.small_instance(rng, max_roles=0, max_n=10)
            graph = to_labeled_graph(interp)
            for phi in H.ALL_PHIS:
                part, trace = compute_partition(phi, graph)
                assert trace.events == ()
                init = econd_partition(phi, graph)
                assert np.array_equal(part.canonical_of, init.canonical_of)


class TestDeterminismAndEngines:
    def test_repeat_runs_identical(self):
        rng = H.seeded(403)
        for _ in range(10):
            interp = H.small_instance(rng)
            graph = to_labeled_graph(interp)
            for phi in H.ALL_PHIS[:8]:
                a_part, a_trace = compute_partition(phi, graph)
                b_part, b_trace = compute_partition(phi, graph)
                assert np.array_equal(a_part.block_of, b_part.block_of)
                assert a_part.n_blocks == b_part.n_blocks
                assert a_trace.events == b_trace.events

    @pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")
    def test_numpy_and_numba_agree(self):
        rng = H.seeded(404)
        for _ in range(15):
            interp = H.small_instance(rng)
            graph = to_labeled_graph(interp)
            for phi in H.ALL_PHIS:
                np_part, np_trace = compute_partition(phi, graph, engine="numpy")
                nb_part, nb_trace = compute_partition(phi, graph, engine="numba")
                assert np.array_equal(np_part.block_of, nb_part.block_of)
                assert np_part.n_blocks == nb_part.n_blocks
                assert np_trace.events == nb_trace.events

    def test_engine_selection(self):
        before = _kernels.active_engine()
        try:
            _kernels.set_engine("numpy")
            assert _kernels.active_engine() == "numpy"
            assert _kernels.get_refine_loop() is _kernels._refine_loop
            _kernels.set_engine("auto")
            assert _kernels.active_engine() in ("numpy", "numba")
            with pytest.raises(ValueError):
                _kernels.set_engine("fast")
            with pytest.raises(ValueError):
                _kernels.get_refine_loop("auto")
        finally:
            _kernels.set_engine(before)

    def test_trace_optional(self):
        rng = H.seeded(405)
        interp = H.small_instance(rng)
        graph = to_labeled_graph(interp)
        part, trace = compute_partition(FeatureSet(), graph, want_trace=False)
        assert trace is None
        assert part.n_blocks >= 1


class TestUniversalRoleNeverSplits:
    def test_adding_u_changes_nothing(self):
        rng = H.seeded(406)
        for _ in range(20):
            interp = H.small_instance(rng, max_n=9)
            graph = to_labeled_graph(interp)
            for phi in H.ALL_PHIS:
                if phi.universal:
                    continue
                with_u = FeatureSet(phi.inverse, phi.nominals, phi.counting,
                                    True, phi.local_refl)
                a, _ = compute_partition(phi, graph, want_trace=False)
                b, _ = compute_partition(with_u, graph, want_trace=False)
                assert np.array_equal(a.block_of, b.block_of)
                assert a.n_blocks == b.n_blocks


class TestTraces:
    def test_replay_reconstructs_partition(self):
        rng = H.seeded(407)
        for _ in range(25):
            interp = H.small_instance(rng)
            graph = to_labeled_graph(interp)
            for phi in H.ALL_PHIS:
                _, trace = compute_partition(phi, graph)
                H.replay_trace(trace)

    def test_trace_metadata(self):
        sig = Signature(("A",), ("r", "s"), ())
        interp = build_interpretation(
            sig, 4, {"A": {0}}, {"r": {(0, 1), (1, 2)}, "s": {(2, 3)}}, {})
        graph = to_labeled_graph(interp)
        phi = FeatureSet.from_string("I")
        part, trace = compute_partition(phi, graph)
        assert trace.n_split_roles == 4
        assert trace.splitter_role(0) == ("r", False)
        assert trace.splitter_role(3) == ("s", True)
        assert trace.use_counts is False
        assert trace.n_blocks == part.n_blocks
        init = econd_partition(phi, graph)
        assert np.array_equal(trace.init_block_of, init.block_of)
        times = [ev.time for ev in trace.events]
        assert times == sorted(times)

    def test_counting_traces_expose_degree_presplit(self):
        sig = Signature((), ("r",), ())
        interp = build_interpretation(
            sig, 3, {}, {"r": {(0, 1), (0, 2)}}, {})
        graph = to_labeled_graph(interp)
        _, trace = compute_partition(FeatureSet.from_string("Q"), graph)
        # out-degrees 2,0,0 split the root off before any extraction
        assert len(np.unique(trace.init_block_of)) == 2
        assert trace.use_counts is True
