"""Interpretation construction, validation and the array-backed graph form."""

import numpy as np
import pytest

from dlbisim.core import (
    FeatureSet,
    Signature,
    build_interpretation,
    disjoint_union_graph,
    extract_interpretation,
    from_arrays,
    is_unreachable_objects_free,
    qs_embedding,
    to_labeled_graph,
)
from dlbisim.errors import (
    ElementOutOfRangeError,
    EmptyDomainError,
    PartialIndividualMapError,
    SignatureMismatchError,
    UnknownNameError,
)
from dlbisim.gen import make_signature, random_interpretation

import helpers as H


class TestFeatureSet:
    def test_from_string_roundtrip(self):
        for text in ["", "I", "O", "Q", "U", "S", "IO", "IOQUS", "QI"]:
            phi = FeatureSet.from_string(text)
            assert str(phi) == "".join(ch for ch in "IOQUS" if ch in text)

    def test_whitespace_tolerated(self):
        assert FeatureSet.from_string(" IQ ") == FeatureSet(inverse=True, counting=True)

    def test_unknown_letter_rejected(self):
        with pytest.raises(ValueError):
            FeatureSet.from_string("IXO")

    def test_all_subsets(self):
        subsets = FeatureSet.all_subsets()
        assert len(subsets) == 32
        assert len(set(subsets)) == 32
        assert FeatureSet() in subsets
        assert FeatureSet.from_string("IOQUS") in subsets

    def test_issubset(self):
        small = FeatureSet.from_string("IQ")
        big = FeatureSet.from_string("IOQ")
        assert small.issubset(big)
        assert not big.issubset(small)
        assert FeatureSet().issubset(small)


class TestSignature:
    def test_duplicate_name_rejected(self):
        with pytest.raises(UnknownNameError):
            Signature(("A", "A"), (), ())

    def test_cross_group_overlap_rejected(self):
        with pytest.raises(UnknownNameError):
            Signature(("A",), ("A",), ())

    def test_index_maps(self):
        sig = Signature(("A", "B"), ("r",), ("a",))
        assert sig.concept_index == {"A": 0, "B": 1}
        assert sig.role_index == {"r": 0}
        assert sig.individual_index == {"a": 0}


class TestBuildInterpretation:
    sig = Signature(("A",), ("r",), ("a",))

    def test_empty_domain_rejected(self):
        with pytest.raises(EmptyDomainError):
            build_interpretation(self.sig, 0, {}, {}, {"a": 0})

    def test_unknown_concept_rejected(self):
        with pytest.raises(UnknownNameError):
            build_interpretation(self.sig, 2, {"B": {0}}, {}, {"a": 0})

    def test_out_of_range_rejected(self):
        with pytest.raises(ElementOutOfRangeError):
            build_interpretation(self.sig, 2, {"A": {5}}, {}, {"a": 0})
        with pytest.raises(ElementOutOfRangeError):
            build_interpretation(self.sig, 2, {}, {"r": {(0, 2)}}, {"a": 0})

    def test_partial_individual_map_rejected(self):
        with pytest.raises(PartialIndividualMapError):
            build_interpretation(self.sig, 2, {}, {}, {})

    def test_missing_extensions_default_empty(self):
        interp = build_interpretation(self.sig, 2, None, None, {"a": 1})
        assert interp.concept_ext["A"] == frozenset()
        assert interp.role_ext["r"] == frozenset()

    def test_successor_order(self):
        interp = build_interpretation(
            self.sig, 4, {}, {"r": {(0, 3), (0, 1), (2, 0)}}, {"a": 0})
        assert interp.successors("r", 0) == (1, 3)
        assert interp.predecessors("r", 0) == (2,)
        assert interp.successors("r", 1) == ()


class TestLabeledGraph:
    def test_roundtrip_through_graph(self):
        rng = H.seeded(41)
        for _ in range(25):
            interp = H.small_instance(rng)
            graph = to_labeled_graph(interp)
            assert extract_interpretation(graph, 0) == interp

    def test_csr_matches_edges(self):
        rng = H.seeded(42)
        interp = H.small_instance(rng, 2, 2, 2, 9)
        graph = to_labeled_graph(interp)
        for k, name in enumerate(interp.signature.role_names):
            pairs = interp.role_ext[name]
            fwd = {(x, int(y)) for x in interp.domain for y in graph.successors(k, x)}
            rev = {(int(x), y) for y in interp.domain for x in graph.predecessors(k, y)}
            assert fwd == pairs
            assert rev == pairs

    def test_label_bits(self):
        sig = Signature(("A",), ("r",), ("a", "b"))
        interp = build_interpretation(
            sig, 3, {"A": {0, 2}}, {"r": {(1, 1), (0, 1)}}, {"a": 0, "b": 0})
        graph = to_labeled_graph(interp)
        assert graph.atom_bits[:, 0].tolist() == [1, 0, 1]
        assert graph.self_bits[:, 0].tolist() == [0, 1, 0]
        # node 0 carries both names, node 1 and 2 none
        assert graph.nominal_key[0] != 0
        assert graph.nominal_key[1] == 0 and graph.nominal_key[2] == 0
        assert graph.nominal_sets[graph.nominal_key[0]] == frozenset({"a", "b"})
        assert graph.individual_nodes == {"a": (0,), "b": (0,)}

    def test_union_graph(self):
        sig = make_signature(1, 1, 1)
        rng = H.seeded(43)
        a = random_interpretation(rng, sig, 3)
        b = random_interpretation(rng, sig, 4)
        graph = disjoint_union_graph(a, b)
        assert graph.n == 7
        assert graph.n_sides == 2
        assert graph.origin_side.tolist() == [0] * 3 + [1] * 4
        assert graph.origin_elem.tolist() == [0, 1, 2, 0, 1, 2, 3]
        assert len(graph.individual_nodes["a0"]) == 2
        assert extract_interpretation(graph, 0) == a
        assert extract_interpretation(graph, 1) == b

    def test_union_requires_shared_signature(self):
        rng = H.seeded(44)
        a = random_interpretation(rng, make_signature(1, 1, 0), 2)
        b = random_interpretation(rng, make_signature(2, 1, 0), 2)
        with pytest.raises(SignatureMismatchError):
            disjoint_union_graph(a, b)

    def test_from_arrays(self):
        sig = make_signature(1, 2, 0)
        atom = np.array([[1], [0], [1]], dtype=np.uint8)
        edges = [
            (np.array([0, 1]), np.array([1, 1])),
            (np.array([], dtype=np.int64), np.array([], dtype=np.int64)),
        ]
        graph = from_arrays(sig, 3, atom, edges)
        assert graph.n_edges == 2
        assert graph.successors(0, 0).tolist() == [1]
        assert graph.predecessors(0, 1).tolist() == [0, 1]
        assert graph.self_bits[1, 0] == 1
        with pytest.raises(SignatureMismatchError):
            from_arrays(sig, 3, atom, edges[:1])
        with pytest.raises(ElementOutOfRangeError):
            from_arrays(sig, 3, atom, [(np.array([0]), np.array([3])), edges[1]])


class TestQSEmbedding:
    def test_unit_multiplicities(self):
        rng = H.seeded(45)
        interp = H.small_instance(rng, 2, 2, 2, 8)
        qsi = qs_embedding(interp)
        assert qsi.base == interp
        for r in interp.signature.role_names:
            assert set(qsi.qu[(r, False)]) == set(interp.role_ext[r])
            assert all(v == 1 for v in qsi.qu[(r, False)].values())
            assert qsi.qu[(r, True)] == {(y, x): 1 for (x, y), _ in qsi.qu[(r, False)].items()}
            assert qsi.se[r] == frozenset(x for x, y in interp.role_ext[r] if x == y)


class TestReachability:
    def test_all_reachable(self):
        sig = Signature((), ("r",), ("a",))
        interp = build_interpretation(sig, 3, {}, {"r": {(0, 1), (1, 2)}}, {"a": 0})
        assert is_unreachable_objects_free(interp, FeatureSet())

    def test_backward_needs_inverse(self):
        sig = Signature((), ("r",), ("a",))
        interp = build_interpretation(sig, 2, {}, {"r": {(1, 0)}}, {"a": 0})
        assert not is_unreachable_objects_free(interp, FeatureSet())
        assert is_unreachable_objects_free(interp, FeatureSet.from_string("I"))

    def test_no_named_elements(self):
        sig = Signature((), ("r",), ())
        interp = build_interpretation(sig, 1, {}, {}, {})
        assert not is_unreachable_objects_free(interp, FeatureSet())
