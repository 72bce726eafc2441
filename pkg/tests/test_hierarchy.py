import pytest
from hypothesis import given, strategies as st

from cohortlens.errors import (
    CycleDetected,
    DuplicateCode,
    EmptyInput,
    MissingParent,
    MultipleRoots,
    UnknownCode,
)
from cohortlens.hierarchy import build_hierarchy, derive_prefix_hierarchy


def test_build_depth_and_parent_chain():
    h = build_hierarchy([("ROOT", ""), ("I50", "ROOT"), ("I50.4", "I50"), ("I50.41", "I50.4")])
    assert h.nodes["I50.41"].depth == 3
    assert h.ancestors("I50.41") == ["ROOT", "I50", "I50.4"]


def test_build_single_node():
    h = build_hierarchy([("ROOT", "")])
    assert len(h) == 1
    assert h.children["ROOT"] == []


def test_build_multiple_roots():
    with pytest.raises(MultipleRoots):
        build_hierarchy([("A", ""), ("B", "A"), ("A2", "")])


def test_build_duplicate_code():
    with pytest.raises(DuplicateCode):
        build_hierarchy([("A", ""), ("B", "A"), ("B", "A")])


def test_build_missing_parent():
    with pytest.raises(MissingParent):
        build_hierarchy([("A", ""), ("B", "C")])


def test_build_cycle():
    with pytest.raises((CycleDetected, MultipleRoots)):
        build_hierarchy([("A", ""), ("B", "C"), ("C", "B")])


def test_prefix_hierarchy_inserts_intermediates():
    h = derive_prefix_hierarchy(["I50.1", "I50.41", "I50.42"])
    assert set(h.nodes) == {"ROOT", "I50", "I50.1", "I50.4", "I50.41", "I50.42"}
    assert h.nodes["I50.41"].parent == "I50.4"


def test_prefix_hierarchy_single_code():
    h = derive_prefix_hierarchy(["X"])
    assert set(h.nodes) == {"ROOT", "X"}


def test_prefix_hierarchy_deduplicates():
    h = derive_prefix_hierarchy(["A.1", "A.1"])
    assert set(h.nodes) == {"ROOT", "A", "A.1"}


def test_prefix_hierarchy_empty():
    with pytest.raises(EmptyInput):
        derive_prefix_hierarchy([])


def test_subtree_and_ancestors(toy_hierarchy):
    h = toy_hierarchy
    assert h.subtree("I50.41") == {"I50.41"}
    assert h.subtree("ROOT") == set(h.nodes)
    assert h.subtree("I50") == {"I50", "I50.1", "I50.4", "I50.41", "I50.9"}
    assert h.ancestors("I50.41") == ["ROOT", "I50", "I50.4"]
    with pytest.raises(UnknownCode):
        h.subtree("nope")
    with pytest.raises(UnknownCode):
        h.ancestors("nope")


@st.composite
def random_tree_edges(draw):
    n = draw(st.integers(min_value=1, max_value=40))
    edges = [("n0", "")]
    for i in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=i - 1))
        edges.append((f"n{i}", f"n{parent}"))
    return edges


@given(random_tree_edges())
def test_tree_properties(edges):
    h = build_hierarchy(edges)
    for code, node in h.nodes.items():
        if node.parent is not None:
            assert code in h.subtree(node.parent)
        path = h.ancestors(code) + [code]
        depths = [h.nodes[c].depth for c in path]
        assert depths == sorted(set(depths))
    # sibling subtrees are disjoint
    for code in h.nodes:
        kids = h.children[code]
        seen = set()
        for c in kids:
            sub = h.subtree(c)
            assert not (sub & seen)
            seen |= sub


@given(random_tree_edges())
def test_serialize_round_trip(edges):
    h = build_hierarchy(edges)
    h2 = build_hierarchy(h.to_edges())
    assert h2.nodes == h.nodes
    assert h2.children == h.children
    assert h2.root == h.root
