import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohortlens.cut import CutParams, comparison_ratio, informative_cut, scent
from cohortlens.errors import LeafNode, UnknownCode
from cohortlens.hierarchy import build_hierarchy


class MapStats:
    """Dict-backed stand-in for HierarchyStats (chi2 and rho per code)."""

    def __init__(self, chi2, rho=None):
        self._chi2 = chi2
        self._rho = rho or {}

    def __getitem__(self, code):
        from types import SimpleNamespace

        return SimpleNamespace(
            chi2=self._chi2.get(code, 0.0), correlation=self._rho.get(code, 0.0)
        )


@pytest.fixture(scope="module")
def small_tree():
    return build_hierarchy(
        [("ROOT", ""), ("A", "ROOT"), ("A1", "A"), ("A2", "A"), ("B", "ROOT"), ("B1", "B")]
    )


def test_comparison_ratio(small_tree):
    stats = MapStats({"ROOT": 1.0, "A": 2.0, "A1": 3.0, "A2": 1.0, "B": 5.0, "B1": 4.0})
    assert comparison_ratio(stats, small_tree, "A") == 0.5
    assert comparison_ratio(stats, small_tree, "B") == 0.0
    assert comparison_ratio(stats, small_tree, "ROOT") == 1.0
    with pytest.raises(LeafNode):
        comparison_ratio(stats, small_tree, "A1")
    with pytest.raises(UnknownCode):
        comparison_ratio(stats, small_tree, "nope")


def test_comparison_ratio_strict_inequality(small_tree):
    # ties do not count as "more informative"
    stats = MapStats({"A": 2.0, "A1": 2.0, "A2": 2.0})
    assert comparison_ratio(stats, small_tree, "A") == 0.0


def test_cut_default_r(small_tree):
    stats = MapStats({"ROOT": 1.0, "A": 2.0, "A1": 3.0, "A2": 1.0, "B": 5.0, "B1": 4.0})
    result = informative_cut(stats, small_tree, CutParams(r=0.0))
    # ROOT expands (both A and B beat it); A expands (A1 beats); B stops
    assert result.pre_filter == ["A1", "A2", "B"]


def test_cut_r_one_selects_root(small_tree):
    stats = MapStats({"ROOT": 0.0, "A": 2.0, "A1": 3.0, "A2": 1.0, "B": 5.0, "B1": 4.0})
    result = informative_cut(stats, small_tree, CutParams(r=1.0))
    assert result.pre_filter == ["ROOT"]
    assert result.post_filter == []  # root chi2 is 0


def test_post_filter_drops_zero(small_tree):
    stats = MapStats({"ROOT": 0.0, "A": 1.0, "A1": 2.0, "A2": 0.0, "B": 0.0, "B1": 0.0})
    result = informative_cut(stats, small_tree, CutParams(r=0.0))
    assert set(result.post_filter) == set(result.pre_filter) - {"A2", "B"}


def test_cut_params_range():
    with pytest.raises(ValueError):
        CutParams(r=-0.1)
    with pytest.raises(ValueError):
        CutParams(r=1.1)


def test_scent_examples(small_tree):
    rho = {"ROOT": 0.0, "A": 0.1, "A1": 0.5, "A2": -0.1, "B": 0.2, "B1": 0.2}
    s = scent(MapStats({}, rho), small_tree)
    assert s["A1"] == 0.0 and s["A2"] == 0.0 and s["B1"] == 0.0
    assert s["A"] == pytest.approx(0.6)  # spread of children: 0.5 - (-0.1)
    assert s["B"] == 0.0  # single child: zero spread
    # root: max(spread(A, B) = 0.1, child scents) = 0.6
    assert s["ROOT"] == pytest.approx(0.6)


def test_scent_deep_propagation():
    h = build_hierarchy([("R", ""), ("a", "R"), ("b", "a"), ("c", "b"), ("d", "b")])
    rho = {"c": 0.9, "d": -0.9}
    s = scent(MapStats({}, rho), h)
    assert s["b"] == pytest.approx(1.8)
    assert s["a"] == pytest.approx(1.8)
    assert s["R"] == pytest.approx(1.8)


@st.composite
def tree_with_stats(draw):
    n = draw(st.integers(min_value=1, max_value=60))
    edges = [("n0", "")]
    for i in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=i - 1))
        edges.append((f"n{i}", f"n{parent}"))
    chi2 = {
        f"n{i}": draw(st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
        for i in range(n)
    }
    return build_hierarchy(edges), chi2


@settings(max_examples=60, deadline=None)
@given(tree_with_stats(), st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]))
def test_cut_is_exact_tree_cut(tree_stats, r):
    h, chi2 = tree_stats
    result = informative_cut(MapStats(chi2), h, CutParams(r=r))
    # every leaf is covered by exactly one cut member
    for leaf in h.leaves:
        covering = [c for c in result.pre_filter if leaf in h.subtree(c)]
        assert len(covering) == 1
    # no cut member is an ancestor of another
    cut_set = set(result.pre_filter)
    for c in result.pre_filter:
        assert not (set(h.ancestors(c)) & cut_set)


@settings(max_examples=40, deadline=None)
@given(tree_with_stats())
def test_cut_nesting_in_r(tree_stats):
    """A larger R stops earlier: every R2 cut member is an ancestor-or-self
    of some R1 cut member, and the pre-filter never grows with R."""
    h, chi2 = tree_stats
    stats = MapStats(chi2)
    prev = None
    for r in np.linspace(0.0, 1.0, 11):
        result = informative_cut(stats, h, CutParams(r=float(r)))
        if prev is not None:
            assert len(result.pre_filter) <= len(prev)
            fine = set(prev)
            for c in result.pre_filter:
                assert c in fine or (h.subtree(c) & fine)
        prev = result.pre_filter
