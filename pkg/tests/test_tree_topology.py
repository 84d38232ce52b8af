from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mop_trees.tree_topology import (
    ROOT_PARENT,
    cayley_truncation,
    finite_tree,
    finite_tree_vertex_count,
    path_weight,
)


class TestFiniteTree:
    def test_two_one_has_nine_vertices(self):
        assert len(finite_tree((2, 1))) == 9

    def test_one_one_has_five_vertices(self):
        assert len(finite_tree((1, 1))) == 5

    def test_root_children_step_down(self):
        t = finite_tree((1, 1))
        assert sorted(t.proj[c] for c, _ in t.children[0]) == [(0, 1), (1, 0)]

    def test_canopy_projects_to_origin(self):
        t = finite_tree((2, 2))
        assert all(t.proj[v] == (0, 0) for v in t.canopy())
        assert t.proj[0] == (2, 2)

    def test_projection_step_rule(self):
        t = finite_tree((3, 2))
        for v in range(1, len(t)):
            p, c, lab = t.proj[t.parent[v]], t.proj[v], t.iota[v]
            step = (1, 0) if lab == 1 else (0, 1)
            assert (c[0] + step[0], c[1] + step[1]) == p

    def test_path_multiplicities(self):
        t = finite_tree((3, 2))
        counts = t.proj_counts()
        for n1 in range(4):
            for n2 in range(3):
                assert counts[(n1, n2)] == comb((3 - n1) + (2 - n2), 3 - n1)

    @given(n1=st.integers(1, 4), n2=st.integers(1, 4))
    @settings(max_examples=16, deadline=None)
    def test_vertex_count_formula(self, n1, n2):
        assert len(finite_tree((n1, n2))) == finite_tree_vertex_count((n1, n2))


class TestCayley:
    def test_depth_zero(self):
        t = cayley_truncation(0)
        assert len(t) == 1 and t.proj[0] == (1, 1)

    def test_depth_two_three_generations(self):
        t = cayley_truncation(2)
        assert len(t) == 7
        layer2 = sorted(t.proj[v] for v in range(len(t)) if t.depth[v] == 2)
        assert layer2 == [(1, 3), (2, 2), (2, 2), (3, 1)]

    def test_depth_ten_count(self):
        assert len(cayley_truncation(10)) == 2**11 - 1

    def test_projection_step_rule(self):
        t = cayley_truncation(4)
        for v in range(1, len(t)):
            p, c, lab = t.proj[t.parent[v]], t.proj[v], t.iota[v]
            step = (1, 0) if lab == 1 else (0, 1)
            assert (p[0] + step[0], p[1] + step[1]) == c

    def test_vertex_by_path(self):
        t = cayley_truncation(3)
        v = t.vertex_by_path((1, 2))
        assert t.proj[v] == (2, 2)
        with pytest.raises(KeyError):
            t.vertex_by_path((1, 1, 1, 1, 1))


class TestPathWeight:
    def test_unit_weights(self):
        t = finite_tree((2, 1))
        W = [1.0] * len(t)
        assert all(path_weight(t, W, v) == 1.0 for v in range(len(t)))

    def test_root_weight_one(self):
        t = finite_tree((1, 1))
        W = [1.0, 4.0, 9.0, 4.0, 9.0]
        assert path_weight(t, W, 0) == 1.0

    def test_chain_product(self):
        t = cayley_truncation(2)
        W = [1.0] + [4.0] * (len(t) - 1)
        left_leaf = t.vertex_by_path((1, 1))
        assert path_weight(t, W, left_leaf) == pytest.approx(1 / 4)


class TestExports:
    def test_dot(self):
        s = finite_tree((1, 1)).to_dot()
        assert s.startswith("graph tree {") and s.count("--") == 4

    def test_json(self):
        import json

        doc = json.loads(cayley_truncation(1).to_json())
        assert doc["kind"] == "cayley"
        assert doc["parent"] == [ROOT_PARENT, 0, 0]
