import json
import random

import pytest

from inccad.poly import VarOrder
from inccad.tree import (
    PAST,
    PRESENT,
    CylindricalTree,
    Kind,
    NodeConstraint,
    Path,
    SplittingPastNode,
    render_tree,
    tree_to_json,
)

XY = VarOrder(["x", "y"])
x, y = XY.gens()


def leaf_constraints(tree):
    return [tuple(tree[k].constraint.render(tree.order) for k in p[1:]) for p in tree.paths()]


def test_initial_tree_is_one_any_path():
    t = CylindricalTree.initial(XY)
    assert leaf_constraints(t) == [("any x", "any y")]
    assert all(t[k].timestamp is PRESENT for k in t.nodes)


def test_constraint_level_checks():
    assert NodeConstraint.eq(y**2 + x).level == 2
    assert NodeConstraint.any(1).kind is Kind.ANY
    with pytest.raises(ValueError):
        NodeConstraint.eq(XY.const(2))


def test_split_replaces_and_copies_subtree():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    a, b = t.split(path[1], [(NodeConstraint.eq(x), {x: 0}), (NodeConstraint.neq(x), {x: 1})])
    assert leaf_constraints(t) == [("x = 0", "any y"), ("x <> 0", "any y")]
    assert t[path[1]].timestamp is PAST and t[path[2]].timestamp is PAST
    assert t[path[1]].replacing == [a, b]
    assert t[a].signs == {x: 0} and t[b].signs == {x: 1}
    # the old level-2 node now stands for one copy per new parent
    assert len(t.resolve(path[2])) == 2


def test_update_follows_history_and_depth():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    t.split(path[1], [(NodeConstraint.eq(x), {}), (NodeConstraint.neq(x), {})])
    assert len(t.update(path)) == 2
    assert len(t.update(path[:2])) == 2
    assert t.update(path, depth=1) == t.paths(1)
    untouched = t.paths()[0]
    assert t.update(untouched) == [untouched]


def test_split_of_past_node_raises():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    t.split(path[2], [(NodeConstraint.eq(y), {})])
    with pytest.raises(SplittingPastNode, match="splitting a historical node"):
        t.split(path[2], [(NodeConstraint.neq(y), {})])


def test_split_level_mismatch_and_root():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    with pytest.raises(ValueError):
        t.split(path[1], [(NodeConstraint.eq(y), {})])
    with pytest.raises(ValueError):
        t.split(t.root, [])


def test_delete_cascades_to_childless_parents():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    t.delete(path[2])
    assert t.is_empty()
    assert t.paths() == []


def test_delete_keeps_siblings():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    e, ne = t.split(path[2], [(NodeConstraint.eq(y), {}), (NodeConstraint.neq(y), {})])
    t.delete(e)
    assert leaf_constraints(t) == [("any x", "y <> 0")]


def test_project_and_view_update():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    view = t.project(1)
    assert view.leaves() == [path[1]]
    t.split(path[1], [(NodeConstraint.eq(x + 1), {}), (NodeConstraint.neq(x + 1), {})])
    assert len(view.paths()) == 2
    assert len(view.update(path)) == 2
    assert Path(path).project(1) == path[:2]
    with pytest.raises(ValueError):
        t.project(3)
    with pytest.raises(ValueError):
        Path(path).project(5)


def test_todo_visits_paths_created_during_iteration():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    seen = []
    marked = set()
    for p in t.todo(path, lambda n: n.key in marked):
        seen.append(p)
        leaf = t[p.leaf]
        if leaf.kind is Kind.ANY and len(seen) == 1:
            new = t.split(p.leaf, [(NodeConstraint.eq(y), {}), (NodeConstraint.neq(y), {})])
            assert new
            continue
        marked.add(p.leaf)
    assert [t[p.leaf].constraint.render(XY) for p in seen] == ["any y", "y = 0", "y <> 0"]


def test_equations_along_path():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    t.split(path[1], [(NodeConstraint.eq(x), {})])
    (p,) = t.paths()
    t.split(p[2], [(NodeConstraint.eq(y - x), {})])
    (p,) = t.paths()
    assert t.equations(p) == [x, y - x]
    assert t.equations(p, upto=1) == [x]


def test_history_is_sound_under_random_splits():
    rng = random.Random(3)
    t = CylindricalTree.initial(XY)
    start = t.paths()[0]
    polys = {1: [x, x + 1, x**2 - 2], 2: [y, y - x, y**2 + x]}
    for _ in range(25):
        paths = t.paths()
        if not paths:
            break
        p = rng.choice(paths)
        lvl = rng.randint(1, 2)
        q = rng.choice(polys[lvl])
        parts = [(NodeConstraint.eq(q), {}), (NodeConstraint.neq(q), {})][: rng.randint(1, 2)]
        t.split(p[lvl], parts)
    # every current path descends from the original one
    assert sorted(t.update(start)) == sorted(t.paths())
    # keys are unique and only PRESENT nodes appear on paths
    assert len(set(t.nodes)) == len(t.nodes)
    for p in t.paths():
        assert all(t[k].timestamp is PRESENT for k in p)
    for node in t.past_nodes():
        for k in t.resolve(node.key):
            assert t[k].timestamp is PRESENT


def test_json_and_text_rendering():
    t = CylindricalTree.initial(XY)
    (path,) = t.paths()
    t.split(path[1], [(NodeConstraint.eq(x), {x: 0}), (NodeConstraint.neq(x), {x: 1})])
    doc = tree_to_json(t, history=True)
    json.dumps(doc)
    assert doc["vars"] == ["x", "y"] and doc["paths"] == 2
    assert {h["id"] for h in doc["history"]} == {path[1], path[2]}
    leaf = t.paths()[0].leaf
    t[leaf].signs[y] = 1
    text = render_tree(t, [x, y])
    assert "x = 0 {" in text and "any y : y <> 0" in text
