"""
The shared cylindrical tree ("universe") that all decomposition routines
mutate in place.

Nodes live in one dictionary keyed by never-reused integer keys.  The only
structural mutation is :meth:`CylindricalTree.split`, which replaces a
PRESENT node by a list of new nodes, deep-copies the old node's subtree under
each replacement and stamps the old subtree PAST.  PAST nodes keep links to
the nodes that replaced (or copied) them, so a path taken in an earlier state
of the tree can always be brought up to date with :meth:`CylindricalTree.update`.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from .poly import Polynomial, VarOrder, format_polynomial

PAST = "past"
PRESENT = "present"


class Kind(str, enum.Enum):
    EQ = "eq"
    NEQ = "neq"
    ANY = "any"


@dataclass(frozen=True)
class NodeConstraint:
    """``p = 0``, ``p != 0`` or "any x_level"."""

    kind: Kind
    level: int
    poly: Optional[Polynomial] = None

    def __post_init__(self):
        if self.kind is Kind.ANY:
            if self.poly is not None:
                raise ValueError("an 'any' constraint carries no polynomial")
        else:
            if self.poly is None or self.poly.is_constant:
                raise ValueError("constraint polynomial must be non-constant")
            if self.poly.level != self.level:
                raise ValueError(
                    f"constraint {self.poly} has level {self.poly.level}, node level is {self.level}"
                )

    @classmethod
    def eq(cls, p: Polynomial) -> "NodeConstraint":
        return cls(Kind.EQ, p.level, p)

    @classmethod
    def neq(cls, p: Polynomial) -> "NodeConstraint":
        return cls(Kind.NEQ, p.level, p)

    @classmethod
    def any(cls, level: int) -> "NodeConstraint":
        return cls(Kind.ANY, level)

    def render(self, order: VarOrder) -> str:
        if self.kind is Kind.ANY:
            return f"any {order.names[self.level - 1]}"
        op = "=" if self.kind is Kind.EQ else "<>"
        return f"{format_polynomial(self.poly)} {op} 0"


class Node:
    """One vertex of the universe together with its attribute tables."""

    __slots__ = (
        "key", "constraint", "level", "parent", "children", "timestamp",
        "replacing", "signs", "invert_lc", "squarefree", "gcd",
    )

    def __init__(self, key: int, constraint: Optional[NodeConstraint], level: int, parent: Optional[int]):
        self.key = key
        self.constraint = constraint
        self.level = level
        self.parent = parent
        self.children: list[int] = []
        self.timestamp = PRESENT
        self.replacing: list[int] = []
        self.signs: dict = {}
        self.invert_lc: dict = {}
        self.squarefree: dict = {}
        self.gcd: dict = {}

    @property
    def kind(self) -> Optional[Kind]:
        return None if self.constraint is None else self.constraint.kind

    @property
    def poly(self) -> Optional[Polynomial]:
        return None if self.constraint is None else self.constraint.poly

    def copy_tables_from(self, other: "Node"):
        self.signs = dict(other.signs)
        self.invert_lc = dict(other.invert_lc)
        self.squarefree = dict(other.squarefree)
        self.gcd = dict(other.gcd)

    def __repr__(self):
        c = "root" if self.constraint is None else f"{self.constraint.kind.value}:{self.constraint.poly}"
        return f"<Node {self.key} L{self.level} {c} {self.timestamp}>"


class Path(tuple):
    """Node keys from the root (index 0) down to a node of level ``len-1``."""

    @property
    def leaf(self) -> int:
        return self[-1]

    @property
    def level(self) -> int:
        return len(self) - 1

    def project(self, k: int) -> "Path":
        if not 0 <= k <= self.level:
            raise ValueError(f"cannot project a level-{self.level} path to level {k}")
        return Path(self[: k + 1])


class SplittingPastNode(RuntimeError):
    pass


class CylindricalTree:
    """Node store ``H``, root key and the split/update machinery."""

    def __init__(self, order: VarOrder):
        self.order = order
        self.nodes: dict[int, Node] = {}
        self._keys = itertools.count()
        self.root = self._new(None, 0, None).key
        self.split_count = 0

    @classmethod
    def initial(cls, order: VarOrder) -> "CylindricalTree":
        """Root followed by a chain ``any x_1, ..., any x_n``."""
        tree = cls(order)
        parent = tree.root
        for k in range(1, order.n + 1):
            node = tree._new(NodeConstraint.any(k), k, parent)
            tree.nodes[parent].children.append(node.key)
            parent = node.key
        return tree

    @property
    def n(self) -> int:
        return self.order.n

    def _new(self, constraint, level, parent) -> Node:
        node = Node(next(self._keys), constraint, level, parent)
        self.nodes[node.key] = node
        return node

    def node(self, key: int) -> Node:
        return self.nodes[key]

    def __getitem__(self, key: int) -> Node:
        return self.nodes[key]

    # ---- mutation ---------------------------------------------------------------
    def split(self, key: int, replacements: Sequence[tuple[NodeConstraint, dict]]) -> list[int]:
        """Replace node ``key`` by new nodes, one per ``(constraint, sign updates)``.

        Each replacement starts with a copy of the old node's attribute
        tables, then its ``signs`` are updated with the given dict.  The old
        node's children are deep-copied under every replacement, and the old
        subtree is stamped PAST.  An empty ``replacements`` deletes the
        branch; parents left without children are deleted in turn.
        """
        old = self.nodes[key]
        if old.timestamp is PAST:
            raise SplittingPastNode("splitting a historical node")
        if old.parent is None:
            raise ValueError("the root cannot be split")
        new_keys = []
        for constraint, sign_updates in replacements:
            if constraint.level != old.level:
                raise ValueError("replacement level differs from the replaced node")
            node = self._new(constraint, old.level, old.parent)
            node.copy_tables_from(old)
            node.signs.update(sign_updates)
            for child in old.children:
                node.children.append(self._deep_copy(child, node.key))
            new_keys.append(node.key)
        parent = self.nodes[old.parent]
        i = parent.children.index(key)
        parent.children[i:i + 1] = new_keys
        old.replacing = list(new_keys)
        self._stamp_past(key)
        self.split_count += 1
        if not parent.children and parent.parent is not None:
            self.split(parent.key, [])
        return new_keys

    def delete(self, key: int):
        self.split(key, [])

    def _deep_copy(self, key: int, new_parent: int) -> int:
        src = self.nodes[key]
        node = self._new(src.constraint, src.level, new_parent)
        node.copy_tables_from(src)
        for child in src.children:
            node.children.append(self._deep_copy(child, node.key))
        src.replacing.append(node.key)
        return node.key

    def _stamp_past(self, key: int):
        stack = [key]
        while stack:
            node = self.nodes[stack.pop()]
            node.timestamp = PAST
            stack.extend(node.children)

    # ---- history ----------------------------------------------------------------
    def resolve(self, key: int) -> list[int]:
        """PRESENT nodes currently standing for ``key``, in tree order."""
        node = self.nodes[key]
        if node.timestamp is PRESENT:
            return [key]
        out = []
        for r in node.replacing:
            out.extend(self.resolve(r))
        return out

    def path_to(self, key: int) -> Path:
        keys = []
        k = key
        while k is not None:
            keys.append(k)
            k = self.nodes[k].parent
        return Path(reversed(keys))

    def update(self, path: Sequence[int], depth: Optional[int] = None) -> list[Path]:
        """Current paths derived from ``path``.

        The result lists PRESENT paths ending at level ``depth`` (default:
        the level of ``path``) that descend from the current incarnations of
        ``path``'s leaf, in depth-first order.  An untouched path is returned
        unchanged.
        """
        path = Path(path)
        if depth is None:
            depth = path.level
        elif depth < path.level:
            path = path.project(depth)
        out = []
        for k in self.resolve(path.leaf):
            prefix = self.path_to(k)
            self._extend(prefix, depth, out)
        return out

    def _extend(self, prefix: Path, depth: int, out: list):
        if prefix.level == depth:
            out.append(prefix)
            return
        for c in self.nodes[prefix.leaf].children:
            self._extend(Path(prefix + (c,)), depth, out)

    # ---- traversal ----------------------------------------------------------------
    def paths(self, depth: Optional[int] = None) -> list[Path]:
        """All PRESENT root-to-level-``depth`` paths (default: full depth)."""
        return self.update(Path((self.root,)), self.n if depth is None else depth)

    def project(self, k: int) -> "TreeView":
        if not 0 <= k <= self.n:
            raise ValueError(f"projection level {k} out of range")
        return TreeView(self, k)

    def next_path_to_do(self, start: Sequence[int], done: Callable[[Node], bool],
                        depth: Optional[int] = None) -> Optional[Path]:
        """First path derived from ``start`` whose leaf is not ``done``.

        The universe is re-read on every call, so paths created by splits
        since the previous call are visited.
        """
        for p in self.update(start, depth):
            if not done(self.nodes[p.leaf]):
                return p
        return None

    def todo(self, start: Sequence[int], done: Callable[[Node], bool],
             depth: Optional[int] = None) -> Iterator[Path]:
        """Generator form of :meth:`next_path_to_do`.

        The consumer must make each yielded leaf ``done`` (or remove it) before
        asking for the next path.
        """
        while True:
            p = self.next_path_to_do(start, done, depth)
            if p is None:
                return
            yield p

    def equations(self, path: Sequence[int], upto: Optional[int] = None) -> list[Polynomial]:
        """Equation polynomials along ``path`` with level <= ``upto``."""
        out = []
        for k in path[1:]:
            node = self.nodes[k]
            if upto is not None and node.level > upto:
                break
            if node.kind is Kind.EQ:
                out.append(node.poly)
        return out

    def present_leaves(self) -> list[int]:
        return [p.leaf for p in self.paths()]

    def is_empty(self) -> bool:
        return not self.nodes[self.root].children

    def past_nodes(self) -> list[Node]:
        return [n for n in self.nodes.values() if n.timestamp is PAST]


class TreeView:
    """Live view of a tree truncated at level ``k`` (level-k nodes act as leaves)."""

    def __init__(self, tree: CylindricalTree, k: int):
        self.tree = tree
        self.k = k

    def paths(self) -> list[Path]:
        return self.tree.paths(self.k)

    def leaves(self) -> list[int]:
        return [p.leaf for p in self.paths()]

    def update(self, path: Sequence[int]) -> list[Path]:
        return self.tree.update(Path(path).project(self.k) if len(path) > self.k + 1 else path, self.k)


# ---------------------------------------------------------------------------
# serialization


def node_to_dict(tree: CylindricalTree, key: int) -> dict:
    node = tree.nodes[key]
    if node.constraint is None:
        constraint = None
    else:
        constraint = {
            "kind": node.constraint.kind.value,
            "poly": None if node.poly is None else format_polynomial(node.poly),
        }
    return {
        "id": node.key,
        "level": node.level,
        "constraint": constraint,
        "signs": {format_polynomial(p): s for p, s in node.signs.items()},
        "children": [node_to_dict(tree, c) for c in node.children],
    }


def tree_to_json(tree: CylindricalTree, history: bool = False) -> dict:
    out = {
        "vars": list(tree.order.names),
        "root": node_to_dict(tree, tree.root),
        "paths": len(tree.paths()),
    }
    if history:
        past = []
        for node in tree.past_nodes():
            past.append({
                "id": node.key,
                "level": node.level,
                "constraint": None if node.constraint is None else {
                    "kind": node.constraint.kind.value,
                    "poly": None if node.poly is None else format_polynomial(node.poly),
                },
                "replacing": list(node.replacing),
                "children": list(node.children),
            })
        out["history"] = past
    return out


def render_tree(tree: CylindricalTree, signs: Optional[Sequence[Polynomial]] = None) -> str:
    """Nested-brace text rendering; leaves list their recorded signs."""
    lines = []

    def leaf_signs(node: Node) -> str:
        items = []
        keys = signs if signs is not None else list(node.signs)
        for p in keys:
            if p in node.signs:
                op = "=" if node.signs[p] == 0 else "<>"
                items.append(f"{format_polynomial(p)} {op} 0")
        return " & ".join(items)

    def walk(key: int, indent: int):
        node = tree.nodes[key]
        label = node.constraint.render(tree.order)
        pad = "  " * indent
        if node.children:
            lines.append(f"{pad}{label} {{")
            for c in node.children:
                walk(c, indent + 1)
            lines.append(f"{pad}}}")
        else:
            s = leaf_signs(node)
            lines.append(f"{pad}{label}" + (f" : {s}" if s else ""))

    lines.append("{")
    for c in tree.nodes[tree.root].children:
        walk(c, 1)
    lines.append("}")
    return "\n".join(lines)
