"""Finite trees and truncations of the rooted Cayley tree.

Two variants share one vertex store (BFS order, integer ids):

* ``finite_tree(N)`` unwinds the lattice paths from N down to (0, 0); a child
  step subtracts a unit vector from the projection, and ``iota`` records which
  coordinate was decremented;
* ``cayley_truncation(depth)`` truncates the infinite 2-homogeneous rooted
  tree, whose projection starts at (1, 1) and grows by a unit vector per
  generation (``iota`` records which one).

The Cayley variant also carries the deterministic edge/vertex type labeling
used by the periodic operators: a vertex's type equals the label of the edge
to its parent, and the two child edges of every vertex are labeled 1 then 2
in child order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

ROOT_PARENT = -1  # sentinel id for the formal parent of the root


@dataclass
class Tree:
    kind: str                    # "finite" or "cayley"
    root_proj: tuple
    parent: list
    children: list               # per vertex: list of (child_id, iota)
    proj: list
    iota: list                   # step label of the edge to the parent (0 at root)
    depth: list
    _subtree_cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.parent)

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def leaves(self) -> list:
        return [v for v in range(len(self)) if self.is_leaf(v)]

    def canopy(self) -> list:
        """Vertices projecting to (0, 0) (finite trees only)."""
        return [v for v in range(len(self)) if self.proj[v] == (0, 0)]

    def path_to_root(self, v: int) -> list:
        """Vertex ids from v up to and including the root."""
        out = [v]
        while self.parent[out[-1]] != ROOT_PARENT:
            out.append(self.parent[out[-1]])
        return out

    def subtree_ids(self, v: int) -> list:
        """All descendants of v including v, BFS order."""
        if v not in self._subtree_cache:
            out, queue = [], [v]
            while queue:
                u = queue.pop(0)
                out.append(u)
                queue.extend(c for c, _ in self.children[u])
            self._subtree_cache[v] = out
        return self._subtree_cache[v]

    def vertex_by_path(self, word) -> int:
        """Resolve a path word (sequence of child labels from the root) to an id."""
        v = 0
        for step in word:
            nxt = [c for c, lab in self.children[v] if lab == step]
            if not nxt:
                raise KeyError(f"path word {tuple(word)} leaves the tree")
            v = nxt[0]
        return v

    def proj_counts(self) -> dict:
        out: dict = {}
        for p in self.proj:
            out[p] = out.get(p, 0) + 1
        return out

    # -- export ------------------------------------------------------------

    def to_dot(self) -> str:
        lines = ["graph tree {"]
        for v in range(len(self)):
            lines.append(f'  v{v} [label="{v}:{self.proj[v]}"];')
        for v in range(1, len(self)):
            lines.append(f"  v{self.parent[v]} -- v{v};")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "root_proj": list(self.root_proj),
                "parent": self.parent,
                "proj": [list(p) for p in self.proj],
                "iota": self.iota,
            },
            sort_keys=True,
        )


def _grow(kind: str, root_proj, child_projs) -> Tree:
    """Generic BFS construction; child_projs(proj) yields (child_proj, iota)."""
    parent, children, proj, iota, depth = [ROOT_PARENT], [[]], [root_proj], [0], [0]
    queue = [0]
    while queue:
        v = queue.pop(0)
        for cp, lab in child_projs(proj[v], depth[v]):
            cid = len(parent)
            parent.append(v)
            children.append([])
            proj.append(cp)
            iota.append(lab)
            depth.append(depth[v] + 1)
            children[v].append((cid, lab))
            queue.append(cid)
    return Tree(kind, root_proj, parent, children, proj, iota, depth)


def finite_tree(N) -> Tree:
    """The finite tree whose root projects to N and whose canopy projects to (0, 0)."""
    N = (int(N[0]), int(N[1]))
    if N[0] < 1 or N[1] < 1:
        raise ValueError("finite tree requires N in N^2")

    def kids(p, _d):
        out = []
        if p[0] > 0:
            out.append(((p[0] - 1, p[1]), 1))
        if p[1] > 0:
            out.append(((p[0], p[1] - 1), 2))
        return out

    return _grow("finite", N, kids)


def finite_tree_vertex_count(N) -> int:
    """Closed-form count: sum over the rectangle of lattice-path multiplicities."""
    total = 0
    for n1 in range(N[0] + 1):
        for n2 in range(N[1] + 1):
            total += comb((N[0] - n1) + (N[1] - n2), N[0] - n1)
    return total


def cayley_truncation(depth: int, root_proj=(1, 1)) -> Tree:
    """Truncation of the rooted Cayley tree to ``depth`` generations below the root."""
    if depth < 0:
        raise ValueError("depth must be >= 0")

    def kids(p, d):
        if d >= depth:
            return []
        return [((p[0] + 1, p[1]), 1), ((p[0], p[1] + 1), 2)]

    return _grow("cayley", tuple(root_proj), kids)


def path_weight(tree: Tree, W, y: int) -> float:
    """Product of W^{-1/2} along the path from y to the root, both ends included."""
    m = 1.0
    for v in tree.path_to_root(y):
        m *= float(W[v]) ** -0.5
    return m
