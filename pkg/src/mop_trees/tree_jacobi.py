"""Jacobi operators on trees assembled from nearest-neighbor recurrence coefficients.

The operator acts by

``(J f)_Y = V_Y f_Y + W_Y^{1/2} f_{parent} + sum_children (-1)^{sigma_c} W_c^{1/2} f_c``

so the matrix has ``W_Y^{1/2}`` above the diagonal (row Y, column parent) and
``(-1)^{sigma_Y} W_Y^{1/2}`` below it.  When every recurrence coefficient
``a`` is positive (Angelesco input) sigma vanishes and the matrix is
symmetric; otherwise it is self-adjoint only in the indefinite inner product
``[f, g] = <S f, g>`` with the +-1 diagonal ``S`` returned by
:func:`signature_diagonal`.

Nikishin input is accepted as well: the truncations are perfectly good finite
matrices even though their coefficients blow up along the near-diagonal
multi-indices, so no bounded operator exists in the limit.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _poly as P
from .errors import ZeroWeightError
from .mop_engine import E1, E2, MopSystem, add, second_kind, sub
from .tree_topology import Tree, cayley_truncation, finite_tree

_DENSE_LIMIT = 4096


@dataclass
class TreeOperator:
    tree: Tree
    V: np.ndarray
    W: np.ndarray              # per vertex, weight of the edge to the parent (W_root = 1)
    sigma: np.ndarray
    kappa: tuple | None
    sys: MopSystem | None
    meta: dict = field(default_factory=dict)
    _sparse: sp.csr_matrix | None = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.V)

    def sparse(self) -> sp.csr_matrix:
        if self._sparse is None:
            n = self.n_vertices
            rows, cols, vals = list(range(n)), list(range(n)), list(self.V)
            sq = np.sqrt(self.W)
            for v in range(1, n):
                p = self.tree.parent[v]
                rows.append(v)
                cols.append(p)
                vals.append(sq[v])                       # row v, parent column
                rows.append(p)
                cols.append(v)
                vals.append((-1.0) ** self.sigma[v] * sq[v])
            self._sparse = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        return self._sparse

    def dense(self) -> np.ndarray:
        if self.n_vertices > _DENSE_LIMIT:
            raise ValueError("dense matrix requested for a large truncation; use sparse()")
        return self.sparse().toarray()

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.sparse() @ f

    def m_weights(self) -> np.ndarray:
        """m_Y = prod of W^{-1/2} along the path to the root (both ends included)."""
        m = np.empty(self.n_vertices)
        sq = 1.0 / np.sqrt(self.W)
        for v in range(self.n_vertices):
            p = self.tree.parent[v]
            m[v] = sq[v] if p < 0 else m[p] * sq[v]
        return m

    def to_matrix_market(self) -> str:
        buf = io.BytesIO()
        from scipy.io import mmwrite

        mmwrite(buf, self.sparse().tocoo())
        return buf.getvalue().decode()

    def metadata_json(self) -> dict:
        return {
            "kind": self.tree.kind,
            "n_vertices": self.n_vertices,
            "kappa": list(self.kappa) if self.kappa is not None else None,
            "root_proj": list(self.tree.root_proj),
            "signature_minus": int(np.sum(signature_diagonal(self) < 0)),
        }


def _weights_from_system(sys: MopSystem, tree: Tree, parent_proj, v_index) -> tuple:
    """V, W, sigma arrays for a tree whose coefficients come from ``sys``.

    ``parent_proj(v)`` gives the multi-index at which the edge coefficient
    ``a`` is read; ``v_index(v)`` gives (multi-index, component) for the
    diagonal entry b.
    """
    n = len(tree)
    V = np.empty(n)
    W = np.ones(n)
    sigma = np.zeros(n, dtype=int)
    for v in range(n):
        m, comp = v_index(v)
        V[v] = float(sys.recurrence(m)[comp + 2])
        if v == 0:
            continue
        a = float(sys.recurrence(parent_proj(v))[tree.iota[v] - 1])
        if a == 0:
            raise ZeroWeightError(f"vanishing recurrence coefficient on edge to vertex {v}")
        W[v] = abs(a)
        sigma[v] = 0 if a > 0 else 1
    return V, W, sigma


def assemble_finite(sys: MopSystem, kappa, N) -> TreeOperator:
    """Operator on the finite tree for root mixing weights kappa (kappa1 + kappa2 = 1)."""
    kappa = (float(kappa[0]), float(kappa[1]))
    if abs(kappa[0] + kappa[1] - 1) > 1e-12:
        raise ValueError("kappa must sum to 1")
    tree = finite_tree(N)
    N = tuple(int(x) for x in N)

    def parent_proj(v):
        return tree.proj[tree.parent[v]]

    def v_index(v):
        if v == 0:
            return N, 0  # placeholder, replaced below
        return tree.proj[v], tree.iota[v] - 1

    V, W, sigma = _weights_from_system(sys, tree, parent_proj, v_index)
    b_N = sys.recurrence(N)
    V[0] = kappa[0] * float(b_N[2]) + kappa[1] * float(b_N[3])
    return TreeOperator(tree, V, W, sigma, kappa, sys, {"N": N})


def assemble_truncated(sys: MopSystem, kappa, depth: int) -> TreeOperator:
    """Dirichlet truncation of the operator on the rooted Cayley tree."""
    kappa = (float(kappa[0]), float(kappa[1]))
    if abs(kappa[0] + kappa[1] - 1) > 1e-12:
        raise ValueError("kappa must sum to 1")
    tree = cayley_truncation(depth)

    def parent_proj(v):
        return tree.proj[tree.parent[v]]

    def v_index(v):
        if v == 0:
            return (1, 1), 0  # placeholder
        return tree.proj[tree.parent[v]], tree.iota[v] - 1

    V, W, sigma = _weights_from_system(sys, tree, parent_proj, v_index)
    V[0] = kappa[0] * float(sys.recurrence((0, 1))[2]) + kappa[1] * float(
        sys.recurrence((1, 0))[3]
    )
    return TreeOperator(tree, V, W, sigma, kappa, sys, {"depth": depth})


def assemble_subtree(sys: MopSystem, root_proj, root_iota: int, depth: int) -> TreeOperator:
    """Truncation of the restriction of the Cayley-tree operator to a subtree.

    The subtree root X has projection ``root_proj`` reached by a step of label
    ``root_iota``; the restriction keeps the diagonal entry of X but drops the
    coupling to its parent.
    """
    tree = cayley_truncation(depth, root_proj=tuple(root_proj))

    def parent_proj(v):
        return tree.proj[tree.parent[v]]

    def v_index(v):
        if v == 0:
            return sub(tuple(root_proj), E1 if root_iota == 1 else E2), root_iota - 1
        return tree.proj[tree.parent[v]], tree.iota[v] - 1

    V, W, sigma = _weights_from_system(sys, tree, parent_proj, v_index)
    return TreeOperator(tree, V, W, sigma, None, sys, {"root_proj": tuple(root_proj)})


def signature_diagonal(op: TreeOperator) -> np.ndarray:
    """+-1 diagonal making the operator self-adjoint in the indefinite product."""
    s = np.ones(op.n_vertices)
    for v in range(1, op.n_vertices):
        s[v] = s[op.tree.parent[v]] * (-1.0) ** op.sigma[v]
    return s


def s_selfadjoint_check(op: TreeOperator) -> float:
    """Max-norm of S J - J^T S; zero in exact arithmetic."""
    J = op.sparse()
    s = signature_diagonal(op)
    S = sp.diags(s)
    R = S @ J - J.T @ S
    return float(np.max(np.abs(R.toarray()))) if op.n_vertices <= _DENSE_LIMIT else float(
        abs(R).max()
    )


# ---------------------------------------------------------------------------
# eigenfunction identities
# ---------------------------------------------------------------------------


def _interior(op: TreeOperator) -> list:
    """Vertices whose children were not removed by truncation."""
    tree = op.tree
    if tree.kind == "finite":
        return list(range(op.n_vertices))
    return [v for v in range(op.n_vertices) if tree.children[v]]


def _row_residual(op: TreeOperator, f: np.ndarray, z: complex, v: int, restrict_root=None):
    tree = op.tree
    acc = (op.V[v] - z) * f[v]
    p = tree.parent[v]
    if p >= 0 and v != restrict_root:
        acc += np.sqrt(op.W[v]) * f[p]
    for c, _ in tree.children[v]:
        acc += (-1.0) ** op.sigma[c] * np.sqrt(op.W[c]) * f[c]
    return acc


def eigenfunction_residual(op: TreeOperator, kind: str, z, X=None, kl=(1, 0)) -> float:
    """Residual of the defining algebraic identity for a tree eigenfunction family.

    kind ``p``: values of the type II polynomials on a finite tree; the root
    row carries the boundary polynomial ``kappa1 P_{N+e1} + kappa2 P_{N+e2}``.
    kind ``l``: second-kind values on a Cayley truncation; interior rows only,
    and the root row carries ``kappa2 L_{e1} + kappa1 L_{e2}`` evaluated
    independently from the Markov functions of the measures.
    kind ``lambda_commutator``: the vertex-commutator of two type I value
    families on the subtree below X; an exact eigenfunction with no boundary
    term (rows at or below X, interior only).
    """
    sys = op.sys
    tree = op.tree
    if kind == "p":
        if tree.kind != "finite":
            raise ValueError("kind 'p' requires a finite-tree operator")
        m = op.m_weights()
        f = np.array(
            [complex(P.pval(sys.record(tree.proj[v]).P, z)) / m[v] for v in range(len(tree))]
        )
        N = op.meta["N"]
        bnd = op.kappa[0] * complex(P.pval(sys.record(add(N, E1)).P, z)) + op.kappa[1] * complex(
            P.pval(sys.record(add(N, E2)).P, z)
        )
        res = [abs(_row_residual(op, f, z, v)) for v in range(1, len(tree))]
        res.append(abs(_row_residual(op, f, z, 0) + bnd))
        return float(max(res))

    if kind == "l":
        if tree.kind != "cayley":
            raise ValueError("kind 'l' requires a Cayley truncation")
        m = op.m_weights()
        f = np.array(
            [complex(second_kind(sys, tree.proj[v], z)[0]) / m[v] for v in range(len(tree))]
        )
        k1, k2 = op.kappa
        bnd = k2 * complex(sys.mu1.markov(z)) / float(sys.mass(1)) + k1 * complex(
            sys.mu2.markov(z)
        ) / float(sys.mass(2))
        res = [abs(_row_residual(op, f, z, v)) for v in _interior(op) if v != 0]
        res.append(abs(_row_residual(op, f, z, 0) + bnd))
        return float(max(res))

    if kind == "lambda_commutator":
        if X is None or X == 0:
            raise ValueError("lambda_commutator requires an interior subtree root X != O")
        k, l = kl
        m = op.m_weights()
        Xp = tree.parent[X]

        def lam(j, v):
            rec = sys.type1_record(tree.proj[v])
            src = {0: rec.A0, 1: rec.A1, 2: rec.A2}[j]
            return (complex(P.pval(src, z)) if src else 0.0) / m[v]

        lk_p, ll_p = lam(k, Xp), lam(l, Xp)
        ids = tree.subtree_ids(X)
        f = np.zeros(len(tree), dtype=complex)
        for v in ids:
            f[v] = lk_p * lam(l, v) - lam(k, v) * ll_p
        f /= np.max(np.abs(f))  # the identity is scale-free (no boundary term)
        interior = set(_interior(op))
        res = [
            abs(_row_residual(op, f, z, v, restrict_root=X))
            for v in ids
            if v in interior
        ]
        return float(max(res))

    raise ValueError(f"unknown kind {kind!r}")


def root_boundary_gap(op: TreeOperator, z) -> tuple:
    """(raw root-row residual of the second-kind family, independent Markov-route value).

    The two numbers must agree: the root row of the identity equals the
    kappa-combination of the order-one second-kind functions.
    """
    sys = op.sys
    tree = op.tree
    m = op.m_weights()
    f = np.array(
        [complex(second_kind(sys, tree.proj[v], z)[0]) / m[v] for v in range(len(tree))]
    )
    raw = -_row_residual(op, f, z, 0)
    k1, k2 = op.kappa
    markov_route = k2 * complex(sys.mu1.markov(z)) / float(sys.mass(1)) + k1 * complex(
        sys.mu2.markov(z)
    ) / float(sys.mass(2))
    return raw, markov_route
