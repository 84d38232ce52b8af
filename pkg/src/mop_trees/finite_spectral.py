"""Exact spectral decomposition of the finite-tree operators.

The eigenvalue set consists of the zeros of the boundary polynomial
``kappa1 P_{N+e1} + kappa2 P_{N+e2}`` together with the zeros of every P_n
whose tree vertices have two children (n in N^2).  Each eigenvalue E carries
one canonical eigenvector per joint: the trivial one is the vector of scaled
polynomial values p(E); a joint X with P_{proj(X)}(E) = 0 seeds a vector
supported on the two subtrees below X, glued so that the rows at and above X
cancel.

The standing numerical assumptions (all zeros real and simple, parent/child
zero sets disjoint) are verified on entry, not assumed; a clash within
``clash_tol`` raises :class:`AssumptionError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _poly as P
from .errors import AssumptionError, JointError, NeutralVectorError, RankError
from .mop_engine import E1, E2, MopSystem, add, order, real_zeros
from .tree_jacobi import TreeOperator, assemble_finite, signature_diagonal
from .tree_topology import ROOT_PARENT, Tree

_CLASH_TOL = 1e-9


@dataclass
class Eigenvalue:
    E: float
    vanishing: list          # multi-indices n (and "boundary") whose polynomial vanishes at E
    joint_star: list         # vertex ids; ROOT_PARENT stands for the formal root parent
    g: int


@dataclass
class SpectralDecomposition:
    sys: MopSystem
    kappa: tuple
    N: tuple
    op: TreeOperator
    eigenvalues: list
    vectors: dict            # (eig_index, X) -> eigenvector
    boundary_poly: tuple = ()
    report: dict = field(default_factory=dict)

    @property
    def tree(self) -> Tree:
        return self.op.tree

    def basis_matrix(self) -> np.ndarray:
        cols = []
        for i, ev in enumerate(self.eigenvalues):
            for X in ev.joint_star:
                cols.append(self.vectors[(i, X)])
        return np.column_stack(cols)

    def eigenvalue_csv(self) -> str:
        """Two-column CSV of eigenvalues and their multiplicities."""
        lines = ["E,g"]
        for ev in self.eigenvalues:
            lines.append(f"{ev.E:.12e},{ev.g}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "N": list(self.N),
            "kappa": list(self.kappa),
            "eigenvalues": [
                {
                    "E": ev.E,
                    "g": ev.g,
                    "joint_star": ["root_parent" if X == ROOT_PARENT else X for X in ev.joint_star],
                    "vanishing": [list(v) if v != "boundary" else v for v in ev.vanishing],
                }
                for ev in self.eigenvalues
            ],
            "vectors": {
                f"{i}:{'root_parent' if X == ROOT_PARENT else X}": [float(v) for v in vec]
                for (i, X), vec in self.vectors.items()
            },
        }


def boundary_polynomial(sys: MopSystem, kappa, N) -> tuple:
    """kappa1 P_{N+e1} + kappa2 P_{N+e2}; monic of degree |N|+1 since kappa sums to 1."""
    p1 = sys.record(add(tuple(N), E1)).P
    p2 = sys.record(add(tuple(N), E2)).P
    return P.padd(P.pscale(p1, kappa[0]), P.pscale(p2, kappa[1]))


def eigenvalue_set(sys: MopSystem, kappa, N, clash_tol: float = _CLASH_TOL):
    """Eigenvalues with provenance; verifies the zero-structure assumptions.

    Returns (eigenvalues, zero_table, boundary_poly) where zero_table maps
    each relevant multi-index key to its sorted zero list.
    """
    N = (int(N[0]), int(N[1]))
    kappa = (float(kappa[0]), float(kappa[1]))
    tree = assemble_finite(sys, kappa, N).tree  # only for projections / joints
    return _eigenvalue_set_on(sys, kappa, N, tree, clash_tol)


def _eigenvalue_set_on(sys, kappa, N, tree, clash_tol):
    prec = sys.precision_bits
    bpoly = boundary_polynomial(sys, kappa, N)
    zero_table: dict = {"boundary": [float(z) for z in real_zeros(bpoly, prec)]}
    inner = [
        (n1, n2)
        for n1 in range(N[0] + 1)
        for n2 in range(N[1] + 1)
    ]
    for n in inner:
        zero_table[n] = [float(z) for z in real_zeros(sys.record(n).P, prec)]

    # zeros real and simple with the advertised counts
    if len(zero_table["boundary"]) != order(N) + 1:
        raise AssumptionError("boundary polynomial has fewer real simple zeros than its degree")
    for n in inner:
        zs = zero_table[n]
        if len(zs) != order(n):
            raise AssumptionError(f"P_{n} has fewer real simple zeros than its degree")
        if any(b - a < clash_tol for a, b in zip(zs[:-1], zs[1:])):
            raise AssumptionError(f"P_{n} has nearly multiple zeros")

    # parent/child zero sets disjoint
    pairs = [(n, add(n, e)) for n in inner for e in (E1, E2) if add(n, e) in zero_table]
    for n, m in pairs:
        _assert_disjoint(zero_table[n], zero_table[m], clash_tol, f"{n} vs {m}")
    _assert_disjoint(zero_table[N], zero_table["boundary"], clash_tol, f"{N} vs boundary")

    # cluster across polynomials
    events = [(z, "boundary") for z in zero_table["boundary"]]
    for n in inner:
        if n[0] >= 1 and n[1] >= 1:
            events.extend((z, n) for z in zero_table[n])
    events.sort(key=lambda t: t[0])
    joint_vertices: dict = {}
    for v in range(len(tree)):
        if len(tree.children[v]) == 2:
            joint_vertices.setdefault(tree.proj[v], []).append(v)

    eigenvalues = []
    i = 0
    while i < len(events):
        j = i + 1
        while j < len(events) and events[j][0] - events[j - 1][0] < clash_tol:
            j += 1
        cluster = events[i:j]
        E = float(np.mean([z for z, _ in cluster]))
        vanishing = [src for _, src in cluster]
        joint_star = []
        if "boundary" in vanishing:
            joint_star.append(ROOT_PARENT)
        for src in vanishing:
            if src != "boundary":
                joint_star.extend(joint_vertices.get(src, []))
        eigenvalues.append(Eigenvalue(E, vanishing, joint_star, len(joint_star)))
        i = j
    return eigenvalues, zero_table, bpoly


def _assert_disjoint(z1, z2, tol, label):
    for a in z1:
        for b in z2:
            if abs(a - b) < tol:
                raise AssumptionError(f"zero clash between {label}: {a} ~ {b}")


def canonical_vector(sys: MopSystem, kappa, N, E: float, X, op: TreeOperator | None = None):
    """The canonical eigenvector b(E, X); X = ROOT_PARENT gives the trivial one."""
    if op is None:
        op = assemble_finite(sys, kappa, N)
    tree = op.tree
    m = op.m_weights()
    pvals = np.array(
        [float(P.pval(sys.record(tree.proj[v]).P, E)) / m[v] for v in range(len(tree))]
    )
    if X == ROOT_PARENT:
        bpoly = boundary_polynomial(sys, kappa, N)
        if abs(float(P.pval(bpoly, E))) > 1e-6:
            raise JointError("E is not a zero of the boundary polynomial")
        return pvals
    if len(tree.children[X]) != 2:
        raise JointError("joint must have two children")
    if abs(float(P.pval(sys.record(tree.proj[X]).P, E))) > 1e-6:
        raise JointError("E is not a zero of the polynomial at the joint")
    vec = np.zeros(len(tree))
    (c1, _), (c2, _) = tree.children[X]
    for sgn, c in ((-1.0, c1), (1.0, c2)):
        coef = sgn * (-1.0) ** op.sigma[c] / (np.sqrt(op.W[c]) * pvals[c])
        for v in tree.subtree_ids(c):
            vec[v] = coef * pvals[v]
    return vec


def full_basis(sys: MopSystem, kappa, N, residual_factor: float = 1e-9) -> SpectralDecomposition:
    """All canonical eigenvectors, verified against the assembled matrix.

    Verifies per-vector residuals, the counting identity
    ``#V = sum_E #Joint*(E)``, full rank of the stacked vectors, and the
    multiset agreement of the eigenvalue set with a dense eigensolve.
    """
    N = (int(N[0]), int(N[1]))
    kappa = (float(kappa[0]), float(kappa[1]))
    op = assemble_finite(sys, kappa, N)
    eigenvalues, zero_table, bpoly = _eigenvalue_set_on(sys, kappa, N, op.tree, _CLASH_TOL)

    nv = op.n_vertices
    if sum(ev.g for ev in eigenvalues) != nv:
        raise AssumptionError("counting identity #V = sum g_E fails")

    J = op.dense()
    tol = residual_factor * np.linalg.norm(J, 2)
    vectors = {}
    for i, ev in enumerate(eigenvalues):
        for X in ev.joint_star:
            b = canonical_vector(sys, kappa, N, ev.E, X, op=op)
            res = np.linalg.norm(J @ b - ev.E * b) / np.linalg.norm(b)
            if res > tol:
                raise AssumptionError(f"eigenvector residual {res:.2e} exceeds {tol:.2e}")
            vectors[(i, X)] = b

    B = np.column_stack([vectors[(i, X)] for i, ev in enumerate(eigenvalues) for X in ev.joint_star])
    B = B / np.linalg.norm(B, axis=0)
    rank = np.linalg.matrix_rank(B, tol=1e-8)
    if rank != nv:
        raise RankError(f"stacked canonical vectors have rank {rank} < {nv}")

    if np.all(op.sigma == 0):
        dense_eigs = np.sort(scipy.linalg.eigvalsh(J))
    else:
        dense_eigs = np.sort(scipy.linalg.eigvals(J).real)
    ours = np.sort(np.concatenate([[ev.E] * ev.g for ev in eigenvalues]))
    gap = float(np.max(np.abs(dense_eigs - ours)))
    if gap > 1e-8:
        raise AssumptionError(f"dense eigensolve disagrees with the zero sets by {gap:.2e}")

    return SpectralDecomposition(
        sys, kappa, N, op, eigenvalues, vectors, bpoly,
        report={"dense_gap": gap, "rank": int(rank), "zero_table_sizes": {str(k): len(v) for k, v in zero_table.items()}},
    )


# ---------------------------------------------------------------------------
# waves, fronts, indefinite orthogonalization
# ---------------------------------------------------------------------------


def waves_and_fronts_on(tree: Tree, joints) -> list:
    """Partition the vertex set into waves with fronts, given the joint set.

    Wave 1 grows down from the root and stops at joints (inclusive); wave k+1
    grows from the children of the previous front's joints.  Fronts consist of
    the canopy and joint vertices reached by each wave.  An empty joint set
    yields a single wave covering the tree.
    """
    joints = set(joints)
    canopy = set(tree.canopy()) if tree.kind == "finite" else set(tree.leaves())
    assigned = set()
    waves = []

    def sweep(starts):
        wave, stops = set(), set()
        queue = list(starts)
        while queue:
            v = queue.pop(0)
            if v in assigned or v in wave:
                continue
            wave.add(v)
            if v in joints:
                stops.add(v)
                continue
            queue.extend(c for c, _ in tree.children[v])
        front = (wave & canopy) | stops
        return wave, front

    if 0 in joints:
        waves.append(({0}, {0}))
        assigned.add(0)
        frontier = [0]
    else:
        wave, front = sweep([0])
        waves.append((wave, front))
        assigned |= wave
        frontier = sorted(front & joints)

    while frontier:
        starts = [c for f in frontier for c, _ in tree.children[f]]
        if not starts:
            break
        wave, front = sweep(starts)
        if not wave:
            break
        waves.append((wave, front))
        assigned |= wave
        frontier = sorted(front & joints)
    leftover = set(range(len(tree))) - assigned
    if leftover:
        raise AssumptionError("wave partition failed to exhaust the vertex set")
    return waves


def waves_and_fronts(decomp: SpectralDecomposition, E: float) -> list:
    """Waves/fronts of the decomposition's tree for the joint set of eigenvalue E."""
    for ev in decomp.eigenvalues:
        if abs(ev.E - E) < 1e-9:
            joints = [X for X in ev.joint_star if X != ROOT_PARENT]
            return waves_and_fronts_on(decomp.tree, joints)
    raise JointError("E is not an eigenvalue of this decomposition")


@dataclass
class IndefiniteBasis:
    matrix: np.ndarray       # columns are the orthogonalized eigenvectors
    signs: np.ndarray        # [psi, psi] = +-1 per column
    labels: list             # (eig_index, X) per column
    gram_offdiag: float
    inertia: tuple           # (#positive, #negative)


def s_orthogonalize(decomp: SpectralDecomposition, neutral_tol: float = 1e-10) -> IndefiniteBasis:
    """Per-eigenspace Gram-Schmidt in the indefinite inner product.

    Within each eigenspace, vectors are processed from the deepest wave
    upward (trivial vector last), so each new vector only needs its
    projections onto previously produced ones subtracted.  Distinct
    eigenspaces are automatically orthogonal.  The output satisfies
    ``|[psi_i, psi_j]| <= tol`` off the diagonal, ``[psi_i, psi_i] = +-1``,
    and the sign counts reproduce the inertia of the signature diagonal.
    """
    s = signature_diagonal(decomp.op)
    cols, signs, labels = [], [], []
    for i, ev in enumerate(decomp.eigenvalues):
        joints = [X for X in ev.joint_star if X != ROOT_PARENT]
        waves = waves_and_fronts_on(decomp.tree, joints)
        wave_of = {}
        for wi, (wave, _) in enumerate(waves):
            for v in wave:
                wave_of[v] = wi
        ordered = sorted(joints, key=lambda X: (-wave_of[X], X))
        if ROOT_PARENT in ev.joint_star:
            ordered.append(ROOT_PARENT)
        produced = []
        for X in ordered:
            psi = decomp.vectors[(i, X)].astype(float).copy()
            for phi, sg in produced:
                psi -= sg * float(np.dot(s * psi, phi)) * phi
            nu = float(np.dot(s * psi, psi))
            if abs(nu) < neutral_tol * float(np.dot(psi, psi)):
                raise NeutralVectorError(f"neutral vector at E={ev.E}, X={X}")
            psi /= np.sqrt(abs(nu))
            sg = 1.0 if nu > 0 else -1.0
            produced.append((psi, sg))
            cols.append(psi)
            signs.append(sg)
            labels.append((i, X))
    M = np.column_stack(cols)
    G = (M * s[:, None]).T @ M
    off = float(np.max(np.abs(G - np.diag(np.diag(G)))))
    inertia = (int(np.sum(np.array(signs) > 0)), int(np.sum(np.array(signs) < 0)))
    return IndefiniteBasis(M, np.array(signs), labels, off, inertia)
