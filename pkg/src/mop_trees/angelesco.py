"""Spectral theory of the Cayley-tree operators generated by Angelesco systems.

For two measures with ordered disjoint hulls the assembled operators are
bounded and self-adjoint, and everything is expressible through the
second-kind functions L_n:

* the Green's function of the subtree below X is
  ``G(Y, X; z) = -(m_X / m_Y) L_{proj(Y)}(z) / L_{proj(parent X)}(z)``;
* the root spectral measure has density ``S_O |L_x(kappa)|^{-2} mustar'``
  plus at most one point mass at the zero of the kappa-form off the hulls;
* subtree spectral measures have densities ``S_X`` times the reference
  density ``|L_n|^{-2} mustar'``, where S_X has an explicit sign-definite
  quadrature representation;
* generalized eigenfunctions Psi are built from the type I value families
  and satisfy the operator identity exactly (verified numerically).

Evaluations with large type I coefficient cancellation run in extended
precision; profile/density sweeps use stable double-precision routes
(root-factored polynomial evaluation, sign-definite quadrature).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.sparse.linalg
from mpmath import mp, mpc, mpf, workprec

from . import _poly as P
from .errors import DomainError, EndpointError, OverlapError
from .measures import Measure, concat
from .mop_engine import (
    E1,
    E2,
    MopSystem,
    add,
    order,
    real_zeros,
    second_kind,
    second_kind_boundary,
    second_kind_boundary_mp,
    sub,
)
from .tree_jacobi import assemble_subtree, assemble_truncated
from .tree_topology import cayley_truncation

_ENDPOINT_EXCLUSION = 1e-6


@dataclass
class AngelescoSystem:
    sys: MopSystem
    delta1: tuple
    delta2: tuple
    mustar: Measure
    xi_mass: float           # difference of the normalized first moments (> 0)

    @property
    def masses(self) -> tuple:
        return float(self.sys.mass(1)), float(self.sys.mass(2))

    def interval(self, k: int) -> tuple:
        return self.delta1 if k == 1 else self.delta2

    def side_of(self, x: float) -> int:
        """1 or 2 for the interval containing x; DomainError otherwise."""
        for k in (1, 2):
            a, b = self.interval(k)
            if a <= x <= b:
                return k
        raise DomainError(f"{x} lies outside both intervals")


def angelesco_system(mu1: Measure, mu2: Measure, precision_bits: int = 256) -> AngelescoSystem:
    """Validate ordered disjoint hulls and build the combined system."""
    h1, h2 = mu1.hull(), mu2.hull()
    if not h1[1] < h2[0]:
        if h2[1] < h1[0]:
            mu1, mu2, h1, h2 = mu2, mu1, h2, h1
        else:
            raise OverlapError("Angelesco system requires disjoint hulls")
    sys = MopSystem(mu1, mu2, precision_bits)
    xi = mu2.moment(1) / mu2.mass() - mu1.moment(1) / mu1.mass()
    return AngelescoSystem(sys, h1, h2, concat(mu1, mu2), xi)


# ---------------------------------------------------------------------------
# the kappa-form and its zero
# ---------------------------------------------------------------------------


def l_kappa(asys: AngelescoSystem, kappa, z) -> complex:
    """kappa2 L_{e1}(z) + kappa1 L_{e2}(z) = (kappa2/|mu1|) markov1 + (kappa1/|mu2|) markov2.

    This is the boundary form attached to the formal root parent: the swap of
    the components keeps the meaning of the order-one second-kind functions.
    """
    m1, m2 = asys.masses
    return (kappa[1] / m1) * asys.sys.mu1.markov(z) + (kappa[0] / m2) * asys.sys.mu2.markov(z)


def l_kappa_mp(asys, kappa, z, prec=None):
    prec = prec or asys.sys.precision_bits
    m1 = asys.sys.mu1.moments_mp(0, prec)[0]
    m2 = asys.sys.mu2.moments_mp(0, prec)[0]
    with workprec(prec):
        return (mpf(kappa[1]) / m1) * asys.sys.mu1.markov_mp(z, prec) + (
            mpf(kappa[0]) / m2
        ) * asys.sys.mu2.markov_mp(z, prec)


def l_kappa_boundary(asys, kappa, x: float, side: str = "+") -> complex:
    m1, m2 = asys.masses
    k = asys.side_of(x)
    mu_k = asys.sys.mu1 if k == 1 else asys.sys.mu2
    mu_o = asys.sys.mu2 if k == 1 else asys.sys.mu1
    w_k = kappa[1] / m1 if k == 1 else kappa[0] / m2
    w_o = kappa[0] / m2 if k == 1 else kappa[1] / m1
    return w_k * mu_k.markov_boundary(x, side) + w_o * complex(mu_o.markov(x))


def find_e_kappa(asys: AngelescoSystem, kappa, grid: int = 4000):
    """The at-most-one real zero of the kappa-form off the two intervals (or None).

    Bracketed by sign changes on the gap and on both outer rays (compactified
    through 1/x), then bisected and Newton-polished.
    """
    a1, b1 = asys.delta1
    a2, b2 = asys.delta2
    span = b2 - a1
    g = 1e-9 * span

    def f(x):
        return l_kappa(asys, kappa, x).real

    segments = []
    if b1 + g < a2 - g:
        segments.append(np.linspace(b1 + 10 * g, a2 - 10 * g, grid))
    segments.append(a1 - np.geomspace(10 * g, 50 * span, grid))
    segments.append(b2 + np.geomspace(10 * g, 50 * span, grid))
    zeros = []
    for xs in segments:
        xs = np.sort(xs)
        vals = np.array([f(x) for x in xs])
        sgn = np.sign(vals)
        for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
            lo, hi = xs[i], xs[i + 1]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if f(lo) * f(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-15 * max(1, abs(mid)):
                    break
            zeros.append(0.5 * (lo + hi))
    if not zeros:
        return None
    if len(zeros) > 1:
        raise DomainError("more than one zero of the kappa-form found (numerical artifact)")
    return float(zeros[0])


# ---------------------------------------------------------------------------
# spectral measure representations
# ---------------------------------------------------------------------------


@dataclass
class SpectralMeasureRep:
    """Absolutely continuous density on the two intervals plus point masses."""

    density: object                    # callable x -> float (guarded)
    raw_density: object                # same, without endpoint guard (for integration)
    point_masses: list
    provenance: str
    intervals: tuple

    def __call__(self, x: float) -> float:
        for a, b in self.intervals:
            if a <= x <= b:
                if min(x - a, b - x) < _ENDPOINT_EXCLUSION:
                    raise EndpointError("x too close to an interval endpoint")
                return float(self.density(x))
        raise DomainError("density evaluation off the intervals")

    def total_mass(self) -> float:
        total = sum(m for _, m in self.point_masses)
        for a, b in self.intervals:
            val, _ = scipy.integrate.quad(self.raw_density, a, b, limit=400, epsabs=1e-12)
            total += val
        return float(total)

    def first_moment(self) -> float:
        total = sum(E * m for E, m in self.point_masses)
        for a, b in self.intervals:
            val, _ = scipy.integrate.quad(
                lambda x: x * self.raw_density(x), a, b, limit=400, epsabs=1e-12
            )
            total += val
        return float(total)

    def profile(self, n_points: int) -> list:
        pts = []
        for a, b in self.intervals:
            pad = max(_ENDPOINT_EXCLUSION * 2, (b - a) * 1e-5)
            for x in np.linspace(a + pad, b - pad, n_points // 2):
                pts.append((float(x), self(float(x))))
        return pts


def s_o_value(asys: AngelescoSystem, x: float) -> float:
    """The positive weight (markov1 on the right interval, -markov2 on the left)
    divided by (Xi * |mu1| * |mu2|)."""
    m1, m2 = asys.masses
    k = asys.side_of(x)
    scale = 1.0 / (asys.xi_mass * m1 * m2)
    if k == 1:
        return scale * (-asys.sys.mu2.markov(x).real)
    return scale * asys.sys.mu1.markov(x).real


def rho_o(asys: AngelescoSystem, kappa) -> SpectralMeasureRep:
    """Spectral measure of the root vector for the kappa operator."""
    kappa = (float(kappa[0]), float(kappa[1]))

    def raw(x: float) -> float:
        x = float(x)
        k = asys.side_of(x)
        mu = asys.sys.mu1 if k == 1 else asys.sys.mu2
        dens = mu.density_at(x)
        if dens == 0.0:
            return 0.0
        lk = l_kappa_boundary(asys, kappa, x, "+")
        return s_o_value(asys, x) * dens / abs(lk) ** 2

    masses = []
    E = find_e_kappa(asys, kappa)
    if E is not None:
        masses.append((E, point_mass_at(asys, kappa, E)))
    return SpectralMeasureRep(raw, raw, masses, "root-kappa-form", (asys.delta1, asys.delta2))


def point_mass_at(asys, kappa, E: float) -> float:
    """Mass (L_1 / L_kappa')(E) at the off-interval zero E of the kappa-form.

    The derivative is a central difference with h = 1e-6 evaluated in
    extended precision.
    """
    prec = asys.sys.precision_bits
    with workprec(prec):
        h = mpf(10) ** -6
        Em = mpf(E)
        lp = l_kappa_mp(asys, kappa, Em + h, prec)
        lm = l_kappa_mp(asys, kappa, Em - h, prec)
        dL = (lp - lm) / (2 * h)
        L1 = second_kind(asys.sys, (1, 1), Em)[0]
        return float((L1 / dL).real)


def psi_o(asys: AngelescoSystem, kappa, x: float, depth: int) -> np.ndarray:
    """Generalized eigenfunction of the root cyclic subspace at energy x.

    For x inside an interval this is the type I combination normalized by the
    root weight; at the point mass E it is the second-kind family normalized
    by L at (1,1).  Extended precision throughout (the type I values carry
    large cancellations).
    """
    tree = cayley_truncation(depth)
    op = assemble_truncated(asys.sys, kappa, depth)
    m = op.m_weights()
    prec = asys.sys.precision_bits
    sysm = asys.sys

    E = find_e_kappa(asys, kappa)
    if E is not None and abs(x - E) < 1e-12:
        with workprec(prec):
            L1 = second_kind(sysm, (1, 1), mpf(x))[0]
            vals = [
                float((second_kind(sysm, tree.proj[v], mpf(x))[0] / L1).real) / m[v]
                for v in range(len(tree))
            ]
        return np.array(vals)

    k = asys.side_of(x)
    with workprec(prec):
        xm = mpf(x)
        m1 = sysm.mu1.moments_mp(0, prec)[0]
        m2 = sysm.mu2.moments_mp(0, prec)[0]
        vk1, vk2 = mpf(kappa[1]) / m1, mpf(kappa[0]) / m2  # swapped components
        mu_other = sysm.mu2 if k == 1 else sysm.mu1
        hat_other = mu_other.markov_mp(xm, prec)
        xi = mpf(asys.sys.mu2.moments_mp(1, prec)[1]) / m2 - mpf(
            asys.sys.mu1.moments_mp(1, prec)[1]
        ) / m1
        if k == 1:
            s_o = -hat_other / (xi * m1 * m2)
            w_k = vk1
        else:
            s_o = hat_other / (xi * m1 * m2)
            w_k = vk2
        sgn = mpf(-1) ** k
        vals = np.empty(len(tree))
        for v in range(len(tree)):
            rec = sysm.type1_record(tree.proj[v])
            l0 = P.pval(rec.A0, xm) if rec.A0 else mpf(0)
            l1 = P.pval(rec.A1, xm) if rec.A1 else mpf(0)
            l2 = P.pval(rec.A2, xm) if rec.A2 else mpf(0)
            val = (l0 * w_k - sgn * hat_other * (l2 * vk1 - l1 * vk2)) / s_o
            vals[v] = float(val) / m[v]
    return vals


# ---------------------------------------------------------------------------
# Green's functions
# ---------------------------------------------------------------------------


def _path_data(asys, word):
    """(m_X, proj, parent_proj, iota) for the vertex addressed by a child-label word."""
    proj = (1, 1)
    mX = 1.0
    iota = 0
    parent_proj = None
    for step in word:
        parent_proj = proj
        proj = add(proj, E1 if step == 1 else E2)
        a = float(asys.sys.recurrence(parent_proj)[step - 1])
        mX *= abs(a) ** -0.5
        iota = step
    return mX, proj, parent_proj, iota


def green(asys: AngelescoSystem, kappa, Y, X, z, depth: int = 12) -> tuple:
    """(closed-form value, truncated-resolvent value) of G(Y, X; z).

    X and Y are child-label words from the root; Y must extend X.  The
    closed form is ``-(m_X/m_Y) L_{proj(Y)}(z) / L_{proj(parent X)}(z)``; the
    oracle solves the Dirichlet truncation of the subtree operator at the
    given depth with a sparse LU.
    """
    X, Y = tuple(X), tuple(Y)
    if Y[: len(X)] != X:
        raise DomainError("Y must lie in the subtree below X")
    zc = complex(z)
    if zc.imag == 0 and _real_z_forbidden(asys, kappa, zc.real, X):
        raise DomainError("real z too close to the intervals or the kappa-form zero")

    prec = asys.sys.precision_bits
    mX, projX, parentX, iotaX = _path_data(asys, X)
    mY, projY, _, _ = _path_data(asys, Y)
    with workprec(prec):
        zm = mpc(z)
        LY = second_kind(asys.sys, projY, zm)[0]
        if X == ():
            Lden = l_kappa_mp(asys, kappa, zm, prec)
        else:
            Lden = second_kind(asys.sys, parentX, zm)[0]
        formula = complex(-(mpf(mX) / mpf(mY)) * LY / Lden)

    if X == ():
        op = assemble_truncated(asys.sys, kappa, depth)
    else:
        op = assemble_subtree(asys.sys, projX, iotaX, depth)
    tree = op.tree
    y_id = tree.vertex_by_path(Y[len(X):])
    n = op.n_vertices
    A = op.sparse().astype(complex) - zc * scipy.sparse.identity(n, format="csr")
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0
    sol = scipy.sparse.linalg.spsolve(A.tocsc(), rhs)
    return formula, complex(sol[y_id])


def _real_z_forbidden(asys, kappa, x, X):
    if any(a <= x <= b for a, b in (asys.delta1, asys.delta2)):
        return True
    dist = min(min(abs(x - a), abs(x - b)) for a, b in (asys.delta1, asys.delta2))
    if X == ():
        E = find_e_kappa(asys, kappa)
        if E is not None:
            dist = min(dist, abs(x - E))
    return dist < 0.1


# ---------------------------------------------------------------------------
# subtree spectral data
# ---------------------------------------------------------------------------


def _t_polynomials(asys, n, l):
    """The degree-(|n|-1) bridge polynomial of consecutive type I pairs and its
    monic factors split by interval; cached on the system record."""
    key = ("tpoly", n, l)
    cache = asys.sys.mu1._cache  # piggyback: system-lifetime cache
    if key in cache:
        return cache[key]
    e = E1 if l == 1 else E2
    rn = asys.sys.type1_record(n)
    ru = asys.sys.type1_record(add(n, e))
    with workprec(asys.sys.precision_bits):
        t = P.padd(
            P.pmul(ru.A2 or (mpf(0),), rn.A1 or (mpf(0),)),
            P.pscale(P.pmul(ru.A1 or (mpf(0),), rn.A2 or (mpf(0),)), -1),
        )
        while len(t) > 1 and t[-1] == 0:
            t = t[:-1]
        lead = t[-1]
        zs = real_zeros(t, asys.sys.precision_bits) if len(t) > 1 else []
        z1 = [float(z) for z in zs if float(z) <= asys.delta1[1] + 1e-9]
        z2 = [float(z) for z in zs if float(z) >= asys.delta2[0] - 1e-9]
        if len(z1) + len(z2) != len(t) - 1:
            raise DomainError("bridge polynomial zeros escape the two intervals")
    out = (t, float(lead), z1, z2)
    cache[key] = out
    return out


def s_x(asys: AngelescoSystem, X, x: float) -> float:
    """The positive connection factor between the subtree spectral measure at X
    and the reference density at its parent.

    Evaluated through the sign-definite quadrature representation: with the
    bridge polynomial T split into monic interval factors T1 T2, for x in
    interval k the value is ``(-1)^k / T_{3-k}(x) * int T_{3-k} T dmu_{3-k} / (x - s)``.
    """
    X = tuple(X)
    if not X:
        raise DomainError("the root has no parent subtree factor")
    _, projX, n, l = _path_data(asys, X)
    return _s_x_by_quadrature(asys, n, l, x)


def _s_x_by_quadrature(asys, n, l, x):
    t, lead, z1, z2 = _t_polynomials(asys, n, l)
    k = asys.side_of(x)
    mu_other = asys.sys.mu2 if k == 1 else asys.sys.mu1
    zs_other = z2 if k == 1 else z1
    key = ("tpoly_nodes", n, l, k)
    cache = asys.sys.mu1._cache
    if key not in cache:
        # node table of T_{3-k}(s) T(s) w(s) over the opposite interval
        tf = np.asarray(P.pfloat(t))
        xs_all, vals_all = [], []
        from .quadrature import map_rule

        for p in mu_other.pieces:
            xs, ws = map_rule(p.a, p.b, mu_other.quad_order)
            tmonic = np.ones_like(xs)
            for r in zs_other:
                tmonic *= xs - r
            tv = np.polynomial.polynomial.polyval(xs, tf)
            vals_all.append(ws * p.density(xs, p.a, p.b) * tmonic * tv)
            xs_all.append(xs)
        cache[key] = (np.concatenate(xs_all), np.concatenate(vals_all))
    xs, vals = cache[key]
    integral = float(np.sum(vals / (x - xs)))
    tmx = np.prod([x - r for r in zs_other]) if zs_other else 1.0
    return float((-1.0) ** k * integral / tmx)


def psi_tilde(asys: AngelescoSystem, X, x: float, depth: int):
    """Unnormalized generalized eigenfunction of the subtree operator at X.

    Values are vertex-commutators of type I families against the parent
    vertex; extended precision (the type I coefficients cancel massively).
    Returns (vector on the depth-truncated subtree, operator, value at X).
    """
    X = tuple(X)
    if not X:
        raise DomainError("psi_tilde requires X != root")
    mX, projX, n, l = _path_data(asys, X)
    k = asys.side_of(x)
    op = assemble_subtree(asys.sys, projX, l, depth)
    tree = op.tree
    m_rel = op.m_weights()  # equals m_Y / m_X for Y in the subtree
    prec = asys.sys.precision_bits
    sysm = asys.sys
    with workprec(prec):
        xm = mpf(x)
        mu_other = sysm.mu2 if k == 1 else sysm.mu1
        hat_other = mu_other.markov_mp(xm, prec)
        rp = sysm.type1_record(n)

        def a_val(rec, j):
            src = {0: rec.A0, 1: rec.A1, 2: rec.A2}[j]
            return P.pval(src, xm) if src else mpf(0)

        ap = {j: a_val(rp, j) for j in (0, 1, 2)}
        vals = np.empty(len(tree))
        for v in range(len(tree)):
            rv = sysm.type1_record(tree.proj[v])
            av = {j: a_val(rv, j) for j in (0, 1, 2)}
            core = (ap[k] * av[0] - av[k] * ap[0]) + (
                ap[3 - k] * av[k] - av[3 - k] * ap[k]
            ) * hat_other
            vals[v] = float(core) / m_rel[v]
    return vals, op, float(vals[0])


def psi_x(asys: AngelescoSystem, X, x: float, depth: int) -> np.ndarray:
    """Generalized eigenfunction at X normalized to 1 at X itself."""
    vals, _, sx = psi_tilde(asys, X, x, depth)
    return vals / sx


def rho_sub(asys: AngelescoSystem, X) -> SpectralMeasureRep:
    """Spectral measure of the subtree root vector at X (unit mass)."""
    X = tuple(X)
    _, projX, n, l = _path_data(asys, X)

    def raw(x: float) -> float:
        x = float(x)
        k = asys.side_of(x)
        mu = asys.sys.mu1 if k == 1 else asys.sys.mu2
        dens = mu.density_at(x)
        if dens == 0.0:
            return 0.0
        L = second_kind_boundary(asys.sys, n, x, "+")
        return _s_x_by_quadrature(asys, n, l, x) * dens / abs(L) ** 2

    return SpectralMeasureRep(raw, raw, [], f"subtree-{X}", (asys.delta1, asys.delta2))


# ---------------------------------------------------------------------------
# reference measures
# ---------------------------------------------------------------------------


def d_n_xi(asys, n, xi: float, x):
    """(-1)^{n2} (x - xi) A_n^{(1)}(x) A_n^{(2)}(x), the positive multiplier of the
    linear form for gap values xi."""
    rec = asys.sys.type1_record(n)
    a1 = float(P.pval(rec.A1, x)) if rec.A1 else 0.0
    a2 = float(P.pval(rec.A2, x)) if rec.A2 else 0.0
    return (-1.0) ** n[1] * (x - xi) * a1 * a2


def _s_n_xi(asys, n, xi, x):
    rec = asys.sys.type1_record(n)
    k = asys.side_of(x)
    other = rec.A2 if k == 1 else rec.A1
    return abs(float(P.pval(other, x))) ** -1 / abs(x - xi)


def reference_measure(asys: AngelescoSystem, n, x: float) -> float:
    """Reference density |L_n(x)|^{-2} mustar'(x) (direct route)."""
    k = asys.side_of(x)
    mu = asys.sys.mu1 if k == 1 else asys.sys.mu2
    dens = mu.density_at(x)
    L = second_kind_boundary(asys.sys, n, x, "+")
    return dens / abs(L) ** 2


def reference_measure_via_dual(asys: AngelescoSystem, n, x: float, xi: float) -> float:
    """Reference density recovered from the reciprocal route.

    The reciprocal of ``D_{n,xi} L_n`` is a Markov-type function whose
    boundary density, divided by pi S_{n,xi}, reproduces the reference
    density for any gap value xi; comparing two xi's is a nontrivial
    consistency check.
    """
    if not (asys.delta1[1] < xi < asys.delta2[0]):
        raise DomainError("xi must lie in the gap between the intervals")
    L = second_kind_boundary(asys.sys, n, x, "+")
    D = d_n_xi(asys, n, xi, x)
    val = (1.0 / (D * L)).imag
    return val / (math.pi * _s_n_xi(asys, n, xi, x))


def nu_ne_mass(asys: AngelescoSystem, n, E: float, xi: float) -> float:
    """Total mass of the auxiliary measure attached to a type I zero E.

    The measure has density ``D_{n,xi}(x) A_n^{(k)}(x) / (x - E)^2`` against
    mu_k on each interval; at the zero's own interval the double pole cancels
    against the squared type I factor.
    """
    rec = asys.sys.type1_record(n)
    kE = asys.side_of(E)
    total = 0.0
    for k in (1, 2):
        mu = asys.sys.mu1 if k == 1 else asys.sys.mu2
        coeffs = rec.A1 if k == 1 else rec.A2
        if not coeffs:
            continue
        cf = np.asarray(P.pfloat(coeffs))
        from .quadrature import map_rule as _mr

        for p in mu.pieces:
            xs, ws = _mr(p.a, p.b, mu.quad_order)
            dens = p.density(xs, p.a, p.b)
            dvals = np.array([d_n_xi(asys, n, xi, x) for x in xs])
            avals = np.polynomial.polynomial.polyval(xs, cf)
            if k == kE:
                # squared zero cancels the double pole: deflate analytically
                rE = _deflate_twice(asys, n, xi, k, xs, E)
                total += float(np.sum(ws * dens * rE))
            else:
                total += float(np.sum(ws * dens * dvals * avals / (xs - E) ** 2))
    return total


def _deflate_twice(asys, n, xi, k, xs, E):
    """Values of D_{n,xi} A^{(k)} / (x-E)^2 with the singularity removed exactly."""
    rec = asys.sys.type1_record(n)
    with workprec(asys.sys.precision_bits):
        num = P.pmul(rec.A1, rec.A2)
        num = P.pmul(num, (-mpf(xi), mpf(1)))
        num = P.pscale(num, mpf(-1) ** n[1])
        ak = rec.A1 if k == 1 else rec.A2
        num = P.pmul(num, ak)  # = D * A^{(k)}, double zero at E
        q = _synthetic_division(num, mpf(E))
        q = _synthetic_division(q, mpf(E))
        qf = np.asarray(P.pfloat(q))
    return np.polynomial.polynomial.polyval(xs, qf)


def _synthetic_division(coeffs, r):
    """coeffs / (x - r), discarding the (tiny) remainder."""
    out = [mpf(0)] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * r
    return tuple(out)


def dual_pole_weight_residual(asys: AngelescoSystem, n, E: float, xi: float) -> float:
    """Residual of ``-D'_{n,xi}(E) L_{n,+}(E) = total nu-mass`` at a type I zero E.

    Both sides are computed by quadrature (the boundary value of L through
    the Plemelj split, the mass through the deflated integrand); the measures
    here are atomless, so no point-mass correction enters.
    """
    rec = asys.sys.type1_record(n)
    with workprec(asys.sys.precision_bits):
        dpoly = P.pmul(rec.A1, rec.A2)
        dpoly = P.pmul(dpoly, (-mpf(xi), mpf(1)))
        dpoly = P.pscale(dpoly, mpf(-1) ** n[1])
        dprime = float(P.pval(P.pder(dpoly), mpf(E)))
    Lp = second_kind_boundary_mp(asys.sys, n, E, "+")
    lhs = float(-dprime * complex(Lp).real)  # L_+ is real at a type I zero
    rhs = nu_ne_mass(asys, n, E, xi)
    return abs(lhs - rhs)


def type1_zero_set(asys, n) -> list:
    """Zeros of A_n^{(1)} A_n^{(2)} (each localized in its own interval)."""
    rec = asys.sys.type1_record(n)
    out = []
    for coeffs in (rec.A1, rec.A2):
        if coeffs and len(coeffs) > 1:
            out.extend(float(z) for z in real_zeros(coeffs, asys.sys.precision_bits))
    return sorted(out)


# ---------------------------------------------------------------------------
# spectrum envelope
# ---------------------------------------------------------------------------


def spectrum_envelope_check(asys: AngelescoSystem, kappa, depth_list) -> dict:
    """Eigenvalues of increasing truncations against the limiting spectrum.

    Reports, per depth, the maximal distance from any truncation eigenvalue
    to the union of the two intervals and the kappa-form zero, plus the
    fill distance of the truncation spectrum inside the intervals.
    """
    E = find_e_kappa(asys, kappa)
    targets = [asys.delta1, asys.delta2]

    def dist_to_limit(x):
        d = min(
            0.0 if a <= x <= b else min(abs(x - a), abs(x - b)) for a, b in targets
        )
        if E is not None:
            d = min(d, abs(x - E))
        return d

    report = {"kappa_zero": E, "depths": []}
    for depth in depth_list:
        op = assemble_truncated(asys.sys, kappa, depth)
        w = np.sort(scipy.linalg.eigvalsh(op.dense()))
        out_dist = float(max(dist_to_limit(x) for x in w))
        fill = 0.0
        for a, b in targets:
            grid = np.linspace(a, b, 200)
            fill = max(fill, float(np.max(np.min(np.abs(grid[:, None] - w[None, :]), axis=1))))
        report["depths"].append(
            {"depth": depth, "n": op.n_vertices, "max_outside": out_dist, "fill_distance": fill}
        )
    return report
