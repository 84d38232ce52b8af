"""Compactly supported real measures: moments, Markov functions, boundary values.

A :class:`Measure` is a finite list of point masses plus absolutely continuous
pieces carried by disjoint intervals.  Everything downstream consumes measures
through three primitives:

* ``moment(k)``      -- monomial moments (double or extended precision),
* ``markov(z)``      -- the Cauchy transform ``int (z - x)^{-1} dm(x)``,
* ``markov_boundary``-- its boundary values from above/below via the
  Plemelj split (principal value -/+ i*pi*density).

All operations are pure; instances are immutable and safe to share.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp, mpc, mpf, workprec

from .errors import DomainError, OverlapError
from .quadrature import graded_panels, map_rule, map_rule_mp

_SUPPORT_TOL = 1e-12
_NEAR_FACTOR = 0.1  # switch to graded panels when the pole is this close (relative)
_PANEL_ORDER = 32


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensitySpec:
    """Density of one absolutely continuous piece, evaluated relative to its host interval.

    kind:
      * ``uniform``          -- constant 1,
      * ``jacobi_weight``    -- ``(x-a)^p * (b-x)^q * poly(x)`` with p, q > -1,
      * ``markov_weighted``  -- ``base(x) * weight_measure.markov(x)``; the weight
        measure's support must be disjoint from the host interval (the Markov
        function is then real and smooth on it).
    """

    kind: str
    p: float = 0.0
    q: float = 0.0
    poly: tuple = (1.0,)
    base: "DensitySpec | None" = None
    weight_measure: "Measure | None" = None

    def __post_init__(self):
        if self.kind not in ("uniform", "jacobi_weight", "markov_weighted"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "jacobi_weight" and (self.p <= -1 or self.q <= -1):
            raise ValueError("jacobi_weight requires p, q > -1")
        if self.kind == "markov_weighted" and (self.base is None or self.weight_measure is None):
            raise ValueError("markov_weighted requires base and weight_measure")

    def __call__(self, x, a: float, b: float):
        """Vectorized double-precision evaluation on the host interval [a, b]."""
        x = np.asarray(x, dtype=float)
        if self.kind == "uniform":
            return np.ones_like(x)
        if self.kind == "jacobi_weight":
            val = np.polynomial.polynomial.polyval(x, np.asarray(self.poly, float))
            if self.p != 0:
                val = val * (x - a) ** self.p
            if self.q != 0:
                val = val * (b - x) ** self.q
            return val
        base = self.base(x, a, b)
        tau = self.weight_measure
        w = np.array([tau.markov(float(t)).real for t in np.atleast_1d(x)])
        return base * w.reshape(np.shape(x))

    def mp_value(self, x, a, b, prec: int):
        """Single-point evaluation in ``prec``-bit arithmetic."""
        with workprec(prec):
            if self.kind == "uniform":
                return mpf(1)
            if self.kind == "jacobi_weight":
                val = mpf(0)
                for c in reversed(self.poly):
                    val = val * x + mpf(c)
                if self.p != 0:
                    val *= (x - mpf(a)) ** mpf(self.p)
                if self.q != 0:
                    val *= (mpf(b) - x) ** mpf(self.q)
                return val
            base = self.base.mp_value(x, a, b, prec)
            return base * self.weight_measure.markov_mp(x, prec).real

    def to_json(self) -> dict:
        if self.kind == "uniform":
            return {"kind": "uniform"}
        if self.kind == "jacobi_weight":
            return {"kind": "jacobi_weight", "p": self.p, "q": self.q, "poly": list(self.poly)}
        return {
            "kind": "markov_weighted",
            "base": self.base.to_json(),
            "weight_measure": self.weight_measure.to_json(),
        }


def density_from_json(doc: dict) -> DensitySpec:
    kind = doc["kind"]
    if kind == "uniform":
        return DensitySpec("uniform")
    if kind == "jacobi_weight":
        return DensitySpec("jacobi_weight", p=doc["p"], q=doc["q"], poly=tuple(doc.get("poly", [1.0])))
    if kind == "markov_weighted":
        return DensitySpec(
            "markov_weighted",
            base=density_from_json(doc["base"]),
            weight_measure=measure_from_json(doc["weight_measure"]),
        )
    raise ValueError(f"unknown density kind {kind!r}")


UNIFORM = DensitySpec("uniform")


@dataclass(frozen=True)
class Piece:
    a: float
    b: float
    density: DensitySpec = UNIFORM

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("piece requires a < b")


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Measure:
    """Atoms plus absolutely continuous pieces on pairwise disjoint intervals.

    ``quad_order`` is the Gauss-Legendre order used per piece; it integrates
    polynomial integrands of degree < 2*quad_order exactly and smooth ones to
    spectral accuracy.  Purely singular-continuous parts are not supported.
    """

    atoms: tuple = ()
    pieces: tuple = ()
    quad_order: int = 200
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple((float(x), float(m)) for x, m in self.atoms)
        pieces = tuple(p if isinstance(p, Piece) else Piece(*p) for p in self.pieces)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "pieces", pieces)
        if not atoms and not pieces:
            raise ValueError("measure must have at least one atom or piece")
        if any(m <= 0 for _, m in atoms):
            raise ValueError("atom masses must be positive")
        ivs = sorted((p.a, p.b) for p in pieces)
        for (a1, b1), (a2, b2) in zip(ivs[:-1], ivs[1:]):
            if b1 > a2:
                raise ValueError("ac pieces must be pairwise disjoint")
        for p in pieces:
            if self.markov_weighted_overlaps(p):
                raise OverlapError("markov_weighted weight measure overlaps host interval")

    @staticmethod
    def markov_weighted_overlaps(piece: Piece) -> bool:
        d = piece.density
        if d.kind != "markov_weighted":
            return False
        lo, hi = d.weight_measure.hull()
        return not (hi < piece.a or lo > piece.b)

    # -- geometry ----------------------------------------------------------

    def hull(self) -> tuple[float, float]:
        pts = [x for x, _ in self.atoms]
        pts += [p.a for p in self.pieces] + [p.b for p in self.pieces]
        return min(pts), max(pts)

    def support_distance(self, z) -> float:
        """Distance from z to the support (intervals and atoms)."""
        zr, zi = float(np.real(z)), float(np.imag(z))
        d = math.inf
        for p in self.pieces:
            dx = 0.0 if p.a <= zr <= p.b else min(abs(zr - p.a), abs(zr - p.b))
            d = min(d, math.hypot(dx, zi))
        for x, _ in self.atoms:
            d = min(d, math.hypot(zr - x, zi))
        return d

    # -- moments -----------------------------------------------------------

    def mass(self) -> float:
        return self.moment(0)

    def moment(self, k: int) -> float:
        """k-th monomial moment, double precision."""
        if k < 0:
            raise ValueError("moment order must be nonnegative")
        key = ("mom", k)
        if key not in self._cache:
            total = sum(m * x**k for x, m in self.atoms)
            for p in self.pieces:
                xs, ws = map_rule(p.a, p.b, self.quad_order)
                total += float(np.sum(ws * p.density(xs, p.a, p.b) * xs**k))
            self._cache[key] = total
        return self._cache[key]

    def moments_mp(self, upto: int, prec: int) -> list:
        """Moments 0..upto at ``prec`` bits (cached, extended incrementally)."""
        key = ("mom_mp", prec)
        table = self._cache.get(key, [])
        if len(table) <= upto:
            with workprec(prec):
                node_tables = []
                for p in self.pieces:
                    xs, ws = map_rule_mp(p.a, p.b, self.quad_order, prec)
                    dens = [p.density.mp_value(x, p.a, p.b, prec) for x in xs]
                    node_tables.append((xs, [w * d for w, d in zip(ws, dens)]))
                start = len(table)
                # incremental powers: x^k tables carried across k
                pow_tables = [[x**start for x in xs] for xs, _ in node_tables]
                atom_pows = [mpf(x) ** start for x, _ in self.atoms]
                for k in range(start, upto + 1):
                    total = mpf(0)
                    for (x, m), xp in zip(self.atoms, atom_pows):
                        total += mpf(m) * xp
                    for (xs, wd), xp in zip(node_tables, pow_tables):
                        total += mp.fsum(w * t for w, t in zip(wd, xp))
                    table.append(total)
                    atom_pows = [xp * mpf(x) for (x, _), xp in zip(self.atoms, atom_pows)]
                    pow_tables = [
                        [t * x for t, x in zip(xp, xs)]
                        for (xs, _), xp in zip(node_tables, pow_tables)
                    ]
            self._cache[key] = table
        return table[: upto + 1]

    # -- Markov function ---------------------------------------------------

    def markov(self, z) -> complex:
        """Cauchy transform ``int (z - x)^{-1} dm(x)`` off the support."""
        if self.support_distance(z) < _SUPPORT_TOL:
            raise DomainError("markov evaluation on the support")
        z = complex(z)
        total = sum(m / (z - x) for x, m in self.atoms)
        for p in self.pieces:
            total += self._piece_cauchy(p, z)
        if abs(z.imag) == 0:
            return complex(total.real, 0.0)
        return total

    def _piece_cauchy(self, p: Piece, z: complex) -> complex:
        dist = self.support_distance(z)
        length = p.b - p.a
        if dist >= _NEAR_FACTOR * length:
            xs, ws = map_rule(p.a, p.b, self.quad_order)
            return complex(np.sum(ws * p.density(xs, p.a, p.b) / (z - xs)))
        total = 0j
        for a, b in graded_panels(p.a, p.b, z.real, max(dist, 1e-14)):
            xs, ws = map_rule(a, b, _PANEL_ORDER)
            total += complex(np.sum(ws * p.density(xs, p.a, p.b) / (z - xs)))
        return total

    def markov_mp(self, z, prec: int):
        """Markov function at ``prec`` bits (single point)."""
        if self.support_distance(complex(z)) < _SUPPORT_TOL:
            raise DomainError("markov evaluation on the support")
        with workprec(prec):
            zm = mpc(z) if (np.iscomplexobj(z) or isinstance(z, (complex, mpc))) else mpf(z)
            total = mp.fsum(mpf(m) / (zm - mpf(x)) for x, m in self.atoms)
            dist = self.support_distance(complex(z))
            for p in self.pieces:
                if dist >= _NEAR_FACTOR * (p.b - p.a):
                    panels = [(p.a, p.b)]
                    order = self.quad_order
                else:
                    panels = graded_panels(p.a, p.b, float(np.real(complex(z))), max(dist, 1e-14))
                    order = _PANEL_ORDER
                for a, b in panels:
                    xs, ws = map_rule_mp(a, b, order, prec)
                    total += mp.fsum(
                        w * p.density.mp_value(x, p.a, p.b, prec) / (zm - x)
                        for x, w in zip(xs, ws)
                    )
            return total

    def density_at(self, x: float) -> float:
        """Density of the absolutely continuous part at x (0 off the pieces)."""
        for p in self.pieces:
            if p.a <= x <= p.b:
                return float(p.density(x, p.a, p.b))
        return 0.0

    def markov_boundary(self, x: float, side: str = "+") -> complex:
        """Boundary value of the Markov function on an ac piece.

        Plemelj split: principal value minus (side ``+``) or plus (side ``-``)
        i*pi*density(x).  The principal value over the host piece uses the
        singularity subtraction
        ``pv int f(t)/(x-t) dt = int (f(t)-f(x))/(x-t) dt + f(x) log((x-a)/(b-x))``,
        which is exact for constant densities.
        """
        if side not in ("+", "-"):
            raise ValueError("side must be '+' or '-'")
        host = None
        for p in self.pieces:
            if p.a < x < p.b:
                host = p
                break
        if host is None:
            raise DomainError("boundary value requires x strictly inside an ac piece")
        if any(abs(x - xa) < _SUPPORT_TOL for xa, _ in self.atoms):
            raise DomainError("boundary value at an atom")

        fx = float(host.density(x, host.a, host.b))
        xs, ws = map_rule(host.a, host.b, self.quad_order)
        fvals = host.density(xs, host.a, host.b)
        pv = float(np.sum(ws * (fvals - fx) / (x - xs)))
        pv += fx * math.log((x - host.a) / (host.b - x))
        total = complex(pv, 0.0)
        for p in self.pieces:
            if p is not host:
                total += self._piece_cauchy(p, complex(x))
        total += sum(m / (x - xa) for xa, m in self.atoms)
        im = -math.pi * fx if side == "+" else math.pi * fx
        return complex(total.real, im)

    def markov_boundary_mp(self, x, side: str, prec: int):
        """Boundary value at ``prec`` bits (single point)."""
        host = None
        for p in self.pieces:
            if p.a < x < p.b:
                host = p
                break
        if host is None:
            raise DomainError("boundary value requires x strictly inside an ac piece")
        with workprec(prec):
            xm = mpf(x)
            fx = host.density.mp_value(xm, host.a, host.b, prec)
            xs, ws = map_rule_mp(host.a, host.b, self.quad_order, prec)
            pv = mp.fsum(
                w * (host.density.mp_value(t, host.a, host.b, prec) - fx) / (xm - t)
                for t, w in zip(xs, ws)
            )
            pv += fx * mp.log((xm - host.a) / (host.b - xm))
            for p in self.pieces:
                if p is not host:
                    xs, ws = map_rule_mp(p.a, p.b, self.quad_order, prec)
                    pv += mp.fsum(
                        w * p.density.mp_value(t, p.a, p.b, prec) / (xm - t)
                        for t, w in zip(xs, ws)
                    )
            pv += mp.fsum(mpf(m) / (xm - mpf(xa)) for xa, m in self.atoms)
            im = -mp.pi * fx if side == "+" else mp.pi * fx
            return mpc(pv, im)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "atoms": [[x, m] for x, m in self.atoms],
            "pieces": [
                {"a": p.a, "b": p.b, "density": p.density.to_json()} for p in self.pieces
            ],
            "quad_order": self.quad_order,
        }


def measure_from_json(doc) -> Measure:
    """Parse a measure literal: {"atoms":[[x,m],..],"pieces":[{"a","b","density"}],"quad_order"}."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    pieces = tuple(
        Piece(p["a"], p["b"], density_from_json(p.get("density", {"kind": "uniform"})))
        for p in doc.get("pieces", [])
    )
    return Measure(
        atoms=tuple((x, m) for x, m in doc.get("atoms", [])),
        pieces=pieces,
        quad_order=int(doc.get("quad_order", 200)),
    )


def uniform(a: float, b: float, quad_order: int = 200) -> Measure:
    """Lebesgue measure (density 1) on [a, b]."""
    return Measure(pieces=(Piece(a, b, UNIFORM),), quad_order=quad_order)


def concat(m1: Measure, m2: Measure) -> Measure:
    """Concatenation of two measures with disjoint convex hulls."""
    lo1, hi1 = m1.hull()
    lo2, hi2 = m2.hull()
    if not (hi1 < lo2 or hi2 < lo1):
        raise OverlapError("convex hulls of the measures intersect")
    return Measure(
        atoms=m1.atoms + m2.atoms,
        pieces=m1.pieces + m2.pieces,
        quad_order=max(m1.quad_order, m2.quad_order),
    )
