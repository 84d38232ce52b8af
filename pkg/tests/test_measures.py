import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mop_trees.errors import DomainError, OverlapError
from mop_trees.measures import (
    DensitySpec,
    Measure,
    Piece,
    concat,
    measure_from_json,
    uniform,
)

from oracles import refine_cauchy, refine_markov_log


class TestMoments:
    def test_uniform_cube(self):
        assert uniform(0, 1).moment(3) == pytest.approx(0.25, abs=1e-13)

    def test_atom_square(self):
        m = Measure(atoms=((2.0, 1.0),))
        assert m.moment(2) == pytest.approx(4.0, abs=1e-14)

    def test_center_of_mass(self):
        assert uniform(-2, -1).moment(1) == pytest.approx(-1.5, abs=1e-13)

    def test_moment_deterministic(self):
        m = uniform(0, 1)
        assert m.moment(7) == m.moment(7)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            uniform(0, 1).moment(-1)

    def test_mp_moments_match_double(self):
        m = uniform(-2, -1)
        table = m.moments_mp(6, 256)
        for k in range(7):
            assert float(table[k]) == pytest.approx(m.moment(k), rel=1e-12)


class TestMarkov:
    def test_atom_pole(self):
        m = Measure(atoms=((0.0, 1.0),))
        assert m.markov(2.0) == pytest.approx(0.5)

    def test_uniform_log(self):
        assert uniform(0, 1).markov(2.0).real == pytest.approx(math.log(2), abs=1e-13)

    def test_complex_point_vs_refined_quadrature(self):
        # frozen from refine_cauchy(0, 1, 1+1j) on 2e6 nodes: 0.5*ln2 - i*pi/4
        val = uniform(0, 1).markov(1 + 1j)
        frozen = 0.34657359027995155 - 0.7853981633974377j
        assert val == pytest.approx(frozen, abs=5e-12)
        assert refine_cauchy(0, 1, 1 + 1j) == pytest.approx(frozen, abs=1e-12)

    def test_conjugate_symmetry(self):
        m = uniform(0, 1)
        z = 0.3 + 0.7j
        assert m.markov(np.conj(z)) == pytest.approx(np.conj(m.markov(z)))

    def test_on_support_rejected(self):
        with pytest.raises(DomainError):
            uniform(0, 1).markov(0.5)

    def test_near_support_graded_panels(self):
        z = 0.5 + 1e-4j
        assert uniform(0, 1).markov(z) == pytest.approx(refine_cauchy(0, 1, z), abs=1e-11)

    def test_far_asymptote(self):
        m = Measure(
            atoms=((0.25, 0.5),),
            pieces=(Piece(1.0, 2.0, DensitySpec("uniform")),),
        )
        z = 1e6
        lead = m.mass() / z + m.moment(1) / z**2
        assert abs(m.markov(z) - lead) < 1e-9 * abs(lead)


class TestBoundary:
    def test_symmetric_point(self):
        v = uniform(0, 1).markov_boundary(0.5, "+")
        assert v == pytest.approx(-1j * math.pi, abs=1e-13)

    def test_quarter_point_closed_form(self):
        # pv of the unit density is log((x-a)/(b-x)): log(1/3) at x = 1/4
        v = uniform(0, 1).markov_boundary(0.25, "+")
        assert v.real == pytest.approx(refine_markov_log(0, 1, 0.25), abs=1e-12)
        assert v.imag == pytest.approx(-math.pi, abs=1e-13)

    def test_sides_conjugate(self):
        m = uniform(0, 1)
        assert m.markov_boundary(0.25, "-") == pytest.approx(
            np.conj(m.markov_boundary(0.25, "+"))
        )

    def test_imag_is_minus_pi_density(self):
        m = Measure(pieces=(Piece(0, 1, DensitySpec("jacobi_weight", p=1, q=1, poly=(6.0,))),))
        x = 0.3
        dens = m.density_at(x)
        assert m.markov_boundary(x, "+").imag == pytest.approx(-math.pi * dens, rel=1e-12)

    def test_endpoint_rejected(self):
        with pytest.raises(DomainError):
            uniform(0, 1).markov_boundary(1.0, "+")

    def test_atom_at_x_rejected(self):
        m = Measure(atoms=((0.5, 1.0),), pieces=(Piece(0, 1),))
        with pytest.raises(DomainError):
            m.markov_boundary(0.5, "+")

    def test_mp_route_agrees(self):
        m = uniform(-2, -1)
        a = m.markov_boundary(-1.3, "+")
        b = complex(m.markov_boundary_mp(-1.3, "+", 256))
        assert a == pytest.approx(b, abs=1e-13)


class TestConcat:
    def test_two_pieces(self):
        c = concat(uniform(-2, -1), uniform(1, 2))
        assert len(c.pieces) == 2
        assert c.mass() == pytest.approx(2.0, abs=1e-12)

    def test_atoms_union(self):
        c = concat(Measure(atoms=((0.0, 1.0),)), Measure(atoms=((2.0, 3.0),)))
        assert c.atoms == ((0.0, 1.0), (2.0, 3.0))

    def test_overlap_rejected(self):
        with pytest.raises(OverlapError):
            concat(uniform(0, 1), uniform(0.5, 2))


class TestConstructionAndJson:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Measure()

    def test_nonpositive_mass_rejected(self):
        with pytest.raises(ValueError):
            Measure(atoms=((0.0, -1.0),))

    def test_overlapping_pieces_rejected(self):
        with pytest.raises(ValueError):
            Measure(pieces=(Piece(0, 1), Piece(0.5, 2)))

    def test_roundtrip(self):
        m = Measure(
            atoms=((0.5, 0.25),),
            pieces=(Piece(1.0, 2.0, DensitySpec("jacobi_weight", p=0.5, q=0.5, poly=(1.0, 0.1))),),
            quad_order=120,
        )
        m2 = measure_from_json(json.dumps(m.to_json()))
        assert m2.to_json() == m.to_json()
        assert m2.moment(2) == pytest.approx(m.moment(2))

    def test_markov_weighted_literal(self):
        doc = {
            "pieces": [
                {
                    "a": 2.0,
                    "b": 3.0,
                    "density": {
                        "kind": "markov_weighted",
                        "base": {"kind": "uniform"},
                        "weight_measure": {"pieces": [{"a": 0.0, "b": 1.0, "density": {"kind": "uniform"}}]},
                    },
                }
            ]
        }
        m = measure_from_json(doc)
        # density at x is log(x/(x-1)) for the uniform weight on [0, 1]
        assert m.density_at(2.5) == pytest.approx(math.log(2.5 / 1.5), rel=1e-12)

    def test_markov_weighted_overlap_rejected(self):
        with pytest.raises(OverlapError):
            Measure(
                pieces=(
                    Piece(
                        0.5,
                        1.5,
                        DensitySpec(
                            "markov_weighted",
                            base=DensitySpec("uniform"),
                            weight_measure=uniform(0, 1),
                        ),
                    ),
                )
            )


bounded = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)


class TestProperties:
    @given(
        a=bounded,
        width=st.floats(min_value=0.1, max_value=3),
        k=st.integers(min_value=0, max_value=8),
    )
    @settings(max_examples=30, deadline=None)
    def test_zeroth_moment_is_mass(self, a, width, k):
        m = uniform(a, a + width)
        assert m.moment(0) == pytest.approx(width, rel=1e-11)
        # and the k-th moment matches the closed form
        closed = ((a + width) ** (k + 1) - a ** (k + 1)) / (k + 1)
        assert m.moment(k) == pytest.approx(closed, rel=1e-10, abs=1e-12)

    @given(a=bounded, width=st.floats(min_value=0.1, max_value=3))
    @settings(max_examples=20, deadline=None)
    def test_markov_asymptote(self, a, width):
        m = uniform(a, a + width)
        z = 1e6
        lead = m.mass() / z
        assert abs(m.markov(z) - lead - m.moment(1) / z**2) <= 1e-9 * abs(lead)
