"""Cotangent lifts: Hamiltonians, Poisson brackets, characteristic field,
fiber sampling, cone-flag class computation, full subspace table."""

import random

import pytest
import sympy as sp

from rank2dist.geometry import Chart, lie_bracket
from rank2dist.kernel import Q, QEchelon
from rank2dist.models import cartan_jet, flat_from_symbol, \
    free_nilpotent_symbol, monge_model
from rank2dist.symplectic import (CotangentChart, annihilator_basis,
                                  char_field, class_at_point, class_at_sample,
                                  cone_J_generators, fiber_sample,
                                  hamiltonians, pointwise_full_flag,
                                  square_fields)

from oracles import class_trace_oracle, monge_frame, poisson_oracle, sym_vars


def origin(dist):
    return [Q(0)] * dist.chart.dim


class TestCotangentChart:
    def test_momentum_names(self):
        ct = CotangentChart(Chart(("x", "y")))
        assert ct.momenta == ("p_x", "p_y")
        assert ct.chart.dim == 4

    def test_hamiltonian_monge5(self):
        dist = monge_model(5)
        ct, hs = hamiltonians(dist)
        # h1 = p_x + y1 p_y0 + y2 p_y1 + y2^2 p_z
        expect = ct.chart.ratfunc("p_x + y1*p_y0 + y2*p_y1 + y2^2*p_z")
        assert hs[0] == expect
        assert hs[1] == ct.chart.ratfunc("p_y2")

    def test_poisson_canonical_pairs(self):
        ct = CotangentChart(Chart(("x", "y")))
        px = ct.chart.ratfunc("p_x")
        x = ct.chart.ratfunc("x")
        y = ct.chart.ratfunc("y")
        assert ct.poisson(px, x) == ct.chart.ratfunc("1")
        assert ct.poisson(px, y).is_zero()
        assert ct.poisson(x, px) == ct.chart.ratfunc("-1")

    def test_poisson_matches_oracle(self):
        ct = CotangentChart(Chart(("x", "y")))
        f = ct.chart.ratfunc("x*p_y + p_x^2")
        g = ct.chart.ratfunc("y^2*p_x + x")
        got = ct.poisson(f, g)
        base = sym_vars(["x", "y"])
        mom = sym_vars(["p_x", "p_y"])
        x, y = base
        px, py = mom
        expect = poisson_oracle(x * py + px ** 2, y ** 2 * px + x, base, mom)
        assert sp.expand(sp.sympify(got.to_str().replace("^", "**"))
                         - expect) == 0

    def test_poisson_lie_homomorphism(self):
        # {h_X, h_Y} = h_[X,Y] for the model frame brackets
        dist = monge_model(6)
        ct, hs = hamiltonians(dist)
        x1, x2, x3, x4, x5 = square_fields(dist)
        assert ct.poisson(hs[0], hs[1]) == hs[2]
        assert ct.poisson(hs[0], hs[2]) == hs[3]
        assert ct.poisson(hs[1], hs[2]) == hs[4]
        assert ct.poisson(hs[0], hs[0]).is_zero()

    def test_ham_field_applies_poisson(self):
        ct = CotangentChart(Chart(("x", "y")))
        h = ct.chart.ratfunc("x*p_x + y^2*p_y")
        g = ct.chart.ratfunc("x^2 + p_y")
        assert ct.ham_field(h).apply_to(g) == ct.poisson(h, g)


class TestCharField:
    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_tangency_identities(self, n):
        dist = monge_model(n)
        ct, hs = hamiltonians(dist)
        _, xc = char_field(dist)
        h1, h2, h3, h4, h5 = hs
        assert xc.apply_to(h1) == h4 * h3
        assert xc.apply_to(h2) == h5 * h3
        assert xc.apply_to(h3).is_zero()


class TestFiberSample:
    def test_constraints_hold_exactly(self):
        dist = monge_model(6)
        s = fiber_sample(dist, origin(dist), seed=1)
        assert s.h_values[0] == 0 and s.h_values[1] == 0 \
            and s.h_values[2] == 0
        assert s.h_values[3] != 0 or s.h_values[4] != 0

    def test_seeded_determinism(self):
        dist = monge_model(5)
        a = fiber_sample(dist, origin(dist), seed=7)
        b = fiber_sample(dist, origin(dist), seed=7)
        assert a.momentum == b.momentum

    def test_scaling(self):
        dist = monge_model(5)
        s = fiber_sample(dist, origin(dist))
        t = s.scaled(Q(3, 2))
        assert t.h_values == [Q(3, 2) * v for v in s.h_values]

    def test_annihilator_basis_size(self):
        for n in (5, 6, 7):
            assert len(annihilator_basis(monge_model(n))) == n - 3


class TestClass:
    def test_monge5_trace(self):
        dist = monge_model(5)
        s = fiber_sample(dist, origin(dist))
        nu, dims = class_at_sample(dist, s)
        assert nu == 2
        assert dims == (4, 5, 6, 6)

    @pytest.mark.parametrize("n", [6, 7, 8])
    def test_monge_maximal(self, n):
        dist = monge_model(n)
        rep = class_at_point(dist, origin(dist), samples=3)
        assert rep.m == n - 3
        assert rep.maximal_class
        best = max((dims for _, nu, dims in rep.per_sample if nu == rep.m),
                   key=len)
        assert best == tuple(list(range(n - 1, 2 * n - 3)) + [2 * n - 4])

    def test_free_flat_step4_maximal(self):
        dist = flat_from_symbol(free_nilpotent_symbol(4))
        rep = class_at_point(dist, origin(dist), samples=3)
        assert rep.m == 5 and rep.maximal_class

    def test_matches_sympy_oracle(self):
        dist = monge_model(5)
        s = fiber_sample(dist, origin(dist), seed=2)
        frame, coords = monge_frame(5)
        expect = class_trace_oracle(
            5, frame, coords, [0] * 5,
            [sp.Rational(int(v.numerator), int(v.denominator))
             for v in s.momentum])
        _, dims = class_at_sample(dist, s)
        assert dims == expect

    def test_projective_invariance(self):
        dist = monge_model(6)
        s = fiber_sample(dist, origin(dist))
        nu0, dims0 = class_at_sample(dist, s)
        nu1, dims1 = class_at_sample(dist, s.scaled(Q(-5, 3)))
        assert (nu0, dims0) == (nu1, dims1)

    def test_depth_cap_persistence(self):
        # two extra rounds after stabilization change nothing
        dist = monge_model(6)
        s = fiber_sample(dist, origin(dist))
        nu_a, _ = class_at_sample(dist, s)
        nu_b, _ = class_at_sample(dist, s, depth_cap=dist.chart.dim + 2)
        assert nu_a == nu_b

    def test_increment_at_most_one(self):
        dist = monge_model(7)
        s = fiber_sample(dist, origin(dist), seed=4)
        _, dims = class_at_sample(dist, s)
        assert all(b - a in (0, 1) for a, b in zip(dims, dims[1:]))


class TestConeGenerators:
    def test_involutivity_at_sample(self):
        # brackets of the lifted generators stay inside the next flag level
        dist = monge_model(5)
        s = fiber_sample(dist, origin(dist))
        gens = cone_J_generators(dist, s)
        lam = s.point
        n2 = 2 * dist.chart.dim
        ech = QEchelon(n2)
        for g in gens:
            ech.add([Q(v) for v in g.at(lam)])
        base_rank = ech.rank
        # vertical-vertical brackets vanish on the nose; mixed brackets land
        # in the span at the sample (one level up at most)
        _, xc = char_field(dist)
        ech2 = QEchelon(n2)
        for g in gens:
            ech2.add(g.at(lam))
        ech2.add(lie_bracket(xc, gens[-1]).at(lam))
        up_rank = ech2.rank
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                br = lie_bracket(gens[a], gens[b])
                if br.is_zero():
                    continue
                probe = QEchelon(n2)
                for g in gens:
                    probe.add(g.at(lam))
                probe.add(lie_bracket(xc, gens[-1]).at(lam))
                probe.add(lie_bracket(xc, gens[-2]).at(lam))
                assert not probe.add(br.at(lam)), \
                    "bracket of generators %d,%d leaves J^(1)" % (a, b)
        assert base_rank == dist.chart.dim - 1
        assert up_rank <= base_rank + 1


class TestFullFlag:
    def test_monge5_table(self):
        dist = monge_model(5)
        s = fiber_sample(dist, origin(dist))
        t = pointwise_full_flag(dist, s)
        assert t.nu == 2
        assert t.dim_H == 6                 # 2n - 4
        assert t.dim_ker_sigma == 2
        assert t.dims_upper == [4, 5, 6]
        assert t.dims_lower == [4, 3, 2]
        assert t.dims_vertical == [2, 2, 1]
        assert t.ker_contains_char
        assert t.ker_contains_euler
        assert t.lower1_is_vertical_plus_char

    def test_monge6_table_consistency(self):
        dist = monge_model(6)
        s = fiber_sample(dist, origin(dist))
        t = pointwise_full_flag(dist, s)
        n = 6
        assert t.dim_H == 2 * n - 4
        assert t.dim_ker_sigma == 2
        # duality: the kernel sits inside every osculating space, so
        # dim upper_i + dim lower_i = dim H + dim ker
        for u, l in zip(t.dims_upper, t.dims_lower):
            assert u + l == t.dim_H + t.dim_ker_sigma
        assert t.dims_upper[0] == n - 1
        assert t.lower1_is_vertical_plus_char

    def test_cartan_jet_class_zero(self):
        # jet chart: cube is 4-dimensional, so no valid fiber sample
        from rank2dist.errors import PreconditionError
        dist = cartan_jet(4)
        with pytest.raises(PreconditionError):
            fiber_sample(dist, origin(dist))
