import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lpmv, sph_harm_y

from conftest import random_vector_set
from povm_frames.catalog import all_entries, builtin_set
from povm_frames.errors import IndexOutOfRange, InvalidBlochVector, NotUnitVector, RealityViolated
from povm_frames.harmonics import (
    FrameCoefficients,
    _born_like,
    admissible_harmonics,
    assoc_legendre,
    born_coefficients,
    check_povm_normalization,
    default_tol,
    evaluate_frame,
    evaluate_frame_many,
    fibonacci_sphere,
    harmonic_table,
    shrink_to_nonnegative,
    sum_condition,
    sum_conditions,
    ylm,
)
from povm_frames.qubit import E_X, E_Y, E_Z, Rotation3, UnitVectorSet, rotate_set, second_moment
from povm_frames.sampling import make_rng, random_unit_vector


def angles(n):
    n = np.asarray(n, dtype=float)
    return math.acos(max(-1.0, min(1.0, n[2]))), math.atan2(n[1], n[0])


def h_ll(l):
    """Reduced sectoral factor: Y_ll(n) = h_ll * (n_x + i n_y)^l (independent oracle via scipy)."""
    return complex(sph_harm_y(l, l, math.pi / 2, 0.0)).real


class TestLegendre:
    def test_anchors(self):
        assert assoc_legendre(5, 0, -1 / 3) == pytest.approx(-1 / 3, abs=1e-12)
        assert assoc_legendre(5, 3, -1 / 3) == pytest.approx(0.0, abs=1e-12)

    def test_low_orders(self):
        x = 0.3
        assert assoc_legendre(0, 0, x) == pytest.approx(1.0)
        assert assoc_legendre(1, 0, x) == pytest.approx(x)
        # Condon-Shortley phase
        assert assoc_legendre(1, 1, x) == pytest.approx(-math.sqrt(1 - x * x))
        assert assoc_legendre(2, 0, x) == pytest.approx((3 * x * x - 1) / 2)

    @pytest.mark.parametrize("l", range(0, 21))
    def test_against_scipy(self, l):
        for x in np.linspace(-0.99, 0.99, 9):
            for m in range(l + 1):
                want = lpmv(m, l, x)
                assert assoc_legendre(l, m, float(x)) == pytest.approx(want, rel=1e-9, abs=1e-9 * max(1, abs(want)))

    def test_domain_errors(self):
        with pytest.raises(IndexOutOfRange):
            assoc_legendre(2, 3, 0.0)
        with pytest.raises(IndexOutOfRange):
            assoc_legendre(2, -1, 0.0)
        with pytest.raises(IndexOutOfRange):
            assoc_legendre(2, 0, 1.5)
        with pytest.raises(IndexOutOfRange):
            assoc_legendre(2, 0, float("nan"))


class TestYlm:
    def test_y22_on_x_axis(self):
        assert ylm(2, 2, E_X) == pytest.approx(0.25 * math.sqrt(15 / (2 * math.pi)), abs=1e-14)

    def test_y00(self):
        assert ylm(0, 0, E_Z) == pytest.approx(1 / math.sqrt(4 * math.pi))

    def test_against_scipy(self, rng):
        vecs = random_unit_vector(rng, size=40)
        table = harmonic_table(12, vecs)
        for j, n in enumerate(vecs):
            theta, phi = angles(n)
            for l in range(13):
                for m in range(-l, l + 1):
                    want = complex(sph_harm_y(l, m, theta, phi))
                    assert abs(table[l, 12 + m, j] - want) <= 1e-12

    def test_poles_have_only_m0(self):
        t = harmonic_table(10, [E_Z, -E_Z])
        for l in range(11):
            for m in range(-l, l + 1):
                if m:
                    assert t[l, 10 + m, 0] == 0 and t[l, 10 + m, 1] == 0
            assert t[l, 10, 0].real == pytest.approx(math.sqrt((2 * l + 1) / (4 * math.pi)))

    def test_parity_and_conjugation(self, rng):
        for n in random_unit_vector(rng, size=500):
            t, tm = harmonic_table(8, n)[..., 0], harmonic_table(8, -n)[..., 0]
            for l in range(9):
                for m in range(-l, l + 1):
                    assert abs(tm[l, 8 + m] - (-1) ** l * t[l, 8 + m]) <= 1e-12
                    assert abs(t[l, 8 - m] - (-1) ** m * np.conj(t[l, 8 + m])) <= 1e-12

    def test_addition_theorem(self, rng):
        # sum_m |Y_lm|^2 = (2l+1)/4pi
        vecs = random_unit_vector(rng, size=20)
        t = harmonic_table(15, vecs)
        for l in range(16):
            np.testing.assert_allclose(np.sum(np.abs(t[l]) ** 2, axis=0), (2 * l + 1) / (4 * math.pi), rtol=1e-12)

    def test_high_degree_is_finite(self):
        t = harmonic_table(60, fibonacci_sphere(50))
        assert np.all(np.isfinite(t))

    def test_rejects_non_unit(self):
        with pytest.raises(NotUnitVector):
            ylm(1, 0, [1.0, 1.0, 0.0])
        with pytest.raises(NotUnitVector):
            ylm(1, 0, [float("nan"), 0.0, 0.0])
        with pytest.raises(IndexOutOfRange):
            ylm(1, 2, E_Z)


class TestSumConditions:
    def test_trine_sectoral_closed_form(self):
        vs = builtin_set("trine").vectors
        for l in range(1, 21):
            want = h_ll(l) * (1 + 2 * (-0.5) ** l)
            got = sum_condition(vs, l).values[2 * l]
            assert abs(got - want) <= 1e-13
            assert (abs(want) < 1e-15) == (l == 1)

    def test_tet1_sectoral_closed_form(self):
        vs = builtin_set("tet1").vectors
        w = complex(-1 / 3, math.sqrt(2 / 3))
        zeros = set()
        for l in range(1, 18):
            closed = 1 + (-1 / 3) ** l + 2 * (w**l).real
            if abs(closed) < 1e-13:
                zeros.add(l)
            got = sum_condition(vs, l).values[2 * l]
            assert abs(got - h_ll(l) * closed) <= 1e-12
        assert zeros == {1, 2, 5}

    def test_tet2_threefold(self):
        vs = builtin_set("tet2").vectors
        for rep in sum_conditions(vs, 17):
            for r in range(-rep.l, rep.l + 1):
                if r % 3:
                    assert abs(rep.values[r + rep.l]) <= 1e-13

    def test_l1_vanishes_for_closed_sets(self, rng):
        for n in range(2, 12):
            vs = random_vector_set(rng, n)
            assert sum_condition(vs, 1).max_abs <= 1e-9 * n

    def test_l0_is_count(self):
        vs = builtin_set("icosahedron").vectors
        assert sum_condition(vs, 0).values[0] == pytest.approx(12 / math.sqrt(4 * math.pi))

    def test_summation_order_independent(self, rng):
        vs = builtin_set("dodecahedron").vectors
        perm = UnitVectorSet(vs.vectors[rng.permutation(len(vs))])
        for a, b in zip(sum_conditions(vs, 20), sum_conditions(perm, 20)):
            assert a.values == b.values

    def test_sum_conditions_matches_single(self):
        vs = builtin_set("tet1").vectors
        for rep in sum_conditions(vs, 8):
            assert rep.values == sum_condition(vs, rep.l).values

    def test_negative_l(self):
        with pytest.raises(IndexOutOfRange):
            sum_condition(builtin_set("trine").vectors, -1)


class TestAdmissibility:
    def test_trine(self):
        assert admissible_harmonics(builtin_set("trine").vectors, 20).allowed == {0, 1}

    def test_tetrahedra(self):
        for name in ("tet1", "tet2"):
            assert admissible_harmonics(builtin_set(name).vectors, 17).allowed == {0, 1, 2, 5}

    def test_default_tol(self):
        adm = admissible_harmonics(builtin_set("octahedron").vectors)
        assert adm.tol == default_tol(6) == pytest.approx(1e-8 * math.sqrt(6))
        assert adm.l_max == 20

    def test_l2_iff_isotropic(self, rng):
        sets = [e.vectors for e in all_entries()]
        sets += [rotate_set(s, Rotation3.random(rng)) for s in sets]
        sets += [random_vector_set(rng, int(n)) for n in rng.integers(2, 15, size=100)]
        for vs in sets:
            assert (2 in admissible_harmonics(vs, 2).allowed) == second_moment(vs)[1]

    def test_rotation_invariance(self, rng):
        for entry in all_entries():
            base = admissible_harmonics(entry.vectors, 12).allowed
            for _ in range(5):
                rot = Rotation3.random(rng)
                assert admissible_harmonics(rotate_set(entry.vectors, rot), 12).allowed == base

    def test_marginal_band(self):
        vs = builtin_set("trine").vectors
        x = admissible_harmonics(vs, 4).evidence[2]
        above = admissible_harmonics(vs, 4, tol_zero=x * 10)
        below = admissible_harmonics(vs, 4, tol_zero=x / 10)
        assert 2 in above.allowed and 2 in above.marginal
        assert 2 not in below.allowed and 2 in below.marginal
        assert not admissible_harmonics(vs, 4).marginal

    def test_low_l_never_marginal(self):
        adm = admissible_harmonics(builtin_set("trine").vectors, 4, tol_zero=1.0)
        assert not adm.marginal & {0, 1}

    def test_rows(self):
        rows = admissible_harmonics(builtin_set("trine").vectors, 3).rows()
        assert [r["l"] for r in rows] == [0, 1, 2, 3]
        assert [r["allowed"] for r in rows] == [True, True, False, False]

    def test_lmax_error(self):
        with pytest.raises(IndexOutOfRange):
            admissible_harmonics(builtin_set("trine").vectors, 0)


class TestCoefficients:
    def test_set_fills_partner(self):
        c = FrameCoefficients(3).set(3, 2, 1 + 2j).set(3, 1, 0.5j)
        assert c[3, -2] == 1 - 2j
        assert c[3, -1] == pytest.approx(0.5j)
        assert c.reality_deviation() == 0
        assert c.support() == {3}

    def test_from_dict_is_verbatim(self):
        c = FrameCoefficients.from_dict({(1, 1): 1.0})
        assert c[1, -1] == 0
        with pytest.raises(RealityViolated):
            evaluate_frame(c, E_X)

    def test_index_errors(self):
        c = FrameCoefficients(2)
        with pytest.raises(IndexOutOfRange):
            c[3, 0]
        with pytest.raises(IndexOutOfRange):
            c.set(1, 2, 1.0)
        with pytest.raises(IndexOutOfRange):
            FrameCoefficients(2, np.zeros((2, 2)))

    def test_scaled_leaves_c00(self):
        c = born_coefficients(3, [0.3, 0.1, -0.2]).set(1, 0, 0.4)
        s = c.scaled(0.25)
        assert s[0, 0] == c[0, 0]
        assert s[1, 0] == pytest.approx(0.1)
        assert c[1, 0] == pytest.approx(0.4)

    def test_born_values(self):
        c = born_coefficients(3, E_X)
        assert c[0, 0] == pytest.approx(math.sqrt(4 * math.pi) / 3)
        assert c[1, 0] == 0
        assert c[1, 1] == pytest.approx(-math.sqrt(2 * math.pi / 3) / 3)

    def test_born_evaluation(self, rng):
        for n_out in (2, 3, 4, 7):
            p = random_unit_vector(rng) * rng.uniform(0, 1)
            pts = random_unit_vector(rng, size=1000)
            got = evaluate_frame_many(born_coefficients(n_out, p), pts)
            np.testing.assert_allclose(got, (1 + pts @ p) / n_out, atol=1e-12)

    def test_evaluate_examples(self):
        assert evaluate_frame(born_coefficients(3, E_X), E_X) == pytest.approx(2 / 3, abs=1e-14)
        assert evaluate_frame(born_coefficients(3, E_X), -E_X) == pytest.approx(0.0, abs=1e-14)
        c = FrameCoefficients(0).set(0, 0, 1 / math.sqrt(4 * math.pi))
        assert evaluate_frame(c, E_Y) == pytest.approx(1 / (4 * math.pi))

    def test_born_rejects_long_vector(self):
        with pytest.raises(InvalidBlochVector):
            born_coefficients(3, [1.0, 1.0, 0.0])
        with pytest.raises(IndexOutOfRange):
            born_coefficients(1, E_Z)

    def test_imaginary_value_rejected(self):
        c = FrameCoefficients(0).set(0, 0, 1j)
        with pytest.raises(RealityViolated):
            evaluate_frame(c, E_Z)


class TestNormalization:
    @pytest.mark.parametrize("name", ["trine", "tet1", "octahedron", "dodecahedron"])
    def test_born(self, name, rng):
        vs = builtin_set(name).vectors
        rots = [Rotation3.random(rng) for _ in range(50)]
        assert check_povm_normalization(born_coefficients(len(vs), [0.2, -0.4, 0.5]), vs, rots) <= 1e-10

    def test_tetrahedron_allowed_harmonics(self, rng):
        vs = builtin_set("tet1").vectors
        c = FrameCoefficients(5)
        c.set(0, 0, math.sqrt(4 * math.pi) / 4).set(1, 1, 0.05 - 0.02j)
        c.set(2, 0, 0.03).set(2, 2, 0.01j).set(5, 3, -0.02 + 0.01j).set(5, 0, 0.04)
        rots = [Rotation3.random(rng) for _ in range(50)]
        assert check_povm_normalization(c, vs, rots) <= 1e-12

    def test_stray_harmonic_on_trine(self, rng):
        vs = builtin_set("trine").vectors
        c = FrameCoefficients(2)
        c.array[:2, 1:4] = born_coefficients(3, E_Z).array
        c.set(2, 0, 0.1)
        rots = [Rotation3.random(rng) for _ in range(50)]
        want = 0.0
        for r in rots:
            z = r.apply(vs.vectors)[:, 2]
            want = max(want, 0.1 * math.sqrt(5 / (16 * math.pi)) * abs(math.fsum(3 * z * z - 1)))
        got = check_povm_normalization(c, vs, rots)
        assert got == pytest.approx(want, rel=1e-9)
        assert got > 1e-3

    def test_identity_rotation_only(self):
        vs = builtin_set("trine").vectors
        assert check_povm_normalization(born_coefficients(3, E_X), vs, [Rotation3.identity()]) <= 1e-15
        assert check_povm_normalization(born_coefficients(3, E_X), vs, []) == 0.0


class TestShrink:
    def test_born_untouched(self):
        c = born_coefficients(3, [0.0, 0.6, 0.8])
        out, gamma = shrink_to_nonnegative(c)
        assert gamma == 1.0
        np.testing.assert_array_equal(out.array, c.array)

    @pytest.mark.parametrize("axis", [E_Z, -E_X, np.array([1.0, 2.0, -2.0]) / 3])
    def test_overlong_bloch_vector(self, axis):
        out, gamma = shrink_to_nonnegative(_born_like(3, 2 * axis))
        assert gamma == pytest.approx(0.5, abs=1e-6)
        assert gamma <= 0.5 + 1e-12
        assert np.min(evaluate_frame_many(out, fibonacci_sphere(2000))) >= -1e-9

    def test_constant_only(self):
        c = FrameCoefficients(3).set(0, 0, 1.0)
        assert shrink_to_nonnegative(c)[1] == 1.0

    def test_higher_harmonic(self):
        # c00 Y00 + c20 Y20 has minimum at the equator: 1/4pi - c20 sqrt(5/16pi)
        c = FrameCoefficients(2).set(0, 0, 1 / math.sqrt(4 * math.pi)).set(2, 0, 1.0)
        _, gamma = shrink_to_nonnegative(c)
        want = (1 / (4 * math.pi)) / math.sqrt(5 / (16 * math.pi))
        assert gamma == pytest.approx(want, rel=1e-4)

    def test_requires_positive_c00(self):
        with pytest.raises(ValueError):
            shrink_to_nonnegative(FrameCoefficients(1).set(1, 0, 1.0))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), l=st.integers(0, 10))
def test_rotated_sum_magnitude_preserved(seed, l):
    # the l-block of sum conditions transforms unitarily under rotations
    rng = make_rng(seed)
    vs = builtin_set("tet1").vectors
    a = np.array(sum_condition(vs, l).values)
    b = np.array(sum_condition(rotate_set(vs, Rotation3.random(rng)), l).values)
    assert np.linalg.norm(a) == pytest.approx(np.linalg.norm(b), rel=1e-10, abs=1e-12)
