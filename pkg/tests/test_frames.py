import math

import numpy as np
import pytest

from naqi import qmat
from naqi.frames import (
    bloch_axis,
    check_mutually_unbiased,
    conjugate_frame,
    imaginarity_axis,
    measurement_set,
    mub_triple,
    projector_pair,
    triple_axes,
)
from naqi.imaginarity import imag_l1
from naqi.sampling import random_bloch_vector, random_unitary

SQRT2 = math.sqrt(2.0)


class TestMubTriple:
    def test_reference_triple_structure(self):
        t = mub_triple(0.0, 0.0)
        m1, m2, m3 = t.bases
        assert np.abs(m1[:, 0] - [1, 0]).max() < 1e-15
        assert np.abs(m1[:, 1] - [0, -1]).max() < 1e-15
        assert np.abs(m2[:, 0] - [1 / SQRT2, -1 / SQRT2]).max() < 1e-15
        assert np.abs(m2[:, 1] - [1 / SQRT2, 1 / SQRT2]).max() < 1e-15
        assert np.abs(m3[:, 0] - [1 / SQRT2, -1j / SQRT2]).max() < 1e-15
        assert np.abs(m3[:, 1] - [1 / SQRT2, 1j / SQRT2]).max() < 1e-15

    def test_mub_condition_over_random_angles(self):
        rng = np.random.default_rng(0)
        for _ in range(1_000):
            t = mub_triple(
                rng.uniform(0, np.pi),
                rng.uniform(0, 2 * np.pi),
                rng.uniform(0, 2 * np.pi),
            )
            ok, worst = check_mutually_unbiased(t.bases)
            assert ok, f"MUB defect {worst}"

    def test_reference_triple_imaginarity_axes(self):
        t = mub_triple(0.0, 0.0)
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = random_bloch_vector(rng)
            rho = qmat.bloch_to_density(n)
            values = [imag_l1(rho, b) for b in t.bases]
            assert abs(values[0] - abs(n[1])) < 1e-12
            assert abs(values[1] - abs(n[1])) < 1e-12
            assert abs(values[2] - abs(n[0])) < 1e-12
            assert abs(sum(values) - (2 * abs(n[1]) + abs(n[0]))) < 1e-12

    def test_non_finite_angles_rejected(self):
        with pytest.raises(ValueError):
            mub_triple(float("nan"), 0.0)


class TestProjectorPair:
    def test_z_axis(self):
        up, down = projector_pair(0.0, 0.0)
        assert np.abs(up - np.diag([1.0, 0.0])).max() < 1e-15
        assert np.abs(down - np.diag([0.0, 1.0])).max() < 1e-15

    def test_x_axis(self):
        up, down = projector_pair(math.pi / 2, 0.0)
        h = np.ones((2, 2)) / 2
        assert np.abs(up - h).max() < 1e-15
        assert np.abs(down - (np.eye(2) - h)).max() < 1e-15

    def test_y_axis_bloch_direction(self):
        up, _ = projector_pair(math.pi / 2, math.pi / 2)
        assert np.abs(qmat.density_to_bloch(up) - [0.0, 1.0, 0.0]).max() < 1e-12

    def test_completeness_idempotence_rank(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            up, down = projector_pair(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            assert np.abs(up + down - np.eye(2)).max() < 1e-12
            assert np.abs(up @ up - up).max() < 1e-12
            assert np.abs(down @ down - down).max() < 1e-12
            assert abs(np.trace(up).real - 1.0) < 1e-12

    def test_matches_triple_first_vector(self):
        theta, phi = 1.234, 5.432
        up, down = projector_pair(theta, phi)
        m1 = mub_triple(theta, phi).bases[0]
        assert np.abs(up - np.outer(m1[:, 0], m1[:, 0].conj())).max() < 1e-14
        assert np.abs(down - np.outer(m1[:, 1], m1[:, 1].conj())).max() < 1e-14

    def test_measurement_set_shape(self):
        ms = measurement_set([(0.0, 0.0), (math.pi / 2, 0.0), (math.pi / 2, math.pi / 2)])
        assert len(ms.projectors) == 3
        with pytest.raises(ValueError):
            measurement_set([(0.0, 0.0)])


class TestCheckMutuallyUnbiased:
    def test_pauli_eigenbases(self):
        z = np.eye(2, dtype=complex)
        x = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
        y = np.array([[1, 1], [1j, -1j]], dtype=complex) / SQRT2
        ok, worst = check_mutually_unbiased([z, x, y])
        assert ok and worst < 1e-15

    def test_repeated_basis_fails(self):
        z = np.eye(2, dtype=complex)
        x = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
        ok, worst = check_mutually_unbiased([z, z, x])
        assert not ok and worst == 0.5


class TestConjugateFrame:
    def test_identity(self):
        t = mub_triple(0.3, 0.4)
        out = conjugate_frame(t, np.eye(2))
        for a, b in zip(out, t.bases):
            assert np.abs(a - b).max() == 0.0

    def test_sigma_x_preserves_unbiasedness(self):
        out = conjugate_frame(mub_triple(0.0, 0.0), qmat.SIGMA_X)
        ok, _ = check_mutually_unbiased(out)
        assert ok

    def test_random_unitary_preserves_overlaps(self):
        rng = np.random.default_rng(3)
        t = mub_triple(1.0, 2.0, 0.5)
        for _ in range(100):
            v = random_unitary(2, rng)
            out = conjugate_frame(t, v)
            ok, worst = check_mutually_unbiased(out)
            assert ok, worst

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            conjugate_frame(mub_triple(0.0, 0.0), np.array([[1.0, 0.0], [0.0, 2.0]]))


class TestAxes:
    def test_closed_form_matches_direct_axis(self):
        rng = np.random.default_rng(4)
        for _ in range(500):
            t1 = rng.uniform(0, np.pi)
            p1 = rng.uniform(0, 2 * np.pi)
            chi = rng.uniform(0, 2 * np.pi)
            triple = mub_triple(t1, p1, chi)
            m, mp = triple_axes(t1, p1, chi)
            a1 = imaginarity_axis(triple.bases[0])
            a2 = imaginarity_axis(triple.bases[1])
            a3 = imaginarity_axis(triple.bases[2])
            for got, want in ((a1, m), (a2, m), (a3, mp)):
                assert min(np.abs(got - want).max(), np.abs(got + want).max()) < 1e-12
            assert abs(m @ mp) < 1e-12

    def test_two_angle_family_axes_are_equatorial(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            m, _ = triple_axes(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), 0.0)
            assert abs(m[2]) < 1e-15

    def test_chi_reaches_non_equatorial_axes(self):
        m, _ = triple_axes(math.pi / 2, 0.0, math.pi / 2)
        assert abs(abs(m[2]) - 1.0) < 1e-12

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(6)
        t1 = rng.uniform(0, np.pi, size=50)
        p1 = rng.uniform(0, 2 * np.pi, size=50)
        chi = rng.uniform(0, 2 * np.pi, size=50)
        m_all, mp_all = triple_axes(t1, p1, chi)
        for k in range(50):
            m, mp = triple_axes(t1[k], p1[k], chi[k])
            assert np.abs(m_all[k] - m).max() < 1e-15
            assert np.abs(mp_all[k] - mp).max() < 1e-15

    def test_bloch_axis_convention(self):
        assert np.abs(bloch_axis(0.0, 0.0) - [0, 0, 1]).max() < 1e-15
        assert np.abs(bloch_axis(math.pi / 2, 0.0) - [1, 0, 0]).max() < 1e-15
        assert np.abs(bloch_axis(math.pi / 2, math.pi / 2) - [0, 1, 0]).max() < 1e-15
