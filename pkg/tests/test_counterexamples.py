import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projlattice.algebra import Element
from projlattice.counterexamples import (
    BlochVector,
    bloch_projection,
    certificate_table,
    cubic_measure,
    fibonacci_sphere,
    nonlinearity_residual,
    qubit_frame_measure,
)
from projlattice.extension import Status, omega, reconstruct
from projlattice.measures import TraceForm, additivity_check


def brute_force_cubic_gap(slopes=4001, points=4001):
    """min over a of max over t in [-1,1] of |t**3/2 - a t|, by exhaustive search."""
    t = np.linspace(-1, 1, points)
    a = np.linspace(0, 1, slopes)
    err = np.abs(0.5 * t[None, :] ** 3 - a[:, None] * t[None, :]).max(axis=1)
    k = int(np.argmin(err))
    return a[k], err[k]


def test_brute_force_oracle_matches_chebyshev():
    slope, gap = brute_force_cubic_gap()
    assert slope == pytest.approx(0.375, abs=1e-3)
    assert gap == pytest.approx(0.125, abs=1e-4)


unit_vectors = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda v: np.linalg.norm(v) > 0.1).map(lambda v: tuple(np.array(v) / np.linalg.norm(v)))


class TestBloch:
    def test_z(self):
        assert np.allclose(bloch_projection((0, 0, 1)).blocks[0], np.diag([1, 0]))

    def test_x(self):
        assert np.allclose(bloch_projection((1, 0, 0)).blocks[0], 0.5 * np.ones((2, 2)))

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            bloch_projection((1, 1, 0))
        with pytest.raises(ValueError):
            BlochVector((0, 0, 2))

    @settings(max_examples=50)
    @given(n=unit_vectors)
    def test_antipodal(self, n):
        p, q = bloch_projection(n), bloch_projection(-np.array(n))
        assert (p + q).allclose(Element.identity((2,)), 1e-12)
        assert (p @ q).op_norm() <= 1e-12
        assert abs(p.trace() - 1) <= 1e-12


class TestFrameMeasure:
    def test_linear_term_is_trace_form(self):
        c, a1 = 1.3, 0.4
        mu = qubit_frame_measure(c, [a1])
        lin = TraceForm(Element((2,), [np.diag([c / 2 + a1, c / 2 - a1])]))
        for n in fibonacci_sphere(50):
            p = bloch_projection(n)
            assert mu(p) == pytest.approx(lin(p), abs=1e-12)

    def test_constant(self):
        mu = qubit_frame_measure(2.0, [])
        for n in fibonacci_sphere(20):
            assert mu(bloch_projection(n)) == pytest.approx(1.0)

    def test_cubic_bounded(self):
        mu = cubic_measure()
        vals = [mu(bloch_projection(n)).real for n in fibonacci_sphere(500)]
        assert max(vals) <= 1 + 1e-12 and min(vals) >= -1e-12

    def test_antipodal_sum(self):
        mu = qubit_frame_measure(0.7, [0.1, -0.3, 0.2])
        for n in fibonacci_sphere(100):
            total = mu(bloch_projection(n)) + mu(bloch_projection(-n))
            assert total == pytest.approx(0.7, abs=1e-12)


class TestCertificate:
    def test_linear_is_exact(self):
        cert = nonlinearity_residual(qubit_frame_measure(1.0, [0.25]), 400)
        assert cert.residual <= 1e-9

    def test_cubic_gap(self):
        cert = nonlinearity_residual(cubic_measure(), 2048)
        assert 0.120 <= cert.residual <= 0.125
        # best fit is 1/2 + (3/8) n_z, i.e. rho = diag(7/8, 1/8)
        assert np.allclose(cert.best_fit.blocks[0], np.diag([0.875, 0.125]), atol=5e-3)

    def test_witness_at_equioscillation(self):
        cert = nonlinearity_residual(cubic_measure(), 2048)
        nz = abs(cert.witness.n[2])
        assert min(abs(nz - 1), abs(nz - 0.5)) <= 0.01

    def test_refines_to_chebyshev(self):
        cert = nonlinearity_residual(cubic_measure(), 20000)
        assert abs(cert.residual - 0.125) <= 1e-3

    def test_small_grid(self):
        with pytest.raises(ValueError):
            nonlinearity_residual(cubic_measure(), 10)

    def test_reconstruct_within_factor_two(self):
        cert = nonlinearity_residual(cubic_measure())
        res = reconstruct(cubic_measure(), tol=1e-6)
        assert res.status is Status.I2_OBSTRUCTION
        assert cert.residual / 2 <= res.residual <= 2 * cert.residual

    def test_table_sorted(self):
        mu = cubic_measure()
        cert = nonlinearity_residual(mu, 200)
        rows = certificate_table(mu, cert)
        assert rows.shape == (200, 3)
        assert np.all(np.diff(rows[:, 0]) >= 0)
        assert np.max(np.abs(rows[:, 1] - rows[:, 2])) == pytest.approx(cert.residual, abs=1e-9)

    @pytest.mark.parametrize("coeffs", [[0.0, 0.5], [0.1, 0.0, 0.3], [0.0, -0.2, 0.1]])
    def test_frame2_axioms_and_axis_linearity(self, coeffs):
        mu = qubit_frame_measure(1.0, coeffs)
        assert additivity_check(mu, 100, seed=0).max_violation <= 1e-12
        n = fibonacci_sphere(7)[3]
        p, q = bloch_projection(n), bloch_projection(-n)
        x, y = 0.3 * p + 0.1 * q, 0.2 * p + 0.6 * q
        assert abs(omega(mu, x + y) - omega(mu, x) - omega(mu, y)) <= 1e-12
