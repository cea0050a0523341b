import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projlattice.algebra import (
    Element,
    Projection,
    random_projection,
    random_selfadjoint,
    random_unitary,
)
from projlattice.counterexamples import bloch_projection, cubic_measure, qubit_frame_measure
from projlattice.exceptions import (
    DegenerateMeasureError,
    RepresentationError,
    UnevaluableError,
    UnsupportedMeasureError,
)
from projlattice.measures import (
    Frame2,
    Table,
    TraceForm,
    VectorMeasure,
    additivity_check,
    alpha_one,
    canonical_key,
    centre_normalize,
    imag_part,
    positive_spectral_projection,
    positivity_shift,
    real_part,
    variation_and_alpha,
)

seeds = st.integers(min_value=0, max_value=2**31 - 1)
shapes = st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3)


def diag(*entries):
    return Element((len(entries),), [np.diag(entries)])


def proj(*entries):
    return Projection.of(diag(*entries))


class TestEvaluate:
    def test_normalized_trace(self):
        mu = TraceForm(Element.identity((3,)) / 3)
        assert mu(proj(1, 0, 0)) == pytest.approx(1 / 3)

    def test_zero_projection(self):
        mu = TraceForm(random_selfadjoint((3, 2), seed=1))
        assert mu(Element.zeros((3, 2))) == 0

    def test_frame2_cubic(self):
        mu = cubic_measure()
        # 1/2 + 1/2 * 1**3 and 1/2 + 1/2 * 0**3
        assert mu(bloch_projection((0, 0, 1))) == pytest.approx(1.0, abs=1e-15)
        assert mu(bloch_projection((1, 0, 0))) == pytest.approx(0.5, abs=1e-15)
        assert mu(Element.identity((2,))) == 1.0
        assert mu(Element.zeros((2,))) == 0

    def test_frame2_wrong_shape(self):
        with pytest.raises(RepresentationError):
            cubic_measure()(proj(1, 0, 0))

    def test_frame2_rejects_even_powers(self):
        with pytest.raises(RepresentationError):
            Frame2.poly_nz(1.0, [0, 0, 1])

    def test_table_lookup_and_miss(self):
        p = proj(1, 0, 0)
        mu = Table((3,), [(p, 0.25)])
        assert mu(proj(1, 0, 0)) == 0.25
        with pytest.raises(UnevaluableError):
            mu(proj(0, 1, 0))

    def test_table_key_absorbs_roundoff(self):
        p = proj(1, 0, 0)
        jitter = Element((3,), [p.blocks[0] + 1e-15])
        assert canonical_key(p) == canonical_key(jitter)

    def test_table_oracle(self):
        mu = Table.trace_power((3,), 2)
        assert mu(proj(1, 1, 0)) == 4

    def test_vector_measure(self):
        rhos = [random_selfadjoint((3,), seed=s) for s in range(2)]
        m = VectorMeasure([TraceForm(r) for r in rhos])
        p = random_projection((3,), [2], seed=0)
        assert np.allclose(m(p), [np.trace(r.blocks[0] @ p.blocks[0]) for r in rhos])


class TestAdditivity:
    @pytest.mark.parametrize("shape", [(3,), (2,), (1, 3), (4, 2)])
    def test_trace_form(self, shape):
        rep = additivity_check(TraceForm(random_selfadjoint(shape, seed=3)), 200, seed=1)
        assert rep.max_violation <= 1e-9
        assert rep.passed and rep.skipped == 0

    def test_frame2_antipodal(self):
        rep = additivity_check(cubic_measure(), 200, seed=2)
        assert rep.max_violation <= 1e-12
        assert rep.bound_estimate == pytest.approx(1.0)

    def test_trace_squared(self):
        # two orthogonal rank-one projections: (1+1)**2 = 4 but 1 + 1 = 2
        rep = additivity_check(Table.trace_power((3,), 2), 200, seed=0)
        assert rep.max_violation >= 0.5
        p, q = rep.worst_pair
        assert (p @ q).op_norm() <= 1e-12

    def test_unevaluable_skipped(self):
        rep = additivity_check(Table((3,)), 10, seed=0)
        assert rep.skipped == 10 and rep.worst_pair is None

    def test_deterministic(self):
        a = additivity_check(cubic_measure(), 50, seed=9)
        b = additivity_check(cubic_measure(), 50, seed=9)
        assert a.max_violation == b.max_violation

    @settings(max_examples=25, deadline=None)
    @given(coeffs=st.lists(st.floats(-1, 1), max_size=4), c=st.floats(-2, 2), seed=seeds)
    def test_any_frame2_additive(self, coeffs, c, seed):
        rep = additivity_check(qubit_frame_measure(c, coeffs), 30, seed=seed)
        assert rep.max_violation <= 1e-12


class TestVariationAlpha:
    def test_signed_diagonal(self):
        mu = TraceForm(diag(0.5, -0.5, 0))
        assert variation_and_alpha(mu, Element.identity((3,))) == pytest.approx((0.5, 0.5))

    def test_compressed(self):
        # compression to span(e2, e3) has spectrum {-0.5, 0}
        mu = TraceForm(diag(0.5, -0.5, 0))
        assert variation_and_alpha(mu, proj(0, 1, 1)) == pytest.approx((0.5, 0.0))

    def test_positive(self):
        z = random_selfadjoint((4,), seed=5)
        mu = TraceForm(z @ z)
        v, a = variation_and_alpha(mu, Element.identity((4,)))
        assert v == pytest.approx(a) and a == pytest.approx(mu(Element.identity((4,))).real)

    def test_rejects_complex(self):
        with pytest.raises(UnsupportedMeasureError):
            variation_and_alpha(TraceForm(1j * diag(1, 0)), Element.identity((2,)))

    def test_rejects_frame2(self):
        with pytest.raises(UnsupportedMeasureError):
            alpha_one(cubic_measure())

    def test_split_complex(self):
        rho = Element((2,), [[[1, 2j], [0, -1]]])
        re, im = real_part(TraceForm(rho)), imag_part(TraceForm(rho))
        p = random_projection((2,), [1], seed=0)
        assert TraceForm(rho)(p) == pytest.approx(re(p) + 1j * im(p))

    @settings(max_examples=50, deadline=None)
    @given(shape=shapes, seed=seeds)
    def test_two_alpha_minus_total_is_trace_norm(self, shape, seed):
        rho = random_selfadjoint(shape, seed)
        mu = TraceForm(rho)
        a1 = alpha_one(mu)
        total = mu(Element.identity(shape)).real
        tn = sum(np.abs(np.linalg.eigvalsh(b)).sum() for b in rho.blocks)
        assert abs(2 * a1 - total - tn) <= 1e-9

    @settings(max_examples=30, deadline=None)
    @given(shape=shapes, seed=seeds)
    def test_alpha_is_sup_over_contractions(self, shape, seed):
        rho = random_selfadjoint(shape, seed)
        mu = TraceForm(rho)
        a1 = alpha_one(mu)
        assert abs(mu(positive_spectral_projection(rho)).real - a1) <= 1e-9
        rng = np.random.default_rng(seed)
        for _ in range(20):
            blocks = []
            for n in shape:
                u = random_unitary(n, rng)
                blocks.append((u * rng.uniform(0, 1, n)) @ u.conj().T)
            x = Element(shape, blocks)
            assert mu(x).real <= a1 + 1e-9

    @settings(max_examples=30, deadline=None)
    @given(shape=shapes, seed=seeds)
    def test_monotone_variation(self, shape, seed):
        rng = np.random.default_rng(seed)
        mu = TraceForm(random_selfadjoint(shape, rng))
        big, small = [], []
        for n in shape:
            r = int(rng.integers(0, n + 1))
            k = int(rng.integers(0, r + 1))
            basis = random_unitary(n, rng)[:, :r]
            big.append(basis @ basis.conj().T)
            sub = basis[:, :k]
            small.append(sub @ sub.conj().T)
        q, p = Projection(shape, big), Projection(shape, small)
        assert variation_and_alpha(mu, p).variation <= variation_and_alpha(mu, q).variation + 1e-12


class TestPositivityShift:
    def test_signed_diagonal(self):
        shifted = positivity_shift(TraceForm(diag(0.5, -0.5, 0)))
        assert shifted.rho.allclose(diag(0, 1, 0.5), 1e-12)

    def test_zero(self):
        assert positivity_shift(TraceForm(Element.zeros((3,)))).rho.op_norm() == 0

    def test_identity(self):
        # alpha(1) = sum of positive eigenvalues = 3
        assert positivity_shift(TraceForm(Element.identity((3,)))).rho.allclose(
            2 * Element.identity((3,)), 1e-12)

    def test_single_block_only(self):
        with pytest.raises(UnsupportedMeasureError):
            positivity_shift(TraceForm(Element.identity((1, 3))))


class TestCentreNormalize:
    def test_traceless(self):
        out = centre_normalize(TraceForm(diag(1, -1, 0)))
        assert out.sigma == pytest.approx([0])
        assert out.scale == pytest.approx(2)
        assert out.normalized.rho.allclose(diag(0.5, -0.5, 0), 1e-12)
        assert alpha_one(out.normalized) == pytest.approx(0.5, abs=1e-12)

    def test_central_is_degenerate(self):
        with pytest.raises(DegenerateMeasureError):
            centre_normalize(TraceForm(Element.identity((3,))))

    def test_two_blocks(self):
        rho = Element((3, 3), [np.diag([1, 0, 0]), np.zeros((3, 3))])
        out = centre_normalize(TraceForm(rho))
        assert out.sigma == pytest.approx([1 / 3, 0])
        assert out.scale == pytest.approx(4 / 3)
        centered = out.normalized.rho * out.scale
        assert np.allclose(centered.blocks[0], np.diag([2 / 3, -1 / 3, -1 / 3]))
        assert alpha_one(out.normalized) == pytest.approx(0.5, abs=1e-9)
