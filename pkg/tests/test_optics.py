import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mziqfi.closed_form import moments_coherent, moments_displaced_squeezed
from mziqfi.fock import (
    FockVector,
    Truncation,
    TruncationError,
    TwoModeOperator,
    annihilator,
    apply,
    commutator,
    creator,
    expect,
    number_op,
    su2_generators,
)
from mziqfi.optics import (
    InputSpec,
    PhasePair,
    auto_truncation,
    beam_splitter,
    displacement,
    hermitian_expm,
    mzi_output,
    phase_shift,
    prepare_input,
    squeeze,
)

from conftest import REF_ALPHA1, REF_ALPHA2, REF_R


def interior_block(mat, trunc):
    keep = trunc.interior()
    return mat[np.ix_(keep, keep)]


def unitarity_defect(u: TwoModeOperator) -> float:
    eye = np.eye(u.trunc.dim)
    return np.max(np.abs(interior_block(u.mat.conj().T @ u.mat - eye, u.trunc)))


class TestDisplacement:
    def test_zero_is_identity(self):
        t = Truncation(6, 6)
        assert np.allclose(displacement(1, 0, t).mat, np.eye(t.dim), atol=1e-14)

    @pytest.mark.parametrize("alpha", [1.0, 0.6 + 0.8j, -0.3j])
    def test_shifts_annihilator(self, alpha):
        t = Truncation(30, 2)
        d = displacement(1, alpha, t)
        state = apply(d, FockVector.vacuum(t))
        assert abs(expect(state, annihilator(1, t)) - alpha) < 1e-8

    def test_inverse(self):
        t = Truncation(30, 3)
        prod = displacement(1, 0.7 - 0.4j, t).mat @ displacement(1, -0.7 + 0.4j, t).mat
        # lowest shells only: edge distortion of the cut ladder reaches a few levels down
        n1 = np.indices(t.shape)[0].ravel()
        keep = n1 < 15
        assert np.max(np.abs((prod - np.eye(t.dim))[np.ix_(keep, keep)])) < 1e-8

    @pytest.mark.parametrize("op", [lambda t: displacement(2, 0.5j, t), lambda t: squeeze(1, 0.7, t)])
    def test_unitary(self, op):
        u = op(Truncation(20, 20))
        assert unitarity_defect(u) <= 1e-9
        # exp(-i G) with G Hermitian is unitary on the whole cut space, edge included
        assert np.max(np.abs(u.mat.conj().T @ u.mat - np.eye(u.trunc.dim))) < 1e-12


class TestSqueeze:
    def test_zero_is_identity(self):
        t = Truncation(5, 5)
        assert np.allclose(squeeze(2, 0.0, t).mat, np.eye(t.dim), atol=1e-14)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            squeeze(1, -0.1, Truncation(4, 4))

    @pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
    def test_vacuum_moments(self, r):
        t = Truncation(40, 2)
        state = apply(squeeze(1, r, t), FockVector.vacuum(t))
        a = annihilator(1, t)
        assert abs(expect(state, number_op(1, t)) - math.sinh(r) ** 2) < 1e-6
        assert abs(expect(state, a @ a) + math.sinh(2 * r) / 2) < 1e-6

    def test_bogoliubov_relation(self):
        # S|n> spreads to ~n e^{2r} levels, so the relation is only checked on
        # a low block whose images stay well inside the ladder
        r = 0.5
        t = Truncation(60, 2)
        s = squeeze(1, r, t)
        a, ad = annihilator(1, t), creator(1, t)
        lhs = (s.dag @ a @ s).mat
        rhs = math.cosh(r) * a.mat - math.sinh(r) * ad.mat
        n1 = np.indices(t.shape)[0].ravel()
        keep = n1 <= 8
        assert np.max(np.abs((lhs - rhs)[np.ix_(keep, keep)])) < 1e-8


class TestBeamSplitter:
    def test_unitary(self):
        t = Truncation(7, 6)
        u = beam_splitter(t)
        assert np.max(np.abs(u.mat @ beam_splitter(t, dagger=True).mat - np.eye(t.dim))) < 1e-10

    def test_conserves_photon_number(self):
        t = Truncation(6, 6)
        assert np.max(np.abs(commutator(beam_splitter(t), number_op("total", t)).mat)) < 1e-10

    def test_single_photon_by_hand(self):
        # one-photon block: exp(-i pi/4 sigma_x) = (I - i sigma_x)/sqrt(2)
        t = Truncation(4, 4)
        out = apply(beam_splitter(t), FockVector.basis(1, 0, t))
        assert out.amps[1, 0] == pytest.approx(1 / math.sqrt(2))
        assert out.amps[0, 1] == pytest.approx(-1j / math.sqrt(2))
        assert np.sum(np.abs(out.amps) ** 2) == pytest.approx(1)

    def test_turns_j3_into_j2(self):
        t = Truncation(8, 8)
        u = beam_splitter(t).mat
        _, j2, j3 = su2_generators(t)
        assert np.max(np.abs(interior_block(u.conj().T @ j3.mat @ u - j2.mat, t))) < 1e-12


class TestPhaseShift:
    def test_zero(self):
        t = Truncation(4, 5)
        assert np.array_equal(phase_shift(PhasePair(0, 0), t).mat, np.eye(t.dim))

    @given(st.floats(-7, 7), st.floats(-7, 7))
    def test_factorizes_into_common_and_relative(self, phi1, phi2):
        t = Truncation(5, 4)
        pair = PhasePair(phi1, phi2)
        _, _, j3 = su2_generators(t)
        common = hermitian_expm(number_op("total", t), -0.5j * pair.plus)
        relative = hermitian_expm(j3, -1j * pair.minus)
        assert np.max(np.abs(common.mat @ relative.mat - phase_shift(pair, t).mat)) <= 1e-12

    def test_basis_phase(self):
        t = Truncation(4, 4)
        out = apply(phase_shift(PhasePair(0.3, -1.1), t), FockVector.basis(2, 3, t))
        assert out.amps[2, 3] == pytest.approx(np.exp(-1j * (0.3 * 2 - 1.1 * 3)))

    def test_plus_minus_roundtrip(self):
        p = PhasePair.from_plus_minus(0.7, -0.3)
        assert (p.plus, p.minus) == pytest.approx((0.7, -0.3))


class TestHermitianExpm:
    def test_zero_scale(self):
        t = Truncation(4, 4)
        j1, _, _ = su2_generators(t)
        assert np.allclose(hermitian_expm(j1, 0).mat, np.eye(t.dim))

    def test_number_phases(self):
        t = Truncation(4, 3)
        u = hermitian_expm(number_op("total", t), -0.7j)
        expected = np.exp(-0.7j * t.shells().ravel())
        assert np.allclose(np.diag(u.mat), expected)
        assert np.allclose(u.mat, np.diag(expected))

    def test_mode_swap(self):
        # one-photon block of 2 J2 is sigma_y; exp(-i pi/2 sigma_y) = -i sigma_y swaps |1,0> and |0,1>
        t = Truncation(4, 4)
        _, j2, _ = su2_generators(t)
        out = apply(hermitian_expm(j2.scaled(2.0), -0.5j * math.pi), FockVector.basis(1, 0, t))
        assert abs(out.amps[0, 1]) == pytest.approx(1)
        assert abs(out.amps[1, 0]) < 1e-15

    def test_rejects_non_hermitian(self):
        t = Truncation(3, 3)
        with pytest.raises(ValueError):
            hermitian_expm(annihilator(1, t), -1j)

    def test_non_conserving_generator(self):
        # displacement generator couples shells, exercising the full eigh path
        t = Truncation(12, 3)
        a = annihilator(1, t)
        gen = TwoModeOperator(1j * (0.3 * a.dag.mat - 0.3 * a.mat), t, hermitian_hint=True)
        assert np.allclose(hermitian_expm(gen, -1j).mat, displacement(1, 0.3, t).mat, atol=1e-13)


class TestPrepareInput:
    def test_vacuum(self):
        t = Truncation(6, 6)
        state = prepare_input(InputSpec(0, 0, 0, t))
        assert np.allclose(state.amps, FockVector.vacuum(t).amps)

    def test_mean_photons(self):
        t = Truncation(40, 40)
        state = prepare_input(InputSpec(0.5, 0.3, 0, t))
        assert abs(expect(state, number_op(1, t)) - (0.25 + math.sinh(0.3) ** 2)) < 1e-6

    def test_third_moment(self):
        alpha, r = 0.5, 0.3
        t = Truncation(40, 40)
        state = prepare_input(InputSpec(alpha, r, 0, t))
        ad = creator(1, t)
        got = expect(state, ad @ ad @ annihilator(1, t))
        want = 2 * alpha * math.sinh(r) ** 2 - alpha / 2 * math.sinh(2 * r) + alpha * alpha**2
        assert abs(got - want) < 1e-6

    def test_all_moments_at_reference(self, ref_state):
        t = ref_state.trunc
        for mode, m in ((1, moments_displaced_squeezed(REF_ALPHA1, REF_R)), (2, moments_coherent(REF_ALPHA2))):
            a, ad, n = annihilator(mode, t), creator(mode, t), number_op(mode, t)
            assert abs(expect(ref_state, a) - m.a_mean) < 1e-6
            assert abs(expect(ref_state, n) - m.n_mean) < 1e-6
            assert abs(expect(ref_state, a @ a) - m.aa) < 1e-6
            assert abs(expect(ref_state, ad @ ad @ a) - m.adad_a) < 1e-6
            assert abs(expect(ref_state, n @ n) - m.n2) < 1e-6

    def test_leakage_guard(self, ref_state):
        weights = ref_state.shell_weights()
        edge = min(ref_state.trunc.shape) - 1
        assert np.sum(weights[edge:]) <= ref_state.trunc.leak_tol
        assert abs(np.sum(weights) - 1) <= ref_state.trunc.leak_tol

    def test_too_small_truncation(self):
        with pytest.raises(TruncationError) as err:
            prepare_input(InputSpec(1.5, 0, 0, Truncation(4, 4)))
        assert err.value.trace

    def test_negative_r(self):
        with pytest.raises(ValueError):
            InputSpec(0, -0.2, 0)

    def test_resources(self):
        s = InputSpec(0.6 + 0.8j, 0.5, 2j)
        assert (s.n1, s.n2, s.ns) == pytest.approx((1.0, 4.0, math.sinh(0.5) ** 2))


class TestAutoTruncation:
    def test_grows_until_guard_passes(self):
        trunc, trace = auto_truncation(InputSpec(1.0, 0.6, 1.0))
        assert trace[-1][2] <= trunc.leak_tol
        assert all(leaked > trunc.leak_tol for _, _, leaked in trace[:-1])
        assert [d for d, _, _ in trace] == sorted(d for d, _, _ in trace)

    def test_result_is_truncation_independent(self):
        spec = InputSpec(0.8 - 0.3j, 0.5, 0.4j)
        trunc, _ = auto_truncation(spec)
        small = prepare_input(InputSpec(spec.alpha1, spec.r, spec.alpha2, trunc))
        big_t = Truncation(trunc.d1 + 16, trunc.d2 + 16)
        big = prepare_input(InputSpec(spec.alpha1, spec.r, spec.alpha2, big_t))
        n = lambda s: expect(s, number_op("total", s.trunc) @ number_op("total", s.trunc)).real
        assert abs(n(small) - n(big)) < 1e-6

    def test_gives_up_beyond_ceiling(self):
        with pytest.raises(TruncationError):
            auto_truncation(InputSpec(6.0, 1.5, 6.0))


def test_mzi_output_matches_operator_product(ref_state):
    t = ref_state.trunc
    pair = PhasePair(0.4, -0.9)
    u = beam_splitter(t, dagger=True).mat @ phase_shift(pair, t).mat @ beam_splitter(t).mat
    assert np.allclose(mzi_output(ref_state, pair).flat, u @ ref_state.flat, atol=1e-12)
