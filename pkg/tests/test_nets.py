"""Net functions: algebra operations, derivatives, evaluation, and
classification of generalized numbers."""

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfalg.errors import GridMismatchError
from gfalg.nets import (EpsilonLadder, GeneralizedNumber, GeneralizedPoint,
                        UltradiffOperator, apply_ultradiff,
                        classify_generalized_number, combine, constant_embed,
                        point_value, scale, spectral_derivative, window_net)
from gfalg.weights import WeightSequence, assoc
from gfalg.grids import GridSpec


@pytest.fixture(scope="module")
def small_rig():
    grid = GridSpec(1, 10.0, 1024)
    ladder = EpsilonLadder(2.0 ** -3, 0.5, 8)
    seq = WeightSequence.gevrey(2.0)
    return grid, ladder, seq


def embed_callable(f, rig):
    grid, ladder, seq = rig
    return constant_embed(f, ladder, grid, weight=seq)


class TestLadder:
    def test_values_geometric(self):
        lad = EpsilonLadder(0.125, 0.5, 8)
        assert np.allclose(lad.values, 0.125 * 0.5 ** np.arange(8))
        assert lad.eps_min == pytest.approx(2.0 ** -10)

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            EpsilonLadder(0.125, 0.5, 4)

    def test_json_roundtrip(self):
        lad = EpsilonLadder(0.25, 0.5, 6)
        assert EpsilonLadder.from_json(lad.to_json()) == lad


class TestRingAxioms:
    """The frames form a commutative ring under pointwise operations."""

    def _three(self, rig):
        a = embed_callable(lambda x: np.sin(x), rig)
        b = embed_callable(lambda x: np.exp(-x ** 2), rig)
        c = embed_callable(lambda x: x / (1 + x ** 2), rig)
        return a, b, c

    def test_add_commutes(self, small_rig):
        a, b, _ = self._three(small_rig)
        lhs = combine(a, b, "add")
        rhs = combine(b, a, "add")
        assert all(np.array_equal(x, y)
                   for x, y in zip(lhs.frames, rhs.frames))

    def test_mul_commutes(self, small_rig):
        a, b, _ = self._three(small_rig)
        lhs = combine(a, b, "mul")
        rhs = combine(b, a, "mul")
        assert all(np.array_equal(x, y)
                   for x, y in zip(lhs.frames, rhs.frames))

    def test_mul_associative(self, small_rig):
        a, b, c = self._three(small_rig)
        lhs = combine(combine(a, b, "mul"), c, "mul")
        rhs = combine(a, combine(b, c, "mul"), "mul")
        assert all(np.allclose(x, y, atol=1e-15)
                   for x, y in zip(lhs.frames, rhs.frames))

    def test_distributive(self, small_rig):
        a, b, c = self._three(small_rig)
        lhs = combine(a, combine(b, c, "add"), "mul")
        rhs = combine(combine(a, b, "mul"), combine(a, c, "mul"), "add")
        assert all(np.allclose(x, y, atol=1e-14)
                   for x, y in zip(lhs.frames, rhs.frames))

    def test_sub_is_additive_inverse(self, small_rig):
        a, _, _ = self._three(small_rig)
        z = combine(a, a, "sub")
        assert all(np.all(fr == 0) for fr in z.frames)

    def test_scale_linear(self, small_rig):
        a, b, _ = self._three(small_rig)
        lhs = scale(combine(a, b, "add"), 2.5)
        rhs = combine(scale(a, 2.5), scale(b, 2.5), "add")
        assert all(np.allclose(x, y) for x, y in zip(lhs.frames, rhs.frames))

    @given(c=st.floats(min_value=-10, max_value=10, allow_nan=False))
    @settings(max_examples=20, deadline=None)
    def test_scale_matches_pointwise(self, small_rig, c):
        a = embed_callable(lambda x: np.cos(x), small_rig)
        s = scale(a, c)
        assert np.allclose(s.frames[0], c * a.frames[0])

    def test_mismatched_grids_rejected(self, small_rig):
        grid, ladder, seq = small_rig
        a = embed_callable(lambda x: x, small_rig)
        other = constant_embed(lambda x: x, ladder, GridSpec(1, 10.0, 512),
                               weight=seq)
        with pytest.raises(GridMismatchError):
            combine(a, other, "add")


class TestDerivatives:
    def test_gaussian_first_derivative(self, small_rig):
        grid, _, _ = small_rig
        a = embed_callable(lambda x: np.exp(-x ** 2), small_rig)
        d = spectral_derivative(a, 1)
        x = grid.axis()
        # D = -i d/dx, so D f = -i * (-2x e^{-x^2})
        oracle = -1j * (-2.0 * x) * np.exp(-x ** 2)
        assert np.max(np.abs(d.frames[0] - oracle)) < 1e-12

    def test_second_derivative_is_real_negative_laplacian(self, small_rig):
        grid, _, _ = small_rig
        a = embed_callable(lambda x: np.exp(-x ** 2), small_rig)
        d2 = spectral_derivative(a, 2)
        x = grid.axis()
        # D^2 = -d^2/dx^2
        oracle = -(4 * x ** 2 - 2) * np.exp(-x ** 2)
        assert np.max(np.abs(d2.frames[0] - oracle)) < 1e-11

    def test_derivative_linear(self, small_rig):
        a = embed_callable(lambda x: np.exp(-x ** 2), small_rig)
        b = embed_callable(lambda x: np.exp(-(x - 1) ** 2), small_rig)
        lhs = spectral_derivative(combine(a, b, "add"), 1)
        rhs = combine(spectral_derivative(a, 1), spectral_derivative(b, 1),
                      "add")
        assert all(np.allclose(x, y, atol=1e-12)
                   for x, y in zip(lhs.frames, rhs.frames))

    def test_leibniz_rule(self, small_rig):
        grid, _, _ = small_rig
        a = embed_callable(lambda x: np.exp(-x ** 2), small_rig)
        b = embed_callable(lambda x: np.exp(-0.5 * (x - 1) ** 2), small_rig)
        lhs = spectral_derivative(combine(a, b, "mul"), 1)
        rhs = combine(combine(spectral_derivative(a, 1), b, "mul"),
                      combine(a, spectral_derivative(b, 1), "mul"), "add")
        assert all(np.max(np.abs(x - y)) < 1e-10
                   for x, y in zip(lhs.frames, rhs.frames))


class TestUltradiffOperator:
    def test_coefficient_bound_enforced(self, small_rig):
        _, _, seq = small_rig
        with pytest.raises(ValueError):
            UltradiffOperator({(4,): 100.0}, seq, bound_c=1.0, bound_l=1.0)

    def test_admissible_coefficients_accepted(self, small_rig):
        _, _, seq = small_rig
        coeffs = {(k,): np.exp(-seq.log_m[k]) for k in range(5)}
        op = UltradiffOperator(coeffs, seq, bound_c=1.0, bound_l=1.0)
        assert op.n_max == 4

    def test_matches_manual_symbol_sum(self, small_rig):
        grid, _, seq = small_rig
        a = embed_callable(lambda x: np.exp(-x ** 2), small_rig)
        coeffs = {(0,): 1.0, (2,): np.exp(-seq.log_m[2])}
        op = UltradiffOperator(coeffs, seq, bound_c=1.0, bound_l=1.0)
        got = apply_ultradiff(op, a)
        manual = combine(a, scale(spectral_derivative(a, 2),
                                  np.exp(-seq.log_m[2])), "add")
        assert all(np.max(np.abs(x - y)) < 1e-11
                   for x, y in zip(got.frames, manual.frames))

    def test_order_cap(self, small_rig):
        _, _, seq = small_rig
        deep = WeightSequence.gevrey(2.0, 256)
        with pytest.raises(ValueError):
            UltradiffOperator({(65,): 1e-300}, deep, bound_c=1.0,
                              bound_l=1.0)


class TestPointValues:
    def test_fixed_point_linear_interp(self, small_rig):
        grid, ladder, _ = small_rig
        a = embed_callable(lambda x: np.sin(x), small_rig)
        pts = np.full((ladder.count, 1), 0.7)
        vals = point_value(a, GeneralizedPoint(ladder, pts, (0.0, 1.0)))
        assert np.allclose(vals.values, np.sin(0.7), atol=1e-5)

    def test_moving_point(self, small_rig):
        grid, ladder, _ = small_rig
        a = embed_callable(lambda x: x ** 2, small_rig)
        pts = ladder.values.reshape(-1, 1)  # x_j = eps_j
        vals = point_value(a, GeneralizedPoint(ladder, pts, (0.0, 1.0)))
        assert np.allclose(vals.values, ladder.values ** 2, atol=1e-4)

    def test_point_outside_box_rejected(self, small_rig):
        _, ladder, _ = small_rig
        with pytest.raises(ValueError):
            GeneralizedPoint(ladder, np.full((ladder.count, 1), 3.0),
                             (0.0, 1.0))


class TestNumberClassification:
    def _number(self, ladder, fn):
        return GeneralizedNumber(ladder, np.array(
            [fn(e) for e in ladder.values], dtype=complex))

    def test_bounded_is_moderate_not_negligible(self, small_rig):
        _, ladder, seq = small_rig
        v = classify_generalized_number(self._number(ladder, lambda e: 3.0),
                                        seq)
        assert v.verdict == "moderate"

    def test_scale_growth_moderate(self, small_rig):
        _, ladder, seq = small_rig
        grow = lambda e: np.exp(assoc(seq, 1.0 / e, on_saturation="clip"))
        v = classify_generalized_number(self._number(ladder, grow), seq)
        assert v.moderate and not v.negligible
        assert v.k_moderate == pytest.approx(1.0, rel=0.2)

    def test_scale_decay_negligible_roumieu_only(self, small_rig):
        # exp(-M(1/eps)) sits exactly on the k=1 decay scale: enough for
        # the some-k (Roumieu) test, not for the every-k (Beurling) one
        _, ladder, seq = small_rig
        dec = lambda e: np.exp(-assoc(seq, 1.0 / e, on_saturation="clip"))
        v = classify_generalized_number(self._number(ladder, dec), seq,
                                        "roumieu")
        assert v.negligible
        v = classify_generalized_number(self._number(ladder, dec), seq,
                                        "beurling")
        assert v.moderate and not v.negligible

    def test_exponential_decay_negligible_both_modes(self, small_rig):
        # exp(-1/eps) falls below exp(-M(k/eps)) for every k (gevrey scales
        # grow like sqrt(k/eps) in the exponent)
        _, ladder, seq = small_rig
        dec = lambda e: np.exp(-1.0 / e)
        for mode in ("beurling", "roumieu"):
            v = classify_generalized_number(self._number(ladder, dec), seq,
                                            mode)
            assert v.negligible

    def test_power_decay_not_negligible(self, small_rig):
        # 1/eps^2 decay is too slow for sequence-scale negligibility
        _, ladder, seq = small_rig
        v = classify_generalized_number(self._number(ladder, lambda e: e**2),
                                        seq, "beurling")
        assert v.moderate and not v.negligible

    def test_fast_stretched_growth_neither(self, small_rig):
        _, ladder, seq = small_rig
        wild = lambda e: np.exp((1.0 / e) ** 0.75)
        v = classify_generalized_number(self._number(ladder, wild), seq)
        assert not v.negligible and not v.moderate

    def test_zero_is_negligible(self, small_rig):
        _, ladder, seq = small_rig
        v = classify_generalized_number(self._number(ladder, lambda e: 0.0),
                                        seq)
        assert v.negligible

    def test_nonfinite_rejected(self, small_rig):
        _, ladder, _ = small_rig
        with pytest.raises(ValueError):
            GeneralizedNumber(ladder, np.array(
                [np.inf] * ladder.count, dtype=complex))


class TestWindowing:
    def test_window_preserves_core_and_kills_edge(self, small_rig):
        grid, _, _ = small_rig
        a = embed_callable(lambda x: np.ones_like(x), small_rig)
        w = window_net(a, 0.0, 5.0)
        x = grid.axis()
        assert np.all(w.frames[0][np.abs(x) <= 2.5] == 1.0)
        assert np.all(w.frames[0][np.abs(x) >= 5.0] == 0.0)
