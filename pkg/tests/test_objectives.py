import numpy as np
import pytest

import oracles
from alphacap.errors import AlphaNearOne, DegenerateNormalizer, DimensionMismatch, SupportViolation
from alphacap.measures import arimoto_mi, shannon_mi, sibson_mi
from alphacap.objectives import ALPHA_KINDS, ObjectiveKind, eval_objective, optimal_p, optimal_q
from alphacap.simplex import ReverseConditional, tilt, tilt_conditional, uniform
from conftest import bsc, random_channel, random_point

K = ObjectiveKind
ALPHAS = [0.3, 0.5, 2.0, 5.0]
MI = {K.S1: sibson_mi, K.S2: sibson_mi, K.A1: arimoto_mi, K.A2: arimoto_mi}


def random_q(rng, n_in, n_out):
    return rng.dirichlet(np.ones(n_in), size=n_out).T


def perturb(rng, Q, weight=0.1):
    noise = random_q(rng, *Q.shape)
    return (1 - weight) * Q + weight * noise


def instances(rng, count):
    for _ in range(count):
        nx, ny = rng.integers(2, 6, size=2)
        yield random_point(rng, nx), random_channel(rng, nx, ny), float(rng.choice(ALPHAS))


class TestKind:
    def test_properties(self):
        assert not K.SHANNON.is_alpha
        assert all(k.is_alpha for k in ALPHA_KINDS)
        assert [k.tilts_q for k in ALPHA_KINDS] == [False, True, False, True]
        assert [k.family for k in ALPHA_KINDS] == ["S", "S", "A", "A"]

    def test_from_string(self):
        assert ObjectiveKind("s2") is K.S2

    @pytest.mark.parametrize("kind", ALPHA_KINDS)
    def test_alpha_one_rejected(self, kind):
        with pytest.raises(AlphaNearOne):
            optimal_q(kind, uniform(2), np.eye(2), 1.0)


class TestEval:
    def test_shannon_independent_q(self, rng):
        p, W = random_point(rng, 3), random_channel(rng, 3, 4)
        Q = np.repeat(p[:, None], 4, axis=1)
        assert eval_objective(K.SHANNON, p, Q, W) == pytest.approx(0.0, abs=1e-15)

    def test_s1_nakagawa_uniform(self, nakagawa5):
        p = uniform(5)
        q = optimal_q(K.S1, p, nakagawa5, 1.5)
        assert eval_objective(K.S1, p, q, nakagawa5, 1.5) == pytest.approx(0.229523, abs=5e-7)

    def test_matches_loop(self, rng):
        for p, W, a in instances(rng, 30):
            Q = random_q(rng, len(p), W.n_out)
            Wl, Ql = W.matrix.tolist(), Q.tolist()
            assert eval_objective(K.S1, p, Q, W, a) == pytest.approx(oracles.f_sibson(p, Ql, Wl, a), abs=1e-12)
            assert eval_objective(K.A1, p, Q, W, a) == pytest.approx(oracles.f_arimoto(p, Ql, Wl, a), abs=1e-12)

    def test_tilted_input_identity(self, rng):
        for p, W, a in instances(rng, 100):
            Q = random_q(rng, len(p), W.n_out)
            lhs = eval_objective(K.A1, p, Q, W, a)
            rhs = eval_objective(K.S1, tilt(p, a), Q, W, a)
            assert abs(lhs - rhs) <= 1e-12

    def test_tilde_identities(self, rng):
        for p, W, a in instances(rng, 50):
            Q = random_q(rng, len(p), W.n_out)
            Qt = tilt_conditional(Q, a)
            assert eval_objective(K.S2, p, Q, W, a) == eval_objective(K.S1, p, Qt, W, a)
            assert eval_objective(K.A2, p, Q, W, a) == eval_objective(K.A1, p, Qt, W, a)

    def test_shannon_support_violation(self):
        Q = np.array([[1.0, 1.0], [0.0, 0.0]])
        with pytest.raises(SupportViolation):
            eval_objective(K.SHANNON, uniform(2), Q, bsc(0.1))

    def test_power_support_violation_below_one(self):
        Q = np.array([[1.0, 1.0], [0.0, 0.0]])
        with pytest.raises(SupportViolation):
            eval_objective(K.S1, uniform(2), Q, bsc(0.1), 0.5)

    def test_zero_channel_entry_skipped(self):
        # q vanishes only where W does
        Q = np.array([[1.0, 0.0], [0.0, 1.0]])
        val = eval_objective(K.S1, uniform(2), Q, np.eye(2), 0.5)
        assert np.isfinite(val)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            eval_objective(K.S1, uniform(2), np.full((2, 3), 0.5), np.eye(2), 2.0)


class TestOptimalQ:
    def test_shannon_bsc_posterior(self):
        q = optimal_q(K.SHANNON, uniform(2), bsc(0.1))
        np.testing.assert_allclose(q.matrix, [[0.9, 0.1], [0.1, 0.9]], atol=1e-15)

    def test_s1_bsc(self):
        q = optimal_q(K.S1, uniform(2), bsc(0.1), 2.0)
        hi, lo = 0.81 / 0.82, 0.01 / 0.82
        np.testing.assert_allclose(q.matrix, [[hi, lo], [lo, hi]], atol=1e-15)

    def test_a2_is_posterior(self, rng):
        for p, W, a in instances(rng, 20):
            np.testing.assert_array_equal(optimal_q(K.A2, p, W, a).matrix,
                                          optimal_q(K.SHANNON, p, W).matrix)

    @pytest.mark.parametrize("kind, p_power, w_power", [
        (K.S1, 1, "a"), (K.S2, "1/a", 1), (K.A1, "a", "a"), (K.A2, 1, 1),
    ])
    def test_proportional_forms(self, kind, p_power, w_power, rng):
        p, W = random_point(rng, 4), random_channel(rng, 4, 3).matrix
        a = 2.5
        ep = {1: 1.0, "a": a, "1/a": 1 / a}
        weights = p[:, None] ** ep[p_power] * W ** ep[w_power]
        np.testing.assert_allclose(optimal_q(kind, p, W, a).matrix,
                                   weights / weights.sum(axis=0), atol=1e-13)

    def test_unreachable_column(self):
        W = np.array([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5]])
        q = optimal_q(K.S1, [1.0, 0.0], W, 2.0)
        np.testing.assert_array_equal(q.unreachable, [False, True, True])
        np.testing.assert_allclose(q.matrix[:, 1:], 0.5)
        assert not np.any(np.isnan(q.matrix))

    def test_unreachable_survives_tilt(self):
        W = np.array([[1.0, 0.0], [1.0, 0.0]])
        q = optimal_q(K.SHANNON, uniform(2), W)
        assert q.unreachable.tolist() == [False, True]
        assert tilt_conditional(q, 2.0).unreachable.tolist() == [False, True]

    def test_large_alpha_finite(self):
        q = optimal_q(K.A1, [0.7, 0.3], bsc(0.2), 500.0)
        assert np.all(np.isfinite(q.matrix))


class TestOptimalP:
    def test_shannon_symmetric(self):
        W = bsc(0.2)
        q = optimal_q(K.SHANNON, uniform(2), W)
        np.testing.assert_allclose(optimal_p(K.SHANNON, q, W).probs, [0.5, 0.5], atol=1e-15)

    def test_s1_matches_loop_step(self, nakagawa5):
        q = optimal_q(K.S1, uniform(5), nakagawa5, 1.5)
        expect = oracles.s1_step([0.2] * 5, nakagawa5.matrix.tolist(), 1.5)
        p1 = optimal_p(K.S1, q, nakagawa5, 1.5)
        np.testing.assert_allclose(p1.probs, expect, atol=1e-14)

    def test_s1_step_raises_value(self, nakagawa5):
        a = 1.5
        p = uniform(5)
        q = optimal_q(K.S1, p, nakagawa5, a)
        f0 = eval_objective(K.S1, p, q, nakagawa5, a)
        values = [f0]
        for _ in range(11):
            p = optimal_p(K.S1, q, nakagawa5, a)
            q = optimal_q(K.S1, p, nakagawa5, a)
            values.append(eval_objective(K.S1, p, q, nakagawa5, a))
        assert np.all(np.diff(values) >= -1e-15)
        # eleventh double update lands on the tabulated k=10 value
        assert values[11] == pytest.approx(0.26389, abs=5e-5)

    def test_s2_is_s1_substitution(self, rng):
        for _ in range(100):
            nx, ny = rng.integers(2, 6, size=2)
            W = random_channel(rng, nx, ny)
            Q = random_q(rng, nx, ny)
            a = float(rng.choice(ALPHAS))
            np.testing.assert_allclose(optimal_p(K.S2, Q, W, a).probs,
                                       optimal_p(K.S1, tilt_conditional(Q, a), W, a).probs,
                                       atol=1e-12)

    @pytest.mark.parametrize("kind, outer", [(K.S1, "a/(a-1)"), (K.A1, "1/(a-1)")])
    def test_closed_forms(self, kind, outer, rng):
        W, Q, a = random_channel(rng, 3, 4).matrix, random_q(rng, 3, 4), 0.5
        inner = np.sum(W * Q ** ((a - 1) / a), axis=1)
        w = inner ** (a / (a - 1) if outer == "a/(a-1)" else 1 / (a - 1))
        np.testing.assert_allclose(optimal_p(kind, Q, W, a).probs, w / w.sum(), atol=1e-13)

    def test_shannon_closed_form(self, rng):
        W, Q = random_channel(rng, 3, 4).matrix, random_q(rng, 3, 4)
        w = np.prod(Q ** W, axis=1)
        np.testing.assert_allclose(optimal_p(K.SHANNON, Q, W).probs, w / w.sum(), atol=1e-14)

    def test_near_one_no_overflow(self, rng):
        W, Q = random_channel(rng, 3, 3), random_q(rng, 3, 3)
        p = optimal_p(K.S1, Q, W, 1.0 + 1e-7)
        assert np.all(np.isfinite(p.probs)) and p.probs.sum() == pytest.approx(1.0)

    def test_support_violation(self):
        Q = np.array([[1.0, 1.0], [0.0, 0.0]])
        with pytest.raises(SupportViolation):
            optimal_p(K.SHANNON, Q, bsc(0.1))
        with pytest.raises(SupportViolation):
            optimal_p(K.A1, Q, bsc(0.1), 0.5)

    def test_degenerate_normalizer(self):
        # alpha > 1 with q = 0 everywhere W is positive zeroes every weight
        Q = np.zeros((2, 2))
        with pytest.raises(DegenerateNormalizer):
            optimal_p(K.S1, Q, np.eye(2), 2.0)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            optimal_p(K.S1, np.full((3, 2), 1 / 3), np.eye(2), 2.0)


def test_variational_identities(rng):
    for _ in range(50):
        nx, ny = rng.integers(2, 6, size=2)
        p, W = random_point(rng, nx), random_channel(rng, nx, ny)
        assert abs(eval_objective(K.SHANNON, p, optimal_q(K.SHANNON, p, W), W)
                   - shannon_mi(p, W)) <= 1e-12
        for a in ALPHAS:
            for kind in ALPHA_KINDS:
                val = eval_objective(kind, p, optimal_q(kind, p, W, a), W, a)
                assert abs(val - MI[kind](p, W, a)) <= 1e-12, (kind, a)


def test_q_optimality_under_perturbation(rng):
    for _ in range(50):
        p, W = random_point(rng, 3), random_channel(rng, 3, 4)
        for a in ALPHAS:
            for kind in (K.SHANNON,) + ALPHA_KINDS:
                q_opt = optimal_q(kind, p, W, a)
                best = eval_objective(kind, p, q_opt, W, a)
                other = eval_objective(kind, p, perturb(rng, q_opt.matrix), W, a)
                assert other <= best + 1e-12


def test_p_optimality_under_perturbation(rng):
    for _ in range(50):
        W, Q = random_channel(rng, 3, 4), random_q(rng, 3, 4)
        for a in ALPHAS:
            for kind in (K.SHANNON,) + ALPHA_KINDS:
                p_opt = optimal_p(kind, Q, W, a)
                best = eval_objective(kind, p_opt, Q, W, a)
                p_other = 0.9 * p_opt.probs + 0.1 * random_point(rng, 3)
                assert eval_objective(kind, p_other, Q, W, a) <= best + 1e-12


def test_reverse_conditional_columns():
    q = ReverseConditional.from_columns([[0.2, 0.8], [0.5, 0.5], [1.0, 0.0]])
    assert q.matrix.shape == (2, 3)
    np.testing.assert_array_equal(q.column(2).probs, [1.0, 0.0])
