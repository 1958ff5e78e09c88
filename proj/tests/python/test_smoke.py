"""Smoke tests for the compiled extension."""

import math

import numpy as np
import pytest

import matchelicit as me


def test_solve_matching_diagonal():
    scores = np.array([[3.0, 0.0], [0.0, 4.0]])
    y = me.solve_matching(scores, me.MatchConstraints(1, 1, 1, 1))
    assert y.assign.tolist() == [[True, False], [False, True]]
    matrix = me.SuitabilityMatrix(scores)
    assert me.objective_value(y, matrix) == pytest.approx(7.0)


def test_check_feasible():
    assert me.check_feasible(300, 10, me.MatchConstraints(25, 35, 1, 1))
    assert not me.check_feasible(2, 2, me.MatchConstraints(0, 1, 2, 2))


def test_solver_agrees_with_brute_force():
    rng = np.random.default_rng(5)
    c = me.MatchConstraints(1, 2, 1, 2)
    for _ in range(20):
        scores = rng.normal(size=(4, 4))
        fast = me.solve_matching(scores, c)
        slow = me.brute_force_matching(scores, c)
        matrix = me.SuitabilityMatrix(scores)
        assert me.objective_value(fast, matrix) == pytest.approx(
            me.objective_value(slow, matrix), abs=1e-9
        )


def test_infeasible_raises():
    with pytest.raises(me.InfeasibleError):
        me.solve_matching(np.zeros((2, 2)), me.MatchConstraints(0, 1, 2, 2))


def test_entropies():
    assert me.bernoulli_entropy(0.5) == pytest.approx(math.log(2))
    assert me.gaussian_entropy(1.0) == pytest.approx(1.4189385332046727)


def test_bpmf_round_trip():
    matrix = me.generate_synthetic(8, 6, 1, 0.1, (-5.0, 5.0), 1.0, 3)
    observed = np.array(matrix.ground_truth)
    observed[0, 0] = False
    sm = me.SuitabilityMatrix(matrix.values, matrix.ground_truth, observed)

    config = me.ModelConfig()
    config.latent_dim = 1
    config.alpha = 10.0
    config.beta0_u = 1.0
    config.beta0_v = 1.0
    config.burn_in = 20
    config.num_collected = 10
    config.thinning = 1
    model = me.BpmfModel.fit(sm, config, me.RngStream(1))
    posterior = model.predictive_moments(sm)
    assert posterior.variance[0, 0] >= 1.0 / 10.0
    assert posterior.variance[1, 1] == pytest.approx(1e-3)
    assert posterior.mean[1, 1] == pytest.approx(sm.values[1, 1])

    draw = model.sample_score_matrix(sm, me.RngStream(2))
    again = model.sample_score_matrix(sm, me.RngStream(2))
    np.testing.assert_array_equal(draw, again)


def test_prob_matching_bounds():
    posterior = me.ScorePosterior(np.random.default_rng(0).normal(size=(3, 6)), np.full((3, 6), 2.0))
    c = me.MatchConstraints(1, 1, 2, 2)
    ybar = me.estimate_prob_matching_gaussian(posterior, c, 40, me.RngStream(7))
    ybar.validate_bounds(c)
    prob = ybar.prob
    assert prob.min() >= 0.0 and prob.max() <= 1.0
    np.testing.assert_allclose(prob.sum(axis=0), 1.0, atol=1e-9)
    np.testing.assert_allclose(prob.sum(axis=1), 2.0, atol=1e-9)


def test_select_batch_strategies():
    posterior = me.ScorePosterior(np.zeros((2, 5)), np.ones((2, 5)))
    candidate = np.ones((2, 5), dtype=bool)
    ctx = me.SelectionContext(posterior=posterior, candidate=candidate)
    batch = me.select_batch(me.StrategyKind.SCORE_ENTROPY, ctx, 0, 3, me.RngStream(1))
    assert len(batch) == 3
    assert all(not q.fallback for q in batch)
    assert len({q.item for q in batch}) == 3

    score = me.criterion_score(me.StrategyKind.SCORE_MAX, ctx, 0, 2)
    assert score == 0.0


def test_run_trial_and_compare():
    dataset = me.generate_synthetic(6, 4, 1, 0.2, (-5.0, 5.0), 1.0, 3)
    cfg = me.SimConfig()
    cfg.batch_size = 1
    cfg.num_rounds = 2
    cfg.init_observed = 1
    cfg.init_train = 1
    cfg.init_validation = 0
    cfg.num_trials = 2
    cfg.constraints = me.MatchConstraints(1, 2, 1, 1)
    cfg.num_prob_samples = 5
    cfg.model.latent_dim = 1
    cfg.model.burn_in = 5
    cfg.model.num_collected = 5
    cfg.model.thinning = 1
    cfg.strategies = [me.StrategyKind.RANDOM, me.StrategyKind.YBAR_MAX]

    records = me.run_trial(dataset, me.StrategyKind.YBAR_MAX, cfg, 11)
    assert [r.round for r in records] == [0, 1, 2]
    assert records[1].num_observed == 12

    replay = me.run_trial(dataset, me.StrategyKind.YBAR_MAX, cfg, 11)
    assert [r.objective for r in replay] == [r.objective for r in records]

    result = me.compare_strategies(dataset, cfg)
    assert len(result.records) == 2 * 2 * 3
    for rec in result.records:
        if rec.strategy == me.StrategyKind.RANDOM:
            assert result.diff_vs_random(rec) == 0.0


def test_strategy_names():
    assert me.strategy_name(me.StrategyKind.YBAR_MAX) == "ybm"
    assert me.strategy_from_name("se") == me.StrategyKind.SCORE_ENTROPY
    with pytest.raises(ValueError):
        me.strategy_from_name("nope")


def test_toy_fig2():
    matrix, constraints = me.toy_fig2(7)
    assert matrix.values.shape == (3, 6)
    assert (constraints.r_min, constraints.r_max) == (1, 1)
    assert (constraints.p_min, constraints.p_max) == (2, 2)
