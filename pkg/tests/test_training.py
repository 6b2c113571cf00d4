"""Unit tests for seeding, descent steps and the training driver."""

import dataclasses

import numpy as np
import pytest

from blasius_net import (
    MOMENTUM_COEFF,
    AllRunsDivergedError,
    CollocationGrid,
    MomentumState,
    NetworkParams,
    Optimizer,
    ParamGradient,
    TrainingConfig,
    TrainingDivergedError,
    TrialMode,
    TrialSpec,
    XorShift64Star,
    gd_step,
    init_params,
    multi_run,
    seed_sweep,
    train,
)

MASK64 = (1 << 64) - 1


def reference_stream(seed, count):
    """Independent re-derivation of the documented generator: one splitmix64
    round seeds an xorshift64* state (never zero), outputs are the usual
    multiplied 64-bit words."""
    z = (seed + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    state = z ^ (z >> 31)
    if state == 0:
        state = 0x9E3779B97F4A7C15
    out = []
    for _ in range(count):
        state ^= state >> 12
        state = (state ^ (state << 25)) & MASK64
        state ^= state >> 27
        out.append((state * 0x2545F4914F6CDD1D) & MASK64)
    return out


def test_xorshift_matches_reference_implementation():
    for seed in (0, 1, 42, 123456789, MASK64):
        rng = XorShift64Star(seed)
        assert [rng.next_u64() for _ in range(20)] == reference_stream(seed, 20)


def test_xorshift_uniform_golden_values():
    rng = XorShift64Star(42)
    draws = [rng.uniform(0.0, 1.0) for _ in range(3)]
    assert draws == [0.1941059175341826, 0.5626318272656207, 0.4861061377100522]


def test_xorshift_uniform_range_and_scaling():
    rng = XorShift64Star(9)
    for _ in range(1000):
        value = rng.uniform(-0.5, 0.5)
        assert -0.5 <= value < 0.5
    a = XorShift64Star(7)
    b = XorShift64Star(7)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_init_params_deterministic_and_in_range():
    first = init_params(0, 5, 0.5)
    second = init_params(0, 5, 0.5)
    for left, right in zip(
        (first.output_weights, first.hidden_biases, first.input_weights),
        (second.output_weights, second.hidden_biases, second.input_weights),
    ):
        assert np.array_equal(left, right)
        assert left.shape == (5,)
        assert np.all(left >= -0.5) and np.all(left < 0.5)
    other = init_params(1, 5, 0.5)
    assert not np.array_equal(first.output_weights, other.output_weights)


def test_init_params_draw_order_v_u_w():
    rng = XorShift64Star(11)
    draws = [rng.uniform(-0.25, 0.25) for _ in range(9)]
    params = init_params(11, 3, 0.25)
    assert list(params.output_weights) == draws[0:3]
    assert list(params.hidden_biases) == draws[3:6]
    assert list(params.input_weights) == draws[6:9]


def test_init_params_validation():
    with pytest.raises(ValueError):
        init_params(0, 0, 0.5)
    with pytest.raises(ValueError):
        init_params(0, 5, 0.0)
    with pytest.raises(ValueError):
        init_params(0, 5, np.inf)


def test_config_defaults_and_grid_fill_in():
    cfg = TrainingConfig()
    assert cfg.hidden_count == 5
    assert cfg.trial == TrialSpec(TrialMode.PENALTY, 6.0)
    assert cfg.lr_v == cfg.lr_u == cfg.lr_w == 1e-4
    assert cfg.penalty_weight == 10.0
    assert cfg.max_iterations == 50000
    assert cfg.loss_target == 1e-8
    assert cfg.optimizer is Optimizer.MOMENTUM
    assert np.allclose(cfg.grid.points, np.linspace(0.0, 6.0, 10))


def test_config_validation():
    with pytest.raises(ValueError):
        TrainingConfig(hidden_count=0)
    with pytest.raises(ValueError):
        TrainingConfig(lr_v=0.0)
    with pytest.raises(ValueError):
        TrainingConfig(lr_u=-1e-3)
    with pytest.raises(ValueError):
        TrainingConfig(max_iterations=0)
    with pytest.raises(ValueError):
        TrainingConfig(loss_target=-1.0)
    with pytest.raises(ValueError):
        TrainingConfig(init_scale=0.0)
    with pytest.raises(ValueError):
        TrainingConfig(seed=-1)
    with pytest.raises(ValueError):
        TrainingConfig(grid=CollocationGrid(np.array([0.0, 7.0])))


def test_gd_step_plain_arithmetic():
    params = NetworkParams(np.zeros(2), np.zeros(2), np.zeros(2))
    grad = ParamGradient(np.ones(2), np.ones(2), np.ones(2))
    cfg = TrainingConfig(optimizer=Optimizer.PLAIN, lr_v=0.1, lr_u=0.1, lr_w=0.1)
    stepped, state = gd_step(params, grad, cfg)
    assert state is None
    for part in (stepped.output_weights, stepped.hidden_biases, stepped.input_weights):
        assert np.array_equal(part, [-0.1, -0.1])


def test_gd_step_momentum_accumulates_velocity():
    lr = 0.1
    cfg = TrainingConfig(optimizer=Optimizer.MOMENTUM, lr_v=lr, lr_u=lr, lr_w=lr)
    params = NetworkParams(np.zeros(2), np.zeros(2), np.zeros(2))
    grad = ParamGradient(np.ones(2), np.full(2, 2.0), np.full(2, -1.0))

    p1, s1 = gd_step(params, grad, cfg)
    assert isinstance(s1, MomentumState)
    assert np.array_equal(p1.output_weights, [-0.1, -0.1])
    assert np.array_equal(s1.hidden_biases, [0.2, 0.2])

    p2, s2 = gd_step(p1, grad, cfg, s1)
    vel = MOMENTUM_COEFF * (lr * 1.0) + lr * 1.0  # same replay as the optimizer
    assert np.array_equal(s2.output_weights, [vel, vel])
    assert np.array_equal(p2.output_weights, [-0.1 - vel, -0.1 - vel])
    assert np.array_equal(p2.input_weights, -p2.output_weights)


def test_gd_step_drives_quadratic_to_zero():
    rng = np.random.default_rng(61)
    for optimizer, lr in ((Optimizer.PLAIN, 0.1), (Optimizer.MOMENTUM, 0.05)):
        cfg = TrainingConfig(optimizer=optimizer, lr_v=lr, lr_u=lr, lr_w=lr)
        params = NetworkParams(*(rng.uniform(-1, 1, 3) for _ in range(3)))
        state = None
        for _ in range(200):
            grad = ParamGradient(
                2.0 * params.output_weights,
                2.0 * params.hidden_biases,
                2.0 * params.input_weights,
            )
            params, state = gd_step(params, grad, cfg, state)
        worst = max(
            np.max(np.abs(params.output_weights)),
            np.max(np.abs(params.hidden_biases)),
            np.max(np.abs(params.input_weights)),
        )
        assert worst <= 1e-3


def test_train_single_iteration_bookkeeping():
    run = train(TrainingConfig(max_iterations=1))
    assert run.iterations_used == 1
    assert len(run.loss_history) == 2
    assert run.final_loss == run.loss_history[-1]
    assert run.loss_history[0] == pytest.approx(431.43498568954016, rel=1e-12)


def test_train_stops_at_loss_target():
    run = train(TrainingConfig(loss_target=1.0))
    assert run.final_loss <= 1.0
    assert run.loss_history[-2] > 1.0
    assert run.iterations_used < 50000


def test_train_is_bitwise_deterministic():
    cfg = TrainingConfig(max_iterations=500)
    first = train(cfg)
    second = train(cfg)
    assert first.loss_history == second.loss_history
    assert first.final_loss == second.final_loss
    assert np.array_equal(first.final_params.output_weights, second.final_params.output_weights)
    assert np.array_equal(first.final_params.hidden_biases, second.final_params.hidden_biases)
    assert np.array_equal(first.final_params.input_weights, second.final_params.input_weights)


def test_train_reduces_default_loss():
    run = train(TrainingConfig(max_iterations=2000))
    assert run.loss_history[0] > 100.0
    assert run.final_loss < 0.05


def test_train_paper_mode_descends():
    cfg = TrainingConfig(trial=TrialSpec(TrialMode.PAPER, 6.0), max_iterations=500)
    run = train(cfg)
    assert run.final_loss < run.loss_history[0]


def test_plain_descent_is_monotone_early():
    cfg = TrainingConfig(optimizer=Optimizer.PLAIN, lr_v=1e-5, lr_u=1e-5, lr_w=1e-5,
                         max_iterations=100)
    history = train(cfg).loss_history
    assert all(later <= earlier for earlier, later in zip(history, history[1:]))


def test_training_divergence_reports_iteration():
    cfg = TrainingConfig(lr_v=3e-4, lr_u=3e-4, lr_w=3e-4, seed=0, max_iterations=1500)
    with pytest.raises(TrainingDivergedError) as excinfo:
        train(cfg)
    assert excinfo.value.iteration == 6
    assert "iteration 6" in str(excinfo.value)


def test_seed_sweep_marks_divergent_seeds():
    cfg = TrainingConfig(lr_v=3e-4, lr_u=3e-4, lr_w=3e-4, seed=0, max_iterations=1500)
    runs = seed_sweep(cfg, 3)
    assert runs[0] is None
    assert runs[1] is not None
    assert runs[2] is not None
    with pytest.raises(ValueError):
        seed_sweep(cfg, 0)


def test_multi_run_picks_best_survivor():
    cfg = TrainingConfig(lr_v=3e-4, lr_u=3e-4, lr_w=3e-4, seed=0, max_iterations=1500)
    best = multi_run(cfg, 3)
    seed1 = train(dataclasses.replace(cfg, seed=1))
    assert best.final_loss == seed1.final_loss
    assert np.array_equal(best.final_params.output_weights, seed1.final_params.output_weights)


def test_multi_run_single_seed_equals_train():
    cfg = TrainingConfig(max_iterations=300)
    assert multi_run(cfg, 1).final_loss == train(cfg).final_loss


def test_multi_run_all_diverged():
    cfg = TrainingConfig(lr_v=5e-3, lr_u=5e-3, lr_w=5e-3, seed=0, max_iterations=1500)
    with pytest.raises(AllRunsDivergedError):
        multi_run(cfg, 2)


def test_momentum_state_zeros():
    state = MomentumState.zeros(4)
    for part in (state.output_weights, state.hidden_biases, state.input_weights):
        assert np.array_equal(part, np.zeros(4))
