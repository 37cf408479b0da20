import numpy as np

from cuecoe.correlator import CorrelatorSpec, MomentSpec
from cuecoe.haar_mc import mc_correlator, mc_moment, sample_coe, sample_cue

SAMPLES = 20000


def test_sample_cue_unitary():
    rng = np.random.default_rng(0)
    for n in (1, 2, 5):
        u = sample_cue(n, rng)
        assert np.max(np.abs(u.conj().T @ u - np.eye(n))) < 1e-12


def test_sample_coe_symmetric_unitary():
    rng = np.random.default_rng(0)
    w = sample_coe(4, rng)
    assert np.max(np.abs(w - w.T)) < 1e-12
    assert np.max(np.abs(w.conj().T @ w - np.eye(4))) < 1e-12


def test_n1_is_uniform_phase():
    rng = np.random.default_rng(1)
    u = sample_cue(1, rng)
    assert abs(abs(u[0, 0]) - 1) < 1e-12


def test_determinism():
    spec = CorrelatorSpec(((1, 1),), ((1, 1),))
    a = mc_correlator(spec, 4, 2000, 5)
    b = mc_correlator(spec, 4, 2000, 5)
    assert a == b


def test_correlator_estimates_within_band():
    e = mc_correlator(CorrelatorSpec(((1, 1),), ((1, 1),)), 4, SAMPLES, 42)
    assert abs(e.mean.real - 0.25) < 5 * e.stderr
    e = mc_correlator(CorrelatorSpec(((1, 2),), ((1, 2),), "coe"), 4, SAMPLES, 42)
    assert abs(e.mean.real - 0.2) < 5 * e.stderr
    e = mc_correlator(CorrelatorSpec(((1, 2),), ((2, 1),)), 3, SAMPLES, 42)
    assert abs(e.mean.real) < 5 * e.stderr


def test_moment_estimates_within_band():
    e = mc_moment(MomentSpec((1,), 2, 3), SAMPLES, 7)
    assert abs(e.mean.real - 1.2) < 5 * e.stderr
    e = mc_moment(MomentSpec((1,), 2, 3, "transmission", "coe"), SAMPLES, 7)
    assert abs(e.mean.real - 1.0) < 5 * e.stderr


def test_left_invariance_smoke():
    # <|Tr U|^2> = 1 is invariant under a fixed left rotation of the samples
    rng = np.random.default_rng(3)
    fixed = sample_cue(4, rng)
    vals, rotated = [], []
    for _ in range(SAMPLES // 4):
        u = sample_cue(4, rng)
        vals.append(abs(np.trace(u)) ** 2)
        rotated.append(abs(np.trace(fixed @ u)) ** 2)
    se = np.std(vals) / len(vals) ** 0.5 + np.std(rotated) / len(rotated) ** 0.5
    assert abs(np.mean(vals) - np.mean(rotated)) < 5 * se
