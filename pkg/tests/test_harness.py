import json
import math

import numpy as np
import pytest

from toricap.covolume import capacity
from toricap.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    check_concavity,
    check_copolar_add,
    check_logconvexity,
    check_volume_reverse_bm,
    check_weighted_bm,
    equilibrate_from_capacities,
    equilibrate_weights,
    homothety_exponent,
    random_config,
    run_all_checks,
    run_capacity_curve,
    second_differences,
    selftest,
    slack_vanishes,
)
from toricap.orthant import GeneratorSet, reduce, scale
from toricap.simplex import NumericalError
from toricap.toric import ReinhardtSpec

TWO = [[-1.0, -2.0], [-2.0, -1.0]]


def config(g0, g1, weights="equilibrated", **kw):
    return ExperimentConfig(ReinhardtSpec.from_generators(g0), ReinhardtSpec.from_generators(g1), weights=weights, **kw)


# --- config ---------------------------------------------------------------------

def test_config_json_round_trip():
    cfg = config(TWO, [[-1.0, -1.0]], (2.0, 0.5), t_grid=(0, 0.5, 1), seed=7)
    back = ExperimentConfig.from_json(json.loads(json.dumps(cfg.to_json())))
    assert back.to_json() == cfg.to_json()


def test_config_t_count_and_defaults():
    base = {"set0": {"polydisk": [0.5]}, "set1": {"polydisk": [0.2]}}
    cfg = ExperimentConfig.from_json({**base, "t_count": 5})
    assert cfg.t_grid == (0.0, 0.25, 0.5, 0.75, 1.0)
    cfg = ExperimentConfig.from_json(base)
    assert len(cfg.t_grid) == 11 and cfg.weight_mode == "equilibrated" and cfg.method == "exact"


@pytest.mark.parametrize("patch", [
    {"set1": {"polydisk": [0.2, 0.3]}},
    {"n": 3},
    {"weights": [1.0, -1.0]},
    {"weights": [1.0]},
    {"weights": "balanced"},
    {"t_grid": [0.5, 0.2]},
    {"t_grid": [0.0, 1.5]},
    {"t_count": 1},
    {"method": "quadrature"},
    {"tolerances": {"bogus": 1}},
])
def test_config_rejects(patch):
    base = {"set0": {"polydisk": [0.5]}, "set1": {"polydisk": [0.2]}}
    with pytest.raises((ValueError, TypeError)):
        ExperimentConfig.from_json({**base, **patch})
    with pytest.raises(ValueError):
        ExperimentConfig.from_json({"set0": {"polydisk": [0.5]}})


# --- equilibration --------------------------------------------------------------

def test_equilibrate_examples():
    assert equilibrate_from_capacities(3.0, 3.0, 2) == (1.0, 1.0)
    c0, c1 = equilibrate_from_capacities(4.0, 1.0, 1)
    assert c0 == 1.0 and c1 == pytest.approx(2.0, rel=1e-15)
    c0, c1 = equilibrate_from_capacities(8.0, 1.0, 2)
    assert c1 == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(NumericalError):
        equilibrate_from_capacities(0.0, 1.0, 2)


def test_equilibrate_from_sets():
    # Cap{-0.25} = 4, Cap{-1} = 1
    assert equilibrate_weights(GeneratorSet([[-0.25]]), GeneratorSet([[-1.0]])) == pytest.approx((1, 2), rel=1e-14)
    # Cap{(-0.5,-0.25)} = 8, Cap{(-1,-1)} = 1
    assert equilibrate_weights(GeneratorSet([[-0.5, -0.25]]), GeneratorSet([[-1.0, -1.0]])) == pytest.approx((1, 2), rel=1e-14)


def test_equilibrated_energies_agree(rng):
    for _ in range(10):
        cfg = random_config(rng, weights="equilibrated", t_grid=(0.0, 1.0))
        rep = run_capacity_curve(cfg)
        c0, c1 = rep.weights
        n = rep.n
        assert c0 ** (n + 1) * rep.cap0 == pytest.approx(c1 ** (n + 1) * rep.cap1, rel=1e-9)


# --- curve ----------------------------------------------------------------------------

def test_second_differences():
    assert np.allclose(second_differences([0, 1, 2, 3], [0, 1, 4, 9]), [2, 2])
    assert np.allclose(second_differences([0, 0.1, 0.5], [0, 0.1, 0.5]), [0])
    assert second_differences([0, 1], [0, 1]).size == 0


def test_curve_scaling_example():
    rep = run_capacity_curve(config([[-1, -1]], [[-2, -2]], (1.0, 1.0), t_grid=(0.0, 0.5, 1.0)))
    assert rep.cap0 == pytest.approx(1.0, abs=1e-14)
    row = rep.rows[1]
    assert row.cap == pytest.approx(1.5**-2, rel=1e-12)
    assert row.bm_slack >= 0


def test_curve_row_invariants(rng):
    for _ in range(10):
        rep = run_capacity_curve(random_config(rng))
        for r in rep.rows:
            assert r.error is None and r.cap > 0
            assert r.V * r.rho == pytest.approx(1.0, abs=1e-12)
            assert r.covol * math.factorial(rep.n) == pytest.approx(r.cap, rel=1e-15)
            assert r.std_err == 0.0
        assert rep.rows[0].bm_slack == pytest.approx(0, abs=1e-12)
        assert rep.rows[-1].logconv_slack == pytest.approx(0, abs=1e-12)


def test_equal_sets_give_constant_curve():
    rep = run_capacity_curve(config(TWO, TWO, (1.5, 1.5)))
    caps = [r.cap for r in rep.rows]
    assert np.ptp(caps) <= 1e-15 * caps[0]
    assert all(abs(r.bm_slack) <= 1e-12 and abs(r.logconv_slack) <= 1e-12 for r in rep.rows)
    assert rep.equality_case
    eq = run_capacity_curve(config(TWO, TWO))
    assert check_concavity(eq).worst == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("lam", [0.5, 0.8, 2.0, 3.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_homothetic_closed_form(lam, n):
    g = -np.linspace(0.6, 1.4, n)
    rep = run_capacity_curve(config([g], [lam * g], (1.0, lam)))
    for r in rep.rows:
        assert r.cap == pytest.approx(((1 - r.t) + r.t * lam) ** -n * rep.cap0, rel=1e-9)
        assert abs(r.bm_slack) <= 1e-9 * rep.rows[0].c_t ** (n + 1) * rep.cap0 * 10
    assert np.allclose(homothety_exponent(rep, lam), -n, atol=1e-9)
    assert rep.equality_case and slack_vanishes(rep)


def test_homothetic_equilibrated_curve():
    # V_t is proportional to (affine)^(n/(n+1)): strictly concave, slack nonzero
    n, lam = 2, 0.5
    rep = run_capacity_curve(config(TWO, (lam * np.array(TWO)).tolist()))
    assert rep.weights[1] == pytest.approx(lam ** (n / (n + 1)), rel=1e-12)
    ts = np.array([r.t for r in rep.rows])
    V = np.array([r.V for r in rep.rows])
    np.testing.assert_allclose(V, V[0] * ((1 - ts) + ts * lam) ** (n / (n + 1)), rtol=1e-12)
    assert check_concavity(rep).passed and rep.concavity_max_second_difference < -1e-4
    assert not rep.equality_case and not slack_vanishes(rep)


def test_equality_detection_both_directions(rng):
    for _ in range(10):
        n = int(rng.integers(1, 4))
        Q0 = GeneratorSet(rng.uniform(-3, -0.2, size=(int(rng.integers(1, 4)), n)))
        lam = float(rng.uniform(0.3, 3))
        c0 = float(rng.uniform(0.5, 2))
        rep = run_capacity_curve(config(Q0.generators, scale(Q0, lam).generators, (c0, c0 * lam)))
        assert rep.equality_case and slack_vanishes(rep)
        # perturb an extreme generator of Q1 outward
        G1 = reduce(scale(Q0, lam)).generators.copy()
        G1[0, 0] *= 0.9
        rep = run_capacity_curve(config(Q0.generators, G1, (c0, c0 * lam)))
        assert not rep.equality_case and not slack_vanishes(rep)
        # right sets, wrong weights
        rep = run_capacity_curve(config(Q0.generators, scale(Q0, lam).generators, (c0, c0 * lam * 1.1)))
        assert not rep.equality_case and not slack_vanishes(rep)


def test_csv_is_byte_identical_and_well_formed():
    cfg = config(TWO, [[-0.5, -1.5]], (1.0, 2.0), method="mc", samples=10**4, seed=3)
    a, b = run_capacity_curve(cfg).to_csv(), run_capacity_curve(cfg).to_csv()
    assert a == b
    lines = a.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 12
    assert all(len(line.split(",")) == len(CSV_COLUMNS) for line in lines)


def test_failed_rows_are_recorded(monkeypatch):
    import toricap.harness as h

    real = h.capacity
    OTHER = [[-1.5, -1.0], [-1.0, -1.5]]

    def flaky(Q, *a, **k):
        if not any(Q == GeneratorSet(g) for g in (TWO, OTHER)):
            raise NumericalError("synthetic")
        return real(Q, *a, **k)

    monkeypatch.setattr(h, "capacity", flaky)
    rep = run_capacity_curve(config(TWO, OTHER, (1, 1)))
    assert rep.rows[0].error is None and rep.rows[-1].error is None
    bad = [r for r in rep.rows if r.error]
    assert bad and all(math.isnan(r.cap) for r in bad)
    assert not check_weighted_bm(rep).passed


# --- checks -----------------------------------------------------------------------------------

def test_concavity_requires_equilibrated_weights():
    with pytest.raises(ValueError):
        check_concavity(run_capacity_curve(config(TWO, TWO, (1, 1))))
    with pytest.raises(ValueError):
        check_concavity(run_capacity_curve(config(TWO, TWO, t_grid=(0, 1))))


def test_checks_detect_a_forged_violation():
    rep = run_capacity_curve(config(TWO, [[-1, -1]], (1, 1)))
    rows = list(rep.rows)
    rows[5] = rows[5].__class__(**{**rows[5].__dict__, "bm_slack": -1e-6, "logconv_slack": -1e-6})
    forged = rep.__class__(**{**rep.__dict__, "rows": tuple(rows)})
    assert not check_weighted_bm(forged).passed
    assert not check_logconvexity(forged).passed


def test_volume_reverse_bm_polydisks_is_equality():
    cfg = ExperimentConfig(ReinhardtSpec.polydisk([0.3, 0.6]), ReinhardtSpec.polydisk([0.7, 0.2]))
    out = check_volume_reverse_bm(cfg)
    assert out.passed and abs(out.worst) < 1e-15


def test_copolar_add_cosimplex_pair():
    out = check_copolar_add(config([[-1, -2]], [[-3, -0.5]], (1.0, 2.0)))
    assert out.passed and "dictionary gap 0" in out.detail


def test_run_all_checks_random(rng):
    for _ in range(5):
        outcomes = run_all_checks(random_config(rng, samples=20000))
        assert [o.name for o in outcomes] == ["weighted_bm", "concavity", "logconvexity", "volume_reverse_bm", "copolar_add"]
        assert all(o.passed for o in outcomes), outcomes


def test_selftest_small():
    assert selftest(count=5, seed=1, volume_samples=5000) == []
