import math

import numpy as np
import pytest

import issf_cbf as issf


def test_gamma_matches_closed_form():
    iota = issf.ComparisonFunction.class_k_inf(lambda s: 0.25 * s * s)
    for lam in (0.5, 1.0, 2.0):
        gamma = issf.gamma_from(issf.ComparisonFunction.linear(lam), iota)
        for s in np.linspace(0.0, 3.0, 31):
            assert abs(gamma(s) - s * s / (4.0 * lam)) <= 1e-8


def test_validate_and_invert():
    ok, violations = issf.validate(issf.ComparisonFunction.extended_k(math.tanh), 100)
    assert ok and not violations
    ok, violations = issf.validate(issf.ComparisonFunction.extended_k(lambda r: r * r, 1.0, 1.0), 100)
    assert not ok and violations
    cubic = issf.ComparisonFunction.extended_k(lambda r: r + r**3)
    assert issf.invert(cubic, 2.0) == pytest.approx(1.0, abs=1e-10)
    assert math.isinf(issf.max_disturbance(issf.ComparisonFunction.linear(1.0),
                                           issf.ComparisonFunction.class_k_inf(lambda s: s * s / 4)))


def test_errors_carry_their_kind():
    with pytest.raises(issf.IssfError) as info:
        issf.ComparisonFunction.linear(-1.0)
    assert info.value.kind == "domain error"
    with pytest.raises(issf.IssfError) as info:
        issf.simulate("pendulum")
    assert info.value.kind == "config error"


def test_qp_projection():
    sol = issf.solve_qp(np.eye(2), np.zeros(2), [(np.array([1.0]), 1.0, 2.0, ">=")])
    assert sol["status"] == "optimal"
    np.testing.assert_allclose(sol["z"], [1.0, 1.0], atol=1e-12)
    kkt = issf.verify_kkt(np.eye(2), np.zeros(2), [(np.array([1.0]), 1.0, 2.0, ">=")])
    assert max(kkt.values()) <= 1e-8


def test_controllers():
    lf, lg = issf.lie1("scalar", np.array([1.0]))
    assert lf == pytest.approx(1.0) and lg[0] == pytest.approx(-1.0)
    u = issf.universal_issf("scalar", np.array([1.0]))
    assert u[0] == pytest.approx(1.0 - math.sqrt(5.0))
    assert issf.issf_feedback("scalar", np.array([2.0]))[0] == pytest.approx(-4.0)


def test_integrate_rk4():
    t, x, escaped = issf.integrate(lambda t, x: -x, np.array([1.0]), 0.0, 1.0, 1e-3)
    assert not escaped
    assert len(t) == 1001 and x.shape == (1001, 1)
    assert abs(x[-1, 0] - math.exp(-1.0)) <= 1e-9


def test_simulate_example1():
    run = issf.simulate("scalar", controller="issf_feedback", d=1.0, x0=np.array([2.0]))
    assert run["summary"]["status"] == "ok"
    assert run["x"][:, 0].max() <= 2.25 + 1e-3
    assert run["csv"].splitlines()[-1].count(",") == 8
    open_loop = issf.simulate("scalar", controller="none", d=1.0)
    assert open_loop["escaped"] and open_loop["summary"]["exit_code"] == 5


def test_sweep_monotone_in_epsilon():
    rows = issf.sweep("example = arctan\ncontroller = issf_qp\nd = 10\nepsilon = 0.5, 1, 5\n", jobs=2)
    peaks = [r["max_signal"] for r in rows]
    assert len(peaks) == 3
    assert peaks[0] >= peaks[1] >= peaks[2]


def test_certificate_check():
    ok, lines = issf.check("arctan", samples=500, seed=1)
    assert ok and all(line.startswith("PASS") for line in lines)
