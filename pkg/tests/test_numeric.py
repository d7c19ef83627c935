"""Fixed-step trajectory oracle."""

import math

import pytest

from dvarkit.errors import InitialConditionOffVariety, PoleEncountered
from dvarkit.numeric import check_constancy, integrate_flow
from dvarkit.parsing import parse_expression


def endpoint(traj):
    return traj.samples[-1]


def test_cubic_against_closed_form(cubic_system):
    _, sys_ = cubic_system
    # y(t) = 1/sqrt(t - 1) passes through (5, 1/2)
    traj = integrate_flow(sys_, (5, [0.5]), 10, 1e-3)
    t, (y,) = endpoint(traj)
    assert t == pytest.approx(10)
    assert abs(y - 1 / math.sqrt(9)) < 1e-8


def test_exponential_aux(linear_system):
    _, sys_ = linear_system
    # state order: a first (aux), then y, y'
    traj = integrate_flow(sys_, (0, [1.0, 0.0, 1.0]), 1, 1e-3)
    _, v = endpoint(traj)
    assert traj.state_names == ["a", "y", "y'"]
    assert abs(v[0] - math.e ** 2) < 1e-9
    # y = t e^{2t} solves y'' = 4y' - 4y with y(0)=0, y'(0)=1
    assert abs(v[1] - math.e ** 2) < 1e-8


def test_rk4_order_four(cubic_system):
    _, sys_ = cubic_system
    exact = 1 / math.sqrt(9)

    def err(step):
        return abs(endpoint(integrate_flow(sys_, (5, [0.5]), 10, step))[1][0] - exact)

    ratio = err(0.05) / err(0.025)
    assert 12 <= ratio <= 20


def test_constancy_check(cubic_system):
    _, sys_ = cubic_system
    traj = integrate_flow(sys_, (5, [0.5]), 10, 1e-3)
    h = parse_expression("t - 1/y^2", sys_.registry)
    value, drift, ok = check_constancy(h, traj, 1e-8)
    assert ok and value == pytest.approx(1.0)
    y = parse_expression("y", sys_.registry)
    _, _, ok = check_constancy(y, traj, 1e-8)
    assert not ok


def test_initial_condition_must_lie_on_variety(elliptic_system):
    _, sys_ = elliptic_system
    with pytest.raises(InitialConditionOffVariety):
        integrate_flow(sys_, (0, [1.0, 0.0]), 1, 1e-2)
    # y0 = 0, y1 = 1 satisfies y1^2 = 4y0^3 + 4y0 + 1
    traj = integrate_flow(sys_, (0, [0.0, 1.0]), 0.5, 1e-3)
    h = parse_expression("y'^2 - 4*y^3 - 4*y", sys_.registry)
    value, drift, ok = check_constancy(h, traj, 1e-8)
    assert ok and value == pytest.approx(1.0)


def test_pole_reported_with_last_good_time():
    from dvarkit.dvariety import build_system
    from dvarkit.parsing import parse_problem_file

    # blows up in finite time: y' = y^2 from y(0)=1 has a pole at t=1
    sys_ = build_system(parse_problem_file("ode: y' = y^2\n"))
    with pytest.raises(OverflowError):
        integrate_flow(sys_, (0, [1.0]), 2, 1e-4)
    # an honest rational pole in the section: y' = 1/t crossed at t = 0
    sys_ = build_system(parse_problem_file("ode: y' = 1/t\n"))
    with pytest.raises(PoleEncountered) as exc:
        integrate_flow(sys_, (-1, [0.0]), 1, 0.25)
    assert exc.value.last_good_t == pytest.approx(-0.25)


def test_csv_format(cubic_system):
    _, sys_ = cubic_system
    traj = integrate_flow(sys_, (5, [0.5]), 5.01, 1e-2)
    lines = traj.to_csv().splitlines()
    assert lines[0] == "t,v1"
    assert len(lines) == len(traj) + 1
    t0, y0 = lines[1].split(",")
    assert float(t0) == 5 and float(y0) == 0.5
    # 17 significant digits survive a float round-trip
    assert float(lines[-1].split(",")[1]) == traj.samples[-1][1][0]


def test_bad_arguments(cubic_system):
    _, sys_ = cubic_system
    with pytest.raises(ValueError):
        integrate_flow(sys_, (0, [1.0, 2.0]), 1, 1e-2)
    with pytest.raises(ValueError):
        integrate_flow(sys_, (0, [1.0]), 1, -1e-2)
