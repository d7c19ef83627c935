"""Floating-point trajectory oracle.

Integrates dv/dt = s(t, v) with the classical fixed-step 4th-order
one-step method, guards against section-denominator poles, and checks
that symbolically verified first integrals stay numerically constant.
Deterministic by construction: fixed step, no adaptivity.
"""

from fractions import Fraction

from .algebra import ROLE_AUX, ROLE_FIBER
from .errors import (
    DenominatorNearZeroOnTrajectory,
    InitialConditionOffVariety,
    PoleEncountered,
)

IDEAL_TOLERANCE = 1e-10
POLE_TOLERANCE = 1e-12


class Trajectory:
    """Discretized local solution: samples (t, state vector)."""

    def __init__(self, sys, samples, step, method="rk4"):
        self.sys = sys
        self.samples = samples
        self.step = step
        self.method = method

    @property
    def state_names(self):
        reg = self.sys.registry
        return [reg.names[i] for i in reg.indices_with_role(ROLE_AUX, ROLE_FIBER)]

    def __len__(self):
        return len(self.samples)

    def to_csv(self):
        """CSV export: header t,v1,...,vk; 17 significant digits."""
        k = len(self.samples[0][1]) if self.samples else 0
        lines = ["t," + ",".join(f"v{i + 1}" for i in range(k))]
        for t, v in self.samples:
            lines.append(",".join(f"{x:.17g}" for x in (t, *v)))
        return "\n".join(lines) + "\n"


def _state_indices(sys):
    reg = sys.registry
    return list(reg.indices_with_role(ROLE_AUX, ROLE_FIBER))


def _full_point(sys, t, state, indices):
    vec = [0.0] * len(sys.registry)
    ti = sys.registry.time_index
    if ti is not None:
        vec[ti] = t
    for i, x in zip(indices, state):
        vec[i] = x
    return vec


def _derivative(sys, t, state, indices, names):
    vec = _full_point(sys, t, state, indices)
    out = []
    for name in names:
        s = sys.section[name]
        den = s.den.eval_float(vec)
        if abs(den) < POLE_TOLERANCE:
            raise PoleEncountered(
                f"section denominator for {name!r} fell below {POLE_TOLERANCE:g}", last_good_t=t
            )
        out.append(s.num.eval_float(vec) / den)
    return out


def integrate_flow(sys, init, t_end, step):
    """Classical RK4 with fixed step from (t0, v0) to t_end.

    The state vector lists auxiliary variables first, then fiber
    variables, in registry order (the order Trajectory.state_names
    reports).  Raises InitialConditionOffVariety when v0 violates an
    ideal generator beyond 1e-10 and PoleEncountered (carrying the last
    good time) when a section denominator collapses.
    """
    t0, v0 = init
    t0 = float(t0)
    v0 = [float(x) for x in v0]
    indices = _state_indices(sys)
    if len(v0) != len(indices):
        raise ValueError(f"initial state must have {len(indices)} components")
    names = [sys.registry.names[i] for i in indices]
    vec0 = _full_point(sys, t0, v0, indices)
    for g in sys.ideal.generators:
        res = g.eval_float(vec0)
        if abs(res) > IDEAL_TOLERANCE:
            raise InitialConditionOffVariety(
                f"generator {g} evaluates to {res:.3e} at the initial point"
            )
    if step <= 0:
        raise ValueError("step must be positive")
    n_steps = max(1, round((t_end - t0) / step))
    h = (t_end - t0) / n_steps
    samples = [(t0, tuple(v0))]
    t, v = t0, v0
    try:
        for k in range(n_steps):
            k1 = _derivative(sys, t, v, indices, names)
            k2 = _derivative(sys, t + h / 2, [x + h / 2 * d for x, d in zip(v, k1)], indices, names)
            k3 = _derivative(sys, t + h / 2, [x + h / 2 * d for x, d in zip(v, k2)], indices, names)
            k4 = _derivative(sys, t + h, [x + h * d for x, d in zip(v, k3)], indices, names)
            v = [
                x + h / 6 * (a + 2 * b + 2 * c + d)
                for x, a, b, c, d in zip(v, k1, k2, k3, k4)
            ]
            t = t0 + (k + 1) * h
            samples.append((t, tuple(v)))
    except PoleEncountered as exc:
        raise PoleEncountered(str(exc), last_good_t=samples[-1][0]) from None
    return Trajectory(sys, samples, h)


def check_constancy(h, traj, tol=1e-6):
    """Value at the first sample, max relative drift, and pass/fail."""
    from .integrals import FirstIntegral

    if isinstance(h, FirstIntegral):
        h = h.h
    sys = traj.sys
    indices = _state_indices(sys)
    values = []
    for t, state in traj.samples:
        vec = _full_point(sys, t, state, indices)
        den = h.den.eval_float(vec)
        if abs(den) < POLE_TOLERANCE:
            raise DenominatorNearZeroOnTrajectory(
                f"denominator of {h} is {den:.3e} at t={t:.6g}"
            )
        values.append(h.num.eval_float(vec) / den)
    value = values[0]
    scale = max(1.0, abs(value))
    max_drift = max(abs(x - value) for x in values) / scale
    return value, max_drift, max_drift <= tol
