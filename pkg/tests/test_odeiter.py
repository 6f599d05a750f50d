import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfdensity.errors import DomainError, SingularTau, TrajectoryEscape
from pfdensity.lorenz import LorenzParams, lorenz_system
from pfdensity.odeiter import (DifferentialIteration, OdeSystem,
                               char_poly_faddeev, critical_frequencies,
                               critical_frequency_solution, euler_iterate,
                               fixed_points, jacobian_eigen, seed_lattice)

DECAY = OdeSystem(1, [[((1,), -1.0)]])                      # F(a) = -a
ROTATION = OdeSystem.linear([[0.0, 1.0], [-1.0, 0.0]])
DIAG23 = OdeSystem.linear([[-2.0, 0.0], [0.0, -3.0]])
LORENZ = lorenz_system(LorenzParams(10.0, 28.0, 8.0 / 3.0))


def test_system_validation():
    with pytest.raises(ValueError):
        OdeSystem(1, [[((5,), 1.0)]])  # total degree > 4
    with pytest.raises(ValueError):
        OdeSystem(9, [[] for _ in range(9)])  # dim > 8
    with pytest.raises(ValueError):
        OdeSystem(2, [[((1,), 1.0)], []])  # exponent tuple of wrong length


def test_system_json_roundtrip():
    assert OdeSystem.from_json(LORENZ.to_json()) == LORENZ


def test_euler_linear_decay():
    it = DifferentialIteration(DECAY, delta=1e-3, n=1000)
    a_n, S_n = euler_iterate(it, [1.0])
    assert abs(a_n[0] - math.exp(-1.0)) < 2e-4
    assert abs((a_n[0] - 1.0) - 1e-3 * S_n[0]) < 1e-12


def test_euler_zero_field():
    zero = OdeSystem(2, [[], []])
    a_n, S_n = euler_iterate(DifferentialIteration(zero, 0.1, 50), [1.0, -2.0])
    assert np.array_equal(a_n, [1.0, -2.0])
    assert np.array_equal(S_n, [0.0, 0.0])


def test_euler_lorenz_bounded_and_identity():
    it = DifferentialIteration(LORENZ, delta=1e-3, n=10_000)
    a0 = np.array([1.0, 1.0, 1.0])
    a_n, S_n = euler_iterate(it, a0)
    assert np.all(np.abs(a_n) < 100.0)
    resid = np.max(np.abs((a_n - a0) - it.delta * S_n))
    assert resid <= 1e-10 * max(1.0, float(np.max(np.abs(a_n - a0))))


def _rk4(F, a0, t, n):
    a = np.array(a0, dtype=float)
    h = t / n
    for _ in range(n):
        k1 = F(a)
        k2 = F(a + h / 2 * k1)
        k3 = F(a + h / 2 * k2)
        k4 = F(a + h * k3)
        a = a + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return a


def test_lorenz_reference_integration_also_bounded():
    # independent Runge-Kutta check that the trajectory is genuinely bounded
    a = _rk4(LORENZ, [1.0, 1.0, 1.0], 10.0, 10_000)
    assert np.all(np.abs(a) < 100.0)


def test_euler_first_order_convergence():
    def err(n):
        it = DifferentialIteration(DECAY, delta=1.0 / n, n=n)
        a_n, _ = euler_iterate(it, [1.0])
        return abs(a_n[0] - math.exp(-1.0))

    ratio = err(100) / err(200)
    assert 1.8 <= ratio <= 2.2


def test_trajectory_escape():
    growth = OdeSystem(1, [[((1,), 1.0)]])
    with pytest.raises(TrajectoryEscape) as exc:
        euler_iterate(DifferentialIteration(growth, 1.0, 100), [1.0])
    assert exc.value.step == 20  # doubling each step from 1: passes 1e6 at 2^20


def test_fixed_point_linear():
    pts, dropped = fixed_points(DECAY, radius=2.0)
    assert len(pts) == 1
    assert abs(pts[0][0]) < 1e-12


def test_fixed_points_logistic_field():
    field = OdeSystem(1, [[((1,), 1.0), ((2,), -1.0)]])  # a(1-a)
    pts, _ = fixed_points(field, radius=2.0)
    assert len(pts) == 2
    assert abs(pts[0][0] - 0.0) < 1e-12
    assert abs(pts[1][0] - 1.0) < 1e-12


def test_fixed_points_lorenz():
    alpha = math.sqrt((8.0 / 3.0) * 27.0)  # sqrt(beta (rho - 1)) = 8.485281...
    pts, _ = fixed_points(LORENZ, radius=10.0)
    assert len(pts) == 3
    expected = sorted([(-alpha, -alpha, 27.0), (0.0, 0.0, 0.0),
                       (alpha, alpha, 27.0)])
    for got, want in zip(pts, expected):
        assert np.max(np.abs(np.array(got) - np.array(want))) < 1e-10
    for got in pts:
        r = np.max(np.abs(LORENZ(got)))
        assert r <= 1e-12 * (1.0 + float(np.max(np.abs(got))))


def test_seed_lattice_shape():
    seeds = seed_lattice(2, 1.0, per_axis=3)
    assert len(seeds) == 9
    assert any(np.array_equal(s, [0.0, 0.0]) for s in seeds)


def test_jacobian_eigen_diagonal():
    eig = jacobian_eigen(DIAG23, [0.0, 0.0]).eigenvalues
    assert sorted(z.real for z in eig) == pytest.approx([-3.0, -2.0])
    assert all(abs(z.imag) < 1e-14 for z in eig)


def test_jacobian_eigen_lorenz_origin():
    # oracle: the factored characteristic (beta+x)[(sigma+x)(1+x) - sigma rho]
    # gives -8/3 and (-11 +- sqrt(1201))/2 at (10, 28, 8/3)
    s1201 = math.sqrt(1201.0)
    expected = sorted([-8.0 / 3.0, (-11.0 - s1201) / 2.0, (-11.0 + s1201) / 2.0])
    got = jacobian_eigen(LORENZ, np.zeros(3))
    reals = sorted(z.real for z in got.eigenvalues)
    assert reals == pytest.approx(expected, abs=1e-10)
    # residual |det(J - lambda I)| per eigenvalue
    for z in got.eigenvalues:
        d = np.linalg.det(got.J - z.real * np.eye(3))
        assert abs(d) < 1e-8


def test_jacobian_eigen_rotation():
    eig = jacobian_eigen(ROTATION, [0.0, 0.0]).eigenvalues
    assert sorted((z.real, z.imag) for z in eig) == pytest.approx(
        [(0.0, -1.0), (0.0, 1.0)])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_char_poly_matches_numpy_oracle(d, seed):
    rng = np.random.default_rng(seed)
    J = rng.normal(size=(d, d))
    got = char_poly_faddeev(J).coeffs
    want = np.poly(J)[::-1]  # ascending
    scale = max(1.0, float(np.max(np.abs(want))))
    assert np.max(np.abs(np.array(got) - want)) < 1e-10 * scale


def test_frequency_solution_diagonal():
    s = critical_frequency_solution(DIAG23, [1.0, 1.0], 0.1)
    assert s == pytest.approx([1.25, 1.4285714285714286], abs=1e-14)


def test_frequency_solution_tau_zero():
    a = [2.0, -4.0]
    s = critical_frequency_solution(DIAG23, a, 0.0)
    assert s == pytest.approx([0.5, -0.25], abs=0)


def test_frequency_solution_singular():
    with pytest.raises(SingularTau) as exc:
        critical_frequency_solution(DIAG23, [1.0, 1.0], 0.5)
    assert exc.value.eigenvalue == pytest.approx(-2.0, abs=1e-9)


def test_frequency_solution_rejects_zero_coordinate():
    with pytest.raises(DomainError):
        critical_frequency_solution(DIAG23, [1.0, 0.0], 0.1)


def test_frequency_solution_residual():
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = rng.uniform(0.5, 2.0, size=3)
        tau = float(rng.uniform(0.0, 0.05))
        s = critical_frequency_solution(LORENZ, a, tau)
        J = LORENZ.jacobian(a)
        resid = s + tau * s @ J - 1.0 / a
        assert np.max(np.abs(resid)) < 1e-12 * float(np.max(np.abs(1.0 / a)))


def test_critical_frequencies_decay():
    res = critical_frequencies(DECAY, [0.7])
    assert res.taus == (1.0,)
    assert res.critical_tau == 1.0
    assert res.eigenvector is not None


def test_critical_frequencies_diag():
    res = critical_frequencies(DIAG23, [1.0, 1.0])
    assert res.taus == pytest.approx((0.5, 1.0 / 3.0))
    assert res.critical_tau == pytest.approx(0.5)
    assert res.singular_taus == res.taus
    # the flagged eigenvector is the left eigenvector for lambda = -2
    J = DIAG23.jacobian([1.0, 1.0])
    v = res.eigenvector
    assert np.max(np.abs(v @ J - (-2.0) * v)) < 1e-10


def test_critical_frequencies_rotation_empty():
    res = critical_frequencies(ROTATION, [1.0, 1.0])
    assert res.taus == ()
    assert res.critical_tau is None
    assert res.eigenvector is None
    assert len(res.eigenvalues) == 2


def test_general_solution_structure():
    """s_a + c*vec solves up to c*vec(I + tau J); the eigen-direction
    annihilates I + tau J exactly at tau = -1/lambda."""
    a = np.array([1.0, 1.0])
    J = DIAG23.jacobian(a)
    res = critical_frequencies(DIAG23, a)
    tau_star = res.critical_tau                 # -1/lambda for lambda = -2
    vec = res.eigenvector
    assert np.max(np.abs(vec @ (np.eye(2) + tau_star * J))) < 1e-10

    tau = 0.07                                  # away from the singular set
    s_a = critical_frequency_solution(DIAG23, a, tau)
    for c in (-2.0, 0.5, 10.0):
        lhs = (s_a + c * vec) @ (np.eye(2) + tau * J) - 1.0 / a
        rhs = c * (vec @ (np.eye(2) + tau * J))
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_lorenz_trajectory_return_statistics():
    """Bounded-cycle consequence check: the histogram of a trajectory
    coordinate has bounded support and is deterministic."""
    it = DifferentialIteration(LORENZ, delta=1e-3, n=20_000)

    def first_coordinate_trace():
        a = np.array([1.0, 1.0, 1.0])
        out = np.empty(it.n)
        for k in range(it.n):
            a = a + it.delta * LORENZ(a)
            out[k] = a[0]
        return out

    trace = first_coordinate_trace()
    counts, edges = np.histogram(trace[5000:], bins=60)
    assert counts.sum() == 15_000
    assert -25.0 < edges[0] and edges[-1] < 25.0
    counts2, _ = np.histogram(first_coordinate_trace()[5000:], bins=60)
    assert np.array_equal(counts, counts2)


def test_iteration_validation():
    with pytest.raises(ValueError):
        DifferentialIteration(DECAY, 0.0, 10)
    with pytest.raises(ValueError):
        DifferentialIteration(DECAY, 0.1, 0)
    it = DifferentialIteration(DECAY, 0.25, 8)
    assert it.horizon == 2.0
