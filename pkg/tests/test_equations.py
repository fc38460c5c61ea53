
import numpy as np
import pytest

from painleve import (
    BranchSign,
    Equation,
    EquationKind,
    InitialData,
    IntegrationConfig,
    Direction,
    PAINLEVE_I,
    PAINLEVE_II,
    TOY_MODEL,
    asymptotic_branch,
    energy,
    equation_from_name,
    fluctuation_integral,
    integrate,
    rhs,
)


def test_equation_singularity_structure():
    assert PAINLEVE_I.pole_order == 2 and PAINLEVE_I.ode_order == 2
    assert PAINLEVE_II.pole_order == 1 and PAINLEVE_II.ode_order == 2
    assert TOY_MODEL.pole_order == 0 and TOY_MODEL.ode_order == 1
    with pytest.raises(ValueError):
        Equation(EquationKind.PAINLEVE_I, 1, 2)
    assert equation_from_name("p2") is PAINLEVE_II
    with pytest.raises(ValueError):
        equation_from_name("p7")


def test_initial_data_posed_at_zero():
    with pytest.raises(ValueError):
        InitialData(0.0, 1.0, t_start=-1.0)


@pytest.mark.parametrize(
    "eq,t,y,expect",
    [
        (PAINLEVE_I, 0.0, 0.0, 0.0),
        (PAINLEVE_I, -6.0, 1.0, 0.0),
        (PAINLEVE_II, -2.0, 1.0, 0.0),
        (TOY_MODEL, 1.0, 0.5, 0.0),
    ],
)
def test_rhs_zeros(eq, t, y, expect):
    assert rhs(eq, t, y) == pytest.approx(expect, abs=1e-15)


def test_rhs_reality_and_parity():
    rng = np.random.default_rng(7)
    for _ in range(200):
        t, y = rng.uniform(-30, 5), rng.uniform(-20, 20)
        for eq in (PAINLEVE_I, PAINLEVE_II, TOY_MODEL):
            v = rhs(eq, t, y)
            assert isinstance(v, float)
        # odd parity of the second equation's right side in y
        assert rhs(PAINLEVE_II, t, -y) == -rhs(PAINLEVE_II, t, y)


def test_asymptotic_branch():
    assert asymptotic_branch(PAINLEVE_I, -6.0, BranchSign.PLUS) == pytest.approx(1.0)
    assert asymptotic_branch(PAINLEVE_I, -24.0, BranchSign.MINUS) == pytest.approx(-2.0)
    assert asymptotic_branch(PAINLEVE_II, -2.0, BranchSign.PLUS) == pytest.approx(1.0)
    for t in np.linspace(-50, -0.1, 23):
        plus = asymptotic_branch(PAINLEVE_I, t, BranchSign.PLUS)
        minus = asymptotic_branch(PAINLEVE_I, t, BranchSign.MINUS)
        assert plus == -minus
    with pytest.raises(ValueError):
        asymptotic_branch(PAINLEVE_I, 1.0, BranchSign.PLUS)
    with pytest.raises(ValueError):
        asymptotic_branch(TOY_MODEL, -1.0, BranchSign.PLUS)


def test_energy_closed_forms():
    b, c = 1.7, -0.9
    assert energy(PAINLEVE_I, 0.0, b) == pytest.approx(b * b / 2)
    assert energy(PAINLEVE_I, c, 0.0) == pytest.approx(-2 * c**3)
    assert energy(PAINLEVE_II, c, 0.0) == pytest.approx(-(c**4) / 2)
    with pytest.raises(ValueError):
        energy(TOY_MODEL, 0.1, 0.2)


def test_fluctuation_rejects_toy():
    traj = integrate(TOY_MODEL, InitialData(0.3), Direction.POSITIVE_T,
                     IntegrationConfig(t_horizon=5.0))
    with pytest.raises(ValueError):
        fluctuation_integral(TOY_MODEL, traj)


def _defect(eq, traj):
    I = fluctuation_integral(eq, traj)
    rt = traj.real_t()
    ry, ryp = traj.real_y(), traj.real_yp()
    H = energy(eq, ry, ryp)
    return rt, ry, ryp, H - H[0] - I


def test_energy_identity_smooth():
    # pole-free stretch: the identity holds to 10 * rel_tol on the H scale
    cfg = IntegrationConfig(t_horizon=-20.0)
    traj = integrate(PAINLEVE_I, InitialData(0.0, 1.0), Direction.NEGATIVE_T, cfg)
    assert not traj.poles
    _, ry, _, defect = _defect(PAINLEVE_I, traj)
    H_scale = max(1.0, np.abs(energy(PAINLEVE_I, ry, traj.real_yp())).max())
    assert np.abs(defect).max() <= 10.0 * cfg.rel_tol * H_scale


@pytest.mark.parametrize(
    "eq,init",
    [
        (PAINLEVE_I, InitialData(0.0, 2.504031103)),
        (PAINLEVE_II, InitialData(0.0, 1.028605106)),
    ],
)
def test_energy_identity_through_detours(eq, init):
    # Crossing poles, the identity holds to 10 * rel_tol times the path's
    # H-sensitivity scale |dH/dy| |y| + |dH/dy'| |y'| (absolute accuracy of H
    # near a pole is limited by the state's relative accuracy there).
    cfg = IntegrationConfig(t_horizon=-12.0)
    traj = integrate(eq, init, Direction.NEGATIVE_T, cfg)
    assert traj.poles
    _, ry, ryp, defect = _defect(eq, traj)
    if eq.kind is EquationKind.PAINLEVE_I:
        sens = 6.0 * np.abs(ry) ** 3 + ryp**2
    else:
        sens = 2.0 * np.abs(ry) ** 4 + ryp**2
    bound = 10.0 * cfg.rel_tol * max(1.0, sens.max())
    assert np.abs(defect).max() <= bound


def test_fluctuation_smooth_at_critical_slope():
    # At a critical slope the fluctuation integral varies smoothly past the
    # turning point (the integrand t y' keeps one sign on the branch, so
    # sampled toward -infinity the increments are all negative), while a
    # mid-interval slope keeps oscillating.
    cfg = IntegrationConfig(t_horizon=-7.8, max_step=0.1, rel_tol=1e-12, abs_tol=1e-14)
    traj = integrate(PAINLEVE_I, InitialData(0.0, 1.851854034), Direction.NEGATIVE_T, cfg)
    assert not traj.poles
    I = fluctuation_integral(PAINLEVE_I, traj)
    rt = traj.real_t()
    sel = (rt <= -6.2) & (rt >= -7.7)
    dI = np.diff(I[sel])
    assert (dI < 0).all()

    cfg = IntegrationConfig(t_horizon=-9.0, max_step=0.1)
    traj = integrate(PAINLEVE_I, InitialData(0.0, 2.504031103), Direction.NEGATIVE_T, cfg)
    I = fluctuation_integral(PAINLEVE_I, traj)
    rt = traj.real_t()
    sel = (rt <= -3.0) & (rt >= -8.7)
    flips = np.count_nonzero(np.diff(np.sign(np.diff(I[sel]))))
    assert flips >= 3


def test_fluctuation_zero_length():
    cfg = IntegrationConfig(t_horizon=-20.0)
    traj = integrate(PAINLEVE_I, InitialData(0.0, 1.0), Direction.NEGATIVE_T, cfg)
    I = fluctuation_integral(PAINLEVE_I, traj)
    assert I[0] == 0.0


def test_energy_series_pairs():
    from painleve import energy_series

    cfg = IntegrationConfig(t_horizon=-15.0)
    traj = integrate(PAINLEVE_I, InitialData(0.0, 1.0), Direction.NEGATIVE_T, cfg)
    series = energy_series(PAINLEVE_I, traj)
    assert len(series) == len(traj.real_t())
    h0 = series[0].h
    assert series[0].i_of_x == 0.0
    for ev in series[::50]:
        assert ev.h - h0 - ev.i_of_x == pytest.approx(0.0, abs=1e-8)
