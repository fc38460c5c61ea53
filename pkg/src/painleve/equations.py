"""Dynamical systems under study: right-hand sides, asymptotic branch curves,
and the energy/fluctuation diagnostics used to reduce the shooting problems to
linear spectral ones.

Three systems are supported:

* Painleve I,  y'' = 6 y^2 + t   (movable double poles),
* Painleve II, y'' = 2 y^3 + t y (movable simple poles),
* a first-order toy model, y' = cos(pi t y), which is pole free.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .integrator import Trajectory

__all__ = [
    "BranchSign",
    "EnergyValue",
    "Equation",
    "EquationKind",
    "InitialData",
    "PAINLEVE_I",
    "PAINLEVE_II",
    "TOY_MODEL",
    "asymptotic_branch",
    "branch_curve",
    "energy",
    "energy_series",
    "equation_from_name",
    "fluctuation_integral",
    "rhs",
]


class EquationKind(enum.Enum):
    PAINLEVE_I = "p1"
    PAINLEVE_II = "p2"
    TOY_MODEL = "toy"


@dataclass(frozen=True)
class Equation:
    """One of the supported systems together with its singularity structure.

    ``pole_order`` is the order of the movable poles the solutions admit
    (2 for Painleve I, 1 for Painleve II, 0 for the pole-free toy model) and
    ``ode_order`` the differential order of the equation.
    """

    kind: EquationKind
    pole_order: int
    ode_order: int

    _EXPECTED = {
        EquationKind.PAINLEVE_I: (2, 2),
        EquationKind.PAINLEVE_II: (1, 2),
        EquationKind.TOY_MODEL: (0, 1),
    }

    def __post_init__(self) -> None:
        expected = self._EXPECTED[self.kind]
        if (self.pole_order, self.ode_order) != expected:
            raise ValueError(
                f"{self.kind.value}: pole_order/ode_order must be {expected}, "
                f"got {(self.pole_order, self.ode_order)}"
            )

    @property
    def name(self) -> str:
        return self.kind.value


PAINLEVE_I = Equation(EquationKind.PAINLEVE_I, 2, 2)
PAINLEVE_II = Equation(EquationKind.PAINLEVE_II, 1, 2)
TOY_MODEL = Equation(EquationKind.TOY_MODEL, 0, 1)

_BY_NAME = {
    "p1": PAINLEVE_I,
    "painleve-1": PAINLEVE_I,
    "p2": PAINLEVE_II,
    "painleve-2": PAINLEVE_II,
    "toy": TOY_MODEL,
}


def equation_from_name(name: str) -> Equation:
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise ValueError(f"unknown equation {name!r}; expected one of {sorted(set(_BY_NAME))}") from None


@dataclass(frozen=True)
class InitialData:
    """Initial data at t = 0: value y(0) and slope y'(0).

    The slope is ignored by the first-order toy model.
    """

    y0: float
    slope0: float = 0.0
    t_start: float = 0.0

    def __post_init__(self) -> None:
        if self.t_start != 0.0:
            raise ValueError("initial data is posed at t = 0")


class BranchSign(enum.IntEnum):
    PLUS = 1
    MINUS = -1


def rhs(eq: Equation, t: complex, y: complex, yp: complex = 0.0) -> complex:
    """Highest derivative of the system: y'' for the Painleve equations,
    y' for the toy model. ``yp`` is accepted for interface uniformity and
    never enters the formulas."""
    kind = eq.kind
    if kind is EquationKind.PAINLEVE_I:
        return 6.0 * y * y + t
    if kind is EquationKind.PAINLEVE_II:
        return 2.0 * y * y * y + t * y
    arg = math.pi * t * y
    if isinstance(arg, complex):
        return cmath.cos(arg)
    return math.cos(arg)


def asymptotic_branch(eq: Equation, t: float, sign: BranchSign) -> float:
    """Value of the square-root branch curve the solutions can latch onto as
    t -> -infinity: +-sqrt(-t/6) for Painleve I, +-sqrt(-t/2) for Painleve II."""
    if eq.kind is EquationKind.TOY_MODEL:
        raise ValueError("the toy model has no asymptotic branch curves")
    if t >= 0:
        raise ValueError(f"branch curves are defined for t < 0, got t = {t}")
    denom = 6.0 if eq.kind is EquationKind.PAINLEVE_I else 2.0
    return int(sign) * math.sqrt(-t / denom)


def branch_curve(eq: Equation, t: np.ndarray) -> np.ndarray:
    """Vectorized +branch curve; NaN where t >= 0."""
    if eq.kind is EquationKind.TOY_MODEL:
        raise ValueError("the toy model has no asymptotic branch curves")
    denom = 6.0 if eq.kind is EquationKind.PAINLEVE_I else 2.0
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.where(t < 0.0, np.sqrt(np.maximum(-t, 0.0) / denom), np.nan)


def energy(eq: Equation, y, yp):
    """Conserved-up-to-fluctuations quantity H.

    H = y'^2/2 - 2 y^3 for Painleve I and H = y'^2/2 - y^4/2 for Painleve II.
    Along a trajectory H(x) = H(0) + I(x) holds exactly, with I given by
    :func:`fluctuation_integral`. Accepts scalars or numpy arrays; meant for
    real states only (it is not evaluated on detours).
    """
    if eq.kind is EquationKind.PAINLEVE_I:
        return 0.5 * yp * yp - 2.0 * y * y * y
    if eq.kind is EquationKind.PAINLEVE_II:
        return 0.5 * yp * yp - 0.5 * y * y * y * y
    raise ValueError("energy is defined for the Painleve equations only")


@dataclass(frozen=True)
class EnergyValue:
    """H and its accumulated fluctuation integral at one real-axis point.

    Along any trajectory h = h(0) + i_of_x holds exactly (it is an integral
    identity, not an approximation), so h - i_of_x is constant up to
    integration error.
    """

    h: float
    i_of_x: float


def energy_series(eq: Equation, traj: "Trajectory") -> list[EnergyValue]:
    """Paired (H, I) samples at the trajectory's real-axis points."""
    hs = energy(eq, traj.real_y(), traj.real_yp())
    return [EnergyValue(float(h), float(i)) for h, i in zip(hs, fluctuation_integral(eq, traj))]


def _fluct_jet(eq: Equation, t: complex, y: complex, yp: complex):
    """Value and first two derivatives of the fluctuation integrand.

    Painleve I:  g = t y',    Painleve II: g = t y y'.
    Everything follows from (t, y, y') through the equation itself, so a
    stored trajectory sample carries the full jet.
    """
    if eq.kind is EquationKind.PAINLEVE_I:
        f = 6.0 * y * y + t          # y''
        fp = 12.0 * y * yp + 1.0     # y'''
        g = t * yp
        gp = yp + t * f
        gpp = 2.0 * f + t * fp
    else:
        f = 2.0 * y * y * y + t * y
        fp = 6.0 * y * y * yp + y + t * yp
        g = t * y * yp
        gp = y * yp + t * (yp * yp + y * f)
        gpp = 2.0 * (yp * yp + y * f) + t * (3.0 * yp * f + y * fp)
    return g, gp, gpp


def _hermite_quad(h: complex, jet0, jet1) -> complex:
    # Two-point quintic Hermite quadrature: exact through degree 5, O(h^7) error.
    g0, gp0, gpp0 = jet0
    g1, gp1, gpp1 = jet1
    return (
        0.5 * h * (g0 + g1)
        - h * h / 10.0 * (gp1 - gp0)
        + h * h * h / 120.0 * (gpp0 + gpp1)
    )


def fluctuation_integral(eq: Equation, traj: "Trajectory") -> np.ndarray:
    """Cumulative fluctuation integral I(x) along the trajectory's path.

    I(x) = int_0^x t y'(t) dt for Painleve I and int_0^x t y y' dt for
    Painleve II, accumulated along the same path the integrator took
    (detour arcs included; the integrand is analytic there, so chordal
    quadrature between stored samples is path-equivalent). Returned values
    are sampled at the trajectory's real-axis points.
    """
    if eq.kind is EquationKind.TOY_MODEL:
        raise ValueError("the fluctuation integral is defined for the Painleve equations only")
    ts, ys, yps = traj.t, traj.y, traj.yp
    n = len(ts)
    if n == 0:
        return np.zeros(0)
    real_idx = traj.real_indices()
    out = np.empty(len(real_idx))
    acc = 0.0 + 0.0j
    jet_prev = _fluct_jet(eq, ts[0], ys[0], yps[0])
    next_real = 0
    if real_idx[0] == 0:
        out[0] = 0.0
        next_real = 1
    for i in range(1, n):
        jet = _fluct_jet(eq, ts[i], ys[i], yps[i])
        acc += _hermite_quad(ts[i] - ts[i - 1], jet_prev, jet)
        jet_prev = jet
        if next_real < len(real_idx) and real_idx[next_real] == i:
            out[next_real] = acc.real
            next_real += 1
    return out[:next_real]
