"""Location of the critical initial conditions by grid scan and bisection.

A separatrix initial condition is a boundary between two open families of
generic behaviors, so it is found by bisecting on a discriminant:

* negative direction (Painleve I both modes, Painleve II slope mode):
  {pole cascade} vs {stable oscillation};
* positive direction (Painleve II value mode): the sign of the (n+1)-th
  blow-up, read off the recorded pole approach signs;
* toy model: the number of maxima of the solution.

The search never asks the classifier to *detect* a separatrix (a
measure-zero event); separatrix tags are used only to validate converged
records.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .classify import ClassificationError, ClassTag, classify, count_toy_maxima
from .equations import Equation, EquationKind, InitialData, branch_curve
from .integrator import Direction, IntegrationConfig, integrate

__all__ = [
    "BisectionError",
    "EigenvalueRecord",
    "ModeKind",
    "PartialTableError",
    "SearchMode",
    "bisect",
    "eigen_table",
    "scan_brackets",
    "separatrix_check",
    "toy_eigen_table",
]


class BisectionError(RuntimeError):
    """A probe produced a class that matches neither bracket endpoint."""

    def __init__(self, message: str, probe: float | None = None):
        super().__init__(message)
        self.probe = probe


class PartialTableError(RuntimeError):
    """Table construction failed mid-way; carries the completed records."""

    def __init__(self, message: str, records: list["EigenvalueRecord"], failed_index: int):
        super().__init__(message)
        self.records = records
        self.failed_index = failed_index


class ModeKind(enum.Enum):
    SLOPE = "slope"   # fix y(0), vary y'(0)
    VALUE = "value"   # fix y'(0), vary y(0)
    TOY = "toy"       # vary y(0)


@dataclass(frozen=True)
class SearchMode:
    kind: ModeKind
    fixed_value: float = 0.0

    @classmethod
    def coerce(cls, mode: "SearchMode | ModeKind | str") -> "SearchMode":
        if isinstance(mode, SearchMode):
            return mode
        if isinstance(mode, str):
            mode = ModeKind(mode)
        return cls(mode)


@dataclass(frozen=True)
class EigenvalueRecord:
    index: int
    value: float
    bracket_width: float
    pole_count: int
    mode: SearchMode


def _direction(eq: Equation, mode: SearchMode) -> Direction:
    if eq.kind is EquationKind.TOY_MODEL:
        return Direction.POSITIVE_T
    if eq.kind is EquationKind.PAINLEVE_II and mode.kind is ModeKind.VALUE:
        return Direction.POSITIVE_T
    return Direction.NEGATIVE_T


def _initial_data(eq: Equation, mode: SearchMode, x: float) -> InitialData:
    if mode.kind is ModeKind.SLOPE:
        return InitialData(mode.fixed_value, x)
    if mode.kind is ModeKind.VALUE:
        return InitialData(x, mode.fixed_value)
    return InitialData(x)


def _trial_energy(eq: Equation, mode: SearchMode, x: float) -> float:
    init = _initial_data(eq, mode, x)
    if eq.kind is EquationKind.PAINLEVE_I:
        e = 0.5 * init.slope0**2 - 2.0 * init.y0**3
    else:
        e = 0.5 * init.slope0**2 - 0.5 * init.y0**4
    return max(abs(e), 0.75)


def _negative_horizon(eq: Equation, mode: SearchMode, x: float) -> float:
    e = _trial_energy(eq, mode, x)
    if eq.kind is EquationKind.PAINLEVE_I:
        turn = 6.0 * (0.5 * e) ** (2.0 / 3.0)
    else:
        turn = math.sqrt(8.0 * e)
    return -max(28.0, 1.35 * turn + 16.0)

_COARSE = {"rel_tol": 1e-8, "abs_tol": 1e-10}


def _probe_cfg(eq, mode, x, cfg: IntegrationConfig, coarse: bool, max_poles=None) -> IntegrationConfig:
    kw = {}
    if coarse:
        kw.update(_COARSE)
    if cfg.t_horizon is None and _direction(eq, mode) is Direction.NEGATIVE_T:
        kw["t_horizon"] = _negative_horizon(eq, mode, x)
    if max_poles is not None:
        kw["max_poles"] = max_poles
    return replace(cfg, **kw) if kw else cfg


def _negative_key(eq, mode, x, cfg, coarse) -> str:
    pc = _probe_cfg(eq, mode, x, cfg, coarse)
    traj = integrate(eq, _initial_data(eq, mode, x), Direction.NEGATIVE_T, pc)
    cls = classify(eq, traj)
    if cls.tag is ClassTag.POLE_CASCADE:
        return "cascade"
    if cls.tag is ClassTag.STABLE_OSCILLATION:
        return "stable"
    raise BisectionError(f"probe x = {x!r} classified as {cls.tag.value}", probe=x)


def _signature(eq, mode, x, cfg, coarse, n_poles) -> tuple[int, ...]:
    pc = _probe_cfg(eq, mode, x, cfg, coarse, max_poles=n_poles)
    traj = integrate(eq, _initial_data(eq, mode, x), Direction.POSITIVE_T, pc)
    return tuple(p.approach_sign for p in traj.poles)


def _keys_differ(a, b) -> bool:
    if isinstance(a, tuple):
        n = min(len(a), len(b))
        return a[:n] != b[:n]
    return a != b


class _Discriminant:
    """Class key of a trial initial datum, with caching across probes."""

    def __init__(self, eq, mode, cfg, n_poles=None):
        self.eq, self.mode, self.cfg = eq, mode, cfg
        self.n_poles = n_poles
        self.positive = _direction(eq, mode) is Direction.POSITIVE_T
        self._cache: dict[tuple[float, bool], object] = {}

    def __call__(self, x: float, coarse: bool = True):
        key = (x, coarse)
        if key not in self._cache:
            if self.positive:
                val = _signature(self.eq, self.mode, x, self.cfg, coarse, self.n_poles)
            else:
                val = _negative_key(self.eq, self.mode, x, self.cfg, coarse)
            self._cache[key] = val
        return self._cache[key]


def scan_brackets(
    eq: Equation,
    mode: SearchMode | ModeKind | str,
    search_range: tuple[float, float],
    step: float,
    cfg: IntegrationConfig | None = None,
) -> list[tuple[float, float]]:
    """Brackets [x, x+step] on which the discriminant class flips.

    The k-th returned bracket contains the k-th eigenvalue inside the range.
    Two eigenvalues closer than the step cannot be separated (the class
    returns to itself); a warning is emitted when detected brackets crowd
    within two steps of each other, which signals that risk.
    """
    mode = SearchMode.coerce(mode)
    if step <= 0.0:
        raise ValueError("step must be positive")
    lo, hi = search_range
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ValueError("search range must be a finite nonempty interval")
    if cfg is None:
        cfg = IntegrationConfig()
    if eq.kind is EquationKind.TOY_MODEL:
        disc = lambda x, coarse=True: _toy_count(x, cfg, coarse)
    else:
        n_poles = int((hi / 1.2) ** 3) + 8 if _direction(eq, mode) is Direction.POSITIVE_T else None
        disc = _Discriminant(eq, mode, cfg, n_poles=n_poles)

    brackets = []
    x = lo
    prev = disc(x)
    while x < hi:
        nxt = min(x + step, hi)
        if nxt == x:
            break
        cur = disc(nxt)
        if _keys_differ(prev, cur):
            brackets.append((x, nxt))
        x, prev = nxt, cur
    for (a0, _), (b0, _) in zip(brackets, brackets[1:]):
        if b0 - a0 < 2.0 * step:
            warnings.warn(
                f"brackets at {a0:.6g} and {b0:.6g} are within two scan steps; "
                "eigenvalue pairs inside one step would go undetected - shrink the step",
                stacklevel=2,
            )
            break
    return brackets


def _half_steps(disc, lo, hi, k_lo, k_hi, stop, coarse):
    while hi - lo > stop:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        k_mid = disc(mid, coarse)
        if not _keys_differ(k_mid, k_lo):
            lo = mid
        elif not _keys_differ(k_mid, k_hi):
            hi = mid
        else:
            raise BisectionError(
                f"probe {mid!r} produced class {k_mid!r}, matching neither "
                f"{k_lo!r} nor {k_hi!r}", probe=mid,
            )
    return lo, hi


def _bisect_core(disc, bracket, tol, fine_width):
    lo, hi = bracket
    k_lo, k_hi = disc(lo, True), disc(hi, True)
    if not _keys_differ(k_lo, k_hi):
        raise BisectionError(f"bracket endpoints {bracket} share the class {k_lo!r}")
    if hi - lo > fine_width:
        lo, hi = _half_steps(disc, lo, hi, k_lo, k_hi, fine_width, coarse=True)
    # The coarse and tight integrators place the flip at slightly different
    # points, so the coarse-phase bracket may no longer straddle the tight
    # flip. Re-anchor the endpoints at the tight tolerance, widening until
    # they disagree again.
    k_lo, k_hi = disc(lo, False), disc(hi, False)
    grow = max(hi - lo, fine_width)
    tries = 0
    while not _keys_differ(k_lo, k_hi):
        lo, hi = lo - grow, hi + grow
        grow *= 2.0
        tries += 1
        if tries > 12:
            raise BisectionError(
                f"tight-tolerance flip escaped the bracket around {0.5 * (lo + hi)!r}"
            )
        k_lo, k_hi = disc(lo, False), disc(hi, False)
    lo, hi = _half_steps(disc, lo, hi, k_lo, k_hi, tol, coarse=False)
    return lo, hi, k_lo, k_hi


def bisect(
    eq: Equation,
    mode: SearchMode | ModeKind | str,
    bracket: tuple[float, float],
    tol: float = 1e-9,
    cfg: IntegrationConfig | None = None,
    index: int = 1,
) -> EigenvalueRecord:
    """Bisect one bracket down to the requested width.

    The endpoints must classify differently. While the bracket is wide the
    probes run at a coarse integration tolerance; the end game uses a
    tolerance tied to ``tol`` (flip points move by far less than the
    switch-over width, so the result matches an all-tight bisection).
    """
    mode = SearchMode.coerce(mode)
    if cfg is None:
        cfg = IntegrationConfig()
    if tol < 10.0 * cfg.rel_tol:
        raise ValueError(f"tol = {tol} is below 10 * rel_tol = {10 * cfg.rel_tol}")
    # Flip points move by ~3e3 * rel_tol for the second equation (simple
    # poles amplify traversal noise harder) and ~1e2 * rel_tol for the
    # first, so the end game runs tight enough for tol to be meaningful.
    denom = 1000.0 if eq.kind is EquationKind.PAINLEVE_II else 100.0
    fine_rel = min(1e-10, tol / denom)
    cfg_fine = replace(cfg, rel_tol=max(fine_rel, 1e-13), abs_tol=max(fine_rel * 1e-2, 1e-15))

    if eq.kind is EquationKind.TOY_MODEL:
        raise ValueError("use toy_eigen_table for the toy model")
    positive = _direction(eq, mode) is Direction.POSITIVE_T
    n_poles = None
    pole_count = None
    if positive:
        sig_lo = _signature(eq, mode, bracket[0], cfg_fine, True, index + 6)
        sig_hi = _signature(eq, mode, bracket[1], cfg_fine, True, index + 6)
        common = min(len(sig_lo), len(sig_hi))
        if sig_lo[:common] == sig_hi[:common]:
            raise BisectionError(f"bracket endpoints {bracket} share the blow-up signature")
        m = next(i for i in range(common) if sig_lo[i] != sig_hi[i])
        n_poles = m + 2
        pole_count = m  # poles traversed before the decaying stretch
    disc = _Discriminant(eq, mode, cfg_fine, n_poles=n_poles)
    lo, hi, k_lo, k_hi = _bisect_core(disc, bracket, tol, fine_width=1e-5)

    value = 0.5 * (lo + hi)
    if not positive:
        stable_x = lo if k_lo == "stable" else hi
        pc = _probe_cfg(eq, mode, stable_x, cfg_fine, coarse=False)
        traj = integrate(eq, _initial_data(eq, mode, stable_x), Direction.NEGATIVE_T, pc)
        pole_count = len(traj.poles)
    return EigenvalueRecord(index, value, hi - lo, pole_count, mode)


def separatrix_check(
    eq: Equation,
    mode: SearchMode | ModeKind | str,
    value: float,
    uncertainty: float = 1e-9,
    cfg: IntegrationConfig | None = None,
):
    """Classify the trajectory at a converged critical value.

    A double-precision trajectory shadows the separatrix only over a finite
    stretch past the turning point (log(band/uncertainty) e-foldings of the
    local instability rate), so the run stops inside that stretch and the
    classification window is the longest branch-tracking run found there.
    Returns the :class:`SolutionClass`, which callers assert to be a
    separatrix (negative direction) or decay (positive direction).
    """
    mode = SearchMode.coerce(mode)
    if cfg is None:
        cfg = IntegrationConfig(rel_tol=1e-11, abs_tol=1e-13)
    direction = _direction(eq, mode)
    init = _initial_data(eq, mode, value)
    if direction is Direction.POSITIVE_T:
        pc = replace(cfg, t_horizon=25.0, max_step=min(cfg.max_step, 0.05))
        traj = integrate(eq, init, direction, pc)
        return classify(eq, traj)

    e = _trial_energy(eq, mode, value)
    if eq.kind is EquationKind.PAINLEVE_I:
        turn = 6.0 * (0.5 * e) ** (2.0 / 3.0)
        rate = math.sqrt(12.0) * (turn / 6.0) ** 0.25
    else:
        turn = math.sqrt(8.0 * e)
        rate = math.sqrt(2.0 * turn)
    split = math.log(1e-3 / max(uncertainty, 1e-13)) / rate
    horizon = -(turn + max(2.0, 0.8 * split) + 2.0)
    pc = replace(cfg, t_horizon=horizon, max_step=min(cfg.max_step, 0.1))
    traj = integrate(eq, init, direction, pc)
    win = _branch_window(eq, traj)
    if win is None:
        raise ClassificationError(
            f"trajectory at {value!r} never tracks a branch curve within the band"
        )
    return classify(eq, traj, window=win)


def _branch_window(eq, traj, band: float = 1e-3):
    """Longest contiguous stretch where the trajectory hugs a branch curve."""
    rt, ry = traj.real_t(), traj.real_y()
    m = rt < -0.5
    rt, ry = rt[m], ry[m]
    if len(rt) < 4:
        return None
    bw = branch_curve(eq, rt)
    ok = (np.abs(ry - bw) <= band * bw) | (np.abs(ry + bw) <= band * bw)
    best = None
    i = 0
    n = len(ok)
    while i < n:
        if ok[i]:
            j = i
            while j + 1 < n and ok[j + 1]:
                j += 1
            if best is None or abs(rt[j] - rt[i]) > abs(rt[best[1]] - rt[best[0]]):
                best = (i, j)
            i = j + 1
        else:
            i += 1
    if best is None:
        return None
    i, j = best
    if j - i < 3:
        return None
    span = rt[j] - rt[i]
    return (rt[j] - 0.05 * span, rt[i] + 0.05 * span)


_SCAN_SEEDS = {
    # (equation kind, mode kind):
    #   (scan origin, initial step, growth exponent p, growth coefficient guess)
    # The coefficient guesses only bound the scan and size the first steps;
    # results never depend on them.
    (EquationKind.PAINLEVE_I, ModeKind.SLOPE): (0.2, 0.3, 3.0 / 5.0, 2.1),
    (EquationKind.PAINLEVE_I, ModeKind.VALUE): (-0.1, 0.12, 2.0 / 5.0, 1.1),
    (EquationKind.PAINLEVE_II, ModeKind.SLOPE): (0.1, 0.1, 2.0 / 3.0, 1.9),
    (EquationKind.PAINLEVE_II, ModeKind.VALUE): (0.3, 0.08, 1.0 / 3.0, 1.3),
}


def eigen_table(
    eq: Equation,
    mode: SearchMode | ModeKind | str,
    n_max: int,
    tol: float = 1e-9,
    cfg: IntegrationConfig | None = None,
) -> list[EigenvalueRecord]:
    """First ``n_max`` critical initial conditions of a search mode.

    Scans outward from the origin with a step that adapts to the predicted
    eigenvalue spacing (which shrinks like n^(p-1)), bisecting every class
    flip. Indices are ordinal in the scanned variable. On a mid-table
    failure a :class:`PartialTableError` carrying the finished records is
    raised.
    """
    if eq.kind is EquationKind.TOY_MODEL:
        return toy_eigen_table(n_max, tol=max(tol, 1e-8), cfg=cfg)
    mode = SearchMode.coerce(mode)
    if n_max < 1 or n_max > 30:
        raise ValueError("n_max must be between 1 and 30")
    if cfg is None:
        cfg = IntegrationConfig()
    origin, step0, p, coeff = _SCAN_SEEDS[(eq.kind, mode.kind)]
    sign = -1.0 if origin < 0 else 1.0
    limit = 1.7 * coeff * (n_max + 1) ** p + 3.0

    positive = _direction(eq, mode) is Direction.POSITIVE_T
    disc = _Discriminant(eq, mode, cfg, n_poles=(n_max + 3) if positive else None)
    records: list[EigenvalueRecord] = []
    x = abs(origin)
    step = step0
    try:
        prev_key = disc(sign * x)
        while len(records) < n_max:
            if x > limit:
                raise BisectionError(
                    f"scan passed |x| = {limit:.3g} with only {len(records)} of "
                    f"{n_max} eigenvalues found"
                )
            nxt = x + step
            key = disc(sign * nxt)
            if _keys_differ(prev_key, key):
                idx = len(records) + 1
                rec = bisect(eq, mode, tuple(sorted((sign * x, sign * nxt))), tol=tol,
                             cfg=cfg, index=idx)
                records.append(rec)
                if len(records) >= 2:
                    n = len(records)
                    gap = abs(records[-1].value - records[-2].value)
                    ratio = ((n + 1) ** p - n ** p) / (n ** p - (n - 1) ** p)
                    step = max(gap * ratio * 0.25, tol * 10)
            x, prev_key = nxt, key
    except (BisectionError, ClassificationError) as exc:
        raise PartialTableError(str(exc), records, failed_index=len(records) + 1) from exc
    return records


def _toy_count(a: float, cfg: IntegrationConfig, coarse: bool = True) -> int:
    kw = dict(_COARSE) if coarse else {}
    pc = replace(cfg, **kw) if kw else cfg
    traj = integrate(
        Equation(EquationKind.TOY_MODEL, 0, 1), InitialData(a), Direction.POSITIVE_T, pc
    )
    return count_toy_maxima(traj)


def toy_eigen_table(
    n_max: int,
    tol: float = 1e-6,
    cfg: IntegrationConfig | None = None,
) -> list[EigenvalueRecord]:
    """Critical initial values of the toy model, by bisection on the
    maxima count. The n-th record is where the count first reaches
    (count at the scan origin) + n."""
    if n_max < 1 or n_max > 60:
        raise ValueError("n_max must be between 1 and 60")
    if cfg is None:
        cfg = IntegrationConfig(rel_tol=1e-9, abs_tol=1e-11)
    if tol < 10.0 * cfg.rel_tol:
        raise ValueError(f"tol = {tol} is below 10 * rel_tol = {10 * cfg.rel_tol}")
    mode = SearchMode(ModeKind.TOY)
    records: list[EigenvalueRecord] = []
    a = 0.05
    base = _toy_count(a, cfg)
    step = 0.4
    target_scale = 2.0 ** (5.0 / 6.0)
    try:
        while len(records) < n_max:
            n = len(records) + 1
            if a > target_scale * math.sqrt(n_max + 2) + 3.0:
                raise BisectionError(f"toy scan ran past a = {a:.3g}")
            nxt = a + step
            cnt = _toy_count(nxt, cfg)
            have = base + len(records)
            if cnt > have:
                # bisect to the first jump inside (a, nxt); a multi-jump
                # interval is handled one jump at a time
                lo, hi = a, nxt
                while hi - lo > tol:
                    coarse = (hi - lo) > 1e-4
                    mid = 0.5 * (lo + hi)
                    if _toy_count(mid, cfg, coarse) > have:
                        hi = mid
                    else:
                        lo = mid
                value = 0.5 * (lo + hi)
                records.append(EigenvalueRecord(n, value, hi - lo, 0, mode))
                a = value + tol
                if len(records) >= 2:
                    gap = records[-1].value - records[-2].value
                    step = max(0.25 * gap, 100 * tol)
                continue
            a = nxt
    except BisectionError as exc:
        raise PartialTableError(str(exc), records, failed_index=len(records) + 1) from exc
    return records
