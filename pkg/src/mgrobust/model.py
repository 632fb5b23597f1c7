"""Domain model for robust microgrid scheduling.

Holds the immutable scenario description (generators, storage, adjustable
loads, hourly profiles, grid interface, uncertainty budget), instance
validation, and the feeder-side uncertainty arithmetic shared by the
master problem, the worst-case subproblem, and the CLI.

Conventions: hours are 0-based indices ``t = 0 .. horizon-1``; powers in
MW, energies in MWh, prices in $/MWh. A deviation is a per-hour sign in
{-1, 0, +1}; the realized prosumer solar at hour t is
``forecast[t] * (1 + error_fraction * sign[t])``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, fields
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "DispatchableUnit",
    "EnergyStorage",
    "AdjustableLoad",
    "Profiles",
    "GridInterface",
    "UncertaintySpec",
    "Instance",
    "Deviation",
    "Violation",
    "ValidationReport",
    "InvalidInstanceError",
    "validate_instance",
    "check_instance",
    "prosumer_net_load",
    "delta_series",
    "deviation_vertices",
    "deviation_vertex_count",
]


@dataclass(frozen=True)
class DispatchableUnit:
    """A controllable generator with linear cost ``cost_coeff * P``."""

    id: str
    cost_coeff: float  # $/MWh
    p_min: float  # MW
    p_max: float  # MW
    min_up: int  # hours the unit must stay on once started
    min_down: int  # hours the unit must stay off once stopped
    ramp_up: float  # MW per hour
    ramp_down: float  # MW per hour


@dataclass(frozen=True)
class EnergyStorage:
    """Battery-style storage; charge and discharge magnitudes are nonnegative."""

    id: str
    dch_min: float  # MW
    dch_max: float  # MW
    ch_min: float  # MW
    ch_max: float  # MW
    cap_min: float  # MWh
    cap_max: float  # MWh
    eta: float  # round-trip efficiency applied on discharge, in (0, 1]
    min_charge_time: int  # hours
    min_discharge_time: int  # hours
    initial_energy: float  # MWh at the start of the horizon


@dataclass(frozen=True)
class AdjustableLoad:
    """A shiftable load that must absorb ``required_energy`` inside its window.

    ``window_start``/``window_end`` are inclusive 0-based hour indices.
    """

    id: str
    d_min: float  # MW while operating
    d_max: float  # MW while operating
    required_energy: float  # MWh over the whole window
    window_start: int
    window_end: int
    min_on_time: int  # hours


@dataclass(frozen=True)
class Profiles:
    """Hourly series over the scheduling horizon.

    ``prosumer_solar_forecast`` is the uncertain quantity; everything else
    is deterministic data.
    """

    horizon: int
    fixed_load: tuple[float, ...]  # MW, microgrid internal demand
    wind: tuple[float, ...]  # MW, microgrid wind output
    mg_solar: tuple[float, ...]  # MW, microgrid-owned solar output
    market_price: tuple[float, ...]  # $/MWh
    prosumer_load: tuple[float, ...]  # MW, aggregated feeder consumption
    prosumer_solar_forecast: tuple[float, ...]  # MW, aggregated feeder solar

    def __post_init__(self):
        for name in (
            "fixed_load",
            "wind",
            "mg_solar",
            "market_price",
            "prosumer_load",
            "prosumer_solar_forecast",
        ):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))


@dataclass(frozen=True)
class GridInterface:
    """Tie line to the utility plus the hourly variability the utility absorbs."""

    line_capacity: float  # MW, symmetric import/export limit
    delta_u: float  # MW per hour utility-side ramp allowance


@dataclass(frozen=True)
class UncertaintySpec:
    """Interval forecast-error band and the hour budget allowed at its edges."""

    error_fraction: float  # in [0, 1]
    budget_hours: int  # in [0, horizon]


@dataclass(frozen=True)
class Instance:
    """Full scheduling scenario."""

    units: tuple[DispatchableUnit, ...]
    storages: tuple[EnergyStorage, ...]
    adj_loads: tuple[AdjustableLoad, ...]
    profiles: Profiles
    grid: GridInterface
    uncertainty: UncertaintySpec
    tau: float = 1.0  # hours per period

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "storages", tuple(self.storages))
        object.__setattr__(self, "adj_loads", tuple(self.adj_loads))

    @property
    def horizon(self) -> int:
        return self.profiles.horizon


@dataclass(frozen=True)
class Deviation:
    """Per-hour deviation signs of the uncertain solar series."""

    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ValueError("deviation signs must be -1, 0, or +1")

    @classmethod
    def zero(cls, horizon: int) -> "Deviation":
        return cls((0,) * horizon)

    @property
    def nonzero_hours(self) -> int:
        return sum(1 for s in self.signs if s != 0)

    def __len__(self) -> int:
        return len(self.signs)


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "instance is valid"
        return "\n".join(str(v) for v in self.violations)


class InvalidInstanceError(ValueError):
    """Raised by entry points that require a valid instance."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


def _series_checks(bad, profiles: Profiles):
    T = profiles.horizon
    if T < 1:
        bad("profiles.horizon", f"horizon must be >= 1, got {T}")
        return
    nonneg = ("fixed_load", "wind", "mg_solar", "prosumer_load", "prosumer_solar_forecast")
    for f in fields(profiles):
        if f.name == "horizon":
            continue
        series = getattr(profiles, f.name)
        if len(series) != T:
            bad(f"profiles.{f.name}", f"length {len(series)} != horizon {T}")
            continue
        if any(not math.isfinite(v) for v in series):
            bad(f"profiles.{f.name}", "contains non-finite values")
        elif f.name in nonneg and any(v < 0 for v in series):
            bad(f"profiles.{f.name}", "negative values in a MW series")


def validate_instance(inst: Instance) -> ValidationReport:
    """Check every structural invariant; returns a report, never raises."""

    out: list[Violation] = []

    def bad(path, message):
        out.append(Violation(path, message))

    _series_checks(bad, inst.profiles)
    T = inst.profiles.horizon

    if not (inst.tau > 0):
        bad("tau", f"must be > 0, got {inst.tau}")

    for k, g in enumerate(inst.units):
        p = f"units[{k}]({g.id})"
        if not (0 <= g.p_min <= g.p_max):
            bad(p, f"need 0 <= p_min <= p_max, got p_min={g.p_min}, p_max={g.p_max}")
        if g.min_up < 1 or g.min_down < 1:
            bad(p, f"min_up and min_down must be >= 1, got {g.min_up}/{g.min_down}")
        if not (g.ramp_up > 0 and g.ramp_down > 0):
            bad(p, f"ramp rates must be > 0, got {g.ramp_up}/{g.ramp_down}")

    for k, s in enumerate(inst.storages):
        p = f"storages[{k}]({s.id})"
        if not (0 <= s.dch_min <= s.dch_max):
            bad(p, f"need 0 <= dch_min <= dch_max, got {s.dch_min}/{s.dch_max}")
        if not (0 <= s.ch_min <= s.ch_max):
            bad(p, f"need 0 <= ch_min <= ch_max, got {s.ch_min}/{s.ch_max}")
        if not (0 <= s.cap_min <= s.initial_energy <= s.cap_max):
            bad(
                p,
                "need 0 <= cap_min <= initial_energy <= cap_max, got "
                f"{s.cap_min}/{s.initial_energy}/{s.cap_max}",
            )
        if not (0 < s.eta <= 1):
            bad(p, f"eta must be in (0, 1], got {s.eta}")
        if s.min_charge_time < 1 or s.min_discharge_time < 1:
            bad(p, f"min charge/discharge times must be >= 1, got {s.min_charge_time}/{s.min_discharge_time}")

    for k, d in enumerate(inst.adj_loads):
        p = f"adj_loads[{k}]({d.id})"
        if not (0 <= d.d_min <= d.d_max):
            bad(p, f"need 0 <= d_min <= d_max, got {d.d_min}/{d.d_max}")
        if d.window_start > d.window_end:
            bad(p, f"window_start {d.window_start} > window_end {d.window_end}")
        if d.window_start < 0 or d.window_end >= T:
            bad(p, f"window [{d.window_start}, {d.window_end}] outside horizon 0..{T - 1}")
        if d.min_on_time < 1:
            bad(p, f"min_on_time must be >= 1, got {d.min_on_time}")
        wlen = d.window_end - d.window_start + 1
        lo_e = d.d_min * d.min_on_time * inst.tau
        hi_e = d.d_max * wlen * inst.tau
        if not (lo_e <= d.required_energy <= hi_e):
            bad(
                p,
                f"required_energy {d.required_energy} MWh outside feasible range "
                f"[{lo_e}, {hi_e}] implied by power limits and window",
            )

    if not (inst.grid.line_capacity > 0):
        bad("grid.line_capacity", f"must be > 0, got {inst.grid.line_capacity}")
    if not (inst.grid.delta_u >= 0):
        bad("grid.delta_u", f"must be >= 0, got {inst.grid.delta_u}")

    u = inst.uncertainty
    if not (0 <= u.error_fraction <= 1):
        bad("uncertainty.error_fraction", f"must be in [0, 1], got {u.error_fraction}")
    if not (0 <= u.budget_hours <= T):
        bad("uncertainty.budget_hours", f"must be in [0, horizon={T}], got {u.budget_hours}")

    ids = [g.id for g in inst.units] + [s.id for s in inst.storages] + [d.id for d in inst.adj_loads]
    dupes = {i for i in ids if ids.count(i) > 1}
    for i in sorted(dupes):
        bad("ids", f"duplicate entity id {i!r}")

    return ValidationReport(tuple(out))


def check_instance(inst: Instance) -> Instance:
    """Validate and raise ``InvalidInstanceError`` on any violation."""
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstanceError(report)
    return inst


def prosumer_net_load(profiles: Profiles, dev: Deviation, e: float) -> np.ndarray:
    """Feeder net load per hour: consumption minus realized solar.

    Realized solar is the forecast scaled by ``1 + e * sign``; the result
    can be negative when prosumers export.
    """
    if len(dev) != profiles.horizon:
        raise ValueError(f"deviation length {len(dev)} != horizon {profiles.horizon}")
    load = np.asarray(profiles.prosumer_load, dtype=float)
    solar = np.asarray(profiles.prosumer_solar_forecast, dtype=float)
    signs = np.asarray(dev.signs, dtype=float)
    return load - solar * (1.0 + e * signs)


def delta_series(net: Sequence[float]) -> np.ndarray:
    """Hour-to-hour change of a series, with the first element defined as 0."""
    arr = np.asarray(net, dtype=float)
    if arr.size == 0:
        raise ValueError("delta_series needs a nonempty series")
    out = np.zeros_like(arr)
    out[1:] = arr[1:] - arr[:-1]
    return out


MAX_ENUM_HORIZON = 12


def deviation_vertex_count(horizon: int, budget: int) -> int:
    """Number of sign vectors with at most ``budget`` nonzero entries."""
    return sum(math.comb(horizon, k) * 2**k for k in range(min(budget, horizon) + 1))


def deviation_vertices(horizon: int, budget: int) -> Iterator[Deviation]:
    """Yield every deviation with at most ``budget`` nonzero hours, exactly once.

    Guarded to small horizons; larger instances must search through the
    dual reformulation instead of enumerating.
    """
    if horizon > MAX_ENUM_HORIZON:
        raise ValueError(
            f"horizon {horizon} too large to enumerate (limit {MAX_ENUM_HORIZON}); "
            "use the dual reformulation"
        )
    if budget < 0 or budget > horizon:
        raise ValueError(f"budget must be in [0, {horizon}], got {budget}")
    for k in range(budget + 1):
        for hours in itertools.combinations(range(horizon), k):
            for signs in itertools.product((-1, 1), repeat=k):
                d = [0] * horizon
                for h, s in zip(hours, signs):
                    d[h] = s
                yield Deviation(tuple(d))
