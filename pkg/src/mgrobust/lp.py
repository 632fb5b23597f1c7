"""Bounded-variable linear programming with exact duals.

Solves ``min c'x`` subject to ``row_lo <= A x <= row_hi`` and
``lo <= x <= hi`` (any side may be infinite; equal sides make an
equality). Every row gets a logical variable bounded by the row limits,
so the working form is ``[A -I][x; s] = 0`` and a basis is any m columns
of that matrix. The solver is a primal revised simplex with an explicit
dense basis inverse, a composite (infeasibility-minimizing) phase 1 with
a long-step ratio test, Dantzig pricing, and Bland's rule once pivots
stall. Results are deterministic for identical input.

Dual conventions: ``row_duals[i]`` is the multiplier of row i; it is
nonnegative when the row binds at its lower limit, nonpositive at its
upper limit, and free for an equality. ``reduced_costs`` is
``c - A' y``. The dual objective used for the strong-duality check is
``sum_i bound(y_i) + sum_j bound(rc_j)`` where each term picks the lower
bound for a positive multiplier and the upper bound for a negative one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.sparse as sp
from scipy.linalg.blas import dger

__all__ = [
    "LinearProgram",
    "LpBuilder",
    "LpOptions",
    "LpSolution",
    "LpStatus",
    "IterationLimitError",
    "NumericalTroubleError",
    "solve_lp",
    "verify_kkt",
]

INF = float("inf")


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class IterationLimitError(RuntimeError):
    """Pivot budget exhausted before the solve finished."""


class NumericalTroubleError(RuntimeError):
    """The basis could not be kept consistent despite refactorization."""


@dataclass(frozen=True)
class LinearProgram:
    """Immutable LP data. Build with :class:`LpBuilder`."""

    c: np.ndarray
    var_lo: np.ndarray
    var_hi: np.ndarray
    a: sp.csr_matrix
    row_lo: np.ndarray
    row_hi: np.ndarray
    var_names: tuple[str, ...] | None = None
    row_names: tuple[str, ...] | None = None

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_rows(self) -> int:
        return self.row_lo.shape[0]

    def rows_as_maps(self) -> list[tuple[dict[int, float], float, float]]:
        """Row view as (coefficient map, lo, hi), mainly for inspection."""
        out = []
        csr = self.a
        for i in range(self.n_rows):
            sl = slice(csr.indptr[i], csr.indptr[i + 1])
            coeffs = dict(zip(csr.indices[sl].tolist(), csr.data[sl].tolist()))
            out.append((coeffs, float(self.row_lo[i]), float(self.row_hi[i])))
        return out

    def with_var_bounds(self, updates: Mapping[int, tuple[float, float]]) -> "LinearProgram":
        """Copy of the program with some variable bounds replaced."""
        lo = self.var_lo.copy()
        hi = self.var_hi.copy()
        for j, (l, h) in updates.items():
            lo[j] = l
            hi[j] = h
        return LinearProgram(self.c, lo, hi, self.a, self.row_lo, self.row_hi,
                             self.var_names, self.row_names)

    def validate(self) -> None:
        if not np.all(np.isfinite(self.c)):
            raise ValueError("objective coefficients must be finite")
        if np.any(self.var_lo > self.var_hi):
            j = int(np.argmax(self.var_lo > self.var_hi))
            raise ValueError(f"variable {self._vname(j)} has lo > hi")
        if np.any(self.row_lo > self.row_hi):
            i = int(np.argmax(self.row_lo > self.row_hi))
            raise ValueError(f"row {self._rname(i)} has lo > hi")
        if self.a.nnz and not np.all(np.isfinite(self.a.data)):
            raise ValueError("row coefficients must be finite")

    def _vname(self, j: int) -> str:
        return self.var_names[j] if self.var_names else f"x{j}"

    def _rname(self, i: int) -> str:
        return self.row_names[i] if self.row_names else f"r{i}"


class LpBuilder:
    """Incremental construction of a :class:`LinearProgram`."""

    def __init__(self):
        self._obj: list[float] = []
        self._lo: list[float] = []
        self._hi: list[float] = []
        self._vnames: list[str] = []
        self._rows: list[dict[int, float]] = []
        self._rlo: list[float] = []
        self._rhi: list[float] = []
        self._rnames: list[str] = []

    @property
    def n_vars(self) -> int:
        return len(self._obj)

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    def add_var(self, obj: float = 0.0, lo: float = 0.0, hi: float = INF,
                name: str | None = None) -> int:
        j = len(self._obj)
        self._obj.append(float(obj))
        self._lo.append(float(lo))
        self._hi.append(float(hi))
        self._vnames.append(name if name is not None else f"x{j}")
        return j

    def add_row(self, coeffs: Mapping[int, float], lo: float = -INF, hi: float = INF,
                name: str | None = None) -> int:
        i = len(self._rows)
        merged: dict[int, float] = {}
        for j, v in coeffs.items():
            if v != 0.0:
                merged[int(j)] = merged.get(int(j), 0.0) + float(v)
        self._rows.append(merged)
        self._rlo.append(float(lo))
        self._rhi.append(float(hi))
        self._rnames.append(name if name is not None else f"r{i}")
        return i

    def add_obj(self, j: int, coef: float) -> None:
        self._obj[j] += float(coef)

    def build(self) -> LinearProgram:
        n = len(self._obj)
        m = len(self._rows)
        data, indices, indptr = [], [], [0]
        for row in self._rows:
            for j in sorted(row):
                indices.append(j)
                data.append(row[j])
            indptr.append(len(indices))
        a = sp.csr_matrix(
            (np.asarray(data, dtype=float), np.asarray(indices, dtype=np.int32),
             np.asarray(indptr, dtype=np.int32)),
            shape=(m, n),
        )
        lp = LinearProgram(
            c=np.asarray(self._obj, dtype=float),
            var_lo=np.asarray(self._lo, dtype=float),
            var_hi=np.asarray(self._hi, dtype=float),
            a=a,
            row_lo=np.asarray(self._rlo, dtype=float),
            row_hi=np.asarray(self._rhi, dtype=float),
            var_names=tuple(self._vnames),
            row_names=tuple(self._rnames),
        )
        lp.validate()
        return lp


@dataclass(frozen=True)
class LpOptions:
    feas_tol: float = 1e-7
    opt_tol: float = 1e-7
    max_pivots: int | None = None  # default: 200 + 60 * (n_rows + n_vars)
    stall_limit: int = 80  # degenerate pivots before switching to Bland's rule
    refactor_every: int = 100


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    objective_value: float
    primal: np.ndarray
    row_duals: np.ndarray
    reduced_costs: np.ndarray
    n_pivots: int = 0
    certificate: np.ndarray | None = None  # row multipliers proving infeasibility
    certificate_gap: float = 0.0


_BASIC, _AT_LO, _AT_UP, _FREE, _FIXED = 0, 1, 2, 3, 4

_PIVOT_TOL = 1e-9
_FLIP = -1  # sentinel leaving position: entering variable crosses to its other bound


class _Simplex:
    def __init__(self, lp: LinearProgram, opts: LpOptions):
        self.lp = lp
        self.opts = opts
        n, m = lp.n_vars, lp.n_rows
        self.n, self.m = n, m
        self.N = n + m
        self.csc = lp.a.tocsc()
        self.at = lp.a.T.tocsr()  # for A' y products
        self.lo = np.concatenate([lp.var_lo, lp.row_lo])
        self.hi = np.concatenate([lp.var_hi, lp.row_hi])
        self.cost = np.concatenate([lp.c, np.zeros(m)])
        # scale-aware feasibility slack per variable
        self.tol_lo = opts.feas_tol * np.maximum(1.0, np.where(np.isfinite(self.lo), np.abs(self.lo), 0.0))
        self.tol_hi = opts.feas_tol * np.maximum(1.0, np.where(np.isfinite(self.hi), np.abs(self.hi), 0.0))

        self.x = np.zeros(self.N)
        self.state = np.full(self.N, _AT_LO, dtype=np.int8)
        for j in range(n):
            l, h = self.lo[j], self.hi[j]
            if l == h:
                self.state[j], self.x[j] = _FIXED, l
            elif np.isfinite(l) and np.isfinite(h):
                if abs(l) <= abs(h):
                    self.state[j], self.x[j] = _AT_LO, l
                else:
                    self.state[j], self.x[j] = _AT_UP, h
            elif np.isfinite(l):
                self.state[j], self.x[j] = _AT_LO, l
            elif np.isfinite(h):
                self.state[j], self.x[j] = _AT_UP, h
            else:
                self.state[j], self.x[j] = _FREE, 0.0
        self.state[n:] = _BASIC

        self.basis = np.arange(n, n + m, dtype=np.int64)
        self.binv = np.asfortranarray(-np.eye(m))  # inverse of the all-logical basis -I
        self._set_basic_values()

        self.n_pivots = 0
        self.since_refactor = 0
        self.bland = False
        self.degen_run = 0
        self.trouble_retries = 0

    # ---- linear algebra ---------------------------------------------------

    def _column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Sparse column j of [A -I] as (row indices, values)."""
        if j < self.n:
            sl = slice(self.csc.indptr[j], self.csc.indptr[j + 1])
            return self.csc.indices[sl], self.csc.data[sl]
        return np.array([j - self.n], dtype=np.int32), np.array([-1.0])

    def _ftran(self, j: int) -> np.ndarray:
        idx, vals = self._column(j)
        if idx.size == 0:
            return np.zeros(self.m)
        return self.binv[:, idx] @ vals

    def _set_basic_values(self):
        """Recompute basic values from the nonbasic ones."""
        xs = self.x[: self.n].copy()
        xs[self.state[: self.n] == _BASIC] = 0.0
        rhs = -(self.lp.a @ xs)
        logical = self.x[self.n:].copy()
        logical[self.state[self.n:] == _BASIC] = 0.0
        rhs += logical
        self.x[self.basis] = self.binv @ rhs

    def _refactor(self):
        cols = np.zeros((self.m, self.m))
        for k, j in enumerate(self.basis):
            idx, vals = self._column(int(j))
            cols[idx, k] = vals
        try:
            self.binv = np.asfortranarray(np.linalg.inv(cols))
        except np.linalg.LinAlgError as exc:
            raise NumericalTroubleError("singular basis during refactorization") from exc
        self._set_basic_values()
        self.since_refactor = 0

    # ---- pricing ----------------------------------------------------------

    def _phase(self) -> int:
        xb = self.x[self.basis]
        self._below = xb < self.lo[self.basis] - self.tol_lo[self.basis]
        self._above = xb > self.hi[self.basis] + self.tol_hi[self.basis]
        return 1 if (self._below.any() or self._above.any()) else 2

    def _duals(self, phase: int) -> np.ndarray:
        if phase == 1:
            g = np.where(self._above, 1.0, 0.0) - np.where(self._below, 1.0, 0.0)
        else:
            g = self.cost[self.basis]
        return self.binv.T @ g

    def _reduced(self, y: np.ndarray, phase: int) -> np.ndarray:
        d = np.empty(self.N)
        base = self.cost[: self.n] if phase == 2 else 0.0
        d[: self.n] = base - (self.at @ y)
        d[self.n:] = y
        return d

    def _pick_entering(self, d: np.ndarray, phase: int) -> int:
        dtol = 1e-10 * (1.0 + (float(np.max(np.abs(self.cost))) if phase == 2 else 1.0))
        st = self.state
        viol = np.zeros(self.N)
        lo_mask = st == _AT_LO
        up_mask = st == _AT_UP
        fr_mask = st == _FREE
        viol[lo_mask] = -d[lo_mask] - dtol
        viol[up_mask] = d[up_mask] - dtol
        viol[fr_mask] = np.abs(d[fr_mask]) - dtol
        if self.bland:
            nz = np.nonzero(viol > 0)[0]
            return int(nz[0]) if nz.size else -1
        j = int(np.argmax(viol))
        return j if viol[j] > 0 else -1

    # ---- ratio tests ------------------------------------------------------
    # Both return (theta, leave_pos, to_upper): leave_pos is a basis
    # position, _FLIP for a bound flip of the entering variable, or None
    # when no finite step exists.

    def _leave_phase2(self, w: np.ndarray, dirn: float, own_range: float):
        rate = -dirn * w
        xb = self.x[self.basis]
        lob, hib = self.lo[self.basis], self.hi[self.basis]
        absw = np.abs(w)
        nz = absw > _PIVOT_TOL
        up_mask = nz & (rate > 0) & np.isfinite(hib)
        dn_mask = nz & (rate < 0) & np.isfinite(lob)
        t = np.full(self.m, INF)
        if up_mask.any():
            t[up_mask] = (hib[up_mask] - xb[up_mask] + self.tol_hi[self.basis][up_mask]) / rate[up_mask]
        if dn_mask.any():
            t[dn_mask] = (xb[dn_mask] - lob[dn_mask] + self.tol_lo[self.basis][dn_mask]) / (-rate[dn_mask])
        np.maximum(t, 0.0, out=t)
        tmin = min(float(t.min(initial=INF)), own_range)
        if not np.isfinite(tmin):
            return None, None, None
        if own_range <= tmin + 1e-12 and own_range <= float(t.min(initial=INF)):
            # prefer a pivot when one blocks at essentially the same step
            near = t <= tmin + 1e-12
            if not near.any():
                return own_range, _FLIP, False
        near = np.nonzero(t <= tmin + 1e-12)[0]
        if near.size == 0:
            return own_range, _FLIP, False
        k = int(near[np.argmax(absw[near])])
        return float(t[k]), k, bool(up_mask[k])

    def _leave_phase1(self, w: np.ndarray, dirn: float, own_range: float, slope0: float):
        """Long-step ratio test minimizing the infeasibility sum.

        Breakpoints where an infeasible basic reaches its violated bound
        only bend the objective (the step may continue through them);
        a feasible basic reaching a bound is a hard stop.
        """
        rate = -dirn * w
        xb = self.x[self.basis]
        events: list[tuple[float, int, int, float, bool]] = []  # (theta, hard, k, gain, to_upper)
        nz_idx = np.nonzero(np.abs(w) > _PIVOT_TOL)[0]
        if nz_idx.size:
            r = rate[nz_idx]
            b = self.basis[nz_idx]
            l, h = self.lo[b], self.hi[b]
            below = self._below[nz_idx]
            above = self._above[nz_idx]
            xk = xb[nz_idx]
            soft_up = below & (r > 0)  # climbing back to a violated lower bound
            soft_dn = above & (r < 0)
            hard_hi = (~below) & (~above) & (r > 0) & np.isfinite(h)
            hard_lo = (~below) & (~above) & (r < 0) & np.isfinite(l)
            for i in np.nonzero(soft_up)[0]:
                events.append((max((l[i] - xk[i]) / r[i], 0.0), 0, int(nz_idx[i]), abs(r[i]), False))
                if np.isfinite(h[i]):
                    events.append((max((h[i] - xk[i]) / r[i], 0.0), 1, int(nz_idx[i]), 0.0, True))
            for i in np.nonzero(soft_dn)[0]:
                events.append((max((xk[i] - h[i]) / (-r[i]), 0.0), 0, int(nz_idx[i]), abs(r[i]), True))
                if np.isfinite(l[i]):
                    events.append((max((xk[i] - l[i]) / (-r[i]), 0.0), 1, int(nz_idx[i]), 0.0, False))
            for i in np.nonzero(hard_hi)[0]:
                events.append((max((h[i] - xk[i]) / r[i], 0.0), 1, int(nz_idx[i]), 0.0, True))
            for i in np.nonzero(hard_lo)[0]:
                events.append((max((xk[i] - l[i]) / (-r[i]), 0.0), 1, int(nz_idx[i]), 0.0, False))
        if np.isfinite(own_range):
            events.append((own_range, 1, _FLIP, 0.0, False))
        events.sort(key=lambda e: (e[0], 1 - e[1], e[2]))
        slope = slope0
        for theta, hard, k, gain, up in events:
            if hard:
                return theta, k, up
            slope += gain
            if slope >= -1e-12:
                return theta, k, up
        return None, None, None

    # ---- main loop --------------------------------------------------------

    def solve(self) -> LpSolution:
        max_pivots = self.opts.max_pivots
        if max_pivots is None:
            max_pivots = 200 + 60 * (self.m + self.n)
        clean_retries = 0

        while True:
            phase = self._phase()
            y = self._duals(phase)
            d = self._reduced(y, phase)
            j = self._pick_entering(d, phase)

            if j < 0:
                # refresh the factorization before declaring a terminal state
                if self.since_refactor > 0 and clean_retries < 3:
                    self._refactor()
                    clean_retries += 1
                    continue
                if phase == 1:
                    return self._infeasible(y)
                return self._optimal(y)
            clean_retries = 0

            if self.n_pivots >= max_pivots:
                raise IterationLimitError(
                    f"pivot limit {max_pivots} reached without a terminal state"
                )

            dirn = 1.0 if (self.state[j] == _AT_LO or (self.state[j] == _FREE and d[j] < 0)) else -1.0
            w = self._ftran(j)
            own_range = (self.hi[j] - self.lo[j]
                         if np.isfinite(self.lo[j]) and np.isfinite(self.hi[j]) else INF)

            if phase == 1:
                theta, k, to_upper = self._leave_phase1(w, dirn, own_range, -abs(d[j]))
                if theta is None:
                    self._numerical_retry("phase-1 step without a stopping point")
                    continue
            else:
                theta, k, to_upper = self._leave_phase2(w, dirn, own_range)
                if theta is None:
                    return self._unbounded(y)

            if k != _FLIP and abs(w[k]) <= 1e-11:
                self._numerical_retry("vanishing pivot element")
                continue
            self._apply_step(j, dirn, w, theta, k, to_upper)

    def _numerical_retry(self, why: str):
        self._refactor()
        self.trouble_retries += 1
        if self.trouble_retries > 5:
            raise NumericalTroubleError(why)

    def _apply_step(self, j: int, dirn: float, w: np.ndarray, theta: float,
                    k: int, to_upper: bool):
        theta = max(theta, 0.0)
        self.x[self.basis] -= dirn * theta * w
        if k == _FLIP:
            self.x[j] = self.hi[j] if dirn > 0 else self.lo[j]
            self.state[j] = _AT_UP if dirn > 0 else _AT_LO
        else:
            start = (self.lo[j] if self.state[j] == _AT_LO else
                     self.hi[j] if self.state[j] == _AT_UP else 0.0)
            leave = int(self.basis[k])
            self.x[j] = start + dirn * theta
            self.x[leave] = self.hi[leave] if to_upper else self.lo[leave]
            if self.lo[leave] == self.hi[leave]:
                self.state[leave] = _FIXED
            else:
                self.state[leave] = _AT_UP if to_upper else _AT_LO
            self.state[j] = _BASIC
            self.basis[k] = j
            u = -w / w[k]
            u[k] = 1.0 / w[k] - 1.0
            pivot_row = self.binv[k].copy()  # dger writes in place; guard aliasing
            self.binv = dger(1.0, u, pivot_row, a=self.binv, overwrite_a=1)
            self.since_refactor += 1
            self.trouble_retries = 0
            if self.since_refactor >= self.opts.refactor_every:
                self._refactor()
        self.n_pivots += 1
        if theta <= 1e-12:
            self.degen_run += 1
            if self.degen_run >= self.opts.stall_limit:
                self.bland = True
        else:
            self.degen_run = 0
            self.bland = False

    # ---- terminal states ----------------------------------------------------

    def _outputs(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rc = self.lp.c - (self.at @ y)
        return y.copy(), rc

    def _optimal(self, y) -> LpSolution:
        y_pub, rc = self._outputs(y)
        x = self.x[: self.n].copy()
        return LpSolution(LpStatus.OPTIMAL, float(self.lp.c @ x), x, y_pub, rc, self.n_pivots)

    def _unbounded(self, y) -> LpSolution:
        y_pub, rc = self._outputs(y)
        return LpSolution(LpStatus.UNBOUNDED, -INF, self.x[: self.n].copy(), y_pub, rc, self.n_pivots)

    def _infeasible(self, y) -> LpSolution:
        # Certificate: with multipliers y on the rows, the least value of
        # y'(Ax) the row limits demand exceeds the most the box can supply.
        tiny = 1e-11 * (1.0 + float(np.max(np.abs(y), initial=0.0)))
        need = 0.0
        for i in range(self.m):
            if y[i] > tiny:
                need += y[i] * self.lp.row_lo[i] if np.isfinite(self.lp.row_lo[i]) else -INF
            elif y[i] < -tiny:
                need += y[i] * self.lp.row_hi[i] if np.isfinite(self.lp.row_hi[i]) else -INF
        avail = 0.0
        aty = self.at @ y
        for jj in range(self.n):
            v = aty[jj]
            if v > tiny:
                avail += v * self.lp.var_hi[jj] if np.isfinite(self.lp.var_hi[jj]) else INF
            elif v < -tiny:
                avail += v * self.lp.var_lo[jj] if np.isfinite(self.lp.var_lo[jj]) else INF
        y_pub, rc = self._outputs(y)
        return LpSolution(LpStatus.INFEASIBLE, INF, self.x[: self.n].copy(), y_pub, rc,
                          self.n_pivots, certificate=y.copy(),
                          certificate_gap=float(need - avail))


def solve_lp(lp: LinearProgram, opts: LpOptions | None = None) -> LpSolution:
    """Solve a bounded-variable LP; see the module docstring for conventions.

    Raises :class:`IterationLimitError` when the pivot budget runs out
    (never a silently wrong ``OPTIMAL``).
    """
    lp.validate()
    opts = opts or LpOptions()
    if lp.n_rows == 0:
        return _solve_rowless(lp)
    return _Simplex(lp, opts).solve()


def _solve_rowless(lp: LinearProgram) -> LpSolution:
    """Separable corner case: optimize each variable against its own bounds."""
    x = np.zeros(lp.n_vars)
    for j in range(lp.n_vars):
        cj = lp.c[j]
        if cj > 0:
            if not np.isfinite(lp.var_lo[j]):
                return LpSolution(LpStatus.UNBOUNDED, -INF, x, np.zeros(0), lp.c.copy())
            x[j] = lp.var_lo[j]
        elif cj < 0:
            if not np.isfinite(lp.var_hi[j]):
                return LpSolution(LpStatus.UNBOUNDED, -INF, x, np.zeros(0), lp.c.copy())
            x[j] = lp.var_hi[j]
        else:
            if np.isfinite(lp.var_lo[j]):
                x[j] = lp.var_lo[j]
            elif np.isfinite(lp.var_hi[j]):
                x[j] = lp.var_hi[j]
    return LpSolution(LpStatus.OPTIMAL, float(lp.c @ x), x, np.zeros(0), lp.c.copy())


def verify_kkt(lp: LinearProgram, sol: LpSolution, tol: float = 1e-6) -> bool:
    """Independent optimality audit of an OPTIMAL solution.

    Checks primal feasibility, dual sign consistency against the active
    bounds, complementary slackness, and strong duality, each to ``tol``
    (scaled by the magnitude of the data involved).
    """
    if sol.status is not LpStatus.OPTIMAL:
        return False
    x, y = sol.primal, sol.row_duals

    def bound_tol(b):
        return tol * np.maximum(1.0, np.where(np.isfinite(b), np.abs(b), 0.0))

    if np.any(x < lp.var_lo - bound_tol(lp.var_lo)) or np.any(x > lp.var_hi + bound_tol(lp.var_hi)):
        return False
    s = lp.a @ x if lp.n_rows else np.zeros(0)
    if lp.n_rows:
        if np.any(s < lp.row_lo - bound_tol(lp.row_lo)) or np.any(s > lp.row_hi + bound_tol(lp.row_hi)):
            return False

    rc = lp.c - (lp.a.T @ y) if lp.n_rows else lp.c.copy()
    cmax = float(np.max(np.abs(lp.c), initial=0.0))
    if np.max(np.abs(rc - sol.reduced_costs), initial=0.0) > tol * (1.0 + cmax):
        return False

    dtol = tol * (1.0 + cmax + float(np.max(np.abs(y), initial=0.0)))
    vtol_lo, vtol_hi = bound_tol(lp.var_lo), bound_tol(lp.var_hi)
    for j in range(lp.n_vars):
        if lp.var_lo[j] == lp.var_hi[j]:
            continue
        at_lo = np.isfinite(lp.var_lo[j]) and x[j] <= lp.var_lo[j] + vtol_lo[j]
        at_up = np.isfinite(lp.var_hi[j]) and x[j] >= lp.var_hi[j] - vtol_hi[j]
        if not at_lo and rc[j] > dtol:
            return False
        if not at_up and rc[j] < -dtol:
            return False
    rtol_lo, rtol_hi = bound_tol(lp.row_lo), bound_tol(lp.row_hi)
    for i in range(lp.n_rows):
        if lp.row_lo[i] == lp.row_hi[i]:
            continue
        at_lo = np.isfinite(lp.row_lo[i]) and s[i] <= lp.row_lo[i] + rtol_lo[i]
        at_up = np.isfinite(lp.row_hi[i]) and s[i] >= lp.row_hi[i] - rtol_hi[i]
        if not at_lo and y[i] > dtol:
            return False
        if not at_up and y[i] < -dtol:
            return False

    dual_obj = 0.0
    for i in range(lp.n_rows):
        if y[i] > 0 and np.isfinite(lp.row_lo[i]):
            dual_obj += y[i] * lp.row_lo[i]
        elif y[i] < 0 and np.isfinite(lp.row_hi[i]):
            dual_obj += y[i] * lp.row_hi[i]
    for j in range(lp.n_vars):
        if rc[j] > 0 and np.isfinite(lp.var_lo[j]):
            dual_obj += rc[j] * lp.var_lo[j]
        elif rc[j] < 0 and np.isfinite(lp.var_hi[j]):
            dual_obj += rc[j] * lp.var_hi[j]
    gap_scale = 1.0 + abs(sol.objective_value)
    return abs(sol.objective_value - dual_obj) <= tol * gap_scale
