# -*- coding: utf-8 -*-
"""Numerical engines: LP feasibility, L1 regression and hinge minimization."""
"""
  Halfspace learning toolkit
  Copyright (C) 2026 Halfspace Devteam

 This program is free software: you can redistribute it and/or modify
 it under the terms of the GNU General Public License as published by
 the Free Software Foundation, either version 3 of the License, or
 (at your option) any later version.

 This program is distributed in the hope that it will be useful,
 but WITHOUT ANY WARRANTY; without even the implied warranty of
 MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
 GNU General Public License for more details.

 You should have received a copy of the GNU General Public License
 along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""

import math

import numpy as np

from halfspace.learning import geometry, log, util
from halfspace.learning.errors import (DimensionMismatch, Infeasible,
    NumericalBreakdown, Unbounded)

PIVOT_TOLERANCE = 1e-9
FEASIBILITY_SLACK = 1e-7
OBJECTIVE_TOLERANCE = 1e-6

# constraint generation for tall feasibility systems
WORKING_SET_MIN = 64
WORKING_SET_PER_DIM = 4


class LinearConstraintSystem(object):
    """Rows a . v >= b over v in R^dim."""

    def __init__(self, A, b):
        A = np.array(A, dtype=float)
        b = np.array(b, dtype=float)
        if A.ndim != 2 or b.shape != (A.shape[0], ):
            raise ValueError("constraint rows and right-hand sides do not match")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("constraint system has non-finite entries")
        self.A = A
        self.b = b

    @classmethod
    def from_rows(cls, rows):
        rows = list(rows)
        dims = set(len(a) for a, unused in rows)
        if len(dims) > 1:
            raise DimensionMismatch(min(dims), max(dims))
        return cls([a for a, unused in rows], [b for unused, b in rows])

    @classmethod
    def separation(cls, S):
        """Rows y (v . x) >= 1, one per labeled sample."""
        return cls(S.y[:, None] * S.X, np.ones(len(S)))

    @property
    def dim(self):
        return self.A.shape[1]

    def __len__(self):
        return self.A.shape[0]

    def slack(self, v):
        return self.A.dot(v) - self.b


class _BoundedSimplex(object):
    """
    Dense tableau simplex for min c . x s.t. A x = b, 0 <= x <= upper, with
    one artificial column per row and bound flipping.

    Entering columns are priced by Dantzig's rule; after a degenerate pivot
    Bland's rule takes over until the objective moves again.
    """

    def __init__(self, A, b, upper, max_iterations, start_upper=None):
        m, n = A.shape
        self.m = m
        self.n = n
        self.upper = np.concatenate([np.asarray(upper, dtype=float), np.full(m, np.inf)])
        self.at_upper = np.zeros(n + m, dtype=bool)
        if start_upper is not None:
            self.at_upper[:n] = start_upper & np.isfinite(self.upper[:n])
        residual = b - A.dot(np.where(self.at_upper[:n], self.upper[:n], 0.0))
        self.row_sign = np.where(residual < 0, -1.0, 1.0)
        self.T = np.hstack([A * self.row_sign[:, None], np.eye(m)])
        self.basis = np.arange(n, n + m)
        self.x_basic = np.abs(residual)
        self.iterations = 0
        self.max_iterations = max_iterations

    def values(self):
        x = np.where(self.at_upper, self.upper, 0.0)
        x[self.basis] = self.x_basic
        return x

    def multipliers(self, cost):
        """Simplex multipliers pi of the original rows for the current basis."""
        inverse = self.T[:, self.n:]
        return cost[self.basis].dot(inverse) * self.row_sign

    def run(self, cost, allowed):
        reduced = None
        bland = False
        while True:
            if self.iterations >= self.max_iterations:
                raise NumericalBreakdown("simplex stalled after %d iterations" % (self.iterations, ))
            if reduced is None:
                reduced = cost - cost[self.basis].dot(self.T)
            nonbasic = allowed.copy()
            nonbasic[self.basis] = False
            increase = nonbasic & ~self.at_upper & (reduced < -PIVOT_TOLERANCE) & (self.upper > 0)
            decrease = nonbasic & self.at_upper & (reduced > PIVOT_TOLERANCE)
            candidates = np.flatnonzero(increase | decrease)
            if candidates.size == 0:
                return
            if bland:
                j = candidates[0]
            else:
                j = candidates[np.argmax(np.abs(reduced[candidates]))]
            step = self._step(j, 1.0 if increase[j] else -1.0)
            self.iterations += 1
            if step is not None:
                # the basis changed
                reduced = None
                bland = step <= PIVOT_TOLERANCE

    def _step(self, j, direction):
        """Moves column j; returns the step length of a pivot, None for a bound flip."""
        col = self.T[:, j] * direction
        flip = self.upper[j]
        bound = self.upper[self.basis]
        with np.errstate(divide='ignore', invalid='ignore'):
            down = np.where(col > PIVOT_TOLERANCE, np.maximum(self.x_basic, 0.0) / col, np.inf)
            up = np.where((col < -PIVOT_TOLERANCE) & np.isfinite(bound),
                np.maximum(bound - self.x_basic, 0.0) / -col, np.inf)
        ratios = np.minimum(down, up)
        best = ratios.min() if self.m else np.inf

        if not np.isfinite(best) and not np.isfinite(flip):
            raise Unbounded("objective unbounded along column %d" % (j, ))

        if flip <= best:
            # entering variable reaches its other bound before any basic one
            self.x_basic -= flip * col
            self.at_upper[j] = not self.at_upper[j]
            return None

        # lowest variable index leaves among ties
        ties = np.flatnonzero(ratios <= best + 1e-12)
        r = ties[np.argmin(self.basis[ties])]
        start = self.upper[j] if self.at_upper[j] else 0.0

        self.x_basic -= best * col
        leaving = self.basis[r]
        self.at_upper[leaving] = bool(up[r] <= down[r])
        self.at_upper[j] = False

        pivot = self.T[r, j]
        if abs(pivot) < PIVOT_TOLERANCE:
            raise NumericalBreakdown("pivot %g below tolerance" % (pivot, ))
        self.T[r] /= pivot
        column = self.T[:, j].copy()
        column[r] = 0.0
        self.T -= np.outer(column, self.T[r])
        self.basis[r] = j
        self.x_basic[r] = start + direction * best
        return best


def _solve(cost, A, b, upper):
    """
    Two-phase bounded simplex; returns the finished tableau. Bounded columns
    start at the bound their cost favours.
    """
    m, n = A.shape
    cost = np.asarray(cost, dtype=float)
    core = _BoundedSimplex(A, b, upper, 10 * (m + n) ** 2, start_upper=cost < 0)

    phase_one = np.concatenate([np.zeros(n), np.ones(m)])
    core.run(phase_one, np.ones(n + m, dtype=bool))
    infeasibility = core.x_basic[core.basis >= n].sum()
    if infeasibility > FEASIBILITY_SLACK:
        raise Infeasible("phase one stopped at infeasibility %g" % (infeasibility, ))

    # artificials stay at zero from here on
    core.upper[n:] = 0.0
    phase_two = np.concatenate([np.asarray(cost, dtype=float), np.zeros(m)])
    allowed = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])
    core.run(phase_two, allowed)
    return core, phase_two


def _phase_one_point(A, b):
    # v = v+ - v-, surplus s >= 0: A v+ - A v- - s = b
    m, dim = A.shape
    system = np.hstack([A, -A, -np.eye(m)])
    core, unused = _solve(np.zeros(2 * dim + m), system, b, np.full(2 * dim + m, np.inf))
    x = core.values()
    return x[:dim] - x[dim:2 * dim]


def lp_feasible(system):
    """
    Finds v with a . v >= b - 1e-7 for every row, by phase-one simplex over a
    growing working set of rows (the most violated rows join each round).

    @raise Infeasible: if no such point exists
    """
    m, dim = system.A.shape
    if m == 0:
        raise ValueError("constraint system has no rows")
    chunk = max(WORKING_SET_MIN, WORKING_SET_PER_DIM * dim)
    working = np.arange(min(m, chunk))
    rounds = 0
    while True:
        rounds += 1
        v = _phase_one_point(system.A[working], system.b[working])
        slack = system.slack(v)
        violated = np.flatnonzero(slack < -FEASIBILITY_SLACK)
        if violated.size == 0:
            log.debug("lp feasible: %d rows, %d working, %d rounds" % (m, working.size, rounds))
            return v
        worst = violated[np.argsort(slack[violated], kind='stable')][:chunk]
        working = np.union1d(working, worst)


def l1_fit(features, targets):
    """
    Least absolute deviations: c minimizing (1/n) sum |features c - targets|.

    Solved through the dual of the slack-pair LP,
    max y . d s.t. features^T d = 0, -1 <= d <= 1, written with t = (d + 1)/2
    as a bounded-variable program; the coefficients are the negated simplex
    multipliers of the optimal basis.
    """
    Phi = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if Phi.ndim != 2 or Phi.shape[0] != y.shape[0]:
        raise ValueError("features and targets do not match")
    n, p = Phi.shape
    if n < 1 or p < 1:
        raise ValueError("l1 fit needs at least one sample and one feature")

    A = Phi.T
    b = 0.5 * Phi.sum(axis=0)
    core, cost = _solve(-y, A, b, np.ones(n))
    coefficients = -core.multipliers(cost)

    objective = np.abs(Phi.dot(coefficients) - y).mean()
    t = core.values()[:n]
    dual = y.dot(2.0 * t - 1.0) / n
    if abs(objective - dual) > OBJECTIVE_TOLERANCE * max(1.0, abs(dual)):
        log.warn("l1 fit duality gap %g (primal %g, dual %g)" % (objective - dual, objective, dual))
    return coefficients


class HingeProblem(object):
    """Average tau-hinge loss of labeled samples, restricted to a cone cap."""

    def __init__(self, samples, tau, cap):
        if not tau > 0:
            raise ValueError("hinge scale tau must be positive")
        if len(samples) == 0:
            raise ValueError("hinge problem needs samples")
        if samples.d != cap.axis.d:
            raise DimensionMismatch(cap.axis.d, samples.d)
        self.samples = samples
        self.tau = float(tau)
        self.cap = cap

    def losses(self, v):
        S = self.samples
        return np.maximum(0.0, 1.0 - S.y * S.X.dot(v) / self.tau)

    def objective(self, v):
        return float(self.losses(v).mean())


def minimize_hinge(problem, iters, seed=0, batch=None):
    """
    Projected subgradient descent on the cone cap, started at the axis with
    step R / (G sqrt(t)), R = 1 and G = max |x| / tau.

    The result is the best, by full objective, of every iterate and every
    average over the last half of the iterates so far; the final average is one
    of them, and a longer run never does worse than a shorter one.

    @param batch: minibatch size, C{None} for full subgradients
    """
    if iters < 1:
        raise ValueError("iteration budget must be positive")
    S = problem.samples
    X, y, tau, cap = S.X, S.y, problem.tau, problem.cap
    n = len(S)

    G = np.linalg.norm(X, axis=1).max() / tau
    v = geometry.project_cone_cap(cap.axis.w, cap)
    if G == 0:
        return v

    prefix = np.zeros((iters + 1, v.size))
    best = v
    best_objective = problem.objective(v)
    for t in range(1, iters + 1):
        prefix[t] = prefix[t - 1] + v
        head = (t + 1) // 2
        average = (prefix[t] - prefix[head - 1]) / (t - head + 1)

        objective = problem.objective(v)
        if objective < best_objective:
            best, best_objective = v, objective
        objective = problem.objective(average)
        if objective < best_objective:
            best, best_objective = average, objective

        if batch is None or batch >= n:
            Xb, yb = X, y
        else:
            index = util.stream(seed, util.STREAM_SOLVER, t).choice(n, batch, replace=False)
            Xb, yb = X[index], y[index]
        active = yb * Xb.dot(v) / tau < 1.0
        gradient = -(yb[active, None] * Xb[active]).sum(axis=0) / (tau * len(yb))
        eta = 1.0 / (G * math.sqrt(t))
        v = geometry.project_cone_cap(v - eta * gradient, cap)

    return geometry.project_cone_cap(best, cap)
