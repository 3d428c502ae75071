# -*- coding: utf-8 -*-
"""Halfspace learners: LP oracle, Kearns-Li, averaging, L1 polynomial regression, localization."""
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

import collections
import itertools
import math

import numpy as np

from zope.interface import Interface, implementer

from halfspace.learning import evaluation, geometry, log, solvers, synthdata, util
from halfspace.learning.errors import (DimensionMismatch, FeatureBlowup,
    Infeasible, InsufficientSamples, InvariantViolation, NoCandidate)
from halfspace.learning.geometry import IClassifier

# expanded feature count above which polynomial regression refuses to run
MAX_FEATURES = 10 ** 6

# Kearns-Li repetitions actually run when the configuration says nothing
KEARNS_LI_CAP = 2000

DEFAULT_DEGREE = 3
DEFAULT_QUOTA = 4000
DEFAULT_HINGE_ITERS = 500

# angle slack allowed between consecutive localization iterates
ANGLE_SLACK = 1e-6


def _check_accuracy(epsilon, delta):
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1), got %r" % (epsilon, ))
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1), got %r" % (delta, ))


""" sample bounds """


def realizable_sample_bound(d, epsilon, delta):
    _check_accuracy(epsilon, delta)
    return int(math.ceil((4.0 / epsilon) * (d * math.log(12.0 / epsilon) + math.log(2.0 / delta))))


def agnostic_sample_bound(d, epsilon, delta):
    _check_accuracy(epsilon, delta)
    return int(math.ceil((d + math.log(1.0 / delta)) / epsilon ** 2))


def bounded_noise_sample_bound(d, epsilon, delta, nu):
    _check_accuracy(epsilon, delta)
    if not 0.0 <= nu < 0.5:
        raise ValueError("noise rate nu must lie in [0, 0.5)")
    return int(math.ceil((d + math.log(1.0 / delta)) / ((1.0 - 2.0 * nu) * epsilon)))


def averaging_sample_bound(d, epsilon, delta):
    _check_accuracy(epsilon, delta)
    return int(math.ceil((d ** 2 / epsilon ** 2) * math.log(d / delta)))


def band_sample_bound(d, gamma, c0, epsilon, delta):
    """Per-round band quota of the hinge oracle, unit constant."""
    _check_accuracy(epsilon, delta)
    return int(math.ceil(d ** 2 / (gamma * c0 ** 2) * math.log(1.0 / epsilon) * math.log(1.0 / delta)))


def kearns_li_sample_size(d, epsilon):
    """
    Size of each oracle set, (4d / epsilon) ln(4 / epsilon). A consistent
    halfspace on that many samples has error about epsilon / 4, and a set is
    clean with probability (1 - eta)^m >= 1 / m^2 for noise rates eta of order
    epsilon / d.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1), got %r" % (epsilon, ))
    return int(math.ceil((4.0 * d / epsilon) * math.log(4.0 / epsilon)))


def kearns_li_repetitions(d, epsilon, delta):
    """(m, uncapped r): oracle sample size and number of oracle calls."""
    _check_accuracy(epsilon, delta)
    m = kearns_li_sample_size(d, epsilon)
    return m, int(math.ceil(m ** 2 * math.log(2.0 / delta)))


""" realizable oracle """


def train_lp_realizable(S):
    """
    Returns a halfspace with zero training error on S, or None when no
    halfspace separates S.
    """
    if len(S) == 0:
        raise ValueError("cannot train on an empty dataset")
    try:
        v = solvers.lp_feasible(solvers.LinearConstraintSystem.separation(S))
    except Infeasible:
        return None
    return geometry.normalize(v)


def train_kearns_li(sampler, d, epsilon, delta, cap=KEARNS_LI_CAP):
    """
    Runs the realizable oracle on r fresh sets of size m and keeps the
    candidate with the lowest error on a fresh validation set.

    @param sampler: a L{synthdata.DistributionSampler}
    @param cap: upper limit on the number of oracle calls
    @raise NoCandidate: if every oracle call failed
    """
    _check_accuracy(epsilon, delta)
    if sampler.d != d:
        raise DimensionMismatch(d, sampler.d)
    m, uncapped = kearns_li_repetitions(d, epsilon, delta)
    r = min(uncapped, cap)
    if r < uncapped:
        log.info("kearns-li: %d oracle calls (uncapped %d), m=%d" % (r, uncapped, m))

    candidates = []
    for unused in range(r):
        h = train_lp_realizable(sampler.draw(m))
        if h is not None:
            candidates.append(h)
    if not candidates:
        raise NoCandidate("all %d oracle calls failed" % (r, ))

    validation = sampler.draw(int(math.ceil(math.log(r / delta) / epsilon)))
    errors = [evaluation.empirical_error(h, validation) for h in candidates]
    best = int(np.argmin(errors))
    log.info("kearns-li: %d/%d candidates, validation error %.4g on %d samples" %
        (len(candidates), r, errors[best], len(validation)))
    return candidates[best]


def train_averaging(S):
    """Normalized label-weighted mean E_S[y x]."""
    if len(S) == 0:
        raise ValueError("cannot train on an empty dataset")
    return geometry.normalize((S.y[:, None] * S.X).mean(axis=0))


""" polynomial regression """


def feature_count(d, degree):
    return math.comb(d + degree, degree)


def monomial_exponents(d, degree):
    """Exponent d-tuples of every monomial of degree <= k, graded-lex order."""
    exponents = []
    for t in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(d), t):
            exponents.append(tuple(int(c) for c in np.bincount(np.asarray(combo, dtype=np.intp), minlength=d)))
    return exponents


def expand_monomials(x, degree):
    """
    All monomials of total degree <= k of an instance (or of every row of an
    instance array), constant term first.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = geometry.as_instances(x)
    n, d = X.shape
    if feature_count(d, degree) > MAX_FEATURES:
        raise FeatureBlowup("degree %d in dimension %d gives %d features" %
            (degree, d, feature_count(d, degree)))

    columns = []
    for t in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(d), t):
            columns.append(np.prod(X[:, list(combo)], axis=1) if combo else np.ones(n))
    features = np.column_stack(columns)
    return features[0] if single else features


class Polynomial(object):

    def __init__(self, d, degree, coefficients):
        coefficients = np.array(coefficients, dtype=float)
        if coefficients.shape != (feature_count(d, degree), ):
            raise ValueError("%d coefficients for %d monomials" %
                (coefficients.size, feature_count(d, degree)))
        coefficients.setflags(write=False)
        self.d = d
        self.degree = degree
        self.coefficients = coefficients

    @property
    def monomial_exponents(self):
        return monomial_exponents(self.d, self.degree)

    def __call__(self, X):
        return expand_monomials(geometry.as_instances(X, self.d), self.degree).dot(self.coefficients)


@implementer(IClassifier)
class PolyThreshold(object):
    """Improper hypothesis sign(p(x) - theta)."""

    def __init__(self, p, theta):
        if not -1.0 <= theta <= 1.0:
            raise ValueError("threshold must lie in [-1, 1]")
        self.p = p
        self.theta = float(theta)

    @property
    def d(self):
        return self.p.d

    def predict(self, X):
        return geometry.sign(self.p(X) - self.theta)

    def describe(self):
        return {'kind': 'poly_threshold', 'd': self.p.d, 'degree': self.p.degree,
            'coeffs': self.p.coefficients.tolist(), 'theta': self.theta}


def select_threshold(values, labels):
    """
    Threshold in [-1, 1] minimizing the empirical error of sign(value - theta),
    the smallest one on ties.
    """
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels)
    if values.size == 0 or values.shape != labels.shape:
        raise ValueError("threshold selection needs matching non-empty arrays")

    order = np.argsort(values, kind='stable')
    ordered = values[order]
    positive = labels[order] == 1
    # counts among the i smallest values, i = 0..n
    pos_below = np.concatenate([[0], np.cumsum(positive)])
    neg_below = np.concatenate([[0], np.cumsum(~positive)])

    candidates = np.concatenate([[-1.0, 1.0], (ordered[1:] + ordered[:-1]) / 2.0])
    candidates = np.unique(np.clip(candidates, -1.0, 1.0))
    below = np.searchsorted(ordered, candidates, side='left')
    errors = pos_below[below] + (neg_below[-1] - neg_below[below])
    return float(candidates[np.argmin(errors)])


def train_poly_regression(S, degree=DEFAULT_DEGREE):
    """
    L1 polynomial regression followed by the best threshold.

    @raise InvariantViolation: if the training error exceeds half the L1 error
    """
    count = feature_count(S.d, degree)
    if count > MAX_FEATURES:
        raise FeatureBlowup("degree %d in dimension %d gives %d features" % (degree, S.d, count))
    if len(S) < count:
        raise InsufficientSamples("%d samples for %d monomials" % (len(S), count))

    Phi = expand_monomials(S.X, degree)
    coefficients = solvers.l1_fit(Phi, S.y)
    values = Phi.dot(coefficients)
    f = PolyThreshold(Polynomial(S.d, degree, coefficients), select_threshold(values, S.y))

    error = float(np.mean(geometry.sign(values - f.theta) != S.y))
    l1 = float(np.abs(values - S.y).mean())
    if error > 0.5 * l1 + 1e-12:
        raise InvariantViolation("training error %r above half the L1 error %r" % (error, l1))
    log.info("poly regression: degree %d, %d samples, L1 %.4g, training error %.4g, theta %.4g" %
        (degree, len(S), l1, error, f.theta))
    return f


def repeat_and_validate(trainer, runs, validation):
    """
    Trains C{runs} candidates, trainer(i) for i = 0..runs-1, and returns the one
    with the lowest validation error (lowest index on ties).
    """
    if runs < 1:
        raise ValueError("at least one run is needed")
    if len(validation) == 0:
        raise ValueError("validation set is empty")
    best = best_error = None
    for i in range(runs):
        h = trainer(i)
        error = evaluation.empirical_error(h, validation)
        log.debug("run %d: validation error %.4g" % (i, error))
        if best is None or error < best_error:
            best, best_error = h, error
    return best


""" localization """


class LocalizationSchedule(object):
    """
    Per-round cone angles, band widths and hinge scales of the localization
    loop, for a log-concave marginal with the given constants.

    In C{practical} mode c0 = 1/4, c_gamma = 1 and tau_k = gamma_k / 2.
    """

    MODES = ('theory', 'practical')

    def __init__(self, C1_upper=evaluation.C1_UPPER, C1_lower=evaluation.C1_LOWER,
            C2_upper=evaluation.C2_UPPER, C2_lower=evaluation.C2_LOWER, C3=evaluation.C3_PRIME,
            mode='practical', g_exponent=4.0):
        for name, value in (('C1_upper', C1_upper), ('C1_lower', C1_lower),
                ('C2_upper', C2_upper), ('C2_lower', C2_lower), ('C3', C3),
                ('g_exponent', g_exponent)):
            if not value > 0:
                raise ValueError("schedule constant %s must be positive" % (name, ))
        if mode not in self.MODES:
            raise ValueError("unknown schedule mode %r" % (mode, ))
        self.C1_upper = float(C1_upper)
        self.C1_lower = float(C1_lower)
        self.C2_upper = float(C2_upper)
        self.C2_lower = float(C2_lower)
        self.C3 = float(C3)
        self.mode = mode
        self.g_exponent = float(g_exponent)

    @property
    def c_gamma(self):
        if self.mode == 'practical':
            return 1.0
        return max(self.C3, self.C1_lower / self.C2_upper)

    @property
    def c0(self):
        if self.mode == 'practical':
            return 0.25
        return min(0.25, self.C1_lower / (4.0 * self.C2_upper * self.C3))

    def alpha(self, k):
        return math.pi * 2.0 ** -k

    def gamma(self, k):
        return self.c_gamma * self.alpha(k)

    def tau(self, k):
        if self.mode == 'practical':
            return self.gamma(k) / 2.0
        return self.gamma(k) * self.c0 * self.C2_lower / (4.0 * self.C2_upper)

    def rounds(self, epsilon):
        if not 0.0 < epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        return max(1, int(math.ceil(math.log2(self.C1_upper * math.pi / epsilon))) - 1)

    def tolerance(self):
        """g(c0) = c0^4: band error the oracle may start from."""
        return self.c0 ** self.g_exponent

    def describe(self, epsilon=None):
        out = {
            'mode': self.mode,
            'C1_upper': self.C1_upper,
            'C1_lower': self.C1_lower,
            'C2_upper': self.C2_upper,
            'C2_lower': self.C2_lower,
            'C3': self.C3,
            'c0': self.c0,
            'c_gamma': self.c_gamma,
            'g_c0': self.tolerance(),
        }
        if epsilon is not None:
            r = self.rounds(epsilon)
            out['rounds'] = r
            out['alpha'] = [self.alpha(k) for k in range(1, r + 1)]
            out['gamma'] = [self.gamma(k) for k in range(1, r + 1)]
            out['tau'] = [self.tau(k) for k in range(1, r + 1)]
        return out


RoundDiagnostics = collections.namedtuple('RoundDiagnostics',
    ('round', 'alpha', 'gamma', 'tau', 'angle', 'band_count', 'raw_draws',
     'objective', 'band_error_w_star'))


class IBandOracle(Interface):
    """One localization round: a better halfspace from samples in a band."""

    def __call__(sampler, w, gamma, alpha, tau, delta):
        """
        Returns (Hyperplane, diagnostics) where the hyperplane lies within
        angle alpha of w and diagnostics is a mapping with the keys
        band_count, raw_draws, objective and band_error_w_star.
        """


def band_draw_cap(quota, gamma, delta):
    """
    Raw draws allowed for a band quota at confidence 1 - delta: the default
    cap, raised to the count at which a band of mass C2_lower min(gamma, 1)
    holds C{quota} samples with probability 1 - delta (multiplicative Chernoff).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1), got %r" % (delta, ))
    mass = evaluation.C2_LOWER * min(gamma, 1.0)
    tail = math.log(1.0 / delta)
    needed = quota + tail + math.sqrt(tail * tail + 2.0 * quota * tail)
    return max(synthdata.default_band_cap(quota, gamma), int(math.ceil(needed / mass)))


def _band_error(sampler, S):
    # error of the ground truth on the band, known only to the harness
    if sampler.w_star is None:
        return None
    return evaluation.empirical_error(sampler.w_star, S)


def _hinge_step(sampler, S, w, alpha, tau, iters, batch, diagnostics):
    cap = geometry.ConeCap(w, alpha, 1.0)
    problem = solvers.HingeProblem(S, tau, cap)
    seed = util.derive_seed(sampler.seed, util.STREAM_SOLVER, sampler.batches)
    v = solvers.minimize_hinge(problem, iters, seed, batch)
    objective = problem.objective(v)
    mistakes = float(np.mean(geometry.sign(S.X.dot(v)) != S.y))
    if mistakes > objective + 1e-12:
        raise InvariantViolation("band error %.6g above hinge objective %.6g" % (mistakes, objective))
    if diagnostics is not None:
        diagnostics['objective'] = objective
    if np.linalg.norm(v) <= geometry.ZERO_NORM:
        log.warn("hinge minimizer at the cone apex, keeping the previous direction")
        return w
    return geometry.normalize(v)


def band_oracle_hinge(sampler, w, gamma, alpha, tau, quota=DEFAULT_QUOTA, delta=None,
        iters=DEFAULT_HINGE_ITERS, batch=None, diagnostics=None):
    """
    Hinge loss minimization over the cone cap of half angle alpha around w,
    on C{quota} samples from the band |w . x| <= gamma.

    @param delta: failure probability of filling the band, C{None} for the
        sampler's default draw cap
    @raise InsufficientBandSamples: if the band cannot be filled
    """
    cap = None if delta is None else band_draw_cap(quota, gamma, delta)
    S, raw = sampler.draw_band(w, gamma, quota, cap)
    if diagnostics is not None:
        diagnostics.update(band_count=len(S), raw_draws=raw,
            band_error_w_star=_band_error(sampler, S))
    return _hinge_step(sampler, S, w, alpha, tau, iters, batch, diagnostics)


def band_oracle_poly_hinge(sampler, w, gamma, alpha, tau, degree=DEFAULT_DEGREE, nu=0.0,
        quota=DEFAULT_QUOTA, delta=None, iters=DEFAULT_HINGE_ITERS, batch=None,
        tolerance=None, diagnostics=None):
    """
    Polynomial regression on the noisy band labels, then hinge minimization on a
    fresh band set relabeled by the polynomial threshold.
    """
    if not 0.0 <= nu < 0.5:
        raise ValueError("noise rate nu must lie in [0, 0.5)")
    # two band sets share the failure probability
    cap = None if delta is None else band_draw_cap(quota, gamma, delta / 2.0)
    first, raw_first = sampler.draw_band(w, gamma, quota, cap)
    f = train_poly_regression(first, degree)
    if tolerance is not None:
        log.debug("poly band step: excess error target %.4g" % ((1.0 - 2.0 * nu) * tolerance, ))

    second, raw_second = sampler.draw_band(w, gamma, quota, cap)
    relabeled = second.with_labels(f.predict(second.X))
    if diagnostics is not None:
        diagnostics.update(band_count=len(first) + len(second), raw_draws=raw_first + raw_second,
            band_error_w_star=_band_error(sampler, first))
    return _hinge_step(sampler, relabeled, w, alpha, tau, iters, batch, diagnostics)


@implementer(IBandOracle)
class HingeBandOracle(object):

    def __init__(self, quota=DEFAULT_QUOTA, iters=DEFAULT_HINGE_ITERS, batch=None):
        self.quota = quota
        self.iters = iters
        self.batch = batch

    def __call__(self, sampler, w, gamma, alpha, tau, delta):
        diagnostics = {}
        h = band_oracle_hinge(sampler, w, gamma, alpha, tau, self.quota, delta,
            self.iters, self.batch, diagnostics)
        return h, diagnostics


@implementer(IBandOracle)
class PolyHingeBandOracle(object):

    def __init__(self, degree=DEFAULT_DEGREE, nu=0.0, quota=DEFAULT_QUOTA,
            iters=DEFAULT_HINGE_ITERS, batch=None, tolerance=None):
        self.degree = degree
        self.nu = nu
        self.quota = quota
        self.iters = iters
        self.batch = batch
        self.tolerance = tolerance

    def __call__(self, sampler, w, gamma, alpha, tau, delta):
        diagnostics = {}
        h = band_oracle_poly_hinge(sampler, w, gamma, alpha, tau, self.degree, self.nu,
            self.quota, delta, self.iters, self.batch, self.tolerance, diagnostics)
        return h, diagnostics


def localize(sampler, schedule, band_oracle, w1, epsilon, delta, trace=None):
    """
    Margin-based localization: r rounds of w_{k+1} = O(w_k, gamma_k, alpha_k, delta/r).
    Returns the output of the last round.

    @param band_oracle: an L{IBandOracle} provider
    @param trace: optional list receiving one L{RoundDiagnostics} per round
    """
    _check_accuracy(epsilon, delta)
    r = schedule.rounds(epsilon)
    w_star = sampler.w_star
    w = w1
    log.info("localize: %d rounds, epsilon %.4g, mode %s" % (r, epsilon, schedule.mode))
    for k in range(1, r + 1):
        alpha, gamma, tau = schedule.alpha(k), schedule.gamma(k), schedule.tau(k)
        w_next, info = band_oracle(sampler, w, gamma, alpha, tau, delta / r)
        step = geometry.angle(w, w_next)
        if step > alpha + ANGLE_SLACK:
            raise InvariantViolation("round %d moved %.6g outside the cone of %.6g" % (k, step, alpha))

        angle = geometry.angle(w_next, w_star) if w_star is not None else None
        band_error = info.get('band_error_w_star')
        if band_error is not None and band_error > schedule.tolerance():
            log.debug("round %d: band error of w* %.4g above g(c0) = %.4g" %
                (k, band_error, schedule.tolerance()))
        diagnostics = RoundDiagnostics(k, alpha, gamma, tau, angle, info.get('band_count'),
            info.get('raw_draws'), info.get('objective'), band_error)
        if trace is not None:
            trace.append(diagnostics)
        log.info("round %d: alpha %.4g gamma %.4g tau %.4g angle %s band %s/%s objective %s (theory quota %d)" %
            (k, alpha, gamma, tau, 'n/a' if angle is None else '%.4g' % angle,
             info.get('band_count'), info.get('raw_draws'), info.get('objective'),
             band_sample_bound(sampler.d, gamma, schedule.c0, epsilon, delta / r)))
        w = w_next
    return w


""" model files """


def model_to_json(h):
    return util.json_dumps(h.describe())


def model_from_json(text):
    data = util.json_loads(text)
    kind = data.get('kind')
    if kind == 'halfspace':
        return geometry.Hyperplane(data['w'])
    if kind == 'poly_threshold':
        p = Polynomial(int(data['d']), int(data['degree']), data['coeffs'])
        return PolyThreshold(p, data['theta'])
    raise ValueError("unknown model kind %r" % (kind, ))
