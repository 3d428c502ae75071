# -*- coding: utf-8 -*-
"""Error estimates, disagreement and the Monte Carlo property checkers."""
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
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from halfspace.learning import geometry, log, synthdata, util

# log-concave constants of the presets, valid for band widths up to 1
C1_UPPER = 1.0 / math.pi
C1_LOWER = 1.0 / math.pi
C2_LOWER = 0.48
C2_UPPER = 0.8
C3_PRIME = 4.0

# checks on fewer samples only report their statistic
MIN_POWERED_N = 1000
# samples a bounded-noise cell needs before it is judged
MIN_CELL_N = 10000

TAIL_RADII = (1.5, 2.0, 3.0)
BAND_WIDTHS = (0.05, 0.1, 0.3)
WEDGE_ANGLES = (0.05, 0.2)
DISAGREEMENT_PAIRS = 50
# reference sample size of the disagreement tolerance
DISAGREEMENT_N = 200000

# corruptions of a fixed training set; the test distribution stays clean
TRAINING_ONLY_NOISE = ('adversarial_flip', 'malicious')


@dataclass(frozen=True)
class ErrorEstimate:
    value: float
    n: int
    ci_radius: float

    def contains(self, truth):
        return abs(self.value - truth) <= self.ci_radius

    def describe(self):
        return {'value': self.value, 'n': self.n, 'ci_radius': self.ci_radius}


@dataclass(frozen=True)
class PropertyCheck:
    """
    One empirical check: C{passed} is None when the check ran on too few
    samples to be judged.
    """
    name: str
    statistic: float
    bound: float
    passed: object
    n: int
    seed: int
    note: str = ''

    def describe(self):
        out = {'name': self.name, 'statistic': self.statistic, 'bound': self.bound,
            'pass': self.passed, 'n': self.n, 'seed': self.seed}
        if self.note:
            out['note'] = self.note
        return out


@dataclass
class PropertyReport:
    checks: list = field(default_factory=list)

    def add(self, check):
        self.checks.append(check)
        if check.passed is False:
            log.warn("property check %s failed: %.6g against %.6g (n=%d, seed=%d)" %
                (check.name, check.statistic, check.bound, check.n, check.seed))
        return check

    def extend(self, other):
        for check in other.checks:
            self.add(check)

    @property
    def passed(self):
        """False iff some powered check failed."""
        return all(c.passed is not False for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if c.passed is False]

    def __len__(self):
        return len(self.checks)

    def __iter__(self):
        return iter(self.checks)

    def to_json_lines(self):
        return ''.join(util.json_dumps(c.describe()) + '\n' for c in self.checks)


""" error metrics """


def empirical_error(f, S):
    """Fraction of samples of S misclassified by f."""
    if len(S) == 0:
        raise ValueError("cannot measure error on an empty dataset")
    return float(np.count_nonzero(f.predict(S.X) != S.y)) / len(S)


def disagreement(f, g, X):
    X = geometry.as_instances(X)
    if X.shape[0] == 0:
        raise ValueError("cannot measure disagreement on no instances")
    return float(np.count_nonzero(f.predict(X) != g.predict(X))) / X.shape[0]


def evaluation_noise(noise):
    """Noise applied to evaluation streams: adversarial corruptions never reach test time."""
    if noise.kind in TRAINING_ONLY_NOISE:
        return synthdata.NO_NOISE
    return noise


def mc_error(f, marginal, w_star, noise, n, seed):
    """Error of f on a fresh labeled stream, with a 95% Hoeffding interval."""
    if n < 1:
        raise ValueError("Monte Carlo error needs at least one sample")
    S = synthdata.generate(marginal, w_star, evaluation_noise(noise), n,
        util.derive_seed(seed, util.STREAM_EVAL))
    return ErrorEstimate(empirical_error(f, S), n, util.hoeffding_radius(n))


""" property checks """


def _powered(n, passed):
    if n < MIN_POWERED_N:
        return None
    return bool(passed)


def _binomial_sigma(p, n):
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def band_mass(marginal, gamma):
    """Pr[|w . x| <= gamma] under the marginal, any unit w."""
    if marginal.kind == 'gaussian':
        return synthdata.gaussian_band_mass(gamma)
    radius = math.sqrt(marginal.d + 2.0)
    if gamma >= radius:
        return 1.0
    # (w . x)^2 / R^2 is Beta(1/2, (d+1)/2) on the ball of radius R
    return float(betainc(0.5, (marginal.d + 1) / 2.0, (gamma / radius) ** 2))


def check_isotropy(marginal, n, seed, mean_tol=0.02, cov_tol=0.05):
    """Sample mean near zero and covariance near the identity."""
    X = synthdata.sample_marginal(marginal, n, util.derive_seed(seed, util.STREAM_PROPERTIES, 3))
    # wider gates for smaller samples
    mean_tol = max(mean_tol, 4.0 / math.sqrt(max(n, 1)))
    cov_tol = max(cov_tol, 5.0 * math.sqrt(2.0 / max(n, 1)))
    if n < 2:
        return PropertyCheck('isotropy', float('nan'), cov_tol, None, n, seed, 'too few samples')
    mean_dev = float(np.abs(X.mean(axis=0)).max())
    cov_dev = float(np.abs(np.cov(X, rowvar=False).reshape(marginal.d, marginal.d) -
        np.eye(marginal.d)).max())
    note = 'mean deviation %.4g (tolerance %.4g); indirect check that 1-D marginals stay isotropic' % (
        mean_dev, mean_tol)
    return PropertyCheck('isotropy', cov_dev, cov_tol,
        _powered(n, cov_dev <= cov_tol and mean_dev <= mean_tol), n, seed, note)


def check_logconcave_properties(marginal, n, seed):
    """
    Empirical checks of the isotropic log-concave properties on the marginal:
    norm tails, halfspace disagreement against angle/pi, band mass, band
    constants, and the wedge mass outside the band.
    """
    report = PropertyReport()
    X = synthdata.sample_marginal(marginal, n, util.derive_seed(seed, util.STREAM_PROPERTIES, 0))
    d = marginal.d
    generator = util.stream(seed, util.STREAM_PROPERTIES, 1)
    underpowered = 'underpowered' if n < MIN_POWERED_N else ''

    report.add(check_isotropy(marginal, n, seed))

    norms = np.linalg.norm(X, axis=1) if n else np.zeros(0)
    for r in TAIL_RADII:
        mass = float(np.mean(norms >= r * math.sqrt(d))) if n else float('nan')
        bound = math.exp(-r + 1.0)
        report.add(PropertyCheck('tail_r=%g' % r, mass, bound, _powered(n, mass <= bound),
            n, seed, underpowered))

    if d >= 2:
        tolerance = 0.005 * max(1.0, math.sqrt(DISAGREEMENT_N / max(n, 1)))
        worst = 0.0
        for unused in range(DISAGREEMENT_PAIRS):
            u = geometry.random_unit(generator, d)
            v = geometry.random_unit(generator, d)
            if n:
                dis = float(np.mean(geometry.sign(X.dot(u.w)) != geometry.sign(X.dot(v.w))))
                worst = max(worst, abs(dis - geometry.angle(u, v) / math.pi))
        report.add(PropertyCheck('disagreement', worst, tolerance, _powered(n, worst <= tolerance),
            n, seed, underpowered or 'max over %d random pairs' % DISAGREEMENT_PAIRS))

    w = geometry.random_unit(generator, d)
    margins = np.abs(X.dot(w.w))
    for gamma in BAND_WIDTHS:
        expected = band_mass(marginal, gamma)
        sigma = _binomial_sigma(expected, max(n, 1))
        mass = float(np.mean(margins <= gamma)) if n else float('nan')
        report.add(PropertyCheck('band_mass_gamma=%g' % gamma, mass, expected,
            _powered(n, abs(mass - expected) <= 3.0 * sigma), n, seed,
            underpowered or 'within 3 sigma = %.4g' % (3.0 * sigma, )))
        inside = C2_LOWER * gamma - 3.0 * sigma <= mass <= C2_UPPER * gamma + 3.0 * sigma
        report.add(PropertyCheck('band_constants_gamma=%g' % gamma, mass, C2_UPPER * gamma,
            _powered(n, inside), n, seed,
            underpowered or 'between %.4g and %.4g' % (C2_LOWER * gamma, C2_UPPER * gamma)))

    if d >= 2:
        C3 = C1_LOWER / 8.0
        for alpha in WEDGE_ANGLES:
            u = geometry.random_unit(generator, d)
            v = geometry.rotate_towards(u, generator.standard_normal(d), alpha)
            if n:
                mu = X.dot(u.w)
                outside = np.abs(mu) >= C3_PRIME * alpha
                differ = geometry.sign(mu) != geometry.sign(X.dot(v.w))
                mass = float(np.mean(outside & differ))
            else:
                mass = float('nan')
            bound = C3 * alpha
            sigma = _binomial_sigma(bound, max(n, 1))
            report.add(PropertyCheck('wedge_alpha=%g' % alpha, mass, bound,
                _powered(n, mass <= bound + 3.0 * sigma), n, seed, underpowered))
    return report


def check_excess_sandwich(h, w_star, nu, marginal, rate_fn, n, seed):
    """
    (1 - 2 nu) Pr[h != h*] <= err(h) - err(h*) <= Pr[h != h*] on one shared
    stream, plus E[(excess loss)^2] = Pr[h != h*]; all within 3 Hoeffding radii.
    """
    if not 0.0 <= nu < 0.5:
        raise ValueError("noise rate nu must lie in [0, 0.5)")
    if n < 1:
        raise ValueError("sandwich check needs samples")
    report = PropertyReport()
    X = synthdata.sample_marginal(marginal, n, util.derive_seed(seed, util.STREAM_EVAL, 0))
    S = synthdata.label_realizable(X, w_star, marginal, seed)
    clean = S.y
    # rates are taken as given so a broken process can be caught
    rates = np.asarray(rate_fn(X, w_star), dtype=float)
    y = synthdata.flip_with_rates(S, rates, util.derive_seed(seed, util.STREAM_EVAL, 1)).y

    predicted = h.predict(X)
    loss_h = (predicted != y).astype(float)
    loss_star = (clean != y).astype(float)
    excess = float(np.mean(loss_h - loss_star))
    dis = float(np.mean(predicted != clean))
    second_moment = float(np.mean((loss_h - loss_star) ** 2))
    slack = 3.0 * util.hoeffding_radius(n)

    report.add(PropertyCheck('sandwich_lower', excess, (1.0 - 2.0 * nu) * dis,
        _powered(n, (1.0 - 2.0 * nu) * dis <= excess + slack), n, seed,
        'excess >= (1 - 2 nu) disagreement'))
    report.add(PropertyCheck('sandwich_upper', excess, dis,
        _powered(n, excess <= dis + slack), n, seed, 'excess <= disagreement'))
    report.add(PropertyCheck('variance_identity', second_moment, dis,
        _powered(n, abs(second_moment - dis) <= slack), n, seed))
    return report


def check_bounded_noise_condition(marginal, w_star, noise, n, seed, cells=8):
    """
    Slabs by quantiles of |w* . x|: the mean of y h*(x) in each slab is
    1 - 2 nu for constant rates and at least that for margin-decaying ones.
    """
    if noise.kind not in ('rcn', 'bounded'):
        raise ValueError("bounded-noise check needs rcn or bounded noise")
    if cells < 1:
        raise ValueError("at least one cell is needed")
    report = PropertyReport()
    S = synthdata.generate(marginal, w_star, noise, n,
        util.derive_seed(seed, util.STREAM_PROPERTIES, 2))
    margin = np.abs(S.X.dot(w_star.w))
    agreement = S.y * w_star.predict(S.X)
    target = 1.0 - 2.0 * noise.nu
    decaying = noise.kind == 'bounded' and noise.rate == 'margin_decay'

    edges = np.quantile(margin, np.linspace(0.0, 1.0, cells + 1)[1:-1]) if n else np.zeros(0)
    cell = np.searchsorted(edges, margin, side='right')
    for c in range(cells):
        member = cell == c
        count = int(member.sum())
        if count == 0:
            report.add(PropertyCheck('bounded_noise_cell=%d' % c, float('nan'), target, None,
                0, seed, 'empty cell'))
            continue
        mean = float(agreement[member].mean())
        sigma = math.sqrt((1.0 - target ** 2) / count)
        if decaying:
            ok = mean >= target - 3.0 * sigma
        else:
            ok = abs(mean - target) <= 3.0 * sigma
        passed = bool(ok) if count >= MIN_CELL_N else None
        report.add(PropertyCheck('bounded_noise_cell=%d' % c, mean, target, passed, count, seed,
            '' if passed is not None else 'underpowered'))
    return report


def check_wedge_bound(marginal, n, seed, count=100):
    """|err(h_w) - err(h_w*)| <= C1 angle(w, w*) on a realizable stream, random w."""
    report = PropertyReport()
    generator = util.stream(seed, util.STREAM_PROPERTIES, 4)
    w_star = geometry.random_unit(generator, marginal.d)
    S = synthdata.label_realizable(
        synthdata.sample_marginal(marginal, n, util.derive_seed(seed, util.STREAM_PROPERTIES, 5)),
        w_star, marginal, seed)
    slack = 3.0 * util.hoeffding_radius(max(n, 1))
    reference = empirical_error(w_star, S) if n else 0.0
    worst = None
    for unused in range(count):
        w = geometry.random_unit(generator, marginal.d)
        gap = abs(empirical_error(w, S) - reference) if n else float('nan')
        excess = gap - C1_UPPER * geometry.angle(w, w_star)
        if worst is None or excess > worst:
            worst = excess
    report.add(PropertyCheck('wedge_bound', worst, slack, _powered(n, worst <= slack), n, seed,
        'max over %d directions of |error gap| - C1 angle' % count))
    return report
