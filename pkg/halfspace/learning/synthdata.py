# -*- coding: utf-8 -*-
"""Seeded isotropic log-concave data with label noise."""
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

import csv
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtr

from halfspace.learning import geometry, log, util
from halfspace.learning.errors import DimensionMismatch, InsufficientBandSamples

NOISE_KINDS = ('none', 'rcn', 'bounded', 'adversarial_flip', 'malicious')
RATE_FUNCTIONS = ('constant', 'margin_decay')
ADVERSARIAL_STRATEGIES = ('nearest_boundary', 'orthogonal_bias', 'random')
MALICIOUS_STRATEGIES = ('orthogonal_cluster', 'boundary_cluster')

# fakes of the boundary cluster sit this factor outside the band
BOUNDARY_OFFSET = 1.05

# band draws give up after this many raw draws per requested band sample,
# scaled by the Gaussian band mass
BAND_DRAW_FACTOR = 50

LabeledSample = namedtuple('LabeledSample', ('x', 'y'))
Provenance = namedtuple('Provenance', ('marginal', 'noise', 'w_star', 'seed'))


""" marginals """


def _gaussian(generator, count, d):
    return generator.standard_normal((count, d))


def _uniform_ball(generator, count, d):
    directions = generator.standard_normal((count, d))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0] = 1.0
    # radius density proportional to r^(d-1)
    radii = generator.random(count) ** (1.0 / d)
    return directions / norms[:, None] * (radii * math.sqrt(d + 2))[:, None]


MARGINAL_SAMPLERS = {
    'gaussian': _gaussian,
    'uniform_ball': _uniform_ball,
}


@dataclass(frozen=True)
class MarginalSpec:
    kind: str
    d: int

    def __post_init__(self):
        if self.kind not in MARGINAL_SAMPLERS:
            raise ValueError("unknown marginal %r" % (self.kind, ))
        if int(self.d) != self.d or self.d < 1:
            raise ValueError("dimension must be a positive integer")

    def describe(self):
        return {'kind': self.kind, 'd': self.d}


""" noise """


class ConstantRate(object):
    """Flip probability nu everywhere."""

    name = 'constant'

    def __init__(self, nu):
        self.nu = nu

    def __call__(self, X, w_star):
        return np.full(len(X), float(self.nu))


class MarginDecayRate(object):
    """Flip probability nu * exp(-|w* . x| / sigma)."""

    name = 'margin_decay'

    def __init__(self, nu, sigma):
        if not sigma > 0:
            raise ValueError("margin decay needs sigma > 0")
        self.nu = nu
        self.sigma = sigma

    def __call__(self, X, w_star):
        return self.nu * np.exp(-np.abs(X.dot(w_star.w)) / self.sigma)


@dataclass(frozen=True)
class NoiseSpec:
    """
    Label corruption to apply on top of realizable labels. Only the fields of
    the selected kind may be set.
    """
    kind: str = 'none'
    nu: Optional[float] = None
    rate: Optional[str] = None
    sigma: Optional[float] = None
    budget: Optional[float] = None
    strategy: Optional[str] = None
    scale: Optional[float] = None
    band: Optional[float] = None

    _FIELDS = {
        'none': (),
        'rcn': ('nu', ),
        'bounded': ('nu', 'rate', 'sigma'),
        'adversarial_flip': ('budget', 'strategy'),
        'malicious': ('budget', 'strategy', 'scale', 'band'),
    }

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError("unknown noise kind %r" % (self.kind, ))
        allowed = self._FIELDS[self.kind]
        for name in ('nu', 'rate', 'sigma', 'budget', 'strategy', 'scale', 'band'):
            if getattr(self, name) is not None and name not in allowed:
                raise ValueError("noise %s does not take %r" % (self.kind, name))

        if self.kind in ('rcn', 'bounded'):
            if self.nu is None or not 0.0 <= self.nu < 0.5:
                raise ValueError("noise rate nu must lie in [0, 0.5)")
        if self.kind == 'bounded':
            if self.rate not in RATE_FUNCTIONS:
                raise ValueError("unknown rate function %r" % (self.rate, ))
            if self.rate == 'margin_decay' and not (self.sigma and self.sigma > 0):
                raise ValueError("margin_decay needs sigma > 0")
            if self.rate == 'constant' and self.sigma is not None:
                raise ValueError("constant rate does not take sigma")
        if self.kind in ('adversarial_flip', 'malicious'):
            if self.budget is None or not 0.0 <= self.budget < 1.0:
                raise ValueError("corruption budget must lie in [0, 1)")
        if self.kind == 'adversarial_flip' and self.strategy not in ADVERSARIAL_STRATEGIES:
            raise ValueError("unknown adversarial strategy %r" % (self.strategy, ))
        if self.kind == 'malicious' and self.strategy not in MALICIOUS_STRATEGIES:
            raise ValueError("unknown malicious strategy %r" % (self.strategy, ))

    @classmethod
    def rcn(cls, nu):
        return cls(kind='rcn', nu=nu)

    @classmethod
    def bounded(cls, nu, rate='constant', sigma=None):
        return cls(kind='bounded', nu=nu, rate=rate, sigma=sigma)

    @classmethod
    def adversarial(cls, budget, strategy='nearest_boundary'):
        return cls(kind='adversarial_flip', budget=budget, strategy=strategy)

    @classmethod
    def malicious(cls, budget, strategy='orthogonal_cluster', scale=None, band=None):
        return cls(kind='malicious', budget=budget, strategy=strategy, scale=scale, band=band)

    @property
    def bayes_rate(self):
        """Upper bound on the flip probability of any instance (nu), 0 otherwise."""
        return self.nu if self.kind in ('rcn', 'bounded') else 0.0

    def rate_function(self):
        if self.kind == 'rcn' or (self.kind == 'bounded' and self.rate == 'constant'):
            return ConstantRate(self.nu)
        if self.kind == 'bounded':
            return MarginDecayRate(self.nu, self.sigma)
        return None

    def describe(self):
        return dict((k, v) for k, v in self.__dict__.items() if v is not None)


NO_NOISE = NoiseSpec()


""" datasets """


class Dataset(object):
    """
    Immutable labeled sample set S: an n x d instance array and +-1 labels.
    """

    def __init__(self, X, y, provenance=None):
        X = np.array(X, dtype=float)
        y = np.array(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError("instances and labels do not match")
        if not np.all((y == 1) | (y == -1)):
            raise ValueError("labels must be -1 or +1")
        X.setflags(write=False)
        y.setflags(write=False)
        self.X = X
        self.y = y
        self.provenance = provenance

    @property
    def d(self):
        return self.X.shape[1]

    def __len__(self):
        return self.y.shape[0]

    def __iter__(self):
        for x, y in zip(self.X, self.y):
            yield LabeledSample(x, int(y))

    @property
    def samples(self):
        return list(self)

    def with_labels(self, y, noise=None):
        provenance = self.provenance
        if provenance is not None and noise is not None:
            provenance = provenance._replace(noise=noise)
        return Dataset(self.X, y, provenance)

    def _w_star(self):
        if self.provenance is None or self.provenance.w_star is None:
            raise ValueError("dataset has no ground truth in its provenance")
        return self.provenance.w_star


def sample_marginal(spec, n, seed):
    """n i.i.d. instances from the marginal; deterministic in (spec, n, seed)."""
    if n < 0:
        raise ValueError("sample count must be non-negative")
    draw = MARGINAL_SAMPLERS[spec.kind]
    return util.blockwise(seed, util.STREAM_MARGINAL, n,
        lambda generator, count: draw(generator, count, spec.d))


def label_realizable(X, w_star, marginal=None, seed=None):
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        X = X.reshape(0, w_star.d)
    X = geometry.as_instances(X)
    if X.shape[1] != w_star.d:
        raise DimensionMismatch(w_star.d, X.shape[1])
    return Dataset(X, w_star.predict(X),
        Provenance(marginal, NO_NOISE, w_star, seed))


def _uniforms(n, seed, tag=util.STREAM_LABEL_NOISE):
    return util.blockwise(seed, tag, n, lambda generator, count: generator.random(count))


def flip_with_rates(S, rates, seed, noise=None):
    """Flips label i independently with probability rates[i]."""
    flips = _uniforms(len(S), seed) < np.asarray(rates)
    return S.with_labels(np.where(flips, -S.y, S.y), noise)


def apply_rcn(S, nu, seed):
    if not 0.0 <= nu < 0.5:
        raise ValueError("noise rate nu must lie in [0, 0.5)")
    return flip_with_rates(S, np.full(len(S), float(nu)), seed, NoiseSpec.rcn(nu))


def apply_bounded(S, w_star, nu, rate_fn, seed):
    if not 0.0 <= nu < 0.5:
        raise ValueError("noise rate nu must lie in [0, 0.5)")
    rates = rate_fn(S.X, w_star)
    if np.any(rates > nu + 1e-12) or np.any(rates < 0):
        raise ValueError("rate function leaves [0, nu]")
    noise = NoiseSpec.bounded(nu, rate_fn.name, getattr(rate_fn, 'sigma', None))
    return flip_with_rates(S, rates, seed, noise)


def corruption_count(budget, n):
    # the epsilon absorbs products such as 0.29 * 100 = 28.999999999999996
    return int(math.floor(budget * n + 1e-9))


def _lowest(scores, k):
    """Indices of the k smallest scores, lowest index first on ties."""
    return np.sort(np.argsort(scores, kind='stable')[:k])


def apply_adversarial_flip(S, w_star, budget, strategy, seed):
    """Flips exactly floor(budget * n) labels chosen by a preset adversary."""
    if not 0.0 <= budget < 1.0:
        raise ValueError("corruption budget must lie in [0, 1)")
    n = len(S)
    k = corruption_count(budget, n)
    if strategy == 'nearest_boundary':
        chosen = _lowest(np.abs(S.X.dot(w_star.w)), k)
    elif strategy == 'orthogonal_bias':
        # largest y (u . x) among points labeled like w*: every flip pushes
        # the label-weighted mean against u
        u = geometry.orthogonal_unit(w_star)
        push = S.y * S.X.dot(u)
        correct = S.y == w_star.predict(S.X)
        chosen = _lowest(np.where(correct, -push, np.inf), k)
    elif strategy == 'random':
        chosen = _lowest(_uniforms(n, seed, util.STREAM_CORRUPTION), k)
    else:
        raise ValueError("unknown adversarial strategy %r" % (strategy, ))

    y = np.array(S.y)
    y[chosen] = -y[chosen]
    return S.with_labels(y, NoiseSpec.adversarial(budget, strategy))


def apply_malicious(S, budget, strategy, seed, scale=None, band=None):
    """
    Replaces exactly floor(budget * n) uniformly chosen samples by fakes placed
    by a static adversary relative to the dataset's ground truth.
    """
    if not 0.0 <= budget < 1.0:
        raise ValueError("corruption budget must lie in [0, 1)")
    w_star = S._w_star()
    n = len(S)
    k = corruption_count(budget, n)
    chosen = _lowest(_uniforms(n, seed, util.STREAM_CORRUPTION), k)
    u = geometry.orthogonal_unit(w_star)
    if scale is None:
        scale = math.sqrt(S.d)

    if strategy == 'orthogonal_cluster':
        fake = scale * u
        label = -geometry.classify(w_star, u)
    elif strategy == 'boundary_cluster':
        width = band if band is not None else 0.1
        fake = BOUNDARY_OFFSET * width * w_star.w + scale * u
        label = -geometry.classify(w_star, fake)
    else:
        raise ValueError("unknown malicious strategy %r" % (strategy, ))

    X = np.array(S.X)
    y = np.array(S.y)
    X[chosen] = fake
    y[chosen] = label
    provenance = S.provenance
    if provenance is not None:
        provenance = provenance._replace(
            noise=NoiseSpec.malicious(budget, strategy, scale, band))
    return Dataset(X, y, provenance)


def apply_noise(S, w_star, noise, seed):
    """Dispatches a L{NoiseSpec} to the matching corruption."""
    if noise.kind == 'none':
        return S
    if noise.kind == 'rcn':
        return apply_rcn(S, noise.nu, seed)
    if noise.kind == 'bounded':
        return apply_bounded(S, w_star, noise.nu, noise.rate_function(), seed)
    if noise.kind == 'adversarial_flip':
        return apply_adversarial_flip(S, w_star, noise.budget, noise.strategy, seed)
    return apply_malicious(S, noise.budget, noise.strategy, seed, noise.scale, noise.band)


def generate(marginal, w_star, noise, n, seed):
    """Draws a fresh labeled set: marginal, realizable labels, then noise."""
    X = sample_marginal(marginal, n, util.derive_seed(seed, util.STREAM_MARGINAL))
    S = label_realizable(X, w_star, marginal, seed)
    S = apply_noise(S, w_star, noise, util.derive_seed(seed, util.STREAM_LABEL_NOISE))
    return Dataset(S.X, S.y, Provenance(marginal, noise, w_star, seed))


def random_w_star(d, seed):
    return geometry.random_unit(util.stream(seed, util.STREAM_WSTAR), d)


def gaussian_band_mass(gamma):
    """Pr[|z| <= gamma] for a standard normal z."""
    return 2.0 * ndtr(gamma) - 1.0


def default_band_cap(quota, gamma):
    """Raw draws allowed for a band quota: 50 quota over the Gaussian band mass."""
    return int(math.ceil(BAND_DRAW_FACTOR * quota / gaussian_band_mass(gamma)))


class DistributionSampler(object):
    """
    Seeded sampling access to D. Every call consumes the next batch of a
    counter-keyed stream, so a run is a deterministic function of the seed.
    """

    def __init__(self, marginal, w_star, noise, seed, batch_size=util.BLOCK_SIZE):
        self.marginal = marginal
        self.w_star = w_star
        self.noise = noise
        self.seed = seed
        self.batch_size = batch_size
        self.batches = 0
        self.drawn = 0

    @property
    def d(self):
        return self.marginal.d

    def draw(self, n):
        seed = util.derive_seed(self.seed, util.STREAM_SAMPLER, self.batches)
        self.batches += 1
        self.drawn += n
        return generate(self.marginal, self.w_star, self.noise, n, seed)

    def draw_band(self, w, gamma, quota, cap=None):
        """
        Draws until C{quota} samples with |w . x| <= gamma are collected.

        @return: (band dataset, raw draw count)
        @raise InsufficientBandSamples: if more than C{cap} raw draws are needed
        """
        if quota < 1:
            raise ValueError("band quota must be positive")
        mass = gaussian_band_mass(gamma)
        if cap is None:
            cap = default_band_cap(quota, gamma)
        batch = max(self.batch_size, int(math.ceil(1.2 * quota / mass)))
        found_X, found_y = [], []
        found = raw = 0
        while found < quota:
            if raw >= cap:
                raise InsufficientBandSamples(quota, found, raw)
            size = min(batch, cap - raw)
            S = self.draw(size)
            raw += size
            keep = geometry.in_band(S.X, w, gamma)
            found_X.append(S.X[keep])
            found_y.append(S.y[keep])
            found += int(keep.sum())
        X = np.concatenate(found_X)[:quota]
        y = np.concatenate(found_y)[:quota]
        log.debug("band gamma=%.4g: %d samples from %d draws" % (gamma, quota, raw))
        return Dataset(X, y, Provenance(self.marginal, self.noise, self.w_star, self.seed)), raw

    def fork(self, key):
        """An independent sampler for a sub-task (repeated runs, validation)."""
        return DistributionSampler(self.marginal, self.w_star, self.noise,
            util.derive_seed(self.seed, util.STREAM_RUNS, key), self.batch_size)


""" dataset files """


def write_dataset(S, fp):
    header = ['x%d' % i for i in range(S.d)] + ['y']
    rows = ([float(v) for v in x] + [int(y)] for x, y in zip(S.X, S.y))
    util.write_csv(fp, header, rows)


def read_dataset(path):
    with open(path, 'r', encoding='utf-8', newline='') as fp:
        reader = csv.reader(fp)
        header = next(reader)
        if not header or header[-1] != 'y':
            raise ValueError("dataset header must end with y")
        d = len(header) - 1
        X, y = [], []
        for row in reader:
            X.append([float(v) for v in row[:d]])
            y.append(int(row[d]))
    return Dataset(np.array(X, dtype=float).reshape(len(y), d), y)
