# -*- coding: utf-8 -*-
"""Experiment configuration: demjson files checked against a strict schema."""
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

import copy
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import demjson3

from halfspace.learning import evaluation, geometry, log, synthdata
from halfspace.learning.errors import ConfigError
from halfspace.learning.learners import (DEFAULT_DEGREE, DEFAULT_HINGE_ITERS,
    DEFAULT_QUOTA, KEARNS_LI_CAP, LocalizationSchedule)

LEARNERS = ('lp', 'kearns_li', 'averaging', 'poly', 'localize_hinge', 'localize_poly_hinge')

DEFAULTS = {
    'marginal': {'kind': 'gaussian', 'd': 10},
    'noise': {'kind': 'none'},
    'learner': {
        'name': 'averaging',
        'degree': DEFAULT_DEGREE,
        'runs': 1,
        'n_validation': 2000,
        'repetition_cap': KEARNS_LI_CAP,
    },
    'schedule': {
        'mode': 'practical',
        'C1_upper': evaluation.C1_UPPER,
        'C1_lower': evaluation.C1_LOWER,
        'C2_upper': evaluation.C2_UPPER,
        'C2_lower': evaluation.C2_LOWER,
        'C3': evaluation.C3_PRIME,
        'g_exponent': 4.0,
        'quota': DEFAULT_QUOTA,
    },
    'solver': {
        'hinge_iters': DEFAULT_HINGE_ITERS,
        'batch': None,
    },
    'n_train': 10000,
    'n_eval': 100000,
    'epsilon': 0.1,
    'delta': 0.1,
    'seed': 0,
    'w_star': 'random',
    'log.levels': ['WARN', 'ERROR'],
}

# keys only a sweep file may carry
SWEEP_KEYS = ('learners', 'seeds')

SWEEP_MARKER = 'sweep'


@dataclass(frozen=True)
class LearnerSpec:
    name: str = 'averaging'
    degree: int = DEFAULT_DEGREE
    runs: int = 1
    n_validation: int = 2000
    repetition_cap: int = KEARNS_LI_CAP

    def describe(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class SolverSpec:
    hinge_iters: int = DEFAULT_HINGE_ITERS
    batch: Optional[int] = None

    def describe(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class ExperimentConfig:
    marginal: synthdata.MarginalSpec
    noise: synthdata.NoiseSpec
    learner: LearnerSpec
    schedule: LocalizationSchedule
    quota: int
    solver: SolverSpec
    n_train: int
    n_eval: int
    epsilon: float
    delta: float
    seed: int
    w_star: object = 'random'
    log_levels: tuple = ('WARN', 'ERROR')

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def with_learner(self, name):
        return replace(self, learner=replace(self.learner, name=name))

    def resolve_w_star(self):
        """The ground-truth halfspace: explicit, or drawn from the seed."""
        if isinstance(self.w_star, str):
            return synthdata.random_w_star(self.marginal.d, self.seed)
        return geometry.normalize(self.w_star)

    def describe(self):
        schedule = self.schedule.describe(self.epsilon)
        schedule['quota'] = self.quota
        return {
            'marginal': self.marginal.describe(),
            'noise': self.noise.describe(),
            'learner': self.learner.describe(),
            'schedule': schedule,
            'solver': self.solver.describe(),
            'n_train': self.n_train,
            'n_eval': self.n_eval,
            'epsilon': self.epsilon,
            'delta': self.delta,
            'seed': self.seed,
            'w_star': self.w_star if isinstance(self.w_star, str) else list(self.w_star),
            'log.levels': list(self.log_levels),
        }


@dataclass(frozen=True)
class SweepConfig:
    """One configuration per swept value, each run for every learner and seed."""
    path: str
    values: list
    configs: list
    learners: tuple
    seeds: int = 1
    raw: dict = field(default_factory=dict)


""" schema helpers """


def _join(path, key):
    return key if not path else '%s.%s' % (path, key)


def _section(data, path, defaults):
    """Merges a section over its defaults, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError(path or '<root>', "expected an object")
    for key in data:
        if key not in defaults:
            raise ConfigError(_join(path, key), "unknown key")
    merged = dict(defaults)
    merged.update(data)
    return merged


def _number(value, key, low=None, high=None, low_open=False, high_open=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, "expected a number, got %r" % (value, ))
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    if low is not None and (value < low or (low_open and value == low)):
        raise ConfigError(key, "must be %s %r" % ('>' if low_open else '>=', low))
    if high is not None and (value > high or (high_open and value == high)):
        raise ConfigError(key, "must be %s %r" % ('<' if high_open else '<=', high))
    return value


def _count(value, key, low=0):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, "expected an integer, got %r" % (value, ))
    if value < low:
        raise ConfigError(key, "must be >= %d" % (low, ))
    return value


def _choice(value, key, choices):
    if value not in choices:
        raise ConfigError(key, "expected one of %s, got %r" % (', '.join(choices), value))
    return value


def _optional(value, key, check, *args):
    return None if value is None else check(value, key, *args)


""" sections """


def _marginal(data):
    section = _section(data, 'marginal', DEFAULTS['marginal'])
    kind = _choice(section['kind'], 'marginal.kind', tuple(synthdata.MARGINAL_SAMPLERS))
    return synthdata.MarginalSpec(kind, _count(section['d'], 'marginal.d', 1))


def _noise(data):
    if not isinstance(data, dict):
        raise ConfigError('noise', "expected an object")
    kind = _choice(data.get('kind', 'none'), 'noise.kind', synthdata.NOISE_KINDS)
    allowed = ('kind', ) + synthdata.NoiseSpec._FIELDS[kind]
    for key in data:
        if key not in allowed:
            raise ConfigError('noise.' + key, "unknown key for noise kind %s" % (kind, ))

    fields = {}
    if 'nu' in allowed:
        fields['nu'] = _number(data.get('nu'), 'noise.nu', 0.0, 0.5, high_open=True)
    if kind == 'bounded':
        fields['rate'] = _choice(data.get('rate', 'constant'), 'noise.rate', synthdata.RATE_FUNCTIONS)
        fields['sigma'] = _optional(data.get('sigma'), 'noise.sigma', _number, 0.0, None, True)
    if 'budget' in allowed:
        fields['budget'] = _number(data.get('budget'), 'noise.budget', 0.0, 1.0, high_open=True)
    if kind == 'adversarial_flip':
        fields['strategy'] = _choice(data.get('strategy', 'nearest_boundary'), 'noise.strategy',
            synthdata.ADVERSARIAL_STRATEGIES)
    if kind == 'malicious':
        fields['strategy'] = _choice(data.get('strategy', 'orthogonal_cluster'), 'noise.strategy',
            synthdata.MALICIOUS_STRATEGIES)
        fields['scale'] = _optional(data.get('scale'), 'noise.scale', _number, 0.0, None, True)
        fields['band'] = _optional(data.get('band'), 'noise.band', _number, 0.0, None, True)
    try:
        return synthdata.NoiseSpec(kind, **fields)
    except ValueError as e:
        raise ConfigError('noise', str(e))


def _learner(data):
    section = _section(data, 'learner', DEFAULTS['learner'])
    return LearnerSpec(
        name=_choice(section['name'], 'learner.name', LEARNERS),
        degree=_count(section['degree'], 'learner.degree', 1),
        runs=_count(section['runs'], 'learner.runs', 1),
        n_validation=_count(section['n_validation'], 'learner.n_validation', 1),
        repetition_cap=_count(section['repetition_cap'], 'learner.repetition_cap', 1),
    )


def _schedule(data):
    section = _section(data, 'schedule', DEFAULTS['schedule'])
    constants = dict((key, _number(section[key], 'schedule.' + key, 0.0, None, True))
        for key in ('C1_upper', 'C1_lower', 'C2_upper', 'C2_lower', 'C3', 'g_exponent'))
    mode = _choice(section['mode'], 'schedule.mode', LocalizationSchedule.MODES)
    return LocalizationSchedule(mode=mode, **constants), _count(section['quota'], 'schedule.quota', 1)


def _solver(data):
    section = _section(data, 'solver', DEFAULTS['solver'])
    return SolverSpec(
        hinge_iters=_count(section['hinge_iters'], 'solver.hinge_iters', 1),
        batch=_optional(section['batch'], 'solver.batch', _count, 1),
    )


def _w_star(value, d):
    if value == 'random':
        return value
    if not isinstance(value, list):
        raise ConfigError('w_star', "expected \"random\" or a vector")
    vector = tuple(_number(v, 'w_star[%d]' % i) for i, v in enumerate(value))
    if len(vector) != d:
        raise ConfigError('w_star', "expected %d coordinates, got %d" % (d, len(vector)))
    if math.sqrt(sum(v * v for v in vector)) <= geometry.ZERO_NORM:
        raise ConfigError('w_star', "zero vector")
    return vector


def _levels(value):
    if not isinstance(value, list):
        raise ConfigError('log.levels', "expected a list")
    for name in value:
        if not isinstance(name, str) or name.upper() not in log.LEVEL_NAMES:
            raise ConfigError('log.levels', "unknown level %r" % (name, ))
    return tuple(name.upper() for name in value)


def parse_config(data, sweep=False):
    """
    Builds an L{ExperimentConfig} from decoded JSON.

    @param sweep: accept the sweep-only top-level keys
    @raise ConfigError: naming the offending key path
    """
    if not sweep and isinstance(data, dict):
        for keys in find_sweeps(data):
            raise ConfigError('.'.join(keys), "sweep lists are only accepted by the sweep command")
    allowed = dict(DEFAULTS)
    if sweep:
        allowed.update((key, None) for key in SWEEP_KEYS)
    section = _section(data, '', allowed)
    marginal = _marginal(section['marginal'])
    schedule, quota = _schedule(section['schedule'])
    return ExperimentConfig(
        marginal=marginal,
        noise=_noise(section['noise']),
        learner=_learner(section['learner']),
        schedule=schedule,
        quota=quota,
        solver=_solver(section['solver']),
        n_train=_count(section['n_train'], 'n_train'),
        n_eval=_count(section['n_eval'], 'n_eval', 1),
        epsilon=_number(section['epsilon'], 'epsilon', 0.0, 1.0, True, True),
        delta=_number(section['delta'], 'delta', 0.0, 1.0, True, True),
        seed=_count(section['seed'], 'seed'),
        w_star=_w_star(section['w_star'], marginal.d),
        log_levels=_levels(section['log.levels']),
    )


""" sweeps """


def _is_sweep(value):
    return isinstance(value, dict) and list(value) == [SWEEP_MARKER]


def find_sweeps(data, keys=()):
    """Key paths of every value written as {"sweep": [...]}."""
    found = []
    if isinstance(data, dict):
        for key, value in data.items():
            if _is_sweep(value):
                found.append(keys + (key, ))
            else:
                found.extend(find_sweeps(value, keys + (key, )))
    return found


def _substitute(data, keys, value):
    data = copy.deepcopy(data)
    node = data
    for key in keys[:-1]:
        node = node[key]
    node[keys[-1]] = value
    return data


def parse_sweep(data):
    """
    @raise ConfigError: unless exactly one value is a sweep list
    """
    if not isinstance(data, dict):
        raise ConfigError('<root>', "expected an object")
    found = find_sweeps(data)
    if len(found) != 1:
        raise ConfigError('sweep', "expected exactly one swept value, found %d%s" %
            (len(found), (' (%s)' % ', '.join('.'.join(k) for k in found)) if found else ''))
    keys = found[0]
    path = '.'.join(keys)
    node = data
    for key in keys:
        node = node[key]
    values = node[SWEEP_MARKER]
    if not isinstance(values, list) or not values:
        raise ConfigError(path + '.sweep', "expected a non-empty list")

    configs = [parse_config(_substitute(data, keys, value), sweep=True) for value in values]
    learners = data.get('learners', [configs[0].learner.name])
    if not isinstance(learners, list) or not learners:
        raise ConfigError('learners', "expected a non-empty list")
    for name in learners:
        _choice(name, 'learners', LEARNERS)
    seeds = _count(data.get('seeds', 1), 'seeds', 1)
    return SweepConfig(path, values, configs, tuple(learners), seeds, data)


""" files """


def decode(text, source='<config>'):
    try:
        return demjson3.decode(text, allow_comments=True)
    except demjson3.JSONDecodeError as e:
        raise ConfigError(source, "malformed JSON: %s" % (e, ))


def read(path):
    """Reads and decodes a configuration file (comments allowed)."""
    with open(path, 'r', encoding='utf-8') as fp:
        return decode(fp.read(), path)


def load_config(path):
    return parse_config(read(path))


def load_sweep(path):
    return parse_sweep(read(path))
