# -*- coding: utf-8 -*-
"""Experiment pipelines: generate, train, evaluate, report and sweep."""
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

import time
from dataclasses import dataclass, field

from twisted.internet import defer, threads
from twisted.python.threadpool import ThreadPool

from halfspace.learning import (evaluation, geometry, learners, log, synthdata,
    util, version)
from halfspace.learning.errors import InsufficientSamples, NoFeasibleSeparator

SWEEP_COLUMNS = ('sweep_value', 'seed', 'learner', 'mc_error', 'ci_radius', 'angle', 'wall_ms')

# learners that train on the generated training set
DATASET_LEARNERS = ('lp', 'averaging', 'poly', 'localize_hinge', 'localize_poly_hinge')


@dataclass
class ExperimentReport:
    config: object
    model: object
    mc_error: evaluation.ErrorEstimate
    angle: object = None
    training_error: object = None
    diagnostics: dict = field(default_factory=dict)
    wall_ms: float = 0.0
    theory: dict = field(default_factory=dict)

    def describe(self):
        constants = self.config.schedule.describe(self.config.epsilon)
        constants['quota'] = self.config.quota
        return {
            'version': version.VERSION,
            'config': self.config.describe(),
            'model': self.model.describe(),
            'mc_error': self.mc_error.describe(),
            'angle': self.angle,
            'training_error': self.training_error,
            'diagnostics': self.diagnostics,
            'constants': constants,
            'theory': self.theory,
            'wall_ms': self.wall_ms,
        }

    def to_json(self, indent=2):
        return util.json_dumps(self.describe(), indent)


def theoretical_counts(config):
    """Uncapped sample and repetition counts of every learner for the config."""
    d, epsilon, delta = config.marginal.d, config.epsilon, config.delta
    schedule = config.schedule
    m, repetitions = learners.kearns_li_repetitions(d, epsilon, delta)
    r = schedule.rounds(epsilon)
    counts = {
        'realizable': learners.realizable_sample_bound(d, epsilon, delta),
        'agnostic': learners.agnostic_sample_bound(d, epsilon, delta),
        'averaging': learners.averaging_sample_bound(d, epsilon, delta),
        'kearns_li_m': m,
        'kearns_li_repetitions': repetitions,
        'kearns_li_repetitions_used': min(repetitions, config.learner.repetition_cap),
        'localization_rounds': r,
        'band_quota': [learners.band_sample_bound(d, schedule.gamma(k), schedule.c0,
            epsilon, delta / r) for k in range(1, r + 1)],
        'band_quota_used': config.quota,
    }
    if config.noise.kind in ('rcn', 'bounded'):
        counts['bounded_noise'] = learners.bounded_noise_sample_bound(d, epsilon, delta,
            config.noise.bayes_rate)
    return counts


def sampler_for(config, w_star):
    return synthdata.DistributionSampler(config.marginal, w_star, config.noise,
        util.derive_seed(config.seed, util.STREAM_SAMPLER))


def _poly(config, S, w_star):
    spec = config.learner
    if spec.runs == 1:
        return learners.train_poly_regression(S, spec.degree)
    sampler = sampler_for(config, w_star)

    def trainer(i):
        data = S if i == 0 else sampler.fork(i).draw(config.n_train)
        return learners.train_poly_regression(data, spec.degree)

    validation = sampler.fork(spec.runs).draw(spec.n_validation)
    return learners.repeat_and_validate(trainer, spec.runs, validation)


def _localize(config, S, w_star, oracle, diagnostics):
    w1 = learners.train_averaging(S)
    trace = []
    diagnostics['warm_start_angle'] = geometry.angle(w1, w_star)
    try:
        return learners.localize(sampler_for(config, w_star), config.schedule, oracle, w1,
            config.epsilon, config.delta, trace)
    finally:
        diagnostics['rounds'] = [dict(r._asdict()) for r in trace]


def train(config, S, w_star, diagnostics):
    """Runs the configured learner; fills C{diagnostics} along the way."""
    name = config.learner.name
    if name in DATASET_LEARNERS and len(S) == 0:
        raise InsufficientSamples("learner %s needs n_train > 0" % (name, ))

    if name == 'lp':
        h = learners.train_lp_realizable(S)
        if h is None:
            raise NoFeasibleSeparator("no halfspace separates the %d training samples" % (len(S), ))
        return h
    if name == 'kearns_li':
        m, repetitions = learners.kearns_li_repetitions(config.marginal.d, config.epsilon, config.delta)
        diagnostics.update(m=m, repetitions=min(repetitions, config.learner.repetition_cap),
            repetitions_uncapped=repetitions)
        return learners.train_kearns_li(sampler_for(config, w_star), config.marginal.d,
            config.epsilon, config.delta, config.learner.repetition_cap)
    if name == 'averaging':
        return learners.train_averaging(S)
    if name == 'poly':
        return _poly(config, S, w_star)

    solver = config.solver
    if name == 'localize_hinge':
        oracle = learners.HingeBandOracle(config.quota, solver.hinge_iters, solver.batch)
    else:
        oracle = learners.PolyHingeBandOracle(config.learner.degree, config.noise.bayes_rate,
            config.quota, solver.hinge_iters, solver.batch, config.schedule.tolerance())
    return _localize(config, S, w_star, oracle, diagnostics)


def run_experiment(config):
    """generate -> train -> evaluate; returns an L{ExperimentReport}."""
    start = time.monotonic()
    w_star = config.resolve_w_star()
    S = synthdata.generate(config.marginal, w_star, config.noise, config.n_train, config.seed)
    diagnostics = {}
    model = train(config, S, w_star, diagnostics)

    estimate = evaluation.mc_error(model, config.marginal, w_star, config.noise,
        config.n_eval, config.seed)
    angle = geometry.angle(model, w_star) if isinstance(model, geometry.Hyperplane) else None
    training_error = evaluation.empirical_error(model, S) if len(S) else None
    wall_ms = (time.monotonic() - start) * 1000.0
    log.info("run %s seed %d: error %.4g +- %.4g, angle %s, %.0f ms" %
        (config.learner.name, config.seed, estimate.value, estimate.ci_radius,
         'n/a' if angle is None else '%.4g' % angle, wall_ms))
    return ExperimentReport(config, model, estimate, angle, training_error, diagnostics,
        wall_ms, theoretical_counts(config))


def generate_dataset(config, fp):
    """Writes the configured training set as CSV."""
    w_star = config.resolve_w_star()
    S = synthdata.generate(config.marginal, w_star, config.noise, config.n_train, config.seed)
    synthdata.write_dataset(S, fp)
    return S


""" sweeps """


def sweep_cells(sweep):
    """(value index, seed, learner, config) for every cell of the sweep."""
    cells = []
    for index, config in enumerate(sweep.configs):
        for offset in range(sweep.seeds):
            for name in sweep.learners:
                seed = config.seed + offset
                cells.append((index, seed, name, config.with_seed(seed).with_learner(name)))
    return cells


def _sweep_value(value):
    if isinstance(value, (list, dict)):
        return util.json_dumps(value)
    return value


def run_cell(sweep, cell):
    index, seed, name, config = cell
    report = run_experiment(config)
    row = (_sweep_value(sweep.values[index]), seed, name, report.mc_error.value,
        report.mc_error.ci_radius, '' if report.angle is None else report.angle, report.wall_ms)
    return (index, seed, name), row


def run_sweep(reactor, sweep, threadcount=1):
    """
    Runs every cell on a thread pool of C{threadcount} workers.

    @return: Deferred firing with the CSV rows, sorted by (value, seed, learner)
    """
    pool = ThreadPool(minthreads=1, maxthreads=max(1, threadcount), name='sweep')
    pool.start()
    cells = sweep_cells(sweep)
    log.info("sweep over %s: %d cells on %d threads" % (sweep.path, len(cells), threadcount))
    deferreds = [threads.deferToThreadPool(reactor, pool, run_cell, sweep, cell) for cell in cells]
    d = defer.gatherResults(deferreds, consumeErrors=True)

    def finish(result):
        pool.stop()
        return result

    d.addBoth(finish)
    d.addCallback(lambda results: [row for unused, row in sorted(results, key=lambda r: r[0])])
    return d


def write_sweep(rows, fp):
    util.write_csv(fp, SWEEP_COLUMNS, rows)
