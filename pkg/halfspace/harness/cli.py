# -*- coding: utf-8 -*-
"""Command line front-end: generate, run, properties and sweep."""
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

import sys

from twisted.internet import defer, task
from twisted.python import usage

from halfspace.harness import config as configuration
from halfspace.harness import experiment
from halfspace.learning import evaluation, learners, log, synthdata, version
from halfspace.learning.errors import ConfigError, HalfspaceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_LEARNER = 3
EXIT_PROPERTY = 4
EXIT_IO = 5


class _ConfigOptions(usage.Options):
    optParameters = [
        ["config", "c", None, "Experiment configuration file."],
        ["out", "o", None, "Output file (stdout if omitted)."],
        ["seed", "s", None, "Override the configured seed.", int],
    ]

    def postOptions(self):
        if not self['config']:
            raise usage.UsageError("--config is required")
        if self['seed'] is not None and self['seed'] < 0:
            raise usage.UsageError("--seed must be non-negative")


class GenerateOptions(_ConfigOptions):
    pass


class RunOptions(_ConfigOptions):
    optParameters = [
        ["model", "m", None, "Also write the trained model as JSON."],
    ]


class SweepOptions(_ConfigOptions):
    optParameters = [
        ["threads", "t", 1, "Worker threads.", int],
    ]

    def postOptions(self):
        _ConfigOptions.postOptions(self)
        if self['threads'] < 1:
            raise usage.UsageError("--threads must be positive")


class PropertiesOptions(usage.Options):
    optParameters = [
        ["marginal", "m", "gaussian", "Marginal preset."],
        ["dim", "d", 10, "Dimension.", int],
        ["samples", "n", 200000, "Monte Carlo sample count.", int],
        ["seed", "s", 0, "Random seed.", int],
        ["out", "o", None, "Output file (stdout if omitted)."],
    ]

    def postOptions(self):
        if self['seed'] < 0:
            raise usage.UsageError("--seed must be non-negative")
        if self['samples'] < 0:
            raise usage.UsageError("--samples must be non-negative")


class Options(usage.Options):
    synopsis = "halfspace <command> [options]"
    subCommands = [
        ["generate", None, GenerateOptions, "Write the configured training set as CSV."],
        ["run", None, RunOptions, "Train, evaluate and print a JSON report."],
        ["properties", None, PropertiesOptions, "Check log-concave properties of a marginal."],
        ["sweep", None, SweepOptions, "Run a sweep file and print a CSV table."],
    ]

    def opt_version(self):
        print("%s %s" % (version.NAME, version.VERSION))
        sys.exit(0)

    def postOptions(self):
        if self.subCommand is None:
            raise usage.UsageError("no command given")


def _output(path, stdout):
    if path is None:
        return stdout, False
    return open(path, 'w', encoding='utf-8', newline=''), True


def _write(path, stdout, text):
    fp, close = _output(path, stdout)
    try:
        fp.write(text)
    finally:
        if close:
            fp.close()


def _load(options):
    cfg = configuration.load_config(options['config'])
    if options['seed'] is not None:
        cfg = cfg.with_seed(options['seed'])
    log.init({'log.levels': list(cfg.log_levels)})
    return cfg


def cmd_generate(options, stdout):
    cfg = _load(options)
    fp, close = _output(options['out'], stdout)
    try:
        experiment.generate_dataset(cfg, fp)
    finally:
        if close:
            fp.close()
    return EXIT_OK


def cmd_run(options, stdout):
    cfg = _load(options)
    report = experiment.run_experiment(cfg)
    text = report.to_json() + '\n'
    stdout.write(text)
    if options['out']:
        _write(options['out'], stdout, text)
    if options['model']:
        _write(options['model'], stdout, learners.model_to_json(report.model) + '\n')
    return EXIT_OK


def cmd_properties(options, stdout):
    try:
        marginal = synthdata.MarginalSpec(options['marginal'], options['dim'])
    except ValueError as e:
        raise ConfigError('marginal', str(e))
    report = evaluation.check_logconcave_properties(marginal, options['samples'], options['seed'])
    _write(options['out'], stdout, report.to_json_lines())
    return EXIT_OK if report.passed else EXIT_PROPERTY


def load_sweep(options):
    sweep = configuration.load_sweep(options['config'])
    if options['seed'] is not None:
        configs = [c.with_seed(options['seed']) for c in sweep.configs]
        sweep = configuration.SweepConfig(sweep.path, sweep.values, configs,
            sweep.learners, sweep.seeds, sweep.raw)
    log.init({'log.levels': list(sweep.configs[0].log_levels)})
    return sweep


def sweep_command(reactor, sweep, options, stdout):
    """Deferred firing with the CSV rows written to the output."""
    d = experiment.run_sweep(reactor, sweep, options['threads'])

    def write(rows):
        fp, close = _output(options['out'], stdout)
        try:
            experiment.write_sweep(rows, fp)
        finally:
            if close:
                fp.close()
        return rows

    d.addCallback(write)
    return d


def _unwrap(failure):
    # gatherResults wraps the first failing cell
    while failure.check(defer.FirstError):
        failure = failure.value.subFailure
    return failure


def cmd_sweep(options, stdout):
    sweep = load_sweep(options)
    outcome = []

    def main(reactor):
        d = sweep_command(reactor, sweep, options, stdout)
        d.addCallbacks(lambda rows: outcome.append(None),
            lambda failure: outcome.append(_unwrap(failure)))
        return d

    try:
        task.react(main)
    except SystemExit:
        pass
    if outcome and outcome[0] is not None:
        outcome[0].raiseException()
    return EXIT_OK


COMMANDS = {
    'generate': cmd_generate,
    'run': cmd_run,
    'properties': cmd_properties,
    'sweep': cmd_sweep,
}


def main(argv=None, stdout=None, stderr=None):
    """Runs one command; returns the process exit code."""
    if stdout is None:
        stdout = sys.stdout
    if stderr is None:
        stderr = sys.stderr
        log.start(stderr)
    options = Options()
    try:
        options.parseOptions(sys.argv[1:] if argv is None else argv)
    except usage.UsageError as e:
        stderr.write("%s\n%s\n" % (e, options))
        return EXIT_CONFIG

    command = COMMANDS[options.subCommand]
    try:
        return command(options.subOptions, stdout)
    except ConfigError as e:
        log.error("configuration: %s" % (e, ))
        stderr.write("configuration error: %s\n" % (e, ))
        return EXIT_CONFIG
    except HalfspaceError as e:
        log.error("%s: %s" % (type(e).__name__, e))
        stderr.write("%s: %s\n" % (type(e).__name__, e))
        return EXIT_LEARNER
    except (IOError, OSError) as e:
        log.error("i/o: %s" % (e, ))
        stderr.write("i/o error: %s\n" % (e, ))
        return EXIT_IO


def run():
    sys.exit(main())
