# -*- coding: utf-8 -*-
"""Exceptions raised by the learning library."""
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


class HalfspaceError(Exception):
    """Base class for every library error."""


class DimensionMismatch(HalfspaceError, ValueError):

    def __init__(self, expected, got):
        HalfspaceError.__init__(self, "dimension mismatch: expected %d, got %d" % (expected, got))
        self.expected = expected
        self.got = got


class ZeroVector(HalfspaceError, ValueError):
    """Raised when a vector is too short to be normalized."""


class ConfigError(HalfspaceError):
    """Invalid experiment configuration."""

    def __init__(self, key, reason):
        HalfspaceError.__init__(self, "%s: %s" % (key, reason))
        self.key = key
        self.reason = reason


""" solvers """


class SolverError(HalfspaceError):
    pass


class Infeasible(SolverError):
    """Certified answer: the linear system has no solution."""


class Unbounded(SolverError):
    pass


class NumericalBreakdown(SolverError):
    """Pivoting stalled or the tableau lost its numerical meaning."""


""" learners """


class LearnerError(HalfspaceError):
    pass


class NoCandidate(LearnerError):
    """Every realizable-oracle call returned nothing."""


class NoFeasibleSeparator(LearnerError):
    """No halfspace separates the training set."""


class InsufficientBandSamples(LearnerError):

    def __init__(self, quota, found, draws):
        LearnerError.__init__(self, "band quota %d not filled: %d found after %d draws" %
            (quota, found, draws))
        self.quota = quota
        self.found = found
        self.draws = draws


class InsufficientSamples(LearnerError):
    pass


class FeatureBlowup(LearnerError):
    pass


class InvariantViolation(LearnerError):
    pass
