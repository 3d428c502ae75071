# -*- coding: utf-8 -*-
"""Vector primitives: halfspaces, angles, bands and the cone-cap projection."""
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

from zope.interface import Interface, implementer

from halfspace.learning.errors import DimensionMismatch, ZeroVector

UNIT_TOLERANCE = 1e-9
ZERO_NORM = 1e-12
DYKSTRA_ROUNDS = 50


class IClassifier(Interface):
    """A map from instances to labels in {-1, +1}."""

    def predict(X):
        """Returns the label of every row of the n x d array C{X}."""

    def describe():
        """Returns a JSON-serializable description of the model."""


def sign(values):
    """Elementwise sign with the tie rule sign(0) = +1."""
    return np.where(np.asarray(values) >= 0, 1, -1)


def as_instances(X, d=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if d is not None and X.shape[1] != d:
        raise DimensionMismatch(d, X.shape[1])
    return X


@implementer(IClassifier)
class Hyperplane(object):
    """
    Homogeneous halfspace h_w(x) = sign(w . x) for a unit vector w.
    The coefficient array is read-only.
    """

    def __init__(self, w):
        w = np.array(w, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("hyperplane needs a non-empty vector")
        if not np.all(np.isfinite(w)):
            raise ValueError("hyperplane has non-finite entries")
        if abs(np.linalg.norm(w) - 1.0) > UNIT_TOLERANCE:
            raise ValueError("not a unit vector (norm %r)" % (np.linalg.norm(w), ))
        w.setflags(write=False)
        self.w = w

    @property
    def d(self):
        return self.w.size

    def margins(self, X):
        return as_instances(X, self.d).dot(self.w)

    def predict(self, X):
        return sign(self.margins(X))

    def describe(self):
        return {'kind': 'halfspace', 'd': self.d, 'w': self.w.tolist()}

    def __neg__(self):
        return Hyperplane(-self.w)

    def __repr__(self):
        return 'Hyperplane(%s)' % (np.array2string(self.w, precision=4), )


class ConeCap(object):
    """K = {v : |v| <= radius and angle(v, axis) <= half_angle}."""

    def __init__(self, axis, half_angle, radius=1.0):
        if not 0.0 < half_angle < math.pi:
            raise ValueError("half angle must lie in (0, pi), got %r" % (half_angle, ))
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.axis = axis
        self.half_angle = float(half_angle)
        self.radius = float(radius)

    def contains(self, v, tol=1e-7):
        v = np.asarray(v, dtype=float)
        norm = np.linalg.norm(v)
        if norm > self.radius + tol:
            return False
        if norm <= ZERO_NORM:
            return True
        return vector_angle(self.axis.w, v / norm) <= self.half_angle + tol


def normalize(v):
    """Returns the L{Hyperplane} with direction v."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if not norm > ZERO_NORM:
        raise ZeroVector("cannot normalize a vector of norm %r" % (norm, ))
    return Hyperplane(v / norm)


def _coefficients(h):
    return h.w if isinstance(h, Hyperplane) else np.asarray(h, dtype=float)


def vector_angle(u, v):
    """Angle between two unit arrays; atan2 keeps precision near 0 and pi."""
    dot = float(np.dot(u, v))
    ortho = np.linalg.norm(v - dot * u)
    return math.atan2(ortho, dot)


def angle(u, v):
    """Angle in [0, pi] between two unit vectors or hyperplanes."""
    u = _coefficients(u)
    v = _coefficients(v)
    if u.size != v.size:
        raise DimensionMismatch(u.size, v.size)
    return vector_angle(u, v)


def classify(h, x):
    x = np.asarray(x, dtype=float)
    if x.size != h.d:
        raise DimensionMismatch(h.d, x.size)
    return 1 if float(np.dot(h.w, x)) >= 0 else -1


def in_band(x, w, gamma):
    """True iff |w . x| <= gamma (closed band)."""
    if not gamma > 0:
        raise ValueError("band width must be positive")
    x = np.asarray(x, dtype=float)
    w = _coefficients(w)
    if x.shape[-1] != w.size:
        raise DimensionMismatch(w.size, x.shape[-1])
    return np.abs(x.dot(w)) <= gamma


def orthogonal_unit(w):
    """
    A fixed unit vector orthogonal to w: the basis vector with the smallest
    |w_i| (lowest index on ties) with its w component removed.
    """
    w = _coefficients(w)
    if w.size < 2:
        raise DimensionMismatch(2, w.size)
    i = int(np.argmin(np.abs(w)))
    e = np.zeros(w.size)
    e[i] = 1.0
    return (e - w[i] * w) / np.linalg.norm(e - w[i] * w)


def rotate_towards(w, u, theta):
    """Unit vector at angle theta from w inside the plane spanned by w and u."""
    w = _coefficients(w)
    u = np.asarray(u, dtype=float)
    u = u - np.dot(u, w) * w
    u = u / np.linalg.norm(u)
    return Hyperplane(math.cos(theta) * w + math.sin(theta) * u)


def random_unit(generator, d):
    return normalize(generator.standard_normal(d))


def _project_cone(v, axis, beta):
    # second-order cone around axis with half angle beta
    t = float(np.dot(axis, v))
    y = v - t * axis
    s = np.linalg.norm(y)
    phi = math.atan2(s, t)
    if phi <= beta:
        return v
    if phi >= beta + math.pi / 2:
        return np.zeros_like(v)
    edge = math.cos(beta) * axis + math.sin(beta) * (y / s)
    return (t * math.cos(beta) + s * math.sin(beta)) * edge


def _project_ball(v, radius):
    norm = np.linalg.norm(v)
    if norm <= radius:
        return v
    return v * (radius / norm)


def project_cone_cap(v, cap):
    """
    Euclidean projection of v onto the cone cap K, via Dykstra's alternating
    projections between the cone and the ball.
    """
    if cap.half_angle > math.pi / 2:
        raise ValueError("cone cap projection needs half angle <= pi/2")
    v = np.array(v, dtype=float)
    axis = cap.axis.w
    if v.size != axis.size:
        raise DimensionMismatch(axis.size, v.size)

    x = v
    p = np.zeros_like(v)
    q = np.zeros_like(v)
    for unused in range(DYKSTRA_ROUNDS):
        y = _project_cone(x + p, axis, cap.half_angle)
        p = x + p - y
        x_next = _project_ball(y + q, cap.radius)
        q = y + q - x_next
        moved = np.linalg.norm(x_next - x)
        x = x_next
        if moved <= 1e-15 and np.linalg.norm(x - y) <= 1e-15:
            break
    return x
