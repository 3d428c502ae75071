# -*- coding: utf-8 -*-
"""Seeded random streams, CSV and JSON output helpers."""
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

import demjson3
import numpy as np

# random stream tags: one per consumer of randomness
STREAM_MARGINAL = 1
STREAM_LABEL_NOISE = 2
STREAM_CORRUPTION = 3
STREAM_WSTAR = 4
STREAM_SAMPLER = 5
STREAM_SOLVER = 6
STREAM_EVAL = 7
STREAM_PROPERTIES = 8
STREAM_RUNS = 9

# samples per counter block
BLOCK_SIZE = 1024

FLOAT_FORMAT = '%.17g'


def stream(seed, tag, *key):
    """
    Returns a counter-based generator keyed by (seed, tag, key...).
    Two calls with the same key always produce the same numbers.
    """
    entropy = [int(seed), int(tag)] + [int(k) for k in key]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(seed, *key):
    """Derives a child seed from a parent seed and a key path."""
    entropy = [int(seed)] + [int(k) for k in key]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint32)[0])


def blockwise(seed, tag, n, draw, block=BLOCK_SIZE):
    """
    Draws n items in fixed-size blocks, block b coming from stream(seed, tag, b).
    Item i only depends on (seed, tag, i), so any prefix is stable and blocks
    can be generated in any order.

    @param draw: callable(generator, count) returning an array with count rows
    """
    if n <= 0:
        return draw(stream(seed, tag, 0), 0)
    nblocks = (n + block - 1) // block
    chunks = [draw(stream(seed, tag, b), block) for b in range(nblocks)]
    return np.concatenate(chunks)[:n]


def format_float(x):
    return FLOAT_FORMAT % float(x)


def _plain(obj):
    # numpy containers and scalars to their Python counterparts
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return dict((str(k), _plain(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    raise TypeError("not JSON serializable: %r" % (obj, ))


class FloatEncoder(demjson3.JSON):
    """demjson encoder writing every float with 17 significant digits, NaN as null."""

    def encode_number(self, n, state):
        if isinstance(n, float):
            state.append(format_float(n) if math.isfinite(n) else 'null')
        else:
            super().encode_number(n, state)


def json_dumps(obj, indent=None):
    """JSON text of obj, keys in insertion order; compact unless indent is given."""
    if indent is None:
        encoder = FloatEncoder(compactly=True, sort_keys=demjson3.SORT_NONE)
    else:
        encoder = FloatEncoder(compactly=False, indent_amount=indent, sort_keys=demjson3.SORT_NONE)
    return encoder.encode(_plain(obj))


def json_loads(text):
    return demjson3.decode(text)


def write_csv(fp, header, rows):
    """Writes a UTF-8, LF-terminated CSV table."""
    writer = csv.writer(fp, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v
            for v in row])


def hoeffding_radius(n, confidence=0.95):
    """Two-sided Hoeffding radius for a mean of n [0, 1] variables."""
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))
