# -*- coding: utf-8 -*-
"""Level-masked logging on top of twisted.logger."""
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

from twisted.logger import (Logger, LogLevel, globalLogBeginner,
    textFileLogObserver)

LEVEL_DEBUG = 1
LEVEL_INFO = 1 << 1
LEVEL_WARN = 1 << 2
LEVEL_ERROR = 1 << 3
# all levels
LEVEL_ALL = LEVEL_DEBUG | LEVEL_INFO | LEVEL_WARN | LEVEL_ERROR

LEVEL_NAMES = {
    'DEBUG': LEVEL_DEBUG,
    'INFO': LEVEL_INFO,
    'WARN': LEVEL_WARN,
    'ERROR': LEVEL_ERROR,
    'ALL': LEVEL_ALL,
}

# errors and warnings get through until init() says otherwise
level = LEVEL_WARN | LEVEL_ERROR

_logger = Logger(namespace='halfspace')
_started = False


def init(cfg):
    '''Initializes logging levels from the "log.levels" configuration key.'''
    global level
    levels = cfg.get('log.levels', ['WARN', 'ERROR'])
    mask = 0
    for name in levels:
        mask |= LEVEL_NAMES[name.upper()]
    level = mask


def start(stream=None):
    '''Starts emitting to a text stream (stderr by default). Idempotent.'''
    global _started
    if _started:
        return
    _started = True
    if stream is None:
        stream = sys.stderr
    globalLogBeginner.beginLoggingTo([textFileLogObserver(stream)],
        redirectStandardIO=False)


def _emit(mask, loglevel, msg):
    if level & mask:
        # braces in messages are literal text, not format fields
        _logger.emit(loglevel, '{msg}', msg=msg)


def debug(msg):
    _emit(LEVEL_DEBUG, LogLevel.debug, msg)


def info(msg):
    _emit(LEVEL_INFO, LogLevel.info, msg)


def warn(msg):
    _emit(LEVEL_WARN, LogLevel.warn, msg)


def error(msg):
    _emit(LEVEL_ERROR, LogLevel.error, msg)
