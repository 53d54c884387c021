"""Squeezing unit conversions.

A squeezing magnitude ``k`` in natural units corresponds to
``10 * log10(exp(2 k))`` decibels.
"""

import math

_DB_PER_NEPER = 20.0 * math.log10(math.e)


def db_to_natural(db):
    """Convert a squeezing level in dB to natural units."""
    return db / _DB_PER_NEPER


def natural_to_db(k):
    """Convert a natural-unit squeezing magnitude to dB."""
    return k * _DB_PER_NEPER
