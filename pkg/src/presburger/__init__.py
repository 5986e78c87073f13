"""Exact decision and counting for short Presburger sentences.

Bounded alternating quantifiers over integer vectors, a Boolean matrix of
few linear inequalities: this package decides such sentences, counts the
satisfying assignments of a free variable, and returns the counts as short
rational generating functions.  All arithmetic is exact.
"""

__version__ = "0.1.0"
