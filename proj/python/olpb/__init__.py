"""Batched online linear programming: dual-price policies, offline benchmarks,
and Monte-Carlo regret estimation. Thin re-export of the compiled module."""

from _olpb import *  # noqa: F401,F403
from _olpb import __doc__  # noqa: F401
