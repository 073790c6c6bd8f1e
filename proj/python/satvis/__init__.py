"""Saturation attempt explorer: parse prover event logs, replay Active/Passive
sets, query and lay out the derivation DAG."""

from ._satvis import *  # noqa: F401,F403

__version__ = "1.0.0"
