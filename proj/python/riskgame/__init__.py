"""Solver for finite incomplete-information games with risk-averse players.

Players rank random losses with coherent risk measures (expectation, tail
averages, spectral mixtures, or explicit dual polytopes).  The package
evaluates ex ante risks, extracts optimal dual densities, builds the interim
revisions those densities induce, certifies three stability notions (ex ante,
interim without revision, interim under a revision), verifies the structural
identities connecting them, and derives interim beliefs from priors.

Everything is implemented in the C++ core; this package re-exports it.
"""

from ._riskgame import *  # noqa: F401,F403
from ._riskgame import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
