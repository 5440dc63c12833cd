"""Monte Carlo toolkit for renewal processes whose inter-shot times have
slowly varying tails, the extremal process of the unit Poisson random
measure on time x mark space, and the experiment suite that checks the
limit laws connecting the two.

The package is organised around the objects it simulates:

- ``lognum``: arithmetic on nonnegative reals stored as natural logs, so
  physical times like exp(1e4) stay representable.
- ``slowvary``: slowly varying scale functions L with exact inverses.
- ``rng``: counter-based splittable random streams for reproducible
  parallel replicas.
- ``extremal``: exact samplers for the extremal process, its inverse and
  the pre/post level-crossing pair.
- ``renewal``: heavy-tailed random walks, first passage, shot noise.
- ``stats``: empirical-distribution tests (KS, chi-square independence).
- ``experiments``: named, seeded experiment runners with JSON/CSV output.
- ``cli``: the ``slowshot`` command.
"""

from slowshot.errors import NumericError
from slowshot.lognum import LogNum

__all__ = ["LogNum", "NumericError"]

__version__ = "0.1.0"
