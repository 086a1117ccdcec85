"""Joint state-parameter estimation for noisy, partially observed dynamics.

The heavy lifting lives in the compiled ``_core`` module: a training-free
ensemble score filter for state estimation, a direct particle filter for
online parameter estimation, the united filter that alternates the two, and
an augmented ensemble Kalman filter baseline, plus the SIR / Fokker-Planck /
Lorenz-96 benchmark systems.
"""

from ufilter._core import *  # noqa: F401,F403
from ufilter._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
