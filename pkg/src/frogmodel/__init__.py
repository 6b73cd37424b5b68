"""Simulation and numerics toolkit for the frog model on Z with discrete
Weibull lifetimes and a random survival parameter."""

__version__ = "0.1.0"

from . import (asymptotics, distributions, frog_sim, one_particle, verify,
               walk_oracle)

__all__ = ["asymptotics", "distributions", "frog_sim", "one_particle",
           "verify", "walk_oracle", "__version__"]
