"""Singularity invariants of hypersurfaces over a complete DVR of mixed characteristic."""

from .coeff import Coeff, CoeffRing, DvrSpec, hensel_sqrt
from .errors import (AtLeast, MixsingError, NotASquare, NotFiniteUpToBounds, NotFoundUpTo,
                     ParseError, PrecisionExhausted)
from .invariants import (Config, GenericSampler, determinacy_bound, isolated_singularity_check,
                         jacobian_number, mu_delta, mu_V, ord_uniformizer, tau_Delta, tau_delta,
                         tau_pi, tau_V, tau_V_lift)
from .localalg import LengthResult, quotient_length
from .normform import classify, hessian, split
from .pderiv import PDerivation, delta_eval
from .series import Ideal, Polynomial, Series, VarSet, tilde_lift

__version__ = "0.1.0"

__all__ = [
    "AtLeast", "Coeff", "CoeffRing", "Config", "DvrSpec", "GenericSampler", "Ideal", "LengthResult",
    "MixsingError", "NotASquare", "NotFiniteUpToBounds", "NotFoundUpTo", "ParseError", "PDerivation",
    "Polynomial", "PrecisionExhausted", "Series", "VarSet", "classify", "delta_eval",
    "determinacy_bound", "hensel_sqrt", "hessian", "isolated_singularity_check", "jacobian_number",
    "mu_V", "mu_delta", "ord_uniformizer", "quotient_length", "split", "tau_Delta", "tau_V",
    "tau_V_lift", "tau_delta", "tau_pi", "tilde_lift",
]
