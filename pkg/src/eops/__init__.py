"""Exact mod-p homology operations on E-infinity spaces."""

from .arith import TruncatedSeries, binom_mod_p, koszul_sign
from .eops_algebra import (EElement, ETensor, RING_E, RING_EHAT,
                           adem_rewrite_pair, verify_defining_relations)
from .semiring import SemiringElement, bracket, inject_e
from .free_einfty import CoalgebraPresentation, FreeModule, FreeModuleElement
from .dl_bridge import (admissible_to_allowable, allowable_to_admissible,
                        chi_P, e_from_q, q_from_e)
from .ring_ops import mixed_cartan, sharp, sharp_gen_pair, verify_mixed_adem
from . import oracle, sequences

__all__ = [
    "TruncatedSeries", "binom_mod_p", "koszul_sign",
    "EElement", "ETensor", "RING_E", "RING_EHAT",
    "adem_rewrite_pair", "verify_defining_relations",
    "SemiringElement", "bracket", "inject_e",
    "CoalgebraPresentation", "FreeModule", "FreeModuleElement",
    "admissible_to_allowable", "allowable_to_admissible",
    "chi_P", "e_from_q", "q_from_e",
    "mixed_cartan", "sharp", "sharp_gen_pair", "verify_mixed_adem",
    "oracle", "sequences",
]
