"""Exact verification of Dwork-type congruences for hypergeometric and KZ periods."""

from .hyperg import FamilyTag, family_polynomial
from .laurent import LaurentPoly
from .padic import PadicInt, teichmuller
from .report import CongruenceReport

__all__ = ["CongruenceReport", "FamilyTag", "LaurentPoly", "PadicInt", "family_polynomial", "teichmuller"]
