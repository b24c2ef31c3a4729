"""Exact q-expansion, character, Euler-factor, and interpolation arithmetic
for pairs of eigenforms, with a CLI and an HTTP service on top.

The heavy lifting lives in the submodules; the names most programs start
from are re-exported here.
"""

from .characters import DirichletCharacter, LocAlgChar
from .cyclo import ComplexAP, CycloNumber
from .formdb import DataError, Eigenform, FormDatabase
from .lfunc import evaluate_L
from .qseries import QExpansion
from .quadratic import IncompatibleExtension, QuadContext, QuadExt

__version__ = "0.1.0"

__all__ = [
    "ComplexAP",
    "CycloNumber",
    "DataError",
    "DirichletCharacter",
    "Eigenform",
    "FormDatabase",
    "IncompatibleExtension",
    "LocAlgChar",
    "QExpansion",
    "QuadContext",
    "QuadExt",
    "evaluate_L",
    "__version__",
]
