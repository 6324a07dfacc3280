"""Sharp bounds and optimal recovery for set-valued and semilinear-space
valued functions, with brute-force certification oracles.

Modules: ``lspace`` (concrete space models), ``modulus`` (moduli of
continuity), ``gridfn`` (grid functions, membership, integration),
``kscore`` (two-weight comparison bounds, rearrangements, hat
decomposition), ``ostrowski`` (interval-mean deviation bounds),
``recovery`` (optimal recovery problems), ``landau`` (divided
differences, first-order inequalities, operator approximation),
``oracle`` (samplers and certification suites), ``cli``.
"""

from . import gridfn, kscore, landau, lspace, modulus, oracle, ostrowski, recovery

__all__ = [
    "gridfn",
    "kscore",
    "landau",
    "lspace",
    "modulus",
    "oracle",
    "ostrowski",
    "recovery",
]

__version__ = "0.1.0"
