"""
gaudin_lab: Gaudin models with an irregular singularity at infinity.

Quantum Hamiltonians on tensor products of irreducible modules, their
classical shift-of-argument counterparts, the Bethe Ansatz and the oper
description of the spectrum.
"""
from gaudin_lab.errors import GaudinLabError
from gaudin_lab.liealg import SimpleLieAlgebra, from_type

__version__ = "0.1.0"

__all__ = ["GaudinLabError", "SimpleLieAlgebra", "from_type", "__version__"]
