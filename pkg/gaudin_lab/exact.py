"""
Exact rational linear algebra.

Matrices are numpy ``dtype=object`` arrays holding ``fractions.Fraction``
entries. numpy does the bookkeeping (shapes, ``@``, slicing); sympy is used
only where exact elimination is needed (rank, null space, inverse).
"""
import logging
from fractions import Fraction
from numbers import Rational
from typing import Any, List, Sequence, Union

import numpy as np
import sympy

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, complex]


def frac(value: Any) -> Fraction:
    """
    Convert a rational-looking value to a Fraction.

    Accepts ints, Fractions, sympy Rationals and ``"p/q"`` strings. Floats are
    refused because they would silently break exactness.

    Raises:
        TypeError: If the value has no exact rational meaning.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


def is_exact(value: Any) -> bool:
    return isinstance(value, (Fraction, int, sympy.Rational)) and not isinstance(value, bool)


def fraction_str(value: Fraction) -> str:
    """Serialize a Fraction as ``"p/q"`` (``"p"`` for integers)."""
    value = frac(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def as_exact(values: Any) -> np.ndarray:
    """Convert a nested sequence or array to an object array of Fractions."""
    arr = np.array(values, dtype=object)
    flat = [frac(v) for v in arr.ravel()]
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = flat
    return out


def basis_vector(n: int, index: int) -> np.ndarray:
    out = zeros(n)
    out[index] = Fraction(1)
    return out


def to_sympy(matrix: np.ndarray) -> sympy.Matrix:
    rows, cols = matrix.shape
    return sympy.Matrix(rows, cols, [sympy.Rational(v.numerator, v.denominator)
                                     for v in (frac(x) for x in matrix.ravel())])


def from_sympy(matrix: sympy.Matrix) -> np.ndarray:
    out = zeros(matrix.rows, matrix.cols)
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            out[i, j] = frac(sympy.Rational(matrix[i, j]))
    return out


def rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return int(to_sympy(matrix).rank())


def nullspace(matrix: np.ndarray) -> List[np.ndarray]:
    """Return a basis of the right null space as Fraction vectors."""
    if matrix.shape[1] == 0:
        return []
    if matrix.shape[0] == 0:
        return [basis_vector(matrix.shape[1], k) for k in range(matrix.shape[1])]
    vectors = to_sympy(matrix).nullspace()
    return [from_sympy(v).ravel() for v in vectors]


def inverse(matrix: np.ndarray) -> np.ndarray:
    """Exact inverse; raises ``ValueError`` for a singular matrix."""
    sm = to_sympy(matrix)
    if sm.rows != sm.cols or sm.rank() < sm.rows:
        raise ValueError("matrix is singular")
    return from_sympy(sm.inv())


def solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` exactly for a square invertible matrix."""
    return inverse(matrix) @ rhs


def determinant(matrix: np.ndarray) -> Fraction:
    if matrix.size == 0:
        return Fraction(1)
    return frac(to_sympy(matrix).det())


def independent_columns(matrix: np.ndarray) -> List[int]:
    """Greedy indices of a maximal linearly independent set of columns."""
    chosen: List[int] = []
    current = 0
    for k in range(matrix.shape[1]):
        trial = chosen + [k]
        r = rank(matrix[:, trial])
        if r > current:
            chosen = trial
            current = r
    return chosen


def is_zero(values: np.ndarray) -> bool:
    return all(v == 0 for v in np.asarray(values, dtype=object).ravel())


def max_abs(values: np.ndarray) -> float:
    flat = np.asarray(values, dtype=object).ravel()
    if flat.size == 0:
        return 0.0
    return float(max(abs(complex(v)) for v in flat))


def to_complex(values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=complex)
    out.ravel()[:] = [complex(v) for v in arr.ravel()]
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def scalar_json(value: Scalar) -> Any:
    """JSON form of a scalar: ``"p/q"`` for exact values, ``[re, im]`` otherwise."""
    if is_exact(value):
        return fraction_str(frac(value))
    c = complex(value)
    return [c.real, c.imag]


def dot(u: Sequence[Any], v: Sequence[Any]) -> Any:
    total: Any = Fraction(0)
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            total = total + a * b
    return total
