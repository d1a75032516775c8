# -*- coding: utf-8 -*-
"""Exact hafnian of a symmetric matrix, the sum over all perfect matchings of the products of the paired entries.

The hafnian is evaluated by a memoized recursion over vertex subsets: the lowest remaining vertex is paired with every other remaining vertex. Subsets are encoded as bit masks, which costs :math:`O(2^n n)` time and :math:`O(2^n)` memory for an n x n matrix.
"""
import numpy as np
from numba import njit

from cvsampling.errors import NumericGuardError

MAX_DIMENSION = 24
SYMMETRY_TOLERANCE = 1e-10


@njit(cache=True)
def lowest_bit_index(mask: int) -> int:
    """Index of the least-significant set bit of a positive integer."""
    index = 0
    while not (mask >> index) & 1:
        index += 1
    return index


@njit(cache=True, nogil=True)
def hafnian_subsets(A: np.ndarray) -> complex:
    """Hafnian by memoized recursion over bit-mask subsets.

    Args:
        A: Symmetric complex matrix of even dimension.

    Returns:
        haf: The hafnian.
    """
    n = A.shape[0]
    table = np.zeros(1 << n, dtype=np.complex128)
    table[0] = 1.
    for mask in range(1, 1 << n):
        low = mask & -mask
        i = lowest_bit_index(low)
        rest = mask ^ low
        total = 0j
        remaining = rest
        while remaining:
            low_j = remaining & -remaining
            j = lowest_bit_index(low_j)
            total += A[i, j] * table[rest ^ low_j]
            remaining ^= low_j
        table[mask] = total
    return table[(1 << n) - 1]


def hafnian(B: np.ndarray) -> complex:
    """Hafnian of a symmetric matrix of even dimension. The hafnian of the empty matrix is 1.

    Args:
        B: 2k x 2k symmetric matrix (real or complex).

    Returns:
        haf: The hafnian.
    """
    B = np.asarray(B, dtype=np.complex128)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"hafnian requires a square matrix, got shape {B.shape}")
    n = B.shape[0]
    if n % 2:
        raise ValueError(f"hafnian requires an even dimension, got {n}")
    if n == 0:
        return 1. + 0j
    asymmetry = np.max(np.abs(B - B.T))
    if asymmetry > SYMMETRY_TOLERANCE * max(1., np.max(np.abs(B))):
        raise ValueError(f"hafnian requires a symmetric matrix (max asymmetry {asymmetry:.3e})")
    if n > MAX_DIMENSION:
        raise NumericGuardError(f"hafnian of dimension {n} exceeds the supported maximum of {MAX_DIMENSION}")
    return complex(hafnian_subsets(np.ascontiguousarray(B)))
