"""Pfaffians of complex antisymmetric matrices.

The production routine uses a skew-symmetric Parlett-Reid tridiagonalization
with partial pivoting, O(n^3).  A combinatorial sum over perfect matchings is
kept alongside as an exact reference for small matrices.
"""

import numpy as np

__all__ = ["pfaffian", "pfaffian_bruteforce"]

_BRUTEFORCE_MAX = 10


def _as_antisymmetric(a, tol):
    """Validate and return a complex working copy with exact antisymmetry.

    Rounding-level violations (below ``tol``, relative to the largest entry)
    are projected out via A <- (A - A^T)/2; anything larger is an error since
    it signals corrupted input rather than floating-point dust.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    a = a.astype(np.complex128, copy=True)
    if a.size:
        scale = max(1.0, float(np.abs(a).max()))
        violation = float(np.abs(a + a.T).max())
        if violation > tol * scale:
            raise ValueError(
                f"matrix is not antisymmetric: max |A + A^T| = {violation:.3e} "
                f"exceeds tolerance {tol * scale:.3e}"
            )
        a = 0.5 * (a - a.T)
    return a


def pfaffian(a, *, tol=1e-12):
    """Pfaffian of an antisymmetric matrix, including its sign.

    Parameters
    ----------
    a : array_like
        Square antisymmetric matrix (real or complex).  The dimension may be
        zero (Pf = 1) or odd (Pf = 0).
    tol : float
        Relative antisymmetry tolerance; larger violations raise ValueError.

    Returns
    -------
    complex
    """
    a = _as_antisymmetric(a, tol)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    if n % 2:
        return 0j

    pf = 1 + 0j
    for k in range(0, n - 1, 2):
        # Move the largest entry of column k (below the diagonal) to A[k+1, k].
        kp = k + 1 + int(np.abs(a[k + 1:, k]).argmax())
        if a[kp, k] == 0:
            # Whole column vanishes: the matrix is singular.
            return 0j
        if kp != k + 1:
            a[[k + 1, kp], k:] = a[[kp, k + 1], k:]
            a[k:, [k + 1, kp]] = a[k:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf *= pivot
        if k + 2 < n:
            tau = a[k, k + 2:] / pivot
            w = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, w)
            a[k + 2:, k + 2:] -= np.outer(w, tau)
    return complex(pf)


def _pairings_with_sign(items):
    """Yield (pairing, sign) over all perfect matchings of ``items``.

    The sign is the parity of the permutation that lists the pairing as
    (i1, j1, i2, j2, ...) relative to the sorted order.
    """
    if not items:
        yield [], 1
        return
    first = items[0]
    for idx in range(1, len(items)):
        rest = items[1:idx] + items[idx + 1:]
        sub_sign = (-1) ** (idx - 1)
        for pairing, sign in _pairings_with_sign(rest):
            yield [(first, items[idx])] + pairing, sub_sign * sign


def pfaffian_bruteforce(a, *, tol=1e-12):
    """Exact Pfaffian as a signed sum over perfect matchings.

    Combinatorial cost (n-1)!!, so the dimension is capped at
    ``_BRUTEFORCE_MAX``; intended as a reference for testing only.
    """
    a = _as_antisymmetric(a, tol)
    n = a.shape[0]
    if n > _BRUTEFORCE_MAX:
        raise ValueError(f"brute-force Pfaffian limited to n <= {_BRUTEFORCE_MAX}, got {n}")
    if n == 0:
        return 1 + 0j
    if n % 2:
        return 0j

    total = 0j
    for pairing, sign in _pairings_with_sign(list(range(n))):
        term = complex(sign)
        for i, j in pairing:
            term *= a[i, j]
        total += term
    return total
