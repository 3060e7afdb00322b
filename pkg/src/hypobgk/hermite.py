"""Hermite velocity basis: indexing, evaluation, quadrature, basis changes.

The velocity basis in one dimension is

    g_m(v) = (2 pi m!)**(-1/2) H_m(v) exp(-v**2/2),

with H_m the probabilists' Hermite polynomials.  These functions are
orthonormal with respect to the inverse-Gaussian weight
sqrt(2 pi) exp(v**2/2) dv, and g_0 is the centered unit Gaussian.
Multivariate basis functions are tensor products indexed by multi-indices
m in N^d, flattened in a graded order (total degree first).

Two variants of the degree-two level are supported for d in {2, 3}: the
plain tensor products, and an "energy" recombination that rotates the
diagonal second-order functions so that a single basis function carries
the kinetic energy moment.  The rotation is the involutive orthogonal
matrix returned by :func:`basis_change_matrix`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

SQRT2PI = math.sqrt(2.0 * math.pi)

#: smallest truncation that contains the coupled low-order block used by
#: the decay certificates, per dimension
MIN_CERTIFICATE_SIZE = {1: 5, 2: 11, 3: 21}

_VARIANTS = ("tensor", "energy")


def _check_variant(d: int, variant: str) -> None:
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {d}")
    if variant not in _VARIANTS:
        raise ValueError(f"unknown basis variant {variant!r}")


@dataclass(frozen=True)
class BasisSpec:
    """Identifies a finite Hermite basis: dimension, variant, size.

    Parameters
    ----------
    d : int
        Velocity dimension, 1, 2 or 3.
    variant : str
        Either ``"tensor"`` or ``"energy"``.  In one dimension the two
        variants coincide.
    N : int
        Number of retained basis functions.
    """

    d: int
    variant: str
    N: int

    def __post_init__(self):
        _check_variant(self.d, self.variant)
        if self.N < 1:
            raise ValueError("basis size must be positive")

    def indices(self):
        """Return the list of the first N multi-indices in flat order."""
        return [multi_index(i, self.d) for i in range(self.N)]


def recurrence_coeffs(m: int):
    """Three-term recurrence weights for the 1D basis.

    v g_m = up * g_{m+1} + down * g_{m-1} with up = sqrt(m+1) and
    down = sqrt(m).

    Parameters
    ----------
    m : int
        Nonnegative basis degree.

    Returns
    -------
    tuple of float
        ``(sqrt(m + 1), sqrt(m))``.
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    return math.sqrt(m + 1.0), math.sqrt(m)


def lex_index(m, d: int | None = None) -> int:
    """Flat index of a multi-index in the graded ordering.

    Multi-indices are sorted by total degree.  Within one degree the 2D
    order is by increasing second component; the 3D order is by
    decreasing first component, then decreasing second component.

    Parameters
    ----------
    m : int or sequence of int
        Multi-index; a bare int is treated as one-dimensional.
    d : int, optional
        Expected dimension, checked against ``len(m)`` when given.

    Returns
    -------
    int
        Position in the flat ordering, starting at 0.
    """
    if np.isscalar(m):
        m = (int(m),)
    m = tuple(int(c) for c in m)
    if d is not None and d != len(m):
        raise ValueError(f"multi-index {m} does not have dimension {d}")
    if any(c < 0 for c in m):
        raise ValueError(f"multi-index {m} has a negative component")
    n = sum(m)
    if len(m) == 1:
        return n
    if len(m) == 2:
        return n * (n + 1) // 2 + m[1]
    if len(m) == 3:
        offset = n * (n + 1) * (n + 2) // 6
        q = n - m[0]
        return offset + q * (q + 1) // 2 + (q - m[1])
    raise ValueError("only dimensions 1, 2, 3 are supported")


def multi_index(i: int, d: int):
    """Inverse of :func:`lex_index`: the i-th multi-index in dimension d."""
    if i < 0:
        raise ValueError("flat index must be nonnegative")
    if d == 1:
        return (i,)
    if d == 2:
        n = 0
        while (n + 1) * (n + 2) // 2 <= i:
            n += 1
        m2 = i - n * (n + 1) // 2
        return (n - m2, m2)
    if d == 3:
        n = 0
        while (n + 1) * (n + 2) * (n + 3) // 6 <= i:
            n += 1
        r = i - n * (n + 1) * (n + 2) // 6
        q = 0
        while (q + 1) * (q + 2) // 2 <= r:
            q += 1
        s = r - q * (q + 1) // 2
        m1 = n - q
        m2 = q - s
        return (m1, m2, n - m1 - m2)
    raise ValueError("only dimensions 1, 2, 3 are supported")


@lru_cache(maxsize=64)
def _index_table(d: int, N: int):
    return tuple(multi_index(i, d) for i in range(N))


def hermite_phi(nmax: int, v):
    """Normalized probabilists' Hermite polynomials H_m(v)/sqrt(m!).

    Evaluated by the stable recurrence
    phi_{m+1} = (v phi_m - sqrt(m) phi_{m-1}) / sqrt(m+1).

    Parameters
    ----------
    nmax : int
        Highest degree.
    v : array_like
        Evaluation points.

    Returns
    -------
    ndarray
        Shape ``(nmax + 1,) + shape(v)``; row m holds phi_m(v).
    """
    v = np.asarray(v, dtype=float)
    out = np.empty((nmax + 1,) + v.shape, dtype=float)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = v
    for m in range(1, nmax):
        out[m + 1] = (v * out[m] - math.sqrt(m) * out[m - 1]) / math.sqrt(m + 1)
    return out


def eval_basis(m, v, variant: str = "tensor", weighted: bool = True):
    """Evaluate one basis function at velocity points.

    Parameters
    ----------
    m : int or sequence of int
        Multi-index of the basis function.
    v : array_like
        Points; for d > 1 the last axis holds the velocity components.
    variant : str
        ``"tensor"`` or ``"energy"``.
    weighted : bool
        If True (default) include the Gaussian factor, i.e. return
        g_m(v).  If False return only the polynomial part g_m / g_0,
        which is better behaved for large arguments.

    Returns
    -------
    ndarray or float
        Values with the component axis consumed.
    """
    if np.isscalar(m):
        m = (int(m),)
    m = tuple(int(c) for c in m)
    d = len(m)
    _check_variant(d, variant)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if d == 1 and v.shape[-1] != 1:
        v = v[..., np.newaxis]
    if v.shape[-1] != d:
        raise ValueError(f"expected velocity components along last axis of size {d}")

    if variant == "energy" and d >= 2 and sum(m) == 2 and max(m) == 2:
        # Degree-two diagonal functions recombine among themselves; read the
        # mixing row off the orthogonal basis-change matrix.
        block = [tuple(2 if j == a else 0 for j in range(d)) for a in range(d)]
        S = basis_change_matrix(d, MIN_CERTIFICATE_SIZE[d])
        i = lex_index(m)
        vals = sum(
            S[i, lex_index(b)] * eval_basis(b, v, "tensor", weighted) for b in block
        )
        return vals if vals.shape else float(vals)

    polys = [hermite_phi(c, v[..., j])[c] for j, c in enumerate(m)]
    out = np.ones(v.shape[:-1], dtype=float)
    for p in polys:
        out = out * p
    if weighted:
        out = out * np.exp(-0.5 * np.sum(v * v, axis=-1)) / SQRT2PI ** d
    return out if out.shape else float(out)


def gauss_hermite(n: int):
    """Nodes and weights for the weight exp(-v**2/2) on the real line.

    Computed from the Jacobi matrix of the recurrence (Golub-Welsch);
    the weights sum to sqrt(2 pi).

    Parameters
    ----------
    n : int
        Number of nodes.

    Returns
    -------
    tuple of ndarray
        ``(nodes, weights)``, nodes ascending and symmetric about 0.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if n == 1:
        return np.zeros(1), np.array([SQRT2PI])
    off = np.sqrt(np.arange(1.0, n))
    nodes, vecs = eigh_tridiagonal(np.zeros(n), off)
    weights = SQRT2PI * vecs[0] ** 2
    return nodes, weights


def _energy_block(d: int) -> np.ndarray:
    """Orthogonal involution acting on the degree-two level."""
    if d == 2:
        s = 1.0 / math.sqrt(2.0)
        return np.array(
            [
                [s, 0.0, s],
                [0.0, 1.0, 0.0],
                [s, 0.0, -s],
            ]
        )
    a = 1.0 / math.sqrt(3.0)
    b = (1.0 + a) / 2.0
    c = (1.0 - a) / 2.0
    B = np.eye(6)
    # rows/cols ordered (2,0,0),(1,1,0),(1,0,1),(0,2,0),(0,1,1),(0,0,2)
    B[0] = [a, 0.0, 0.0, a, 0.0, a]
    B[3] = [a, 0.0, 0.0, -b, 0.0, c]
    B[5] = [a, 0.0, 0.0, c, 0.0, -b]
    return B


def basis_change_matrix(d: int, N: int) -> np.ndarray:
    """Orthogonal matrix mapping tensor to energy coordinates.

    The matrix is symmetric and involutive; it differs from the identity
    only on the degree-two diagonal functions.  Coefficient vectors
    transform as ``h_energy = S @ h_tensor`` and operators as
    ``A_energy = S @ A_tensor @ S``.

    Parameters
    ----------
    d : int
        2 or 3.
    N : int
        Matrix size; must cover the full degree-two level.

    Returns
    -------
    ndarray
        Dense ``(N, N)`` orthogonal matrix.
    """
    if d not in (2, 3):
        raise ValueError("basis change is defined for d = 2 or 3")
    lo = lex_index(tuple([2] + [0] * (d - 1)))
    hi = lo + d * (d + 1) // 2
    if N < hi:
        raise ValueError(f"need N >= {hi} to hold the degree-two level, got {N}")
    S = np.eye(N)
    S[lo:hi, lo:hi] = _energy_block(d)
    return S


if __name__ == "__main__":
    nodes, weights = gauss_hermite(40)
    phi = hermite_phi(8, nodes)
    gram = (phi * weights) @ phi.T / SQRT2PI
    print("Gram residual:", np.abs(gram - np.eye(9)).max())
    print("first 10 indices in 3D:", [multi_index(i, 3) for i in range(10)])
