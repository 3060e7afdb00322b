"""Construction of Lyapunov transformation matrices P.

A strict decay estimate for d/dt h = -C h in a modified norm <h, P h>
requires a Hermitian positive definite P with C* P + P C positive
definite.  P = I fails whenever C2 = Re part of C has a kernel; the
routines here build perturbations P = I + A with A supported on a few
entries coupling the kernel of C2 to coercive directions, following a
first-order (small-A) analysis of the lowest eigenvalues.

Patterns covered:

- ``dimker1``: one-dimensional kernel, single coupling entry;
- ``2A`` / ``2B1`` / ``2B2``: two-dimensional kernel, classified by the
  rank of the off-kernel coupling block of C1;
- ``chain3``: three-dimensional kernel with C1 acting as a tridiagonal
  chain through the kernel, as in the one-dimensional BGK hierarchy;
- ``bgk1d`` / ``bgk2d`` / ``bgk3d``: the closed-form families used by
  the decay certificates, with mode-scaled entries proportional to
  alpha / kappa.

All constructors verify positive definiteness of C* P + P C before
returning and raise :class:`AnsatzError` when the input violates the
structural assumptions of the pattern.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr as _qr

from .index import _check_pair

DEFAULT_TOL = 1e-10
DEFECTIVE_COND = 1e8

_BLOCK_SIZE = {1: 4, 2: 7, 3: 11}
_BGK_COUPLINGS = {
    # (row, col, ratio): entry is -1j * ratio * alpha / kappa
    1: ((0, 1, 1.0), (1, 2, math.sqrt(2.0)), (2, 3, math.sqrt(3.0))),
    2: ((0, 1, 1.0), (1, 5, 2.0), (2, 4, 1.0), (3, 6, math.sqrt(6.0))),
    3: ((0, 1, 1.0), (1, 7, math.sqrt(3.0)), (2, 5, 1.0), (3, 6, 1.0), (4, 10, 1.0)),
}


class AnsatzError(ValueError):
    """Structural assumption of an ansatz pattern is violated."""


@dataclass(frozen=True)
class PAnsatz:
    """A constructed transformation matrix together with its provenance.

    Attributes
    ----------
    pattern : str
        One of ``dimker1``, ``case2A``, ``case2B1``, ``case2B2``,
        ``chain3``, ``bgk1d``, ``bgk2d``, ``bgk3d``.
    parameters : dict
        The coupling amplitudes of the pattern.
    U : ndarray or None
        Kernel rotation applied before the coupling ansatz, when one
        was needed (pattern ``case2B2``).
    mode_scaled : bool
        True when the off-diagonal entries scale like 1 / kappa with
        the spatial mode modulus (the bgk patterns).
    P : ndarray
        The Hermitian positive definite matrix itself.
    """

    pattern: str
    parameters: dict
    U: np.ndarray | None = field(repr=False)
    mode_scaled: bool
    P: np.ndarray = field(repr=False)

    @classmethod
    def from_dimker1(cls, C1, C2, tol: float = DEFAULT_TOL) -> "PAnsatz":
        lam, P = ansatz_dimker1(C1, C2, tol)
        return cls("dimker1", {"lambda": lam}, None, False, P)

    @classmethod
    def from_dimker2(cls, C1, C2, tol: float = DEFAULT_TOL) -> "PAnsatz":
        case, params, U, P = ansatz_dimker2(C1, C2, tol)
        return cls(f"case{case}", params, U, False, P)

    @classmethod
    def from_chain3(cls, C1, C2, tol: float = DEFAULT_TOL) -> "PAnsatz":
        l1, l2, l3, P = ansatz_chain3(C1, C2, tol)
        return cls("chain3", {"lambda1": l1, "lambda2": l2, "lambda3": l3}, None, False, P)

    @classmethod
    def from_bgk(cls, d: int, kappa: float, alpha: float, N: int | None = None) -> "PAnsatz":
        return cls(
            f"bgk{d}d",
            {"alpha": alpha, "kappa": kappa},
            None,
            True,
            bgk_P(d, kappa, alpha, N),
        )


def _hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def _min_eig_transformed(C: np.ndarray, P: np.ndarray) -> float:
    F = C.conj().T @ P + P @ C
    return float(np.linalg.eigvalsh(_hermitian_part(F))[0])


def _canonicalize(C1, C2, tol: float):
    """Unitary Q with Q* C2 Q diagonal, kernel coordinates first.

    Returns (Q, c1, c2diag, kdim) where c1 = Q* C1 Q and c2diag holds
    the ascending eigenvalues of C2.  Exactly diagonal inputs are only
    permuted, never rotated, so structured examples keep their entries.
    """
    C1, C2 = _check_pair(C1, C2, tol)
    n = C1.shape[0]
    diag = np.diag(C2).real
    scale = max(np.linalg.norm(C2, 2), 1.0)
    if np.linalg.norm(C2 - np.diag(np.diag(C2)), 2) < 1e-13 * scale:
        order = np.argsort(diag, kind="stable")
        Q = np.eye(n, dtype=complex)[:, order]
        w = diag[order]
    else:
        w, Q = np.linalg.eigh(C2)
    w = np.clip(w, 0.0, None)
    kdim = int(np.sum(w <= tol * max(w.max(), 1.0)))
    c1 = Q.conj().T @ C1 @ Q
    return Q, c1, w, kdim


def _shrink_r(C: np.ndarray, A: np.ndarray, iters: int = 40) -> float:
    """Largest r in (0, 1] with C*(I + rA) + (I + rA)C positive definite.

    Found by geometric search for a feasible radius followed by
    bisection biased toward larger r.  The slopes of the lowest
    eigenvalues at r = 0 must be positive for this to terminate.
    """
    n = C.shape[0]
    eye = np.eye(n, dtype=complex)
    thresh = 1e-13 * (1.0 + 2.0 * np.linalg.norm(C, 2) * (1.0 + np.linalg.norm(A, 2)))

    def feasible(r: float) -> bool:
        return _min_eig_transformed(C, eye + r * A) > thresh

    r = 1.0
    fail = None
    for _ in range(80):
        if feasible(r):
            break
        fail = r
        r *= 0.5
    else:
        raise AnsatzError("no positive radius r makes C*P + PC definite")
    if fail is None:
        return 1.0
    lo, hi = r, fail
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _unit_phase(z: complex) -> complex:
    """exp(i (arg z - pi/2)); the phase that maximizes Im(conj(lam) z)."""
    return cmath.exp(1j * (cmath.phase(z) - 0.5 * math.pi))


def _kernel_slope_matrix(c1: np.ndarray, c2diag: np.ndarray, A: np.ndarray, kdim: int):
    """R* (C* A + A C) R on the kernel coordinates, in canonical form."""
    C = 1j * c1 + np.diag(c2diag).astype(complex)
    F = C.conj().T @ A + A @ C
    return _hermitian_part(F[:kdim, :kdim])


def kato_slopes(C1, C2, A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """First-order growth rates of the lowest eigenvalues under P = I + rA.

    The lowest eigenvalues of C*(I + rA) + (I + rA)C behave like
    r xi_j + o(r) where the xi_j are the eigenvalues of the kernel
    compression of C*A + AC.  Positivity of every slope is necessary
    and sufficient for definiteness at some small r > 0.

    Parameters
    ----------
    C1, C2 : array_like
        Generator parts, C = i C1 + C2.
    A : array_like
        Hermitian perturbation direction.
    tol : float
        Kernel detection threshold for C2.

    Returns
    -------
    ndarray
        The slopes xi_j, sorted ascending.
    """
    C1, C2 = _check_pair(C1, C2, tol)
    A = np.asarray(A, dtype=complex)
    if np.linalg.norm(A - A.conj().T, 2) > 1e-10 * max(np.linalg.norm(A, 2), 1.0):
        raise ValueError("A must be Hermitian")
    w, V = np.linalg.eigh(C2)
    R = V[:, np.clip(w, 0, None) <= tol * max(w.max(), 1.0)]
    if R.shape[1] == 0:
        return np.array([])
    C = 1j * C1 + C2
    F = C.conj().T @ A + A @ C
    M = _hermitian_part(R.conj().T @ F @ R)
    return np.sort(np.linalg.eigvalsh(M))


def optimal_P(C, weights=None) -> np.ndarray:
    """Spectrally optimal P from the left eigenvectors of C.

    For diagonalizable C with eigenvector matrix V, the matrix
    P = V^{-*} diag(b) V^{-1} (b > 0 arbitrary) satisfies
    C* P + P C >= 2 mu P with mu = min Re spec(C), the best possible
    rate.  Nearly defective matrices are refused since P would be
    numerically meaningless.

    Parameters
    ----------
    C : array_like
        Square matrix.
    weights : array_like, optional
        Positive weights b, default all ones.

    Returns
    -------
    ndarray
        Hermitian positive definite P.
    """
    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError("C must be square")
    n = C.shape[0]
    w, V = np.linalg.eig(C)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > DEFECTIVE_COND:
        raise AnsatzError(
            f"eigenvector condition number {cond:.3e} exceeds {DEFECTIVE_COND:.0e}; "
            "matrix is too close to defective"
        )
    if weights is None:
        b = np.ones(n)
    else:
        b = np.asarray(weights, dtype=float)
        if b.shape != (n,) or np.any(b <= 0):
            raise ValueError("weights must be positive and match the size of C")
    Vinv = np.linalg.inv(V)
    P = Vinv.conj().T @ np.diag(b) @ Vinv
    return _hermitian_part(P)


def ansatz_dimker1(C1, C2, tol: float = DEFAULT_TOL):
    """P = I + A for a one-dimensional kernel of C2.

    A couples the kernel coordinate to one coercive coordinate through
    a single entry lambda whose phase is chosen to make the kernel
    eigenvalue slope positive; |lambda| is then maximized by bisection
    subject to definiteness of C* P + P C.

    Returns
    -------
    (lambda, P) : complex and ndarray
        The final coupling value and the transformation matrix in the
        input coordinates.
    """
    Q, c1, c2d, kdim = _canonicalize(C1, C2, tol)
    if kdim != 1:
        raise AnsatzError(f"pattern needs dim ker C2 = 1, got {kdim}")
    n = c1.shape[0]
    scale = max(np.linalg.norm(c1, 2), 1.0)
    couplings = np.abs(c1[0, 1:])
    j = int(np.argmax(couplings)) + 1
    if couplings[j - 1] <= tol * scale:
        raise AnsatzError("kernel coordinate decoupled; not hypocoercive in this pattern")
    perm = np.arange(n)
    perm[[1, j]] = perm[[j, 1]]
    Pm = np.eye(n, dtype=complex)[:, perm]
    c = Pm.conj().T @ c1 @ Pm
    c2p = c2d[perm]

    lam_unit = 0.5 * _unit_phase(c[0, 1])
    A = np.zeros((n, n), dtype=complex)
    A[0, 1] = lam_unit
    A[1, 0] = np.conj(lam_unit)
    Cc = 1j * c + np.diag(c2p).astype(complex)
    r = _shrink_r(Cc, A)
    lam = r * lam_unit
    T = Q @ Pm
    P = T @ (np.eye(n, dtype=complex) + r * A) @ T.conj().T
    return lam, _hermitian_part(P)


def _leading_minors_positive(M: np.ndarray) -> bool:
    for k in range(1, M.shape[0] + 1):
        if np.linalg.det(M[:k, :k]).real <= 0:
            return False
    return True


def _ansatz_2b1_lambdas(c: np.ndarray):
    """Coupling values for the rank-one pattern with a decoupled first row.

    Requires c[0,1] != 0 (kernel-internal coupling) and c[1,2] != 0.
    Places lambda1 at (0,1) and lambda2 at (1,2) with ordered slope
    levels Im(c01 conj(l1)) < Im(c12 conj(l2)); lambda1 shrinks until
    the second minor of the slope matrix is positive.
    """
    d1 = c[0, 1]
    d2 = c[1, 2]
    l2 = 2.0 / abs(d2) * _unit_phase(d2)
    delta = abs(c[0, 0] - c[1, 1])
    t = 1.0
    for _ in range(200):
        l1 = t / abs(d1) * _unit_phase(d1)
        im1 = t
        im2 = 2.0
        minor2 = 4.0 * im1 * (im2 - im1) - delta**2 * abs(l1) ** 2
        if 0 < im1 < im2 and minor2 > 0:
            return l1, l2
        t *= 0.5
    raise AnsatzError("could not order the slope levels in the rank-one pattern")


def ansatz_dimker2(C1, C2, tol: float = DEFAULT_TOL):
    """P = I + U A U* for a two-dimensional kernel of C2.

    The pattern splits on the rank of the block of C1 coupling the two
    kernel coordinates to the coercive ones:

    - rank 2 (case ``2A``): two couplings placed crosswise,
      amplitudes balanced so that the slope matrix determinant is a
      positive multiple of the non-degeneracy gap;
    - rank 1 with the first kernel row decoupled (case ``2B1``): one
      coupling inside the kernel, one out of it, slope levels ordered;
    - rank 1 otherwise (case ``2B2``): a kernel rotation U first
      concentrates the coupling in the second row, then 2B1 applies.

    Rank 0, or a rank-one pattern whose rotated kernel coupling
    vanishes, is not hypocoercive and raises :class:`AnsatzError`.

    Returns
    -------
    (case, parameters, U, P)
        Case label, dict of final coupling values, kernel rotation in
        input coordinates (None unless case 2B2), and the matrix P.
    """
    Q, c1, c2d, kdim = _canonicalize(C1, C2, tol)
    if kdim != 2:
        raise AnsatzError(f"pattern needs dim ker C2 = 2, got {kdim}")
    n = c1.shape[0]
    if n < 3:
        raise AnsatzError("need at least one coercive coordinate")
    scale = max(np.linalg.norm(c1, 2), 1.0)
    B = c1[:2, 2:]
    sv = np.linalg.svd(B, compute_uv=False)
    rank = int(np.sum(sv > tol * scale)) if sv.size else 0

    if rank == 0:
        raise AnsatzError("kernel block decoupled; not hypocoercive in this pattern")

    eye = np.eye(n, dtype=complex)

    if rank == 2:
        # pick the two best-conditioned coupling columns and move them
        # to positions 2 and 3
        _, _, piv = _qr(B, pivoting=True)
        perm = np.arange(n)
        targets = [2 + piv[0], 2 + piv[1]]
        for pos, src in zip((2, 3), targets):
            cur = int(np.where(perm == src)[0][0])
            perm[[pos, cur]] = perm[[cur, pos]]
        Pm = eye[:, perm]
        c = Pm.conj().T @ c1 @ Pm
        c2p = c2d[perm]
        a, b = c[0, 2], c[0, 3]
        p, q = c[1, 2], c[1, 3]
        if abs(b * p) < abs(a * q):
            perm2 = np.arange(n)
            perm2[[2, 3]] = perm2[[3, 2]]
            Pm2 = eye[:, perm2]
            c = Pm2.conj().T @ c @ Pm2
            c2p = c2p[perm2]
            Pm = Pm @ Pm2
            a, b, p, q = b, a, q, p
        if abs(b * p - a * q) <= tol * scale**2:
            raise AnsatzError("coupling window is singular; case 2A degenerates")

        ell1 = abs(a * p)
        ell2 = abs(b * q)
        floor = 1e-6 * max(ell1, ell2, abs(b * p))
        ell1 = max(ell1, floor)
        ell2 = max(ell2, floor)
        lam = None
        for _ in range(100):
            l1 = -1j * ell1 * b
            l2 = -1j * ell2 * p
            A = np.zeros((n, n), dtype=complex)
            A[0, 3] = l1
            A[3, 0] = np.conj(l1)
            A[1, 2] = l2
            A[2, 1] = np.conj(l2)
            M = _kernel_slope_matrix(c, c2p, A, 2)
            if _leading_minors_positive(M):
                lam = (l1, l2)
                break
            # degenerate amplitude balance; shrink the smaller leg
            if ell1 <= ell2:
                ell1 *= 0.5
            else:
                ell2 *= 0.5
        if lam is None:
            raise AnsatzError("slope matrix could not be made definite in case 2A")
        l1, l2 = lam
        s = 0.5 / math.sqrt(2.0 * (abs(l1) ** 2 + abs(l2) ** 2))
        l1, l2 = s * l1, s * l2
        A = np.zeros((n, n), dtype=complex)
        A[0, 3] = l1
        A[3, 0] = np.conj(l1)
        A[1, 2] = l2
        A[2, 1] = np.conj(l2)
        Cc = 1j * c + np.diag(c2p).astype(complex)
        r = _shrink_r(Cc, A)
        T = Q @ Pm
        P = T @ (eye + r * A) @ T.conj().T
        params = {"lambda1": r * l1, "lambda2": r * l2, "r": r}
        return "2A", params, None, _hermitian_part(P)

    # rank one: move the dominant coupling column to position 2
    norms = np.linalg.norm(B, axis=0)
    jstar = 2 + int(np.argmax(norms))
    perm = np.arange(n)
    perm[[2, jstar]] = perm[[jstar, 2]]
    Pm = eye[:, perm]
    c = Pm.conj().T @ c1 @ Pm
    c2p = c2d[perm]

    a, p = c[0, 2], c[1, 2]
    case = "2B1"
    U_rot = None
    if abs(a) > tol * scale:
        case = "2B2"
        nrm = math.sqrt(abs(a) ** 2 + abs(p) ** 2)
        Uul = np.array(
            [
                [np.conj(p) / nrm, a / nrm],
                [-np.conj(a) / nrm, p / nrm],
            ]
        )
        U = eye.copy()
        U[:2, :2] = Uul
        c = U.conj().T @ c @ U
        U_rot = (Q @ Pm) @ U @ (Q @ Pm).conj().T
    else:
        U = eye

    if abs(c[1, 2]) <= tol * scale:
        raise AnsatzError("no coupling out of the kernel after rotation")
    if abs(c[0, 1]) <= tol * scale:
        raise AnsatzError("rank-one pattern with vanishing kernel coupling; not hypocoercive")

    l1, l2 = _ansatz_2b1_lambdas(c)
    A = np.zeros((n, n), dtype=complex)
    A[0, 1] = l1
    A[1, 0] = np.conj(l1)
    A[1, 2] = l2
    A[2, 1] = np.conj(l2)
    M = _kernel_slope_matrix(c, c2p, A, 2)
    if not _leading_minors_positive(M):
        raise AnsatzError("slope matrix not definite in the rank-one pattern")
    s = 0.5 / math.sqrt(2.0 * (abs(l1) ** 2 + abs(l2) ** 2))
    l1, l2 = s * l1, s * l2
    A = np.zeros((n, n), dtype=complex)
    A[0, 1] = l1
    A[1, 0] = np.conj(l1)
    A[1, 2] = l2
    A[2, 1] = np.conj(l2)
    Cc = 1j * c + np.diag(c2p).astype(complex)
    r = _shrink_r(Cc, A)
    T = (Q @ Pm) @ U
    P = T @ (np.eye(n, dtype=complex) + r * A) @ T.conj().T
    params = {"lambda1": r * l1, "lambda2": r * l2, "r": r}
    return case, params, U_rot, _hermitian_part(P)


def ansatz_chain3(C1, C2, tol: float = DEFAULT_TOL):
    """P = I + A for a three-dimensional kernel chained by C1.

    Requires C1 to act as a tridiagonal chain through the kernel
    coordinates with equal diagonal there: nonzero couplings (0,1),
    (1,2), (2,3) and nothing else out of the first three rows.  Three
    coupling amplitudes are placed on the chain with slope levels in
    ratio 1 : 2 : (>= 3), the third grown until the slope matrix
    determinant is positive.

    Returns
    -------
    (lambda1, lambda2, lambda3, P)
    """
    Q, c, c2d, kdim = _canonicalize(C1, C2, tol)
    if kdim != 3:
        raise AnsatzError(f"pattern needs dim ker C2 = 3, got {kdim}")
    n = c.shape[0]
    if n < 4:
        raise AnsatzError("need at least one coercive coordinate")
    scale = max(np.linalg.norm(c, 2), 1.0)
    atol = 1e-8 * scale

    d1, d2, d3 = c[0, 1], c[1, 2], c[2, 3]
    if min(abs(d1), abs(d2), abs(d3)) <= tol * scale:
        raise AnsatzError("chain couplings (0,1), (1,2), (2,3) must all be nonzero")
    off = [abs(c[0, 2]), abs(c[0, 3]), abs(c[1, 3])]
    if n > 4:
        off += [np.abs(c[0, 4:]).max(), np.abs(c[1, 4:]).max(), np.abs(c[2, 4:]).max()]
    if max(off) > atol:
        raise AnsatzError("kernel rows must couple only along the chain")
    if max(abs(c[0, 0] - c[1, 1]), abs(c[1, 1] - c[2, 2])) > atol:
        raise AnsatzError("chain pattern needs equal diagonal on the kernel")

    im1, im2 = 1.0, 2.0
    l1 = im1 / abs(d1) * _unit_phase(d1)
    l2 = im2 / abs(d2) * _unit_phase(d2)
    X = abs(d2 * l1 - d1 * l2)
    im3 = im2 + max(im1, X**2 / (2.0 * im1))
    l3 = im3 / abs(d3) * _unit_phase(d3)

    A = np.zeros((n, n), dtype=complex)
    for (i, j), lam in zip(((0, 1), (1, 2), (2, 3)), (l1, l2, l3)):
        A[i, j] = lam
        A[j, i] = np.conj(lam)
    M = _kernel_slope_matrix(c, c2d, A, 3)
    if not _leading_minors_positive(M):
        raise AnsatzError("slope matrix not definite in the chain pattern")
    s = 0.5 / math.sqrt(2.0 * (abs(l1) ** 2 + abs(l2) ** 2 + abs(l3) ** 2))
    l1, l2, l3 = s * l1, s * l2, s * l3
    A *= s
    Cc = 1j * c + np.diag(c2d).astype(complex)
    r = _shrink_r(Cc, A)
    P = Q @ (np.eye(n, dtype=complex) + r * A) @ Q.conj().T
    return r * l1, r * l2, r * l3, _hermitian_part(P)


def bgk_coupling(d: int, kappa: float, alpha: float, N: int | None = None) -> np.ndarray:
    """Perturbation direction A of the closed-form BGK ansatz, so that
    the transformation is P = I + A.

    Entries sit above the diagonal at fixed positions per dimension and
    equal -i * ratio * alpha / kappa; in two and three dimensions the
    positions refer to the energy basis ordering.
    """
    if d not in _BLOCK_SIZE:
        raise ValueError("dimension must be 1, 2 or 3")
    if kappa < 1:
        raise ValueError("mode modulus must be at least 1")
    if alpha < 0:
        raise ValueError("coupling amplitude must be nonnegative")
    n0 = _BLOCK_SIZE[d]
    if N is None:
        N = n0
    if N < n0:
        raise ValueError(f"need N >= {n0} in dimension {d}")
    A = np.zeros((N, N), dtype=complex)
    for i, j, ratio in _BGK_COUPLINGS[d]:
        z = -1j * ratio * alpha / kappa
        A[i, j] = z
        A[j, i] = np.conj(z)
    return A


def bgk_P(d: int, kappa: float, alpha: float, N: int | None = None) -> np.ndarray:
    """Closed-form transformation matrix of the BGK decay certificates.

    Parameters
    ----------
    d : int
        Velocity dimension.
    kappa : float
        Spatial mode modulus, at least 1.
    alpha : float
        Coupling amplitude.
    N : int, optional
        Matrix size, padded with the identity beyond the coupled block;
        defaults to the block size 4, 7 or 11.

    Returns
    -------
    ndarray
        Hermitian matrix I + A; positive definite for alpha below the
        dimension-dependent threshold.
    """
    A = bgk_coupling(d, kappa, alpha, N)
    return np.eye(A.shape[0], dtype=complex) + A


if __name__ == "__main__":
    from .operators import build_L1, build_L2

    l1v, l2v, l3v, P = ansatz_chain3(build_L1(1, "tensor", 6), build_L2(1, "tensor", 6))
    print("chain couplings:", l1v, l2v, l3v)
    print("|l2/l1|, |l3/l1| =", abs(l2v / l1v), abs(l3v / l1v))
