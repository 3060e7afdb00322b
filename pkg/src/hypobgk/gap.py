"""Numerically computed spectral gaps of the modal generators.

The decay certificates are lower bounds; the actual exponential rate of
a mode is the smallest real part over the spectrum of its generator
C_kappa.  This module computes those spectra with a residual-checked
dense eigensolver and aggregates them into per-torus gap reports used
to validate the certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import modal_generator, operator_pair

MAX_EIG_SIZE = 2000


class EigenvalueFailure(RuntimeError):
    """Eigenvalue computation failed or exceeded the residual tolerance.

    The ``partial`` attribute carries whatever the solver produced, or
    None when it did not converge at all.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def complex_eigenvalues(M, tol: float = 1e-8):
    """Eigenvalues and right eigenvectors of a general complex matrix.

    A sample of eigenpairs is validated through the backward error
    ||M v - w v|| / ||M||; failure raises :class:`EigenvalueFailure`.

    Parameters
    ----------
    M : array_like
        Square matrix of size at most ``MAX_EIG_SIZE``.
    tol : float
        Relative backward error bound for the sampled pairs.

    Returns
    -------
    (values, vectors) : ndarray, ndarray
        Unordered eigenvalues and matching unit eigenvector columns.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    n = M.shape[0]
    if n > MAX_EIG_SIZE:
        raise ValueError(f"matrix size {n} exceeds limit {MAX_EIG_SIZE}")
    try:
        vals, vecs = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise EigenvalueFailure(f"eigensolver did not converge: {exc}") from exc
    scale = np.linalg.norm(M, 2)
    if scale == 0.0:
        return vals, vecs
    sample = np.unique(np.linspace(0, n - 1, min(10, n)).astype(int))
    worst = 0.0
    for j in sample:
        v = vecs[:, j]
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise EigenvalueFailure("zero eigenvector returned", partial=(vals, vecs))
        err = np.linalg.norm(M @ v - vals[j] * v) / (scale * nv)
        worst = max(worst, err)
    if worst > tol:
        raise EigenvalueFailure(
            f"backward error {worst:.3e} exceeds {tol:.1e}", partial=(vals, vecs)
        )
    return vals, vecs


@dataclass(frozen=True)
class GapReport:
    """Spectral gaps per mode modulus for one torus length.

    ``entries`` holds (kappa, N, gap) triples; ``gap`` is the overall
    minimum and ``argmin_kappa`` its location.
    """

    d: int
    L: float
    entries: tuple = field(repr=False)
    gap: float
    argmin_kappa: float

    def rows(self):
        """Entries as plain tuples, for tabular output."""
        return [(k, n, g) for k, n, g in self.entries]


def _mode_gap(pair, kappa: float) -> float:
    if kappa == 0:
        # the homogeneous mode relaxes at the collision rate on the
        # complement of the conserved moments
        return 1.0
    C = modal_generator(pair, kappa).C
    vals, _ = complex_eigenvalues(C)
    return float(vals.real.min())


def spectral_gap(d: int, L: float, kappa_list, N: int) -> GapReport:
    """Smallest modal decay rates over a list of mode moduli.

    Parameters
    ----------
    d : int
        Velocity dimension.
    L : float
        Torus length.
    kappa_list : iterable of float
        Mode moduli; 0 is allowed and handled analytically.
    N : int
        Hermite truncation.

    Returns
    -------
    GapReport
    """
    kappas = [float(k) for k in kappa_list]
    if not kappas:
        raise ValueError("need at least one mode modulus")
    if any(k < 0 for k in kappas):
        raise ValueError("mode moduli must be nonnegative")
    variant = "tensor" if d == 1 else "energy"
    pair = operator_pair(d, variant, N, L=L)
    entries = []
    for kappa in kappas:
        entries.append((kappa, N, _mode_gap(pair, kappa)))
    gaps = [g for _, _, g in entries]
    i = int(np.argmin(gaps))
    return GapReport(d=d, L=L, entries=tuple(entries), gap=gaps[i], argmin_kappa=entries[i][0])


@dataclass(frozen=True)
class ConvergenceStudy:
    """Gap of one mode across truncations, for resolution checks.

    ``entries`` holds (N, gap) pairs in the order requested.  The
    ``nondecreasing`` flag records whether the profile grew monotonically
    with N; a False value signals that the truncated spectrum approached
    its limit from above somewhere along the sequence.
    """

    d: int
    L: float
    kappa: float
    entries: tuple
    nondecreasing: bool

    def rows(self):
        """Entries as plain tuples, for tabular output."""
        return [(n, g) for n, g in self.entries]


def convergence_study(d: int, L: float, kappa: float, N_list) -> ConvergenceStudy:
    """Gap of one mode across truncations, with a monotonicity flag."""
    variant = "tensor" if d == 1 else "energy"
    out = []
    for N in N_list:
        pair = operator_pair(d, variant, int(N), L=L)
        out.append((int(N), _mode_gap(pair, kappa)))
    gaps = [g for _, g in out]
    mono = all(b >= a for a, b in zip(gaps, gaps[1:]))
    return ConvergenceStudy(
        d=d, L=L, kappa=float(kappa), entries=tuple(out), nondecreasing=mono
    )


def uniform_bound_profile(d: int, L: float, kmax: int, N: int):
    """Per-mode gaps scaled by (1 + kappa**2) / kappa**2.

    The scaled profile stays bounded away from zero when the gaps obey
    a uniform-in-mode lower bound of that shape; the smallest scaled
    value is a candidate constant.
    """
    from .operators import mode_moduli

    variant = "tensor" if d == 1 else "energy"
    pair = operator_pair(d, variant, N, L=L)
    out = []
    for kappa, _ in mode_moduli(d, kmax):
        g = _mode_gap(pair, kappa)
        out.append((kappa, g, g * (1.0 + kappa**2) / kappa**2))
    return out


if __name__ == "__main__":
    import math

    rep = spectral_gap(1, 2.0 * math.pi, [1, 2, 3, 4, 5], 200)
    for k, n, g in rep.rows():
        print(f"kappa={k:g} N={n} gap={g:.6f}")
    print("overall:", rep.gap, "at kappa =", rep.argmin_kappa)
