"""Hypocoercivity indices, Kato slopes and transformation spectra.

Shows the three structural computations behind the certificate: the
index tau measuring how many commutator orders are needed to recover
coercivity, the first-order perturbation slopes of the kernel
eigenvalues (equal to 2 ell alpha for the model coupling), and the
closed-form eigenvalues of the transformation matrix P = I + A.
"""

import numpy as np

from hypobgk import bgk_P, hypocoercivity_index, kato_slopes, operator_pair
from hypobgk.ansatz import bgk_coupling

N = 20

for d, variant in ((1, "tensor"), (2, "energy"), (3, "energy")):
    pair = operator_pair(d, variant, N)
    rep = hypocoercivity_index(pair.ell * pair.L1, pair.L2)
    print(f"d = {d} ({variant}): tau = {rep.tau}, dim ker C2 = {rep.dim_ker_C2}, "
          f"rank profile {rep.rank_profile}")

print()
pair = operator_pair(1, "tensor", 8)
for alpha in (0.05, 0.15):
    A = bgk_coupling(1, 1.0, alpha, 8)
    slopes = kato_slopes(pair.ell * pair.L1, pair.L2, A)
    print(f"alpha = {alpha}: kato slopes {np.round(slopes, 12)} "
          f"(2 ell alpha = {2.0 * pair.ell * alpha})")

print()
for d, n in ((1, 5), (2, 11), (3, 21)):
    P = bgk_P(d, 2.0, 0.12, n)
    eigs = np.linalg.eigvalsh(P)
    print(f"d = {d}: eig(P) in [{eigs.min():.6f}, {eigs.max():.6f}], "
          f"{np.sum(np.abs(eigs - 1.0) < 1e-12)} unit eigenvalues")
