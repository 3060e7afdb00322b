"""Two-phase relaxation of a concentrated density bump.

A raised-cosine bump of width epsilon = 0.02 starts with L1 distance to
equilibrium essentially at the trivial maximum 2.  Transport mixes it
across the torus within a few crossing times, after which the modal
entropy decays at the certified exponential rate.  The envelope
min(2, sqrt(C_1 E(0)) exp(-lambda_1 t / 2)) only becomes informative at
t_init, long after the observed L1 has collapsed, which is the hallmark
of a certificate that is uniform over all initial data.
"""

import numpy as np

from hypobgk import (
    certify,
    concentrated_initial_data,
    entropy,
    run_trajectory,
    t_init,
)


def main():
    cert = certify(1, n_verify=0)
    state = concentrated_initial_data(0.02, kmax=128, N=20)
    E0 = entropy(state, cert.alpha_star)
    ti = t_init(cert.C_d, E0, cert.lam)
    print(f"E(0) = {E0:.4f} (untruncated 3/(2 eps) - 1 = {3.0 / 0.04 - 1.0:.1f})")
    print(f"lambda_1 = {cert.lam:.6f}, envelope crossover t_init = {ti:.2f}")

    traj = run_trajectory(state, 40.0, 21, cert.alpha_star,
                          C_d=cert.C_d, lam=cert.lam)
    print(f"\n{'t':>6} {'entropy':>12} {'exp bound':>12} {'l1':>8} {'envelope':>9}")
    for i, t in enumerate(traj["t"]):
        bound = E0 * np.exp(-cert.lam * t)
        print(f"{t:>6.1f} {traj['entropy'][i]:>12.4e} {bound:>12.4e} "
              f"{traj['l1'][i]:>8.4f} {traj['envelope'][i]:>9.4f}")

    # observed asymptotic entropy rate over the second half of the run
    sel = traj["t"] >= 20.0
    slope = np.polyfit(traj["t"][sel], np.log(traj["entropy"][sel]), 1)[0]
    print(f"\nobserved entropy rate {-slope:.4f} vs certified lambda_1 "
          f"{cert.lam:.4f} (gap-limited at ~1.12)")


if __name__ == "__main__":
    main()
