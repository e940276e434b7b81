# Energy-time relations: minimal times, transition maxima, RS inequality.
#
#    python3 demos/uncertainty_tour.py
#
import numpy as np

from evanescent import ProcessKind, locate_transition_maxima, minimal_time, mt_projector_bound, rs_bound
from evanescent.constants import HBAR_EV_S

dE = 1e-6  # eV
for kind in ProcessKind:
    print("%-13s  t_min = %.4e s" % (kind.value, minimal_time(dE, kind).seconds))

taus = locate_transition_maxima(dE, n_max=3)
print("\nmaxima phase / pi:", np.round(dE * taus / (2 * HBAR_EV_S) / np.pi, 12))

# The cos^2 curve along a stable transfer; as a lower bound it is informative
# only up to its first zero, and at the completion time it is back at 1
for frac in (0.25, 0.5, 1.0):
    t = frac * minimal_time(dE, ProcessKind.STABLE_TRANSFER).seconds
    b = mt_projector_bound(dE, t)
    print("t = %.2f t_min   cos^2 = %.4f" % (frac, b.lower))

# Random qubit observables never violate the inequality
rng = np.random.default_rng(0)
slack = []
for _ in range(1000):
    M = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    A, B = (M + M.conj().transpose(0, 2, 1)) / 2
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    slack.append(rs_bound(A, B, psi / np.linalg.norm(psi)).slack)
print("\nsmallest RS slack over 1000 draws: %.3e" % min(slack))
