# Jumping photons in a scattering slab: analytic ratio vs Monte Carlo.
#
#    python3 demos/transit_walk.py
#
import math

from evanescent import MediumSpec, WalkConfig, simulate, transit_prediction
from evanescent.constants import C, SIGMA_THOMSON
from evanescent.medium_transit import free_path, tunneling_condition

# A condensed medium with Thomson scatterers
rho = 1e28  # m^-3
ell = free_path(rho, SIGMA_THOMSON)
print("free path  %.5f m" % ell)
print("tunneling at 100 MHz detuning:", tunneling_condition(2 * math.pi * 1e8, rho, SIGMA_THOMSON))

# Closed form: the jump closure ties the jump to the phase index
for n in (1.0, 1.1, 1.3, 1.6):
    pred = transit_prediction(MediumSpec(n=n), 1.0, closure="paper")
    print("n = %.1f   u/c = %.4f" % (n, pred.speed_ratio))

# Same numbers from the random walk
print()
for n in (1.1, 1.3, 1.6):
    cfg = WalkConfig.from_index(n, 1.0, 100.0, 100_000, master_seed=42)
    res = simulate(cfg, n_threads=4)
    print("n = %.1f   MC u/c = %.4f +- %.4f   slab estimate %.4f   scatters %.2f"
          % (n, res.mean_speed_ratio, res.standard_error, res.slab_speed_ratio, res.mean_scatter_count))

# Pure delay instead of jumps gives a slow group index
res = simulate(WalkConfig(1.0, 100.0, 100_000, 7, delay=1.0 / C))
print("\ndelay c*tau1 = ell:  n_g = %.4f +- %.4f" % (res.implied_group_index, res.group_index_error))
