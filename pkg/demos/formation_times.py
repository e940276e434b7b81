# Delay and formation times from the log-derivative of a response.
#
#    python3 demos/formation_times.py
#
import numpy as np

from evanescent import (MassiveState, SpectralResponse, massive_temporal, mixed_formation_time,
                        renormalized_formation_time, temporal_pair)
from evanescent.constants import C

# A Lorentzian line: the delay peaks at resonance, 2/gamma
w0, g = 1e9, 1e7
line = SpectralResponse(lambda w: 1 / (w - w0 + 0.5j * g))
for dw in (-2 * g, -g / 2, 0.0, g / 2, 2 * g):
    p = temporal_pair(line, w0 + dw)
    print("detuning %+.1e   tau1 = %.4e s   tau2 = %+.4e s" % (dw, p.tau1, p.tau2))

# Near-field dressing time, with and without the static pole
r = 0.1
print()
for x in (0.5, 1.5, 2.5, 3.0):
    w = x * C / r
    print("x = %.1f   mixed %+.4e s   renormalized %+.4e s" % (x, mixed_formation_time(w, r),
                                                            renormalized_formation_time(w, r)))

# Massive field: formation time above threshold, delay below (natural units)
print()
for E in np.linspace(0.5, 1.5, 5):
    if abs(E - 1.0) < 1e-9:
        continue
    p = massive_temporal(MassiveState(E, 1.0, 2.0))
    print("E = %.2f m   tau1 = %+.4f   tau2 = %+.4f" % (E, p.tau1, p.tau2))
