# Mass splitting times lifetime for neutral mesons, and the neutrino chain.
#
#    python3 demos/meson_products.py
#
from evanescent import MassHierarchy, allowed_transmutations, bundled_table, lifetime_bound, uncertainty_product
from evanescent.particles import neutrino_mass_estimate

for rec in bundled_table():
    if rec.tau is None:
        print("%-4s  tau < %.3e s (factor 1/2)   %.3e s (factor 0.775)"
              % (rec.pair_name, lifetime_bound(rec.delta_m), lifetime_bound(rec.delta_m, 0.775)))
    else:
        p = uncertainty_product(rec)
        print("%-4s  dm*tau = %.4f hbar  (%s 1/2)" % (rec.pair_name, p.value, p.tag.value))

quarks = MassHierarchy([("u", 2.2), ("d", 4.7), ("s", 93.0), ("c", 1270.0), ("b", 4180.0), ("t", 173000.0)])
print("\nmass-raising edges:", allowed_transmutations(quarks).allowed[:5], "...")

print()
for step in neutrino_mass_estimate(1000.0, 1.0).step_log:
    mark = "!" if step.flag else " "
    print("%s %-20s %-10.4g %-6s %s" % (mark, step.name, step.value, step.unit, step.note))
