"""Back-of-envelope single-mode validity check for a concrete trap.

A Rb-87 condensate in a 1 kHz radial trap scattering 780 nm light: the
phase-matched mode captures F ~ 3% of the spontaneous emission, so a seed
of 1e4 atoms makes stimulated scattering ~300x the total spontaneous rate
and the single-mode model holds.  The rough scaling law shows why bigger
condensates help: the rate ratio depends on the seed alone while the best
M improves as (N_seed/N_t)^(1/4).
"""

from atomlight import PhysicalSetup, capture_fraction, rate_ratio, scaling_estimate

setup = PhysicalSetup()  # Rb-87, 1 kHz, 780 nm, seed 1e4, N_t 1e7
sigma = setup.condensate_width

print(f"condensate width sigma      = {sigma*1e9:.1f} nm")
print(f"k2 * sigma                  = {setup.k2 * sigma:.3f}")
print(f"capture fraction F          = {capture_fraction(setup):.4f}")
print(f"rate ratio (seed {setup.n_seed:.0e})    = {rate_ratio(setup):.0f}")
print(f"single-mode model valid     = {rate_ratio(setup) >= 100}")

print("\nseed scaling of the best achievable figure of merit:")
for n_seed in (1.0e3, 1.0e4, 1.0e5):
    for n_total in (1.0e6, 1.0e7, 1.0e8):
        if n_seed <= n_total:
            m = scaling_estimate(n_seed, n_total)
            print(f"  N_seed = {n_seed:8.0e}  N_t = {n_total:8.0e}  ->  M ~ {m:.3f}")
