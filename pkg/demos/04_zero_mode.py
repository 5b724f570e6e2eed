"""
The zero mode and its discretization error
==========================================

For delta(z) = delta0 tanh(lam z) the zero-energy solution is
(1, 1)/sqrt(2) * cosh(lam z)^(-delta0 / (v0 lam)).
"""

# %%
import numpy as np

from slowdirac import EvolutionConfig, Grid, evolve, hamiltonian_residual, resolve, zero_mode_state
from slowdirac import experiments as ex

cfg = resolve("zeromode-profile")
prev = None
for n in (3000, 6000, 12000, 24000):
    grid = Grid(ex.build_scale(cfg), n)
    prof = ex.build_profile(cfg, grid.scale)
    res = hamiltonian_residual(zero_mode_state(prof, grid), prof)
    print(f"n={n:6d}  residual={res:.3e}" + ("" if prev is None else f"  ratio={prev / res:.4f}"))
    prev = res

# %% The exact closed form on the default physical scale
grid = Grid(ex.build_scale(cfg), 3000)
prof = ex.build_profile(cfg, grid.scale)
zm = zero_mode_state(prof, grid)
p = prof.delta0 / (grid.scale.v0 * prof.lam)
env = np.cosh(prof.lam * grid.midpoints) ** -p
env /= np.sqrt(np.sum(env**2) * grid.dz)
print("exponent", p, " max deviation from closed form", np.max(np.abs(zm.psi1 * np.sqrt(2) - env)))

# %% Under evolution the zero mode stays put; how fast does the overlap deficit
# close with the grid?  The state error is second order in dz, and the overlap
# deficit is quadratic in the state error.
nat = resolve("fig3-trapped")
for n in (2000, 4000, 8000):
    g = Grid(ex.build_scale(nat), n)
    pr = ex.build_profile(nat, g.scale)
    z0 = zero_mode_state(pr, g)
    steps = int(round(100 / EvolutionConfig.dt(g)))
    tr = evolve(z0, pr, EvolutionConfig(steps, steps))
    f = tr.final
    dist = np.sqrt(np.sum(np.abs(f.psi1 - z0.psi1) ** 2 + np.abs(f.psi2 - z0.psi2) ** 2) * g.dz)
    print(f"n={n:5d}  1-overlap={1 - tr.overlap0[-1]:.3e}  |psi(t)-psi(0)|={dist:.3e}")
