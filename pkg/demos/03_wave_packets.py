"""
Wave packets: trapped by a kink, spreading under a uniform mass
===============================================================

Natural units on [-20, 20] with v0 = delta0 = lam = 1.  The initial state is a
Gaussian with chirality (1, 1)/sqrt(2), which overlaps the zero mode strongly.
"""

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from slowdirac import run_scenario

out = __import__("pathlib").Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

trapped = run_scenario("fig3-trapped")
free = run_scenario("fig3-free")
print("trapped:", trapped.summary)
print("free:   ", free.summary)

# %% The norm is conserved to roundoff by the split-step scheme
for res in (trapped, free):
    print(res.name, "norm drift", np.ptp(res.trajectory.norm2))

# %%
fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, res in zip(axes, (trapped, free)):
    tr = res.trajectory
    z = tr.grid.midpoints
    for k in range(0, len(tr.times), max(1, len(tr.times) // 5)):
        rho = np.abs(tr.psi[k, 0]) ** 2 + np.abs(tr.psi[k, 1]) ** 2
        ax.plot(z, rho, lw=1, label=f"t={tr.times[k]:.0f}")
    ax.set_title(res.name)
    ax.set_xlabel("z")
    ax.set_xlim(-15, 15)
axes[0].set_ylabel(r"$|\psi_1|^2+|\psi_2|^2$")
axes[0].legend()
fig.tight_layout()
fig.savefig(out / "wave_packets.png", dpi=120)
