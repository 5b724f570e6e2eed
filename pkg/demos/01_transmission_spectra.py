"""
Transmission through a detuning kink
====================================

A uniform detuning opens a window of total reflection around zero probe
detuning.  Replacing it by a kink that changes sign in the middle of the medium
puts a bound state at zero energy, and the probe tunnels through it.
"""

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from slowdirac import run_scenario

out = __import__("pathlib").Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

# %% Uniform detuning versus kink, both at opacity 75
constant = run_scenario("fig4a-constant")
kink = run_scenario("fig4b-kink")

for res in (constant, kink):
    s = res.summary
    print(f"{res.name:15s} peak T2={s['midgap_peak']['T2']:.12f}  edges={s['gap_edges_over_delta0']}")

# %% The zero-frequency value has a closed form, sech^2 of the integrated detuning
print("kink   |T(0)|^2 pipeline vs closed form:", kink.summary["zero_frequency"])

# %% A sine profile has the same sign change, so the same zero-frequency peak
sine = run_scenario("fig5a-sine")
print("sine - kink at zero:", sine.summary["midgap_peak"]["T2"] - kink.summary["midgap_peak"]["T2"])

# %%
fig, ax = plt.subplots(figsize=(7, 4))
for res, style in ((constant, "k-"), (kink, "r-"), (sine, "b--")):
    spec = res.spectrum
    ax.plot(spec.normalized_frequency, spec.T2, style, lw=1, label=res.name)
ax.set_xlabel(r"$\Delta\omega/\delta_0$")
ax.set_ylabel(r"$|T|^2$")
ax.legend()
fig.tight_layout()
fig.savefig(out / "spectra.png", dpi=120)
