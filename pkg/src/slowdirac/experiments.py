"""Catalog scenarios, noise ensembles and mixing-angle sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import dataclasses
from dataclasses import dataclass

import numpy as np

from . import dynamics, scattering
from .config import CATALOG, ScenarioConfig, resolve
from .model import Constant, Grid, Kink, MixingAngle, NoiseSpec, Noisy, PhysicalScale, Sine, sample_on_grid

# in-gap band used for the gap-depth figure of merit, in units of delta0
GAP_BAND = (0.1, 0.9)


def build_scale(cfg):
    return PhysicalScale(v0=cfg.v0, length=cfg.length, c=cfg.c)


def build_grid(cfg):
    return Grid(build_scale(cfg), cfg.n_cells)


def build_profile(cfg, scale=None, noise_a=None, seed=None):
    scale = scale or build_scale(cfg)
    if cfg.profile == "kink":
        prof = Kink.from_opacity(cfg.theta, cfg.sharpness, scale)
    elif cfg.profile == "sine":
        prof = Sine.from_opacity(cfg.theta, cfg.k, scale)
    elif cfg.profile == "constant":
        prof = Constant.from_opacity(cfg.theta, scale)
    else:
        prof = Constant(0.0)
    a = cfg.noise_a if noise_a is None else noise_a
    if a > 0:
        seed = cfg.noise_seed if seed is None else seed
        prof = Noisy(prof, NoiseSpec(a, seed, cfg.noise_cell))
    return prof


def build_angle(cfg, f=None):
    return MixingAngle(cfg.mixing_f if f is None else f)


def sweep_frequencies(cfg):
    return np.linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_count) * cfg.delta0


@dataclass(eq=False)
class ScenarioResult:
    config: ScenarioConfig
    spectra: dict = dataclasses.field(default_factory=dict)
    trajectory: dynamics.Trajectory | None = None
    field: dynamics.SpinorField | None = None
    ensembles: dict = dataclasses.field(default_factory=dict)
    summary: dict = dataclasses.field(default_factory=dict)

    @property
    def name(self):
        return self.config.scenario

    @property
    def spectrum(self):
        """The single spectrum of a plain spectrum scenario."""
        if len(self.spectra) != 1:
            raise AttributeError("scenario produced several spectra; use .spectra")
        return next(iter(self.spectra.values()))


def spectrum_summary(spec, sampled=None, angle=None):
    out = {}
    dw_peak, t2_peak = scattering.midgap_peak(spec)
    out["midgap_peak"] = {"delta_omega_over_delta0": dw_peak / spec.delta0, "T2": t2_peak}
    lo, hi = scattering.gap_edges(spec)
    out["gap_edges_over_delta0"] = [
        None if lo is None else lo / spec.delta0,
        None if hi is None else hi / spec.delta0,
    ]
    band = (np.abs(spec.normalized_frequency) >= GAP_BAND[0]) & (np.abs(spec.normalized_frequency) <= GAP_BAND[1])
    out["in_gap_max_T2"] = float(spec.T2[band].max()) if band.any() else None
    out["invariants"] = {
        "max_flux_error": float(spec.flux_error().max()),
        "max_det_error": float(spec.det_error().max()),
        "max_relative_det_error": float(spec.relative_det_error().max()),
    }
    if sampled is not None:
        r2, t2 = scattering.zero_frequency_transmission(sampled, angle)
        W0 = scattering.total_transfer(sampled, 0.0, angle, spec.metadata.get("mode", "ideal"))
        pipe = abs(scattering.reflect_transmit(W0)[1]) ** 2
        out["zero_frequency"] = {"T2_pipeline": pipe, "T2_oracle": t2, "deviation": abs(pipe - t2)}
    return out


def _run_spectrum(cfg, f=None, noise_a=None, seed=None, freqs=None):
    grid = build_grid(cfg)
    prof = build_profile(cfg, grid.scale, noise_a, seed)
    angle = build_angle(cfg, f)
    freqs = sweep_frequencies(cfg) if freqs is None else freqs
    meta = {"profile": cfg.profile, "theta": cfg.theta}
    if isinstance(prof, Noisy):
        meta.update(noise_a=prof.noise.amplitude, seed=prof.noise.seed)
    spec = scattering.spectrum(
        prof, freqs, grid, angle, cfg.mode, delta0=cfg.delta0, workers=cfg.workers, metadata=meta
    )
    return spec, sample_on_grid(prof, grid), angle


@dataclass(frozen=True, eq=False)
class RobustnessReport:
    amplitude: float
    seeds: np.ndarray
    peak_frequency: np.ndarray  # in units of delta0
    peak_T2: np.ndarray
    zero_T2: np.ndarray
    oracle_T2: np.ndarray

    @property
    def mean(self):
        return float(np.mean(self.peak_T2))

    @property
    def min(self):
        return float(np.min(self.peak_T2))

    @property
    def max(self):
        return float(np.max(self.peak_T2))

    @property
    def max_oracle_deviation(self):
        return float(np.max(np.abs(self.zero_T2 - self.oracle_T2)))

    def as_dict(self):
        return {
            "amplitude": self.amplitude,
            "n_seeds": len(self.seeds),
            "mean_peak_T2": self.mean,
            "min_peak_T2": self.min,
            "max_peak_T2": self.max,
            "max_oracle_deviation": self.max_oracle_deviation,
        }


def noise_ensemble(a, n_seeds=50, cfg=None, workers=None):
    """Mid-gap transmission of the noisy kink for seeds 1..n_seeds.

    Only the part of the sweep inside the mid-gap window is computed, since the
    peak is defined there.
    """
    cfg = cfg or resolve("fig5b-noise30")
    workers = cfg.workers if workers is None else workers
    freqs = sweep_frequencies(cfg)
    freqs = freqs[np.abs(freqs) < 0.5 * cfg.delta0]
    seeds = np.arange(1, n_seeds + 1)
    single = cfg.replace(workers=1)

    def one(seed):
        spec, sampled, angle = _run_spectrum(single, noise_a=a, seed=int(seed), freqs=freqs)
        dw, t2 = scattering.midgap_peak(spec)
        W0 = scattering.total_transfer(sampled, 0.0, angle, cfg.mode)
        zero = abs(scattering.reflect_transmit(W0)[1]) ** 2
        oracle = scattering.zero_frequency_transmission(sampled, angle)[1]
        return dw / cfg.delta0, t2, zero, oracle

    if a == 0:
        rows = [one(seeds[0])] * n_seeds
    elif workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, seeds))
    else:
        rows = [one(s) for s in seeds]
    cols = np.array(rows, dtype=float).reshape(n_seeds, 4)
    return RobustnessReport(float(a), seeds, cols[:, 0], cols[:, 1], cols[:, 2], cols[:, 3])


def mixing_angle_sweep(fs, cfg=None):
    """Generalized-mode spectra for each mixing fraction plus a per-f summary."""
    cfg = (cfg or resolve("suppl1-dS-sweep")).replace(mode="generalized")
    spectra, rows = {}, []
    ideal = None
    for f in fs:
        spec, sampled, angle = _run_spectrum(cfg, f=f)
        spectra[f] = spec
        s = spectrum_summary(spec, sampled, angle)
        row = {
            "f": f,
            "midgap_peak_T2": s["midgap_peak"]["T2"],
            "in_gap_max_T2": s["in_gap_max_T2"],
            "gap_edges_over_delta0": s["gap_edges_over_delta0"],
        }
        if f == 0:
            if ideal is None:
                ideal, _, _ = _run_spectrum(cfg.replace(mode="ideal", mixing_f=0.0), f=0.0)
            row["max_deviation_from_ideal"] = float(np.max(np.abs(spec.T2 - ideal.T2)))
        rows.append(row)
    return spectra, rows


def _run_evolution(cfg):
    grid = build_grid(cfg)
    prof = build_profile(cfg, grid.scale)
    if cfg.initial == "gaussian":
        psi0 = dynamics.gaussian_spinor(grid, cfg.sigma, cfg.z0)
    else:
        psi0 = dynamics.zero_mode_state(prof, grid)
    config = dynamics.EvolutionConfig.for_duration(grid, cfg.t_final, cfg.stride)
    traj = dynamics.evolve(psi0, prof, config)
    summary = {
        "n_steps": config.n_steps,
        "dt": dynamics.EvolutionConfig.dt(grid),
        "final_overlap": float(traj.overlap0[-1]),
        "initial_rms_width": float(traj.rms_width[0]),
        "final_rms_width": float(traj.rms_width[-1]),
        "max_norm_drift": float(np.max(np.abs(traj.norm2 - traj.norm2[0]))),
    }
    if cfg.profile == "kink":
        zm = dynamics.zero_mode_state(prof, grid)
        summary["zero_mode_rms_width"] = zm.rms_width()
        summary["initial_zero_mode_overlap"] = psi0.overlap(zm)
    return traj, summary


def _run_zero_mode(cfg):
    grid = build_grid(cfg)
    prof = build_profile(cfg, grid.scale)
    zm = dynamics.zero_mode_state(prof, grid)
    summary = {
        "hamiltonian_residual": dynamics.hamiltonian_residual(zm, prof),
        "rms_width": zm.rms_width(),
        "mean_position": zm.mean_position(),
    }
    if cfg.profile == "kink":
        scale = grid.scale
        delta0 = scale.delta_from_opacity(cfg.theta)
        lam = cfg.sharpness / scale.length
        summary["cosh_exponent"] = delta0 / (scale.v0 * lam)
    return zm, summary


def run_config(cfg):
    """Run a resolved configuration; the result is a pure function of ``cfg``."""
    res = ScenarioResult(cfg)
    if cfg.task == "spectrum":
        spec, sampled, angle = _run_spectrum(cfg)
        res.spectra["main"] = spec
        res.summary.update(spectrum_summary(spec, sampled, angle))
    elif cfg.task == "mixing-sweep":
        spectra, rows = mixing_angle_sweep(cfg.mixing_sweep, cfg)
        res.spectra.update({f"f{f:g}": s for f, s in spectra.items()})
        res.summary["mixing_sweep"] = rows
    elif cfg.task == "noise-sweep":
        rows = []
        for a in cfg.noise_sweep:
            spec, sampled, angle = _run_spectrum(cfg, noise_a=a)
            res.spectra[f"a{a:g}"] = spec
            ens = noise_ensemble(a, cfg.n_seeds, cfg)
            res.ensembles[a] = ens
            s = spectrum_summary(spec, sampled, angle)
            rows.append({"amplitude": a, "seed": cfg.noise_seed, "midgap_peak_T2": s["midgap_peak"]["T2"], "ensemble": ens.as_dict()})
        res.summary["noise_sweep"] = rows
    elif cfg.task == "evolve":
        res.trajectory, summary = _run_evolution(cfg)
        res.summary.update(summary)
    elif cfg.task == "zero-mode":
        res.field, summary = _run_zero_mode(cfg)
        res.summary.update(summary)
    return res


def run_scenario(name, overrides=None):
    """Run a catalog scenario, optionally overriding config keys."""
    return run_config(resolve(name, overrides))


def scenario_names():
    return list(CATALOG)
