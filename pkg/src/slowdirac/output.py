"""CSV/JSON serialization of spectra, trajectories and run summaries.

Every float is written with 17 significant digits, which round-trips a 64-bit
double exactly.  CSV bodies depend only on the config; the timestamp lives in
the JSON sidecar.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .config import as_dict
from .errors import ConfigurationError, UnitarityError

FLOAT_FMT = "%.17g"
FLUX_TOL = 1e-10

SPECTRUM_HEADER = "delta_omega_over_delta0,T2,R2,reT,imT,reR,imR"
SNAPSHOT_HEADER = "t,z,re_psi1,im_psi1,re_psi2,im_psi2"
OBSERVABLE_HEADER = "t,norm2,mean_z,rms_width,overlap0"


def _version():
    from . import __version__

    return __version__


@dataclass
class RunMetadata:
    parameters: dict
    seeds: list
    n_cells: int
    invariants: dict = field(default_factory=dict)
    version: str = field(default_factory=_version)
    timestamp: str = field(
        default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    )

    @classmethod
    def from_config(cls, cfg, invariants=None):
        seeds = []
        if cfg.noise_a > 0 or cfg.noise_sweep:
            seeds = [cfg.noise_seed]
        if cfg.task == "noise-sweep":
            seeds = list(range(1, cfg.n_seeds + 1))
        return cls(as_dict(cfg), seeds, cfg.n_cells, invariants or {})


def _write_text(path, text):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    return path


def _rows_to_csv(header, cols):
    body = np.column_stack(cols)
    lines = [header]
    lines.extend(",".join(FLOAT_FMT % v for v in row) for row in body)
    return "\n".join(lines) + "\n"


def write_spectrum_csv(spec, path):
    """Write one row per frequency; refuses spectra that violate flux conservation."""
    err = spec.flux_error()
    if err.size and err.max() > FLUX_TOL:
        i = int(np.argmax(err))
        raise UnitarityError(
            f"| |R|^2+|T|^2-1 | = {err[i]:.3g} at delta_omega/delta0={spec.normalized_frequency[i]:.6g}; "
            f"not writing {path}"
        )
    cols = [spec.normalized_frequency, spec.T2, spec.R2, spec.T.real, spec.T.imag, spec.R.real, spec.R.imag]
    return _write_text(path, _rows_to_csv(SPECTRUM_HEADER, cols))


def read_spectrum_csv(path):
    """Columns of a spectrum CSV as a dict of float arrays."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot read {path}: {exc.strerror}") from exc
    return {name: data[:, i] for i, name in enumerate(SPECTRUM_HEADER.split(","))}


def write_snapshots_csv(traj, path):
    """One row per (snapshot, cell), snapshots in time order."""
    k, _, n = traj.psi.shape
    t = np.repeat(traj.times, n)
    z = np.tile(traj.grid.midpoints, k)
    p1 = traj.psi[:, 0].ravel()
    p2 = traj.psi[:, 1].ravel()
    return _write_text(path, _rows_to_csv(SNAPSHOT_HEADER, [t, z, p1.real, p1.imag, p2.real, p2.imag]))


def write_observables_csv(traj, path):
    cols = [traj.times, traj.norm2, traj.mean_z, traj.rms_width, traj.overlap0]
    return _write_text(path, _rows_to_csv(OBSERVABLE_HEADER, cols))


def write_field_csv(field_, path):
    """A single spinor field as a one-snapshot file with t = 0."""
    z = field_.z
    p1, p2 = field_.psi1, field_.psi2
    cols = [np.zeros_like(z), z, p1.real, p1.imag, p2.real, p2.imag]
    return _write_text(path, _rows_to_csv(SNAPSHOT_HEADER, cols))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def write_summary_json(summary, metadata, path):
    payload = {"summary": _jsonable(summary), "metadata": _jsonable(asdict(metadata))}
    return _write_text(path, json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n")


def _invariants(result):
    flux = [float(s.flux_error().max()) for s in result.spectra.values()]
    det = [float(s.relative_det_error().max()) for s in result.spectra.values()]
    out = {}
    if flux:
        out["max_flux_error"] = max(flux)
        out["max_relative_det_error"] = max(det)
    if result.trajectory is not None:
        n = result.trajectory.norm2
        out["max_norm_drift"] = float(np.max(np.abs(n - n[0])))
    return out


def write_result(result, out_dir=None):
    """Write every artifact of a ScenarioResult into ``out_dir``; returns the paths."""
    cfg = result.config
    out_dir = Path(out_dir if out_dir is not None else cfg.out)
    stem = cfg.scenario if cfg.scenario != "custom" else cfg.task
    paths = []
    multi = len(result.spectra) > 1
    for key, spec in result.spectra.items():
        name = f"{stem}_{key}_spectrum.csv" if multi else f"{stem}_spectrum.csv"
        paths.append(write_spectrum_csv(spec, out_dir / name))
    if result.trajectory is not None:
        paths.append(write_snapshots_csv(result.trajectory, out_dir / f"{stem}_snapshots.csv"))
        paths.append(write_observables_csv(result.trajectory, out_dir / f"{stem}_observables.csv"))
    if result.field is not None:
        paths.append(write_field_csv(result.field, out_dir / f"{stem}_zero_mode.csv"))
    for a, rep in result.ensembles.items():
        cols = [rep.seeds.astype(float), rep.peak_frequency, rep.peak_T2, rep.zero_T2, rep.oracle_T2]
        text = _rows_to_csv("seed,peak_delta_omega_over_delta0,peak_T2,T2_zero,sech2_phi", cols)
        paths.append(_write_text(out_dir / f"{stem}_ensemble_a{a:g}.csv", text))
    meta = RunMetadata.from_config(cfg, _invariants(result))
    paths.append(write_summary_json(result.summary, meta, out_dir / f"{stem}_summary.json"))
    return paths


def ensure_dir(path):
    path = Path(path)
    if path.exists() and not path.is_dir():
        raise ConfigurationError(f"output path {path} exists and is not a directory")
    if path.exists() and not os.access(path, os.W_OK):
        raise ConfigurationError(f"output directory {path} is not writable")
    return path
