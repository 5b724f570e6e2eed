import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowdirac import (
    ConfigurationError,
    Constant,
    DomainError,
    EvolutionConfig,
    Grid,
    Kink,
    NonNormalizableWarning,
    PhysicalScale,
    ResolutionWarning,
    Sampled,
    SpinorField,
    WraparoundWarning,
    evolve,
    gaussian_spinor,
    hamiltonian_residual,
    sample_on_grid,
    step,
    zero_mode_state,
)
from slowdirac.dynamics import CHIRAL_MINUS, detuning_phase

NATURAL = PhysicalScale(v0=1.0, length=40.0, c=1.0)
GRID = Grid(NATURAL, 800)


def random_field(rng, grid):
    psi = rng.normal(size=(2, grid.n_cells)) + 1j * rng.normal(size=(2, grid.n_cells))
    return SpinorField(grid, psi[0], psi[1]).normalized()


def test_gaussian_normalized_and_centered():
    g = gaussian_spinor(GRID, 1.2, z0=2.0)
    assert g.norm2() == pytest.approx(1.0, abs=1e-14)
    assert g.mean_position() == pytest.approx(2.0, abs=1e-10)
    assert g.rms_width() == pytest.approx(1.2 / np.sqrt(2), rel=1e-6)


def test_gaussian_guards():
    with pytest.raises(DomainError):
        gaussian_spinor(GRID, 1.0, z0=30.0)
    with pytest.raises(ConfigurationError):
        gaussian_spinor(GRID, 0.0)
    with pytest.warns(ResolutionWarning):
        gaussian_spinor(GRID, 0.05)


def test_field_shape_check():
    with pytest.raises(ConfigurationError):
        SpinorField(GRID, np.zeros(3), np.zeros(3))


def test_massless_step_is_exact_shift():
    rng = np.random.default_rng(0)
    f = random_field(rng, GRID)
    out = step(f, Sampled(np.zeros(GRID.n_cells), GRID))
    assert np.array_equal(out.psi1, np.roll(f.psi1, 1))
    assert np.array_equal(out.psi2, np.roll(f.psi2, -1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 5.0))
def test_step_is_unitary(seed, amp):
    rng = np.random.default_rng(seed)
    a, b = random_field(rng, GRID), random_field(rng, GRID)
    prof = Sampled(amp * rng.normal(size=GRID.n_cells), GRID)
    a2, b2 = step(a, prof), step(b, prof)
    assert abs(a2.inner(b2) - a.inner(b)) < 1e-13
    assert a2.norm2() == pytest.approx(1.0, abs=1e-13)


@pytest.mark.filterwarnings("ignore::slowdirac.errors.WraparoundWarning")  # random field fills the seam
def test_evolve_matches_repeated_step():
    rng = np.random.default_rng(1)
    f = random_field(rng, GRID)
    prof = Kink(1.0, 1.0)
    g = f
    for _ in range(7):
        g = step(g, prof)
    traj = evolve(f, prof, EvolutionConfig(7, 3))
    assert np.allclose(traj.final.psi1, g.psi1, atol=1e-15) and np.allclose(traj.final.psi2, g.psi2, atol=1e-15)
    assert len(traj.times) == 4  # 0, 3, 6, 7
    assert traj.times[-1] == pytest.approx(7 * EvolutionConfig.dt(GRID))


def test_evolution_config():
    cfg = EvolutionConfig.for_duration(GRID, 10.0, stride=5)
    assert cfg.n_steps == 200
    with pytest.raises(ConfigurationError):
        EvolutionConfig(-1)
    with pytest.raises(ConfigurationError):
        EvolutionConfig(5, stride=0)
    with pytest.raises(ConfigurationError):
        EvolutionConfig(5, boundary="absorbing")


def test_zero_mode_closed_form():
    """For delta0 tanh(lam z) the zero mode is cosh(lam z)^(-delta0 / (v0 lam))."""
    g = Grid(NATURAL, 4000)
    zm = zero_mode_state(Kink(1.0, 1.0), g)
    env = np.cosh(g.midpoints) ** -1.0
    env /= np.sqrt(np.sum(env**2) * g.dz)
    assert np.allclose(zm.psi1, env / np.sqrt(2), atol=1e-5)
    assert np.array_equal(zm.psi1, zm.psi2)


def test_detuning_phase_is_centered():
    g = Grid(NATURAL, 1000)
    phi = detuning_phase(sample_on_grid(Kink(1.0, 1.0), g))
    assert np.allclose(phi, phi[::-1], atol=1e-12)
    assert phi.min() >= 0


def test_wrong_chirality_is_not_normalizable():
    with pytest.warns(NonNormalizableWarning):
        zm = zero_mode_state(Kink(1.0, 1.0), GRID, chirality=-1)
    assert np.allclose(zm.psi1, -zm.psi2)
    with pytest.raises(ConfigurationError):
        zero_mode_state(Kink(1.0, 1.0), GRID, chirality=0)


def test_residual_distinguishes_chirality():
    g = Grid(NATURAL, 4000)
    prof = Kink(1.0, 1.0)
    good = hamiltonian_residual(zero_mode_state(prof, g), prof)
    env = np.cosh(g.midpoints) ** -1.0
    bad_field = SpinorField(g, CHIRAL_MINUS[0] * env, CHIRAL_MINUS[1] * env)
    bad = hamiltonian_residual(bad_field, prof)
    assert good < 1e-4 and bad > 0.5


def test_zero_mode_is_stationary():
    g = Grid(NATURAL, 2000)
    prof = Kink(1.0, 1.0)
    zm = zero_mode_state(prof, g)
    traj = evolve(zm, prof, EvolutionConfig(2000, 500))
    assert np.all(traj.overlap0 > 1 - 1e-8)
    assert np.max(np.abs(traj.norm2 - 1)) < 1e-12


def test_constant_mass_packet_spreads_and_kink_traps():
    g = Grid(NATURAL, 4000)
    psi0 = gaussian_spinor(g, 1.2)
    cfg = EvolutionConfig.for_duration(g, 10.0, 1000)
    free = evolve(psi0, Constant(1.0), cfg)
    trapped = evolve(psi0, Kink(1.0, 1.0), cfg)
    assert free.rms_width[-1] > 2 * free.rms_width[0]
    assert trapped.overlap0[-1] > 0.99
    assert trapped.rms_width[-1] < 1.5 * trapped.rms_width[0]


def test_wraparound_warning():
    g = Grid(NATURAL, 400)
    psi0 = gaussian_spinor(g, 1.0, z0=15.0)
    with pytest.warns(WraparoundWarning):
        evolve(psi0, Constant(0.0), EvolutionConfig(100))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        evolve(gaussian_spinor(g, 1.0), Kink(1.0, 1.0), EvolutionConfig(50))


def test_grid_mismatch():
    other = Grid(NATURAL, 401)
    with pytest.raises(ConfigurationError):
        step(gaussian_spinor(GRID, 1.0), Sampled(np.zeros(401), other))
