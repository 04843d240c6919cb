"""Hamiltonians, unitary evolution, Lindblad master equation and the
factorized semiclassical model, with named observable trajectories.

The master equation integrator is a fixed-step classical RK4 over the
vectorized density matrix with a sparse Liouvillian. The step bound follows
the fastest coupling scale g*sqrt(2*cutoff*M) and the largest decay rate;
an optional convergence check repeats the run at half step and compares
sampled observables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .collective import OrthogonalMixer, collective_creator, default_mixer
from .fock import (
    HilbertConfig,
    LinearOperator,
    StateVector,
    annihilator,
    atom_operator,
    creator,
    mode_number,
)

__all__ = [
    "SystemParams",
    "TimeSeries",
    "DensityOperator",
    "IntegratorError",
    "hamiltonian",
    "evolve_unitary",
    "lindblad_evolve",
    "semiclassical_evolve",
    "observables",
    "mode_channel_names",
]

_TRACE_TOL = 1e-6
_CONVERGENCE_TOL = 1e-6


class IntegratorError(RuntimeError):
    """Raised when an integration fails its accuracy or sanity checks."""


@dataclass(frozen=True)
class SystemParams:
    """Rates of the driven-dissipative model, in units of a reference frequency.

    kappa may be a single float (same decay for every mode) or one value
    per mode. delta is the emitter-field detuning entering as delta*|e><e|.
    """

    g: float = 1.0
    gamma: float = 0.0
    kappa: object = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.g < 0 or self.gamma < 0:
            raise ValueError("rates must be non-negative")
        kappas = self.kappa if isinstance(self.kappa, (tuple, list)) else (self.kappa,)
        if any(k < 0 for k in kappas):
            raise ValueError("rates must be non-negative")

    def kappas(self, mode_count: int) -> tuple[float, ...]:
        if isinstance(self.kappa, (tuple, list)):
            if len(self.kappa) != mode_count:
                raise ValueError(
                    f"{len(self.kappa)} kappa values for {mode_count} modes"
                )
            return tuple(float(k) for k in self.kappa)
        return (float(self.kappa),) * mode_count

    def to_dict(self, mode_count: int | None = None) -> dict:
        out = {"g": self.g, "gamma": self.gamma, "delta": self.delta}
        if mode_count is None:
            out["kappa"] = self.kappa
        else:
            out["kappa"] = list(self.kappas(mode_count))
        return out


def hamiltonian(config: HilbertConfig, params: SystemParams) -> LinearOperator:
    """Resonant emitter-modes coupling g sum_j (a_j s+ + a_j^dag s-),
    plus delta*|e><e| when detuned.

    For lambda systems the coupled transition is g1 <-> e; g2 is a
    spectator.
    """
    if config.atom_levels < 2:
        raise ValueError("hamiltonian needs an atom (atom_levels >= 2)")
    sp_ = atom_operator(config, "sigma_plus")
    sm_ = atom_operator(config, "sigma_minus")
    h = None
    for j in range(config.mode_count):
        term = params.g * (annihilator(config, j) @ sp_ + creator(config, j) @ sm_)
        h = term if h is None else h + term
    if params.delta != 0.0:
        h = h + params.delta * atom_operator(config, "sigma_ee")
    return LinearOperator(config, h.matrix, hermitian=True)


def evolve_unitary(hop: LinearOperator, state: StateVector, t: float) -> StateVector:
    """exp(-i H t)|psi> via Krylov/Taylor action of the sparse exponential."""
    if not hop.hermitian:
        raise ValueError("unitary evolution requires a hermitian generator")
    if hop.config != state.config:
        raise ValueError("Hamiltonian and state configurations differ")
    mat = hop.matrix if hop.is_sparse else sp.csr_matrix(hop.matrix)
    amps = expm_multiply(-1j * t * mat, state.amplitudes)
    return StateVector(state.config, amps)


@dataclass(frozen=True)
class DensityOperator:
    """Dense density matrix on the joint space."""

    config: HilbertConfig
    matrix: np.ndarray
    validate: bool = True

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        if m.shape != (self.config.dim, self.config.dim):
            raise ValueError(
                f"density matrix shape {m.shape} does not match dim {self.config.dim}"
            )
        if self.validate:
            herm_dev = np.abs(m - m.conj().T).max()
            if herm_dev >= 1e-10:
                raise ValueError(f"density matrix deviates from hermitian by {herm_dev:.3e}")
            tr = np.trace(m).real
            if abs(tr - 1.0) >= _TRACE_TOL:
                raise ValueError(f"density matrix trace {tr} is not 1")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityOperator":
        psi = state.normalized().amplitudes
        return cls(state.config, np.outer(psi, psi.conj()))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def expectation(self, op: LinearOperator) -> float:
        mat = op.matrix.toarray() if op.is_sparse else op.matrix
        val = complex(np.trace(mat @ self.matrix))
        return val.real if op.hermitian else val

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


def mode_channel_names(mode_count: int) -> list[str]:
    """Per-mode occupation channel names: nA, nB for two modes, n1.. beyond."""
    if mode_count == 2:
        return ["nA", "nB"]
    return [f"n{j + 1}" for j in range(mode_count)]


@dataclass(frozen=True)
class TimeSeries:
    """Sampled observable trajectories over a time grid (units of 1/g)."""

    times: np.ndarray
    channels: dict
    meta: dict = field(default_factory=dict)
    states: tuple = ()

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).copy()
        t.flags.writeable = False
        object.__setattr__(self, "times", t)
        frozen = {}
        for name, values in self.channels.items():
            arr = np.asarray(values).copy()
            if arr.shape != t.shape:
                raise ValueError(f"channel {name!r} length does not match the grid")
            arr.flags.writeable = False
            frozen[name] = arr
        object.__setattr__(self, "channels", frozen)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.channels[name]

    def column_order(self) -> list[str]:
        mode_names = [n for n in self.channels if n.startswith("n") and n not in ("n_bright", "n_dark")]
        cols = ["sigma_ee", *mode_names, "n_bright", "n_dark"]
        if "alpha_c" in self.channels:
            cols.append("alpha_c")
        return [c for c in cols if c in self.channels]

    def csv_body(self) -> str:
        from .interferometer import format_float as ff

        cols = self.column_order()
        header = ["t"]
        for c in cols:
            header.extend(["alpha_c_re", "alpha_c_im"] if c == "alpha_c" else [c])
        lines = [",".join(header)]
        for i, t in enumerate(self.times):
            row = [ff(float(t))]
            for c in cols:
                v = self.channels[c][i]
                if c == "alpha_c":
                    row.extend([ff(float(np.real(v))), ff(float(np.imag(v)))])
                else:
                    row.append(ff(float(np.real(v))))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def _liouvillian(config: HilbertConfig, params: SystemParams) -> sp.csr_matrix:
    """Sparse generator of the master equation on row-major vec(rho)."""
    dim = config.dim
    eye = sp.identity(dim, format="csr", dtype=complex)

    def left(m):
        return sp.kron(m, eye, format="csr")

    def right(m):
        return sp.kron(eye, m.T, format="csr")

    h = hamiltonian(config, params).matrix
    h = h if sp.issparse(h) else sp.csr_matrix(h)
    liou = -1j * (left(h) - right(h))

    jumps = []
    if params.gamma > 0:
        jumps.append((params.gamma, atom_operator(config, "sigma_minus").matrix))
    for j, kappa in enumerate(params.kappas(config.mode_count)):
        if kappa > 0:
            jumps.append((kappa, annihilator(config, j).matrix))
    for rate, jump in jumps:
        jump = jump if sp.issparse(jump) else sp.csr_matrix(jump)
        jdj = (jump.getH() @ jump).tocsr()
        liou = liou + (rate / 2.0) * (
            2.0 * sp.kron(jump, jump.conj(), format="csr") - left(jdj) - right(jdj)
        )
    return liou.tocsr()


def _rk4_span(deriv, y: np.ndarray, t0: float, t1: float, h_max: float) -> np.ndarray:
    """Integrate y' = deriv(y) from t0 to t1 with fixed substeps <= h_max."""
    span = t1 - t0
    if span == 0.0:
        return y
    steps = max(1, math.ceil(span / h_max))
    h = span / steps
    for _ in range(steps):
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * h * k1)
        k3 = deriv(y + 0.5 * h * k2)
        k4 = deriv(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def _lindblad_step_bound(config: HilbertConfig, params: SystemParams) -> float:
    coupling = params.g * math.sqrt(2.0 * max(config.cutoff, 1) * config.mode_count)
    fastest = max(coupling, params.gamma, max(params.kappas(config.mode_count)), abs(params.delta))
    if fastest == 0.0:
        return math.inf
    return 1.0 / (50.0 * fastest)


def _observable_table(config: HilbertConfig, mixer: OrthogonalMixer):
    """Hermitian observables sampled along every trajectory."""
    table: dict[str, LinearOperator] = {}
    if config.atom_levels >= 2:
        table["sigma_ee"] = atom_operator(config, "sigma_ee")
    for j, name in enumerate(mode_channel_names(config.mode_count)):
        table[name] = mode_number(config, j)
    bright_c = collective_creator(config, mixer, 0)
    n_bright = bright_c @ bright_c.dagger()
    table["n_bright"] = LinearOperator(config, n_bright.matrix, hermitian=True)
    total = None
    for j in range(config.mode_count):
        op = mode_number(config, j)
        total = op if total is None else total + op
    table["n_dark"] = LinearOperator(config, (total - n_bright).matrix, hermitian=True)
    return table


def _sample(table, rho: np.ndarray) -> dict:
    out = {}
    for name, op in table.items():
        mat = op.matrix
        val = (mat @ rho).diagonal().sum() if sp.issparse(mat) else np.trace(mat @ rho)
        out[name] = complex(val).real
    return out


def lindblad_evolve(
    config: HilbertConfig,
    params: SystemParams,
    rho0: DensityOperator,
    t_grid,
    mixer: OrthogonalMixer | None = None,
    convergence_check: bool = True,
    keep_states: bool = False,
) -> TimeSeries:
    """Integrate the master equation and sample observables on t_grid.

    Dissipators: (gamma/2)(2 s- rho s+ - s+s- rho - rho s+s-) for the atom
    and (kappa_j/2)(2 a_j rho a_j^dag - n_j rho - rho n_j) per mode. The
    trace is monitored at every sample; convergence_check repeats the run
    at half step and requires sampled channels to agree within 1e-6.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValueError("t_grid must be a non-empty 1-d array")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be ascending")
    if rho0.config != config:
        raise ValueError("initial density matrix does not match the configuration")
    if mixer is None:
        mixer = default_mixer(config.mode_count)

    liou = _liouvillian(config, params)
    table = _observable_table(config, mixer)
    h_max = _lindblad_step_bound(config, params)

    def run(step_bound: float):
        y = rho0.matrix.reshape(-1).astype(complex)

        def deriv(v):
            return liou @ v

        samples = []
        kept = []
        t_prev = t_grid[0]
        if t_grid[0] != 0.0:
            y = _rk4_span(deriv, y, 0.0, t_grid[0], step_bound)
        for t_next in t_grid:
            y = _rk4_span(deriv, y, t_prev, t_next, step_bound)
            t_prev = t_next
            rho = y.reshape(config.dim, config.dim)
            tr = np.trace(rho).real
            if abs(tr - 1.0) >= _TRACE_TOL:
                raise IntegratorError(
                    f"trace drifted to {tr} at t={t_next}; reduce the step bound"
                )
            values = _sample(table, rho)
            see = values.get("sigma_ee")
            if see is not None and not -1e-8 <= see <= 1 + 1e-8:
                raise IntegratorError(
                    f"excited population {see} out of bounds at t={t_next}"
                )
            samples.append(values)
            if keep_states:
                kept.append(DensityOperator(config, rho, validate=False))
        return samples, kept

    samples, kept = run(h_max)
    if convergence_check and np.isfinite(h_max):
        reference, _ = run(h_max / 2.0)
        drift = max(
            abs(s[name] - r[name])
            for s, r in zip(samples, reference)
            for name in s
        )
        if drift > _CONVERGENCE_TOL:
            raise IntegratorError(
                f"half-step convergence check failed: drift {drift:.3e} > {_CONVERGENCE_TOL}"
            )

    channels = {
        name: np.array([s[name] for s in samples]) for name in samples[0]
    }
    meta = {
        "model": "quantum",
        "params": params.to_dict(config.mode_count),
        "cutoff": config.cutoff,
        "atom_levels": config.atom_levels,
        "step_bound": h_max,
    }
    return TimeSeries(times=t_grid, channels=channels, meta=meta, states=tuple(kept))


def semiclassical_evolve(
    params: SystemParams,
    alpha_c0: complex,
    atom_init,
    t_grid,
) -> TimeSeries:
    """Factorized (mean-field) model for the bright collective amplitude.

    Equations of motion (verbatim factorization of the operator equations,
    damping coefficients included as stated there):

        d(alpha_c)/dt = -kappa alpha_c - i g sqrt2 s
        ds/dt         = -gamma s + i g sqrt2 alpha_c z
        dz/dt         = -2 gamma (1 + z) + 2 i g sqrt2 (conj(alpha_c) s - alpha_c conj(s))

    with s = <sigma_ge>, z = <sigma_z>, sigma_ee = (1+z)/2. atom_init is
    "g", "e" or an explicit (s0, z0) pair.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValueError("t_grid must be a non-empty 1-d array")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be ascending")
    if isinstance(atom_init, str):
        try:
            s0, z0 = {"g": (0.0, -1.0), "e": (0.0, 1.0)}[atom_init]
        except KeyError:
            raise ValueError(f"atom_init must be 'g', 'e' or (s, z), got {atom_init!r}")
    else:
        s0, z0 = atom_init
    kappa = params.kappas(1)[0]
    root2g = math.sqrt(2.0) * params.g

    def deriv(y):
        alpha, s, z = y
        return np.array(
            [
                -kappa * alpha - 1j * root2g * s,
                -params.gamma * s + 1j * root2g * alpha * z,
                -2.0 * params.gamma * (1.0 + z)
                + 2j * root2g * (np.conj(alpha) * s - alpha * np.conj(s)),
            ],
            dtype=complex,
        )

    fastest = max(math.sqrt(2.0) * params.g, params.gamma, kappa)
    h_max = math.inf if fastest == 0.0 else 1.0 / (200.0 * fastest)

    y = np.array([alpha_c0, s0, z0], dtype=complex)
    rows = []
    t_prev = 0.0
    for t_next in t_grid:
        y = _rk4_span(deriv, y, t_prev, t_next, h_max)
        t_prev = t_next
        rows.append(y.copy())
        if abs(y[2].imag) > 1e-8:
            raise IntegratorError(f"inversion became complex at t={t_next}")
    rows = np.array(rows)
    alpha_c = rows[:, 0]
    z = rows[:, 2].real
    sigma_ee = (1.0 + z) / 2.0
    n_bright = np.abs(alpha_c) ** 2
    channels = {
        "sigma_ee": sigma_ee,
        "nA": n_bright / 2.0,
        "nB": n_bright / 2.0,
        "n_bright": n_bright,
        "n_dark": np.zeros_like(sigma_ee),
        "alpha_c": alpha_c,
    }
    meta = {
        "model": "semiclassical",
        "params": params.to_dict(),
        "alpha_c0": [np.real(alpha_c0), np.imag(alpha_c0)],
        "atom_init": [float(np.real(s0)), float(np.real(z0))],
        "step_bound": h_max,
    }
    return TimeSeries(times=t_grid, channels=channels, meta=meta)


def observables(source, mixer: OrthogonalMixer | None = None) -> dict:
    """sigma_ee (when an atom is present), per-mode occupations, bright and
    dark collective occupations, for a state vector or a density matrix."""
    config = source.config
    if mixer is None:
        mixer = default_mixer(config.mode_count)
    table = _observable_table(config, mixer)
    if isinstance(source, StateVector):
        from .fock import expectation as expect_state

        return {name: expect_state(source, op) for name, op in table.items()}
    if isinstance(source, DensityOperator):
        return {name: source.expectation(op) for name, op in table.items()}
    raise TypeError(f"cannot compute observables of {type(source).__name__}")
