"""Truncated multimode Fock space: configurations, state vectors, mode and
atom operators, inner products and expectation values.

Basis ordering is canonical throughout the package: the atom index is the
slowest-varying digit, then mode 1, ..., mode M fastest. All values are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

__all__ = [
    "HilbertConfig",
    "StateVector",
    "LinearOperator",
    "annihilator",
    "creator",
    "mode_number",
    "total_number",
    "atom_operator",
    "atom_projector",
    "identity",
    "basis_state",
    "vacuum",
    "embed_field",
    "inner",
    "expectation",
    "fidelity",
    "edge_leakage",
    "suggest_cutoff",
    "DEFAULT_DIM_LIMIT",
]

DEFAULT_DIM_LIMIT = 1_000_000

#: fraction of nonzero entries below which operators are kept sparse
SPARSE_FILL_THRESHOLD = 0.05

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class HilbertConfig:
    """Shape of the joint atom (x) modes Hilbert space.

    mode_count: number of bosonic modes M.
    cutoff: maximum photon number per mode (per-mode truncation, not total).
    atom_levels: 1 = field only, 2 = {g, e}, 3 = {g1, g2, e} lambda system.
    max_dim: construction is refused above this joint dimension.
    """

    mode_count: int
    cutoff: int
    atom_levels: int = 1
    max_dim: int = DEFAULT_DIM_LIMIT

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError(f"mode_count must be >= 1, got {self.mode_count}")
        if self.cutoff < 0:
            raise ValueError(f"cutoff must be >= 0, got {self.cutoff}")
        if self.atom_levels not in (1, 2, 3):
            raise ValueError(f"atom_levels must be 1, 2 or 3, got {self.atom_levels}")
        # exact integer arithmetic: cannot overflow, only exceed the limit
        if self.dim > self.max_dim:
            raise ValueError(
                f"joint dimension {self.dim} exceeds the configured limit {self.max_dim}"
            )

    @property
    def base(self) -> int:
        return self.cutoff + 1

    @property
    def mode_dim(self) -> int:
        return self.base**self.mode_count

    @property
    def dim(self) -> int:
        return self.atom_levels * self.mode_dim

    def mode_stride(self, mode: int) -> int:
        """Index stride of one photon in `mode` (mode M-1 is fastest)."""
        self._check_mode(mode)
        return self.base ** (self.mode_count - 1 - mode)

    def _check_mode(self, mode: int):
        if not 0 <= mode < self.mode_count:
            raise ValueError(
                f"mode index {mode} out of range for {self.mode_count} modes"
            )

    def flatten(self, occupations, atom_level: int = 0) -> int:
        occupations = tuple(int(m) for m in occupations)
        if len(occupations) != self.mode_count:
            raise ValueError(
                f"expected {self.mode_count} occupation numbers, got {len(occupations)}"
            )
        if any(m < 0 or m > self.cutoff for m in occupations):
            raise ValueError(f"occupations {occupations} outside cutoff {self.cutoff}")
        if not 0 <= atom_level < self.atom_levels:
            raise ValueError(f"atom level {atom_level} out of range")
        idx = atom_level
        for m in occupations:
            idx = idx * self.base + m
        return idx

    def unflatten(self, index: int) -> tuple[int, tuple[int, ...]]:
        """Inverse of flatten: joint index -> (atom_level, occupations)."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} out of range for dim {self.dim}")
        occ = []
        for _ in range(self.mode_count):
            index, m = divmod(index, self.base)
            occ.append(m)
        return index, tuple(reversed(occ))

    def occupation_of(self, indices: np.ndarray, mode: int) -> np.ndarray:
        """Vectorized photon count of `mode` for an array of joint indices."""
        return (indices // self.mode_stride(mode)) % self.base

    def atom_of(self, indices: np.ndarray) -> np.ndarray:
        return indices // self.mode_dim


@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector over the canonical joint basis.

    truncation_loss records squared norm discarded by whichever truncating
    constructor produced the state (0.0 for exact constructions).
    """

    config: HilbertConfig
    amplitudes: np.ndarray
    truncation_loss: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.config.dim,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({self.config.dim},)"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.config, self.amplitudes / n, self.truncation_loss)

    def amplitude(self, occupations, atom_level: int = 0) -> complex:
        return complex(self.amplitudes[self.config.flatten(occupations, atom_level)])

    def with_loss(self, loss: float) -> "StateVector":
        return StateVector(self.config, self.amplitudes, float(loss))


@dataclass(frozen=True)
class LinearOperator:
    """Square operator on the joint space, sparse or dense by fill fraction.

    If hermitian=True the matrix is checked against its adjoint at
    construction (max-entry deviation below 1e-12).
    """

    config: HilbertConfig
    matrix: object  # scipy.sparse matrix or np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = self.matrix
        if sp.issparse(m):
            m = m.tocsr().astype(complex)
        else:
            m = np.asarray(m, dtype=complex)
        if m.shape != (self.config.dim, self.config.dim):
            raise ValueError(
                f"operator shape {m.shape} does not match joint dimension {self.config.dim}"
            )
        object.__setattr__(self, "matrix", m)
        if self.hermitian:
            dev = _max_abs(m - _adjoint(m))
            if dev >= _HERMITIAN_TOL:
                raise ValueError(f"operator flagged hermitian deviates by {dev:.3e}")

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.asarray(self.matrix)

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.config, _adjoint(self.matrix), self.hermitian)

    def apply(self, state: StateVector) -> StateVector:
        _check_same_config(self.config, state.config)
        return StateVector(self.config, self.matrix @ state.amplitudes)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return self.apply(other)
        if isinstance(other, LinearOperator):
            _check_same_config(self.config, other.config)
            return LinearOperator(self.config, self.matrix @ other.matrix)
        return NotImplemented

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        _check_same_config(self.config, other.config)
        herm = self.hermitian and other.hermitian
        return LinearOperator(self.config, self.matrix + other.matrix, herm)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        _check_same_config(self.config, other.config)
        herm = self.hermitian and other.hermitian
        return LinearOperator(self.config, self.matrix - other.matrix, herm)

    def __rmul__(self, scalar) -> "LinearOperator":
        herm = self.hermitian and abs(complex(scalar).imag) == 0.0
        return LinearOperator(self.config, scalar * self.matrix, herm)

    def __neg__(self) -> "LinearOperator":
        return LinearOperator(self.config, -self.matrix, self.hermitian)


def _adjoint(m):
    return m.conjugate().T if not sp.issparse(m) else m.getH()


def _max_abs(m) -> float:
    if sp.issparse(m):
        return 0.0 if m.nnz == 0 else float(np.abs(m.data).max())
    return float(np.abs(m).max()) if m.size else 0.0


def _check_same_config(a: HilbertConfig, b: HilbertConfig):
    if a != b:
        raise ValueError(f"Hilbert configurations differ: {a} vs {b}")


def _pack(config: HilbertConfig, rows, cols, vals, hermitian=False) -> LinearOperator:
    mat = sp.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)),
        shape=(config.dim, config.dim),
    )
    if mat.nnz > SPARSE_FILL_THRESHOLD * config.dim**2:
        return LinearOperator(config, mat.toarray(), hermitian)
    return LinearOperator(config, mat, hermitian)


@lru_cache(maxsize=256)
def annihilator(config: HilbertConfig, mode: int) -> LinearOperator:
    """Ladder operator a_mode with <.., m-1, ..|a|.., m, ..> = sqrt(m).

    Acts as identity on the atom index and all other modes. The adjoint is
    the photon creator; at the cutoff edge the creator maps the affected
    component to zero (see edge_leakage for the discarded weight).
    """
    config._check_mode(mode)
    idx = np.arange(config.dim)
    m = config.occupation_of(idx, mode)
    nz = m > 0
    cols = idx[nz]
    rows = cols - config.mode_stride(mode)
    vals = np.sqrt(m[nz].astype(float))
    return _pack(config, rows, cols, vals)


def creator(config: HilbertConfig, mode: int) -> LinearOperator:
    return annihilator(config, mode).dagger()


@lru_cache(maxsize=256)
def mode_number(config: HilbertConfig, mode: int) -> LinearOperator:
    idx = np.arange(config.dim)
    m = config.occupation_of(idx, mode).astype(float)
    return _pack(config, idx, idx, m, hermitian=True)


def total_number(config: HilbertConfig) -> LinearOperator:
    idx = np.arange(config.dim)
    tot = np.zeros(config.dim)
    for j in range(config.mode_count):
        tot += config.occupation_of(idx, mode=j)
    return _pack(config, idx, idx, tot, hermitian=True)


# Atom level layout: 2-level {0: g, 1: e}; 3-level {0: g1, 1: g2, 2: e}.
_ATOM_KINDS = {
    # kind: (bra_level, ket_level) of |bra><ket|, minimum atom_levels
    "sigma_plus": (None, None),  # special-cased below
    "sigma_minus": (None, None),
    "sigma_ee": (None, None),
    "g1g1": (0, 0),
    "g2g2": (1, 1),
    "g1g2": (0, 1),
    "g2g1": (1, 0),
}


def atom_operator(config: HilbertConfig, kind: str) -> LinearOperator:
    """Atomic operator extended as identity over the modes.

    kinds: sigma_plus (|e><g| resp. |e><g1|), sigma_minus, sigma_ee,
    and for lambda systems g1g1, g2g2, g1g2, g2g1.
    """
    if kind not in _ATOM_KINDS:
        raise ValueError(f"unknown atom operator kind {kind!r}")
    if config.atom_levels < 2:
        raise ValueError("config has no atom (atom_levels=1)")
    excited = config.atom_levels - 1  # index of |e> in either layout
    if kind == "sigma_plus":
        pair = (excited, 0)
    elif kind == "sigma_minus":
        pair = (0, excited)
    elif kind == "sigma_ee":
        pair = (excited, excited)
    else:
        if config.atom_levels < 3:
            raise ValueError(f"{kind!r} requires a 3-level (lambda) atom")
        pair = _ATOM_KINDS[kind]
    return atom_projector(config, *pair)


def atom_projector(config: HilbertConfig, bra_level: int, ket_level: int) -> LinearOperator:
    """|bra_level><ket_level| on the atom, identity on all modes."""
    for lvl in (bra_level, ket_level):
        if not 0 <= lvl < config.atom_levels:
            raise ValueError(f"atom level {lvl} out of range")
    r = np.arange(config.mode_dim)
    rows = bra_level * config.mode_dim + r
    cols = ket_level * config.mode_dim + r
    return _pack(config, rows, cols, np.ones(config.mode_dim), hermitian=bra_level == ket_level)


def identity(config: HilbertConfig) -> LinearOperator:
    return LinearOperator(config, sp.identity(config.dim, format="csr", dtype=complex), True)


def basis_state(config: HilbertConfig, occupations, atom_level: int = 0) -> StateVector:
    amps = np.zeros(config.dim, dtype=complex)
    amps[config.flatten(occupations, atom_level)] = 1.0
    return StateVector(config, amps)


def vacuum(config: HilbertConfig, atom_level: int = 0) -> StateVector:
    return basis_state(config, (0,) * config.mode_count, atom_level)


def embed_field(config: HilbertConfig, field_amplitudes: np.ndarray, atom_level: int = 0) -> StateVector:
    """Place a mode-space amplitude vector at a definite atom level."""
    field_amplitudes = np.asarray(field_amplitudes, dtype=complex)
    if field_amplitudes.shape != (config.mode_dim,):
        raise ValueError(
            f"field vector has shape {field_amplitudes.shape}, expected ({config.mode_dim},)"
        )
    if not 0 <= atom_level < config.atom_levels:
        raise ValueError(f"atom level {atom_level} out of range")
    amps = np.zeros(config.dim, dtype=complex)
    start = atom_level * config.mode_dim
    amps[start : start + config.mode_dim] = field_amplitudes
    return StateVector(config, amps)


def inner(phi: StateVector, psi: StateVector) -> complex:
    """<phi|psi> (conjugation on the first argument)."""
    _check_same_config(phi.config, psi.config)
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))


def expectation(state: StateVector, operator: LinearOperator):
    """<psi|A|psi>; returns a real float for operators flagged hermitian."""
    _check_same_config(state.config, operator.config)
    val = complex(np.vdot(state.amplitudes, operator.matrix @ state.amplitudes))
    if operator.hermitian:
        scale = max(1.0, abs(val))
        if abs(val.imag) >= 1e-10 * scale:
            raise AssertionError(
                f"hermitian expectation has imaginary part {val.imag:.3e}"
            )
        return val.real
    return val


def fidelity(phi: StateVector, psi: StateVector) -> float:
    """|<phi|psi>|^2 / (|phi|^2 |psi|^2): squared overlap up to global phase."""
    np_, nq = phi.norm(), psi.norm()
    if np_ == 0.0 or nq == 0.0:
        raise ValueError("fidelity undefined for zero vectors")
    return abs(inner(phi, psi)) ** 2 / (np_**2 * nq**2)


def edge_leakage(state: StateVector, mode: int) -> float:
    """Squared norm a creator on `mode` would discard at the cutoff edge.

    The truncated creator zeroes components with occupation cutoff in that
    mode; exact creation would carry them to (cutoff+1) with weight
    (cutoff+1)·|amplitude|^2.
    """
    cfg = state.config
    idx = np.arange(cfg.dim)
    at_edge = cfg.occupation_of(idx, mode) == cfg.cutoff
    w = np.sum(np.abs(state.amplitudes[at_edge]) ** 2)
    return float((cfg.cutoff + 1) * w)


def suggest_cutoff(alpha: complex, tol: float = 1e-12, hard_max: int = 200) -> int:
    """Smallest per-mode cutoff keeping the coherent-state tail below tol.

    The tail is the Poisson weight sum_{m > n_max} e^{-|a|^2} |a|^{2m} / m!.
    """
    x = abs(alpha) ** 2
    if x == 0.0:
        return 0
    log_term = -x  # log of the m=0 Poisson term
    cumulative = 0.0
    for m in range(hard_max + 1):
        cumulative += math.exp(log_term)
        if 1.0 - cumulative < tol:
            return m
        log_term += math.log(x) - math.log(m + 1)
    raise ValueError(f"no cutoff below {hard_max} reaches tail tolerance {tol}")
