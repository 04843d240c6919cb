"""Mach-Zehnder interferometry for quantum states and classical fields.

The 50/50 beam splitter is exp(-i pi/4 (a^dag b + a b^dag)); conjugating
mode operators with it realizes the substitution a -> (a+ib)/sqrt2,
b -> (b+ia)/sqrt2. The adjustable phase sits on mode B. With these choices
the quantum and classical pipelines label the output arms identically:
for inputs (omega, e^{i theta} omega) arm A reads I_in (1 + cos(theta) sin(phi)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as la

from .fock import (
    HilbertConfig,
    StateVector,
    annihilator,
    creator,
    expectation,
    mode_number,
)

__all__ = [
    "ClassicalField",
    "FringeScan",
    "beam_splitter",
    "phase_shifter",
    "mzi",
    "mzi_intensities",
    "classical_mzi",
    "classical_intensities",
    "fringe_scan",
    "format_float",
]


def format_float(x: float) -> str:
    """Fixed 17-significant-digit rendering used for all CSV bodies."""
    return f"{x:.17g}"


@dataclass(frozen=True)
class ClassicalField:
    """Two classical Rabi amplitudes entering (or leaving) the device."""

    omega_a: complex
    omega_b: complex

    def __post_init__(self):
        for v in (self.omega_a, self.omega_b):
            if not np.isfinite(complex(v)):
                raise ValueError("classical amplitudes must be finite")

    def intensities(self) -> tuple[float, float]:
        return abs(self.omega_a) ** 2, abs(self.omega_b) ** 2


@lru_cache(maxsize=32)
def _beam_splitter_block(cutoff: int) -> np.ndarray:
    """Dense beam-splitter unitary on the two-mode space (no atom)."""
    modes = HilbertConfig(mode_count=2, cutoff=cutoff, atom_levels=1)
    gen = (
        creator(modes, 0) @ annihilator(modes, 1)
        + creator(modes, 1) @ annihilator(modes, 0)
    )
    u = la.expm(-1j * (math.pi / 4) * gen.dense())
    u.flags.writeable = False
    return u


def _apply_mode_unitary(state: StateVector, u: np.ndarray) -> StateVector:
    """Apply a mode-space unitary at every atom level (atom untouched)."""
    cfg = state.config
    blocks = state.amplitudes.reshape(cfg.atom_levels, cfg.mode_dim)
    return StateVector(cfg, (blocks @ u.T).reshape(cfg.dim))


def beam_splitter(state: StateVector) -> StateVector:
    """Symmetric 50/50 beam splitter on modes A and B."""
    if state.config.mode_count != 2:
        raise ValueError("beam splitter acts on two-mode configurations")
    return _apply_mode_unitary(state, _beam_splitter_block(state.config.cutoff))


def phase_shifter(state: StateVector, phi: float) -> StateVector:
    """Multiply the amplitude of |m_A, m_B> by e^{i phi m_B}."""
    if state.config.mode_count != 2:
        raise ValueError("phase shifter acts on two-mode configurations")
    cfg = state.config
    idx = np.arange(cfg.dim)
    phase = np.exp(1j * phi * cfg.occupation_of(idx, 1))
    return StateVector(cfg, state.amplitudes * phase)


def mzi(state: StateVector, phi: float) -> StateVector:
    """Full interferometer: beam splitter, phase phi on arm B, beam splitter."""
    return beam_splitter(phase_shifter(beam_splitter(state), phi))


def mzi_intensities(state: StateVector, phi: float) -> tuple[float, float]:
    out = mzi(state, phi)
    cfg = state.config
    return (
        expectation(out, mode_number(cfg, 0)),
        expectation(out, mode_number(cfg, 1)),
    )


def classical_mzi(field: ClassicalField, phi: float) -> ClassicalField:
    """Classical amplitudes through the same device."""

    def split(a, b):
        return (a - 1j * b) / math.sqrt(2), (b - 1j * a) / math.sqrt(2)

    a, b = split(field.omega_a, field.omega_b)
    b = b * np.exp(1j * phi)
    a, b = split(a, b)
    return ClassicalField(a, b)


def classical_intensities(field: ClassicalField, phi: float) -> tuple[float, float]:
    return classical_mzi(field, phi).intensities()


@dataclass(frozen=True)
class FringeScan:
    """Output intensities of both arms over a grid of phase shifts."""

    phis: np.ndarray
    n_a: np.ndarray
    n_b: np.ndarray
    kind: str  # "quantum" | "classical"

    def __post_init__(self):
        for name in ("phis", "n_a", "n_b"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (len(self.phis) == len(self.n_a) == len(self.n_b)):
            raise ValueError("grid and intensity arrays must have equal length")

    @staticmethod
    def _visibility(values: np.ndarray) -> float:
        hi, lo = float(values.max()), float(values.min())
        if hi + lo <= 0.0:
            return 0.0
        return (hi - lo) / (hi + lo)

    @property
    def visibility_a(self) -> float:
        return self._visibility(self.n_a)

    @property
    def visibility_b(self) -> float:
        return self._visibility(self.n_b)

    def csv_body(self) -> str:
        lines = ["phi,nA,nB"]
        for p, a, b in zip(self.phis, self.n_a, self.n_b):
            lines.append(f"{format_float(p)},{format_float(a)},{format_float(b)}")
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "points": len(self.phis),
            "visibility_a": self.visibility_a,
            "visibility_b": self.visibility_b,
        }


def fringe_scan(source, phis) -> FringeScan:
    """Scan the interferometer output over a phase grid.

    `source` is either a StateVector (quantum pipeline) or a ClassicalField.
    """
    phis = np.asarray(phis, dtype=float)
    if phis.size == 0:
        raise ValueError("phase grid is empty")
    n_a = np.empty(phis.size)
    n_b = np.empty(phis.size)
    if isinstance(source, StateVector):
        kind = "quantum"
        for i, phi in enumerate(phis):
            n_a[i], n_b[i] = mzi_intensities(source, phi)
    elif isinstance(source, ClassicalField):
        kind = "classical"
        for i, phi in enumerate(phis):
            n_a[i], n_b[i] = classical_intensities(source, phi)
    else:
        raise TypeError(f"cannot scan {type(source).__name__}")
    return FringeScan(phis=phis, n_a=n_a, n_b=n_b, kind=kind)
