"""Constructors for the named field states and total-field moments.

Also home of the string state specs used by the command line:
"vacuum", "upsilon", "coherent:re,im;re,im", "psi:N:n", "slit-photon:dphi",
"chi:N:dphi".
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .collective import chi_state, collective_state
from .fock import (
    HilbertConfig,
    LinearOperator,
    StateVector,
    annihilator,
    creator,
    embed_field,
    expectation,
)

__all__ = [
    "CoherentSpec",
    "coherent",
    "upsilon",
    "single_photon_slit",
    "slit_coherent",
    "field_operator",
    "field_mean",
    "field_variance",
    "parse_state_spec",
    "StateSpecError",
    "parse_angle",
]


@dataclass(frozen=True)
class CoherentSpec:
    """Per-mode coherent amplitudes and the acceptable truncation weight."""

    alphas: tuple
    tolerance: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))


def _coherent_column(alpha: complex, cutoff: int) -> tuple[np.ndarray, float]:
    """Truncated single-mode coherent expansion and its discarded weight."""
    m = np.arange(cutoff + 1)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, cutoff + 1)))))
    if alpha == 0:
        col = np.zeros(cutoff + 1, dtype=complex)
        col[0] = 1.0
        return col, 0.0
    mag = np.exp(-abs(alpha) ** 2 / 2 + m * math.log(abs(alpha)) - log_fact / 2)
    phase = np.exp(1j * m * np.angle(alpha))
    col = mag * phase
    leak = max(0.0, 1.0 - float(np.sum(mag**2)))
    return col, leak


def coherent(config: HilbertConfig, spec, atom_level: int = 0) -> StateVector:
    """Product of per-mode coherent states, truncated and renormalized.

    Warns when any per-mode discarded weight exceeds the spec tolerance;
    the total discarded weight is recorded on the returned state.
    """
    if not isinstance(spec, CoherentSpec):
        spec = CoherentSpec(tuple(spec))
    if len(spec.alphas) != config.mode_count:
        raise ValueError(
            f"{len(spec.alphas)} amplitudes given for {config.mode_count} modes"
        )
    columns = []
    total_loss = 0.0
    for j, alpha in enumerate(spec.alphas):
        col, leak = _coherent_column(alpha, config.cutoff)
        if leak > spec.tolerance:
            warnings.warn(
                f"mode {j}: coherent truncation discards weight {leak:.3e} "
                f"(tolerance {spec.tolerance:.1e}); raise the cutoff",
                stacklevel=2,
            )
        total_loss += leak
        columns.append(col)
    field = reduce(np.kron, columns)
    field = field / np.linalg.norm(field)
    return embed_field(config, field, atom_level).with_loss(total_loss)


def upsilon(config: HilbertConfig, atom_level: int = 0) -> StateVector:
    """The product state (|0>+|1>)_A (|0>-|1>)_B / 2.

    Zero mean total field and vacuum-level variance, yet a finite bright
    component: the standard counterexample to fluctuation-based intuition.
    """
    if config.mode_count != 2:
        raise ValueError("upsilon is a two-mode state")
    if config.cutoff < 1:
        raise ValueError("upsilon needs cutoff >= 1")
    col_a = np.zeros(config.base, dtype=complex)
    col_b = np.zeros(config.base, dtype=complex)
    col_a[0] = col_a[1] = 1.0 / math.sqrt(2)
    col_b[0] = 1.0 / math.sqrt(2)
    col_b[1] = -1.0 / math.sqrt(2)
    return embed_field(config, np.kron(col_a, col_b), atom_level)


def single_photon_slit(config: HilbertConfig, dphi: float, atom_level: int = 0) -> StateVector:
    """One photon behind a double slit with path phase difference dphi:
    cos(dphi/2)|psi_1^1> - i sin(dphi/2)|psi_0^1>."""
    bright = collective_state(config, (1, 0), atom_level=atom_level)
    dark = collective_state(config, (0, 1), atom_level=atom_level)
    amps = (
        math.cos(dphi / 2) * bright.amplitudes
        - 1j * math.sin(dphi / 2) * dark.amplitudes
    )
    return StateVector(config, amps)


def slit_coherent(
    config: HilbertConfig,
    alpha: complex,
    kr1: float,
    kr2: float,
    atom_level: int = 0,
) -> StateVector:
    """Coherent field reaching the detector through two paths:
    amplitudes (e^{i kr1} alpha, e^{i kr2} alpha)."""
    spec = CoherentSpec((alpha * np.exp(1j * kr1), alpha * np.exp(1j * kr2)))
    return coherent(config, spec, atom_level)


def field_operator(config: HilbertConfig) -> LinearOperator:
    """Dimensionless total electric field at the emitter, sum_j (a_j + a_j^dag)."""
    op = None
    for j in range(config.mode_count):
        term = annihilator(config, j) + creator(config, j)
        op = term if op is None else op + term
    return LinearOperator(op.config, op.matrix, hermitian=True)


def field_mean(state: StateVector) -> float:
    return expectation(state, field_operator(state.config))


def field_variance(state: StateVector) -> float:
    e_op = field_operator(state.config)
    mean = expectation(state, e_op)
    second = expectation(state, LinearOperator(state.config, e_op.matrix @ e_op.matrix, True))
    return second - mean**2


class StateSpecError(ValueError):
    """Raised for malformed state spec strings."""


_PI_EXPR = re.compile(r"^(?P<num>[+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+\.?\d*))?$")


def parse_angle(text: str) -> float:
    """Parse a float or a pi expression ('pi', '2pi', 'pi/2', '-3*pi/4')."""
    text = _normalize_minus(text.strip().lower())
    match = _PI_EXPR.match(text)
    if match:
        num = match.group("num")
        factor = float(num) if num not in ("", "+", "-") else float(num + "1")
        den = float(match.group("den")) if match.group("den") else 1.0
        return factor * math.pi / den
    try:
        return float(text)
    except ValueError as exc:
        raise StateSpecError(f"cannot parse angle {text!r}") from exc


def _normalize_minus(text: str) -> str:
    return text.replace("−", "-")  # unicode minus from copied formulas


def spec_mode_count(spec: str) -> int:
    """Number of modes a state spec implies (2 for everything but coherent)."""
    spec = spec.strip()
    if spec.startswith("coherent:"):
        return len(spec[len("coherent:") :].split(";"))
    return 2


def parse_state_spec(
    config: HilbertConfig,
    spec: str,
    atom_level: int = 0,
    coherent_tolerance: float | None = None,
) -> StateVector:
    """Build a state from its command-line spec string."""
    spec = _normalize_minus(spec.strip())
    try:
        if spec == "vacuum":
            from .fock import vacuum

            return vacuum(config, atom_level)
        if spec == "upsilon":
            return upsilon(config, atom_level)
        if spec.startswith("coherent:"):
            alphas = []
            for part in spec[len("coherent:") :].split(";"):
                re_str, im_str = part.split(",")
                alphas.append(complex(float(re_str), float(im_str)))
            if coherent_tolerance is None:
                cspec = CoherentSpec(tuple(alphas))
            else:
                cspec = CoherentSpec(tuple(alphas), tolerance=coherent_tolerance)
            return coherent(config, cspec, atom_level)
        if spec.startswith("psi:"):
            _, total, bright = spec.split(":")
            from .collective import CollectiveIndex

            idx = CollectiveIndex.two_mode(int(total), int(bright))
            return collective_state(config, idx, atom_level=atom_level)
        if spec.startswith("slit-photon:"):
            return single_photon_slit(config, parse_angle(spec.split(":", 1)[1]), atom_level)
        if spec.startswith("chi:"):
            _, total, dphi = spec.split(":")
            return chi_state(config, int(total), parse_angle(dphi), atom_level)
    except StateSpecError:
        raise
    except (ValueError, KeyError) as exc:
        raise StateSpecError(f"malformed state spec {spec!r}: {exc}") from exc
    raise StateSpecError(f"unknown state spec {spec!r}")
