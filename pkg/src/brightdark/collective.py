"""Dicke-like collective basis for bosonic modes.

The basis elements are Fock states of orthogonally mixed mode operators
c_j = sum_k O_jk a_k: applying the mixed creators to the shared vacuum gives

    |psi_{n1..nM}> = prod_j (c_j^dag)^{n_j} / sqrt(n_j!) |0..0>.

Row 1 of the mixer is the symmetric ("bright") combination, the only one
that couples to the emitter; occupation n1 = 0 defines the dark sector and
n1 = N the maximally coupled sector. For two modes the conventional pair is
c = (a+b)/sqrt(2), d = (-a+b)/sqrt(2), and the shorthand index n means n1.

The generator construction above is the ground truth; the closed-form
coefficient (`coefficient`) is kept as an independently computed quantity
and cross-validated in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .fock import (
    HilbertConfig,
    LinearOperator,
    StateVector,
    creator,
    inner,
    vacuum,
)

__all__ = [
    "OrthogonalMixer",
    "build_mixer",
    "two_mode_mixer",
    "default_mixer",
    "CollectiveIndex",
    "CollectiveDecomposition",
    "coefficient",
    "collective_state",
    "decompose",
    "chi_state",
    "collective_creator",
]

_ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class OrthogonalMixer:
    """Real orthogonal M x M matrix defining collective mode operators.

    kind records the construction (sylvester | helmert). row_signs records
    per-row signs applied on top of the canonical construction; flipping a
    row leaves the collective subspaces unchanged, so either convention can
    be compared against.
    """

    matrix: np.ndarray
    kind: str
    row_signs: tuple[int, ...] = ()

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).copy()
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"mixer must be square, got shape {m.shape}")
        dev = np.abs(m @ m.T - np.eye(m.shape[0])).max()
        if dev >= _ORTHO_TOL:
            raise ValueError(f"mixer is not orthogonal (deviation {dev:.3e})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if not self.row_signs:
            object.__setattr__(self, "row_signs", (1,) * m.shape[0])
        elif len(self.row_signs) != m.shape[0]:
            raise ValueError("row_signs length must match the mixer size")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def canonical_matrix(self) -> np.ndarray:
        """The matrix with recorded row signs undone."""
        return np.diag(self.row_signs) @ self.matrix

    def flip_row(self, row: int) -> "OrthogonalMixer":
        m = self.matrix.copy()
        m[row] = -m[row]
        signs = list(self.row_signs)
        signs[row] = -signs[row]
        return OrthogonalMixer(m, self.kind, tuple(signs))


def build_mixer(size: int, kind: str = "sylvester") -> OrthogonalMixer:
    """Construct an orthogonal mixer.

    sylvester: rows of the Sylvester-Hadamard matrix H_{2^k} divided by
    sqrt(M); row 1 is all ones, row 2 alternates (+,-,...). Requires M a
    power of two. Remaining rows follow the recursive [[H,H],[H,-H]] order.

    helmert: triangular construction valid for any M >= 2; row 1 is all
    ones/sqrt(M), row j >= 2 is (1,..,1,1-j,0,..,0)/sqrt(j(j-1)).
    """
    if kind == "sylvester":
        if size < 2 or size & (size - 1):
            raise ValueError(
                f"sylvester mixer needs M a power of two >= 2, got {size}"
            )
        h = np.array([[1.0]])
        while h.shape[0] < size:
            h = np.block([[h, h], [h, -h]])
        return OrthogonalMixer(h / math.sqrt(size), "sylvester")
    if kind == "helmert":
        if size < 2:
            raise ValueError(f"helmert mixer needs M >= 2, got {size}")
        m = np.zeros((size, size))
        m[0] = 1.0 / math.sqrt(size)
        for j in range(2, size + 1):
            norm = math.sqrt(j * (j - 1))
            m[j - 1, : j - 1] = 1.0 / norm
            m[j - 1, j - 1] = (1 - j) / norm
        return OrthogonalMixer(m, "helmert")
    raise ValueError(f"unknown mixer kind {kind!r}")


def two_mode_mixer() -> OrthogonalMixer:
    """The conventional two-mode pair c = (a+b)/sqrt2, d = (-a+b)/sqrt2.

    This is the sylvester mixer with row 2 sign-flipped; the flip is
    recorded in row_signs.
    """
    return build_mixer(2, "sylvester").flip_row(1)


def default_mixer(size: int) -> OrthogonalMixer:
    if size == 2:
        return two_mode_mixer()
    if size & (size - 1) == 0:
        return build_mixer(size, "sylvester")
    return build_mixer(size, "helmert")


@dataclass(frozen=True)
class CollectiveIndex:
    """Occupations (n1, ..., nM) of the collective modes; N = sum."""

    occupations: tuple[int, ...]

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupations)
        if not occ:
            raise ValueError("need at least one occupation")
        if any(n < 0 for n in occ):
            raise ValueError(f"negative occupation in {occ}")
        object.__setattr__(self, "occupations", occ)

    @classmethod
    def two_mode(cls, total: int, bright: int) -> "CollectiveIndex":
        if not 0 <= bright <= total:
            raise ValueError(f"need 0 <= n <= N, got n={bright}, N={total}")
        return cls((bright, total - bright))

    @property
    def total(self) -> int:
        return sum(self.occupations)

    @property
    def bright(self) -> int:
        return self.occupations[0]

    def sector(self) -> str:
        """dark (n1=0, vacuum included), mss (n1=N>=1) or intermediate."""
        if self.bright == 0:
            return "dark"
        if self.bright == self.total:
            return "mss"
        return "intermediate"


@lru_cache(maxsize=None)
def coefficient(total: int, bright: int, m: int) -> float:
    """Two-mode expansion coefficient of |psi_n^N> on the Fock ket |m, N-m>.

    Closed form (alternating q-sum); exact rational arithmetic inside the
    sum, one square root at the end. The vector over m = 0..N is unit-norm
    and the sign convention follows c = (a+b)/sqrt2, d = (-a+b)/sqrt2.
    """
    n, nn = bright, total
    if not 0 <= n <= nn:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={nn}")
    if not 0 <= m <= nn:
        raise ValueError(f"need 0 <= m <= N, got m={m}, N={nn}")
    q_min = max(0, n + m - nn)
    q_max = min(m, n)
    s = Fraction(0)
    for q in range(q_min, q_max + 1):
        term = Fraction(
            (-1) ** (m - q),
            math.factorial(q)
            * math.factorial(n - q)
            * math.factorial(m - q)
            * math.factorial(nn - n - m + q),
        )
        s += term
    if s == 0:
        return 0.0
    weight = Fraction(
        math.factorial(n)
        * math.factorial(nn - n)
        * math.factorial(m)
        * math.factorial(nn - m),
        2**nn,
    )
    mag = math.sqrt(float(weight * s * s))
    return mag if s > 0 else -mag


def collective_creator(config: HilbertConfig, mixer: OrthogonalMixer, row: int) -> LinearOperator:
    """Creator of the collective mode defined by mixer row `row`."""
    if mixer.size != config.mode_count:
        raise ValueError(
            f"mixer size {mixer.size} does not match mode count {config.mode_count}"
        )
    op = None
    for k in range(config.mode_count):
        w = mixer.matrix[row, k]
        if w == 0.0:
            continue
        term = w * creator(config, k)
        op = term if op is None else op + term
    return op


def collective_state(
    config: HilbertConfig,
    index,
    mixer: OrthogonalMixer | None = None,
    atom_level: int = 0,
) -> StateVector:
    """Build |psi_index> by applying mixed creators to the vacuum.

    Requires N <= cutoff so no creator monomial can cross the per-mode
    truncation edge; the result is then exactly unit norm.
    """
    if not isinstance(index, CollectiveIndex):
        index = CollectiveIndex(tuple(index))
    if mixer is None:
        mixer = default_mixer(config.mode_count)
    if len(index.occupations) != config.mode_count:
        raise ValueError(
            f"index has {len(index.occupations)} occupations for {config.mode_count} modes"
        )
    if index.total > config.cutoff:
        raise ValueError(
            f"total photon number {index.total} exceeds cutoff {config.cutoff}"
        )
    amps = vacuum(config, atom_level).amplitudes
    for row, n_j in enumerate(index.occupations):
        if n_j == 0:
            continue
        cdag = collective_creator(config, mixer, row).matrix
        for _ in range(n_j):
            amps = cdag @ amps
        amps = amps / math.sqrt(math.factorial(n_j))
    return StateVector(config, amps)


@dataclass(frozen=True)
class CollectiveDecomposition:
    """Amplitudes of a state on the collective basis, plus sector weights.

    entries maps CollectiveIndex -> complex amplitude in enumeration order
    (ascending N, then lexicographic occupations). residual is the squared
    norm outside the enumerated N <= cutoff sectors. The vacuum counts as
    dark: it is annihilated by the coupling just like every n1 = 0 state.
    """

    entries: dict
    residual: float
    dark_weight: float
    mss_weight: float
    intermediate_weight: float

    def amplitude(self, occupations) -> complex:
        return self.entries.get(CollectiveIndex(tuple(occupations)), 0.0 + 0.0j)

    def weight(self, sector: str) -> float:
        return {
            "dark": self.dark_weight,
            "mss": self.mss_weight,
            "intermediate": self.intermediate_weight,
        }[sector]

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "N": idx.total,
                    "n": list(idx.occupations),
                    "re": amp.real,
                    "im": amp.imag,
                }
                for idx, amp in self.entries.items()
            ],
            "residual": self.residual,
            "dark_weight": self.dark_weight,
            "mss_weight": self.mss_weight,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("indent", 2)
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)


def _enumerate_indices(modes: int, max_total: int):
    """Ascending total N, then lexicographic (n1, ..., nM)."""

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for total in range(max_total + 1):
        for occ in sorted(compositions(total, modes)):
            yield CollectiveIndex(occ)


def decompose(
    state: StateVector,
    mixer: OrthogonalMixer | None = None,
    max_total: int | None = None,
) -> CollectiveDecomposition:
    """Project a state onto every collective basis element with N <= cutoff.

    The input is expected normalized; the residual absorbs weight in photon
    sectors above the enumeration (no error is raised for it).
    """
    config = state.config
    if mixer is None:
        mixer = default_mixer(config.mode_count)
    if max_total is None:
        max_total = config.cutoff
    max_total = min(max_total, config.cutoff)
    entries: dict[CollectiveIndex, complex] = {}
    weights = {"dark": 0.0, "mss": 0.0, "intermediate": 0.0}
    covered = 0.0
    for idx in _enumerate_indices(config.mode_count, max_total):
        basis_vec = collective_state(config, idx, mixer)
        amp = inner(basis_vec, state)
        entries[idx] = amp
        w = abs(amp) ** 2
        covered += w
        weights[idx.sector()] += w
    residual = max(state.norm() ** 2 - covered, 0.0)
    return CollectiveDecomposition(
        entries=entries,
        residual=residual,
        dark_weight=weights["dark"],
        mss_weight=weights["mss"],
        intermediate_weight=weights["intermediate"],
    )


def chi_state(config: HilbertConfig, total: int, dphi: float, atom_level: int = 0) -> StateVector:
    """Phase-parametrized N-photon two-mode state interpolating MSS <-> PDS.

    Amplitude on |m, N-m> is sqrt(N!/2^N) e^{i m dphi} / sqrt(m!(N-m)!):
    chi(0) is the fully bright state, chi(pi) the fully dark one, and a
    two-slit coherent field with path phases (kr1, kr2) expands exactly on
    chi(k(r1-r2)) sectors.
    """
    if config.mode_count != 2:
        raise ValueError("chi_state is defined for two-mode configurations")
    if total > config.cutoff:
        raise ValueError(f"total photon number {total} exceeds cutoff {config.cutoff}")
    amps = np.zeros(config.dim, dtype=complex)
    pref = math.sqrt(math.factorial(total) / 2.0**total)
    for m in range(total + 1):
        amp = (
            pref
            * np.exp(1j * m * dphi)
            / math.sqrt(math.factorial(m) * math.factorial(total - m))
        )
        amps[config.flatten((m, total - m), atom_level)] = amp
    return StateVector(config, amps)
