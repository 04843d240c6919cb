"""brightdark: collective bright/dark states of multimode quantized light
coupled to a single emitter.

Truncated Fock-space toolkit, Dicke-like collective bosonic basis,
Mach-Zehnder interferometry for quantum states and classical fields,
Lindblad/semiclassical dynamics, and dispersive controlled-phase gates.
"""

__version__ = "0.1.0"

from .fock import (
    HilbertConfig,
    StateVector,
    LinearOperator,
    annihilator,
    creator,
    atom_operator,
    basis_state,
    vacuum,
    inner,
    expectation,
    fidelity,
    suggest_cutoff,
)
from .collective import (
    OrthogonalMixer,
    CollectiveIndex,
    CollectiveDecomposition,
    build_mixer,
    two_mode_mixer,
    coefficient,
    collective_state,
    decompose,
    chi_state,
)
from .states import (
    CoherentSpec,
    coherent,
    upsilon,
    single_photon_slit,
    slit_coherent,
    field_mean,
    field_variance,
    parse_state_spec,
)
from .interferometer import (
    ClassicalField,
    FringeScan,
    beam_splitter,
    phase_shifter,
    mzi,
    mzi_intensities,
    classical_mzi,
    classical_intensities,
    fringe_scan,
)
from .dynamics import (
    SystemParams,
    TimeSeries,
    DensityOperator,
    IntegratorError,
    hamiltonian,
    evolve_unitary,
    lindblad_evolve,
    semiclassical_evolve,
    observables,
)
from .gates import (
    GateParams,
    effective_cphase,
    cphase_truth_table,
    mode_rotation,
    raman_rotation,
    validate_effective,
)

__all__ = [name for name in dir() if not name.startswith("_")]
