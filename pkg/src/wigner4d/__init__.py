"""wigner4d: spectral splitting solver for 4D phase-space two-level dynamics.

The package simulates 2x2 Wigner-matrix transport for separable Hamiltonians
H = Lambda(p) + U(x) on a uniform 4D grid, with closed-form split propagators
in mixed Fourier space, BGK relaxation, inflow boundaries, first-order
semiclassical and classical scalar modes, a mean-field dipole pair mode, and
a declarative scenario layer with six builtin setups.
"""

from .constants import ELECTRON_MASS, HBAR, KB
from .grid import (FrensleyReport, GridSpec, PhaseSpaceGrid, build_grid,
                   frensley_report)
from .hamiltonian import (HamiltonianSymbol, PauliSymbol, build_bdg,
                          build_graphene, build_kp, build_rashba,
                          build_tabulated, free_hamiltonian, momentum_symbol,
                          position_symbol)
from .meanfield import DipolePair, coupled_step, dipole_potential, mean_position
from .observables import (ObservableSeries, TopologicalCharge,
                          band_population, band_project, bloch_texture,
                          density, mean_values, momentum_distribution,
                          read_series, spin_polarization, topological_charge,
                          trap_fidelity, write_series)
from .pauli import (SpectralPair, bloch_vector, decompose, reconstruct,
                    spectral, unitary_of)
from .potentials import Potential
from .propagator import (InflowBoundary, Relaxation, StepContext, apply_inflow,
                         field_step, moyal_field_oracle, moyal_stream_oracle,
                         relax_step, streaming_step, strang_step)
from .semiclassical import (SemiclassicalContext, interband_coherence,
                            liouville_step, sc_field_step, sc_streaming_step,
                            sc_strang_step)
from .states import (EquilibriumSpec, WignerState, equilibrium, gaussian,
                     gaussian_band, gaussian_pair, shifted, thermal_trapped)
from .storage import (read_header, read_payload, read_snapshot,
                      write_field, write_snapshot)
from .scenario import (ConfigError, RunResult, builtin, desk_variant, load,
                       run, save, validate)

__version__ = "0.1.0"
