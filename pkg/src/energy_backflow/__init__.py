"""Energy backflow and information backflow of a qubit in an Ohmic bath.

Second-order time-convolutionless dynamics of a qubit coupled to a bosonic
bath with an exponentially cut-off Ohmic spectral density, the energy
exchanged with the bath, and the BLP non-Markovianity measure.
"""
from .bath import (BathParams, dissipation_kernel, effective_spectral_density,
                   kernel_time_derivatives, markov_occupation, markov_rate,
                   noise_kernel, resonance_curve, resonance_deviation,
                   spectral_density)
from .energetics import (BackflowResult, FixedEqualTemps, FlowTrace, ScanTemps,
                         backflow_measure, energy_flow)
from .errors import (BackflowError, ConvergenceError, DomainError, InputError,
                     NumericsError, PoleError, PreconditionError)
from .nonmarkov import (BLPResult, StatePair, blp_closed_form, blp_measure,
                        trace_distance)
from .specfun import bose_occupation, coth, csch, trigamma
from .sweep import (GridSpec, HeatmapGrid, sweep_backflow, sweep_blp,
                    sweep_resonance_deviation)
from .tcl2 import (Coefficients, QubitState, SystemParams, TimeGrid,
                   Trajectory, accumulate_coefficients, born_markov_population,
                   markov_limit_coefficients, propagate)

__version__ = "0.1.0"
