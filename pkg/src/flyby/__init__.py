"""Simulation of Rydberg-state changes driven by a guided electron fly-by.

A charged particle guided past a trapped alkali Rydberg atom couples to the
atom's dipole and redistributes population among nearby |n l m> states.
This package computes that redistribution three ways and keeps the routes
independent so they can check each other:

* exact time-dependent propagation over a truncated quantum-defect basis
  (:mod:`flyby.propagator`),
* closed-form weak-coupling probabilities built on modified Bessel
  functions (:mod:`flyby.weakfield`),
* analytic collective excitation amplitudes for a chain of interacting
  atoms (:mod:`flyby.manybody`).

:mod:`flyby.scanner` drives parameter scans and kinetic-energy inversions
from plain-text configs; the ``flyby`` console script exposes them.
"""

from .atomic import (
    BasisSet,
    DipoleTable,
    QuantumDefectModel,
    RydbergState,
    build_basis,
    builtin_model,
    dipole_table,
    energy,
    load_defect_model,
    position_matrices,
)
from .coupling import (
    DimensionlessParams,
    FlybyGeometry,
    dimensionless_params,
    eta,
    interaction_matrix,
    lambda_sign,
    momentum_representations,
    reference_wire_distance,
    transition_dipole,
    validity_report,
)
from .manybody import (
    ChainConfig,
    ExcitonLabel,
    build_vdd_matrix,
    collective_probability,
    exciton_energy,
    exciton_state,
    total_collective_probability,
)
from .propagator import (
    AmplitudeVector,
    PropagationConfig,
    initial_amplitudes,
    polarization,
    populations,
    propagate,
)
from .weakfield import (
    WeakCouplingChannel,
    analytic_probability,
    bessel_k,
    driving_function,
    find_peak,
    weak_ode_solution,
)

__version__ = "0.1.0"
