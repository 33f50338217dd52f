"""Unit conversions between laboratory and atomic units.

All internal math in this package is done in Hartree atomic units
(hbar = e = m_e = 1): lengths in Bohr radii (a0), energies in Hartree,
momenta in 1/a0.  Laboratory quantities enter only at the configuration
boundary, in micrometres and electronvolts.
"""

import math

# CODATA 2018
BOHR_RADIUS_M = 5.29177210903e-11
HARTREE_EV = 27.211386245988

A0_PER_UM = 1.0e-6 / BOHR_RADIUS_M


def um_to_a0(length_um):
    """Micrometres to Bohr radii."""
    return length_um * A0_PER_UM


def a0_to_um(length_a0):
    """Bohr radii to micrometres."""
    return length_a0 / A0_PER_UM


def ev_to_hartree(energy_ev):
    """Electronvolts to Hartree."""
    return energy_ev / HARTREE_EV


def hartree_to_ev(energy_ha):
    """Hartree to electronvolts."""
    return energy_ha * HARTREE_EV


def kinetic_energy_to_momentum(energy_ha):
    """Momentum k = sqrt(2 E) of a free electron, atomic units.

    Raises ValueError for negative kinetic energy.
    """
    if energy_ha < 0.0:
        raise ValueError(f"kinetic energy must be non-negative, got {energy_ha} Ha")
    return math.sqrt(2.0 * energy_ha)


def momentum_to_kinetic_energy(k_au):
    """Inverse of :func:`kinetic_energy_to_momentum`; sign of k is irrelevant."""
    return 0.5 * k_au * k_au
