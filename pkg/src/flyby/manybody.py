"""Collective single-excitation states of a chain of interacting atoms.

N atoms sit parallel to the wire, spaced by R_at.  Within the resonant
nearest-neighbour dipole-dipole approximation and at most one p excitation,
the interaction over the 2N single-excitation states {|p+>_i, |p->_i} has
nearest-neighbour 2x2 blocks  -mu^2/(4 R_at^3) * [[1, -3], [-3, 1]].  Its
eigenvectors are sine-wave excitons |m, chi> whose excitation probability
by a passing electron factorizes into the single-atom Bessel factor and a
chain interference factor; the sum over all collective states is exactly N
times the single-atom total.

Only the n' = n channel is implemented: cross terms between different n'
would break the exciton diagonalization, and the collective analysis is
formulated per channel.
"""

import math
from dataclasses import dataclass

import numpy as np

from .coupling import gap, transition_dipole
from .errors import DegenerateGapError
from .weakfield import _k0_k1

#: |sin(half-angle)| below which the Dirichlet ratio switches to its
#: derivative form; avoids catastrophic cancellation at the removable
#: singularities that produce the excitation-selectivity zeros.
_DIRICHLET_EPS = 1e-6


@dataclass(frozen=True)
class ChainConfig:
    """Chain of ``n_atoms`` atoms: spacing, wire distance and the s-p channel."""

    n_atoms: int
    r_at: float  # interatomic spacing, a0
    d: float     # wire-atom distance, a0
    n: int
    n_prime: int

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError(f"need at least one atom, got {self.n_atoms}")
        if self.r_at <= 0.0:
            raise ValueError(f"spacing must be positive, got {self.r_at} a0")
        if self.d <= 0.0:
            raise ValueError(f"wire distance must be positive, got {self.d} a0")


def chain_validity(chain, model):
    """Margin of the weak-dipole condition mu^2 / R_at^3 < 0.1 |gap|.

    Returns (ok, margin) with margin > 1 meaning satisfied.
    """
    mu = transition_dipole(model, chain.n, chain.n_prime)
    g = abs(gap(model, chain.n, chain.n_prime))
    if g == 0.0:
        raise DegenerateGapError(f"degenerate s-p channel for n={chain.n}, n'={chain.n_prime}")
    shift = mu * mu / chain.r_at**3
    margin = 0.1 * g / shift if shift > 0.0 else math.inf
    return margin > 1.0, margin


@dataclass(frozen=True)
class ExcitonLabel:
    """Collective eigenstate label: mode number m and internal parity chi."""

    m: int
    chi: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"mode number must be >= 1, got {self.m}")
        if self.chi not in (-1, 1):
            raise ValueError(f"chi must be +-1, got {self.chi}")


def _site_index(site, sign):
    """Index of |p_sign>_site in the 2N basis: sites major, + before -."""
    return 2 * site + (0 if sign > 0 else 1)


def build_vdd_matrix(chain, table):
    """Nearest-neighbour dipole-dipole matrix over the 2N-dimensional basis.

    The channel dipole mu is read off the table (the <ns| x+iy |n'p-> entry),
    so the same numbers feed the single-atom and collective calculations.
    """
    basis = table.basis
    mu = table.mu[
        basis.index_of[_channel_s_state(chain, basis)],
        basis.index_of[_channel_p_state(chain, basis)],
    ].real
    n = chain.n_atoms
    v = np.zeros((2 * n, 2 * n))
    amp = -mu * mu / (4.0 * chain.r_at**3)
    block = amp * np.array([[1.0, -3.0], [-3.0, 1.0]])
    for i in range(n - 1):
        for a, sa in enumerate((1, -1)):
            for b, sb in enumerate((1, -1)):
                v[_site_index(i, sa), _site_index(i + 1, sb)] = block[a, b]
                v[_site_index(i + 1, sb), _site_index(i, sa)] = block[a, b]
    return v


def _channel_s_state(chain, basis):
    for s in basis.states:
        if (s.n, s.l, s.m) == (chain.n, 0, 0):
            return s
    raise KeyError(f"basis has no {chain.n}s state")


def _channel_p_state(chain, basis):
    for s in basis.states:
        if (s.n, s.l, s.m) == (chain.n_prime, 1, -1):
            return s
    raise KeyError(f"basis has no {chain.n_prime}p(m=-1) state")


def exciton_state(label, n_atoms):
    """Real coefficient vector of |m, chi> over the 2N single-excitation basis."""
    if label.m > n_atoms:
        raise ValueError(f"mode {label.m} does not exist for {n_atoms} atoms")
    vec = np.zeros(2 * n_atoms)
    site_amp = math.sqrt(2.0 / (n_atoms + 1))
    for j in range(1, n_atoms + 1):
        env = site_amp * math.sin(label.m * j * math.pi / (n_atoms + 1)) / math.sqrt(2.0)
        vec[_site_index(j - 1, 1)] = env
        vec[_site_index(j - 1, -1)] = label.chi * env
    return vec


def exciton_energy(label, chain, model):
    """Eigenvalue of the collective state in Hartree.

    gap(n'p) - (1 - 3 chi) (mu^2 / 2 R_at^3) cos(m pi / (N+1)); the chi=+1
    branch therefore shifts by +(mu^2/R_at^3) cos(...), the chi=-1 branch
    by -2x that amount with opposite sign pattern across m.
    """
    if label.m > chain.n_atoms:
        raise ValueError(f"mode {label.m} does not exist for {chain.n_atoms} atoms")
    mu = transition_dipole(model, chain.n, chain.n_prime)
    g = gap(model, chain.n, chain.n_prime)
    shift = (1.0 - 3.0 * label.chi) * mu * mu / (2.0 * chain.r_at**3)
    return g - shift * math.cos(label.m * math.pi / (chain.n_atoms + 1))


def _dirichlet_ratio(theta, n_atoms):
    """sin(N theta / 2) / sin(theta / 2) with its removable singularities filled.

    Near sin(theta/2) = 0 the ratio tends to +-N; the derivative quotient
    N cos(N theta / 2) / cos(theta / 2) is smooth there and agrees with the
    ratio to O(eps^2).
    """
    s = math.sin(0.5 * theta)
    if abs(s) < _DIRICHLET_EPS:
        return n_atoms * math.cos(0.5 * n_atoms * theta) / math.cos(0.5 * theta)
    return math.sin(0.5 * n_atoms * theta) / s


def collective_probability(label, chain, kappa, eta, lam):
    """Excitation probability of the collective state |m, chi>.

    Valid for an electron travelling toward positive X (kappa > 0), kinetic
    energy well above the gap, and a weak dipole-dipole shift.  Negative
    kappa is outside the stated domain and rejected rather than
    extrapolated.
    """
    if kappa <= 0.0:
        raise ValueError(f"collective probabilities are defined for kappa > 0, got {kappa}")
    if label.m > chain.n_atoms:
        raise ValueError(f"mode {label.m} does not exist for {chain.n_atoms} atoms")
    n = chain.n_atoms
    k0, k1 = _k0_k1(1.0 / kappa)
    bessel_factor = k1 * k1 if label.chi == -1 else k0 * k0
    phase = lam * chain.r_at / (kappa * chain.d)
    alpha = label.m * math.pi / (n + 1) + phase
    beta = label.m * math.pi / (n + 1) - phase
    interference = (
        _dirichlet_ratio(alpha, n)
        + (-1.0) ** (label.m + 1) * _dirichlet_ratio(beta, n)
    )
    return (4.0 * eta**2 / (n + 1)) / kappa**4 * bessel_factor * interference**2


def total_collective_probability(chain, kappa, eta):
    """Summed probability over all 2N collective states.

    Closed form 8 N eta^2 kappa^-4 [K0^2 + K1^2](1/kappa): exactly N times
    the single-atom p+ plus p- total, independent of the chain geometry.
    """
    if kappa <= 0.0:
        raise ValueError(f"collective probabilities are defined for kappa > 0, got {kappa}")
    k0, k1 = _k0_k1(1.0 / kappa)
    return 8.0 * chain.n_atoms * eta**2 / kappa**4 * (k0 * k0 + k1 * k1)
