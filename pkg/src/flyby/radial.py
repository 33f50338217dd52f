"""Radial wavefunctions of quantum-defect states by Numerov integration.

States with effective quantum number n* (generally non-integer) are bound
solutions of the pure Coulomb potential -1/r at energy -1/(2 n*^2).  The
reduced function u(r) = r R(r) is integrated inward, from far outside the
classical outer turning point toward the core, where the inner boundary is
cut off at half the classical inner turning point, before the irregular
solution can contaminate the result.

The integration runs on a uniform mesh in x = sqrt(r).  Writing
y(x) = u(x^2) / sqrt(x) turns the radial equation into y'' = W(x) y with

    W(x) = (3/4 + 4 l(l+1)) / x^2 - 8 + 4 x^2 / n*^2,

which Numerov handles at O(h^4) global accuracy while the sqrt mesh
concentrates points at small r where the wavefunction oscillates fastest.
All meshes share the global grid x_k = k * dx, so overlap integrals between
two solutions reduce to an index intersection.  Norms and matrix elements
are evaluated by Simpson's rule on the uniform x mesh ( dr = 2 x dx ), so
quadrature error stays below the Numerov error itself.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from .errors import ResolutionError, SelectionRuleError

DEFAULT_GRID_STEP = 0.01   # dx on the sqrt(r) mesh, in sqrt(a0)
_INNER_FLOOR = 0.05        # a0; used when the classical cutoff reaches zero (s states)


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """Sampled reduced radial function u(r) = r R(r), normalized to unit norm."""

    n_eff: float
    l: int
    r: np.ndarray
    u: np.ndarray
    i_start: int      # index of the first mesh point on the global x grid
    dx: float

    @property
    def norm(self):
        x = np.sqrt(self.r)
        return float(simpson(self.u * self.u * 2.0 * x, dx=self.dx))


def classical_inner_turning_point(n_eff, l):
    """Inner turning point of the Coulomb orbit with energy -1/(2 n*^2).

    Zero for s states, which reach the origin classically.
    """
    arg = 1.0 - l * (l + 1) / n_eff**2
    if arg <= 0.0:
        # centrifugal barrier exceeds the binding-energy scale; fall back to
        # the circular-orbit radius
        return l * (l + 1) / 2.0
    return n_eff**2 * (1.0 - np.sqrt(arg))


def default_outer_limit(n_eff):
    """Outer mesh boundary, well past the outer turning point at 2 n*^2."""
    return 2.0 * n_eff * (n_eff + 15.0)


def radial_wavefunction(n_eff, l, dx=DEFAULT_GRID_STEP, r_inner=None, r_outer=None):
    """Solve for u(r) = r R(r) at energy -1/(2 n_eff^2), unit-normalized.

    Parameters
    ----------
    n_eff : float
        Effective quantum number, > 0.
    l : int
        Orbital angular momentum.
    dx : float
        Step of the sqrt(r) mesh.
    r_inner, r_outer : float, optional
        Mesh bounds in a0.  Defaults: half the classical inner turning
        point (with a small floor for s states) and 2 n*(n* + 15).

    Returns
    -------
    RadialSolution
        With the leading (outermost) lobe phased positive.

    Raises
    ------
    ValueError
        For non-positive n_eff or a mesh that cannot hold a bound state.
    ResolutionError
        If the mesh is too coarse to resolve the oscillation or the norm
        fails to converge.
    """
    if n_eff <= 0.0:
        raise ValueError(f"effective quantum number must be positive, got {n_eff}")
    if r_inner is None:
        r_inner = max(0.5 * classical_inner_turning_point(n_eff, l), _INNER_FLOOR)
    if r_outer is None:
        r_outer = default_outer_limit(n_eff)
    if r_outer <= r_inner:
        raise ValueError(f"empty radial mesh: r_inner={r_inner}, r_outer={r_outer}")

    i_start = max(int(np.ceil(np.sqrt(r_inner) / dx)), 1)
    i_stop = int(np.floor(np.sqrt(r_outer) / dx))
    if (i_stop - i_start) % 2 == 1:
        i_stop += 1  # odd point count -> plain Simpson weights everywhere
    npts = i_stop - i_start + 1
    if npts < 17:
        raise ResolutionError(
            f"radial mesh has only {npts} points for n_eff={n_eff}, l={l}; decrease dx"
        )

    x = dx * (np.arange(i_start, i_stop + 1))
    w = (0.75 + 4.0 * l * (l + 1)) / x**2 - 8.0 + 4.0 * x**2 / n_eff**2

    # phase advance per step in the oscillatory region must stay small for
    # Numerov to hold its order
    osc = w < 0.0
    if np.any(osc) and dx * np.sqrt(-w[osc].max() + 0.0) > 0.5:
        raise ResolutionError(
            f"grid too coarse for n_eff={n_eff}, l={l}: "
            f"phase step {dx * np.sqrt(-w[osc].max()):.2f} rad"
        )

    y = _numerov_inward(w, dx)

    r = x * x
    u = y * np.sqrt(x)
    norm = simpson(u * u * 2.0 * x, dx=dx)
    if not np.isfinite(norm) or norm <= 0.0:
        raise ResolutionError(f"radial norm diverged for n_eff={n_eff}, l={l}")

    u = u / np.sqrt(norm)
    # phase convention: outermost lobe positive (inward integration already
    # starts positive, this is a guard against pathological seeds)
    lobe = np.argmax(np.abs(u))
    if u[lobe:].max(initial=0.0) < -u[lobe:].min(initial=0.0):
        u = -u
    u.flags.writeable = False
    r.flags.writeable = False
    return RadialSolution(n_eff=n_eff, l=l, r=r, u=u, i_start=i_start, dx=dx)


def _numerov_inward(w, h):
    """Integrate y'' = w y from the last mesh point toward the first."""
    n = w.size
    y = np.zeros(n)
    f = 1.0 - (h * h / 12.0) * w
    g = 2.0 + (5.0 * h * h / 6.0) * w
    y[n - 1] = 1e-12
    y[n - 2] = 2e-12
    for k in range(n - 2, 0, -1):
        y[k - 1] = (g[k] * y[k] - f[k + 1] * y[k + 1]) / f[k - 1]
        if abs(y[k - 1]) > 1e200:
            y[k - 1 :] *= 1e-200
    return y


def count_nodes(solution, rel_floor=1e-6):
    """Number of interior sign changes of u, ignoring the sub-floor tails."""
    u = solution.u
    big = np.abs(u) > rel_floor * np.abs(u).max()
    signs = np.sign(u[big])
    return int(np.sum(signs[1:] * signs[:-1] < 0))


@lru_cache(maxsize=4096)
def _cached_solution(n_eff_key, l, dx):
    return radial_wavefunction(n_eff_key, l, dx=dx)


def cached_wavefunction(n_eff, l, dx=DEFAULT_GRID_STEP):
    """Memoized :func:`radial_wavefunction` (keyed on rounded n_eff)."""
    return _cached_solution(round(float(n_eff), 12), int(l), float(dx))


def radial_integral(sol1, sol2, power=1):
    """Overlap integral of u1 * r^power * u2 over the common mesh region.

    Both solutions must live on the same global sqrt(r) grid (same dx).
    The region where only one of them is defined contributes negligibly:
    there the other state is deep in its classically forbidden zone.
    """
    if abs(sol1.dx - sol2.dx) > 1e-15:
        raise ValueError("radial solutions live on different grids")
    lo = max(sol1.i_start, sol2.i_start)
    hi = min(sol1.i_start + sol1.u.size, sol2.i_start + sol2.u.size)
    if hi <= lo:
        return 0.0
    a = slice(lo - sol1.i_start, hi - sol1.i_start)
    b = slice(lo - sol2.i_start, hi - sol2.i_start)
    x = np.sqrt(sol1.r[a])
    integrand = sol1.u[a] * sol2.u[b] * sol1.r[a] ** (power - 1) * x * 2.0 * x
    return float(simpson(integrand, dx=sol1.dx))


def radial_dipole_integral(n_eff1, l1, n_eff2, l2, dx=DEFAULT_GRID_STEP,
                           r_inner=None):
    """Radial dipole factor  integral of u1 r u2 dr  in a0.

    Raises SelectionRuleError unless |l1 - l2| = 1; returning zero here
    would let callers silently skip the angular selection rules.
    """
    if abs(l1 - l2) != 1:
        raise SelectionRuleError(
            f"radial dipole integral requested for l1={l1}, l2={l2}; need |dl| = 1"
        )
    if r_inner is None:
        s1 = cached_wavefunction(n_eff1, l1, dx)
        s2 = cached_wavefunction(n_eff2, l2, dx)
    else:
        s1 = radial_wavefunction(n_eff1, l1, dx=dx, r_inner=r_inner)
        s2 = radial_wavefunction(n_eff2, l2, dx=dx, r_inner=r_inner)
    return radial_integral(s1, s2, power=1)
