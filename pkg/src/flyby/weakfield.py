"""Closed-form weak-coupling transition probabilities for a single fly-by.

When the coupling is weak the initial s state stays near unit amplitude and
each target p state obeys a driven two-level equation whose final
population has a closed form in the modified Bessel functions K0 and K1:

    P(p+/-) = 4 eta^2 |kappa|^-4 [ lam sgn(kappa) K0(1/|kappa|)
                                   -/+ K1(1/|kappa|) ]^2

with coupling strength eta, gap sign lam, scaled momentum kappa and time
tau.  The drive seen by the atom is F(tau) = (kappa tau - i) /
[(kappa tau)^2 + 1]^(3/2).

K0 and K1 are implemented in-repo (ascending series below x = 2, a
continued fraction derived from the large-x asymptotics above) so the
library carries no external special-function dependency whose accuracy it
cannot pin; the test suite checks them against an independent quadrature
oracle to 1e-12.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

_EULER_GAMMA = 0.5772156649015328606
_SERIES_CF_CROSSOVER = 2.0


def _k0_k1_series(x):
    """Ascending power series for K0 and K1, accurate for 0 < x <= 2."""
    t = 0.25 * x * x
    log_half_x = math.log(0.5 * x)
    # K0 = -(log(x/2) + gamma) I0 + sum_k t^k/(k!)^2 * H_k
    # K1 = 1/x + log(x/2) I1 - (x/4) sum_k (psi(k+1)+psi(k+2)) t^k/(k! (k+1)!)
    term0 = 1.0          # t^k / (k!)^2
    term1 = 1.0          # t^k / (k! (k+1)!)
    i0 = 1.0
    i1 = 1.0             # I1 = (x/2) * sum term1
    h = 0.0              # harmonic number H_k
    s0 = 0.0
    s1 = (2.0 * -_EULER_GAMMA + 1.0) * 1.0  # psi(1) + psi(2) at k = 0
    k = 0
    while True:
        k += 1
        term0 *= t / (k * k)
        term1 *= t / (k * (k + 1))
        h += 1.0 / k
        i0 += term0
        i1 += term1
        s0 += term0 * h
        psi_sum = 2.0 * (-_EULER_GAMMA + h) + 1.0 / (k + 1)
        s1 += term1 * psi_sum
        if term0 < 1e-18 * i0 and k > 3:
            break
    i1 *= 0.5 * x
    k0 = -(log_half_x + _EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half_x * i1 - 0.25 * x * s1
    return k0, k1


def _k0_k1_continued_fraction(x, eps=1e-16, max_iter=30000):
    """Steed continued fraction for K0 and K1, accurate for x >= 2."""
    a1 = 0.25
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, max_iter):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels) <= eps * abs(s):
            break
    else:  # pragma: no cover - the fraction converges in < 40 steps for x >= 2
        raise RuntimeError(f"continued fraction failed to converge at x={x}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _k0_k1(x):
    if x < _SERIES_CF_CROSSOVER:
        return _k0_k1_series(x)
    return _k0_k1_continued_fraction(x)


def bessel_k(order, x):
    """Modified Bessel function of the second kind, order 0 or 1.

    Accepts scalars or arrays; every element must satisfy x > 0.
    Relative accuracy is ~1e-14 over at least x in [1e-3, 50].
    """
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are implemented, got {order}")
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0.0):
        raise ValueError("bessel_k requires x > 0")
    if xs.ndim == 0:
        return _k0_k1(float(xs))[order]
    flat = np.array([_k0_k1(float(v))[order] for v in xs.ravel()])
    return flat.reshape(xs.shape)


def driving_function(kappa, tau):
    """Complex fly-by drive F(tau) = (kappa tau - i) / [(kappa tau)^2 + 1]^(3/2).

    Peaks at closest approach, F(0) = -i, and decays like |kappa tau|^-2.
    """
    kt = np.asarray(kappa * tau, dtype=float)
    out = (kt - 1j) / (kt * kt + 1.0) ** 1.5
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WeakCouplingChannel:
    """One s -> p+/- target: coupling eta, gap sign lam, sublevel sign."""

    eta: float
    lam: int
    sign: int  # +1 for the p+ target, -1 for p-

    def __post_init__(self):
        if self.eta < 0.0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if self.lam not in (-1, 1):
            raise ValueError(f"lam must be +-1, got {self.lam}")
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +-1, got {self.sign}")


def analytic_probability(channel, kappa):
    """Final-state probability of one channel after the passage.

    kappa = 0 is the adiabatic limit: the drive becomes infinitely slow and
    the transition probability tends to zero, which is returned exactly.
    Valid for probabilities << 1 (the caller owns that check).
    """
    if np.ndim(kappa) != 0:
        return np.array([analytic_probability(channel, k) for k in kappa])
    kappa = float(kappa)
    if kappa == 0.0:
        return 0.0
    ak = abs(kappa)
    k0, k1 = _k0_k1(1.0 / ak)
    bracket = channel.lam * math.copysign(1.0, kappa) * k0 - channel.sign * k1
    return 4.0 * channel.eta**2 * bracket**2 / ak**4


def find_peak(channel, log_bounds=(-3.0, 3.0), tol=1e-13):
    """Locate (kappa_max, P_max) of a channel by golden-section search.

    The probability is unimodal in |kappa| on the favourable momentum
    branch, whose sign is -sign * lam; the search runs on log|kappa|.
    """
    if channel.eta <= 0.0:
        raise ValueError("find_peak needs eta > 0")
    branch = -channel.sign * channel.lam

    def neg_p(t):
        return -analytic_probability(channel, branch * math.exp(t))

    lo, hi = log_bounds
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = neg_p(c), neg_p(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = neg_p(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = neg_p(d)
    t = 0.5 * (a + b)
    kappa_max = branch * math.exp(t)
    return kappa_max, analytic_probability(channel, kappa_max)


def weak_ode_solution(channels, kappa, tau_grid, rel_tol=1e-10, abs_tol=1e-13):
    """Integrate the first-order amplitude equations channel by channel.

    With the atom pinned to its initial state (C_s = 1), each target
    amplitude obeys  dC/dtau = -i lam C + i eta F(tau)  for p+ and
    dC/dtau = -i lam C - i eta conj(F(tau))  for p-,  starting from zero at
    tau_grid[0].  Returns a complex array of shape (len(channels),
    len(tau_grid)).
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    out = np.zeros((len(channels), tau_grid.size), dtype=complex)
    for i, ch in enumerate(channels):
        if ch.eta == 0.0:
            continue

        def rhs(tau, y, ch=ch):
            f = driving_function(kappa, tau)
            drive = 1j * ch.eta * (f if ch.sign > 0 else -np.conj(f))
            return -1j * ch.lam * y + drive

        sol = solve_ivp(
            rhs, (tau_grid[0], tau_grid[-1]), np.zeros(1, dtype=complex),
            t_eval=tau_grid, method="DOP853", rtol=rel_tol, atol=abs_tol,
        )
        if not sol.success:  # pragma: no cover - linear scalar ODE, never stiff
            raise RuntimeError(f"weak-coupling ODE failed: {sol.message}")
        out[i] = sol.y[0]
    return out
