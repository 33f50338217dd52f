"""Time-dependent propagation of the atomic amplitudes during a fly-by.

The amplitudes C_alpha(tau) obey  i dC/dtau = [diag(e_alpha) + V(tau)] C
in dimensionless time tau = t |gap|, with e_alpha the level energies
relative to the initial state in units of the reference gap and

    V(tau) = F(tau) G + conj(F(tau)) G^dagger,
    G = M / (2 D^2 |gap|),

where M is the x + iy dipole table and F the fly-by drive.  By default the
integration runs in the interaction picture (free phases absorbed), which
removes the trivial fast oscillation; the bare frame is kept selectable
for testing.  Norm is never renormalized during the run: its drift is a
diagnostic of integrator quality, not something to hide.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp

from .atomic import position_matrices
from .coupling import dimensionless_params
from .errors import IntegratorRejectionError, StiffFailureError


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """Complex coefficients over a basis at one dimensionless time."""

    amplitudes: np.ndarray
    time: float

    @property
    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class PropagationConfig:
    """Integration window, tolerances and frame selection.

    The window is symmetric, tau in [-T, T].  If ``tau_half_span`` is None,
    T = kappa_tau_span / |kappa|, i.e. the electron covers a fixed multiple
    of the closest-approach distance on both sides (|F| has fallen to
    ~1e-4 of its peak at the default 100).
    """

    tau_half_span: Optional[float] = None
    kappa_tau_span: float = 100.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    frame: str = "interaction"
    norm_tol: float = 1e-8
    n_samples: int = 0

    def __post_init__(self):
        if self.frame not in ("interaction", "bare"):
            raise ValueError(f"frame must be 'interaction' or 'bare', got {self.frame!r}")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0 or self.norm_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.tau_half_span is not None and self.tau_half_span <= 0.0:
            raise ValueError("tau_half_span must be positive")


@dataclass(frozen=True, eq=False)
class TrajectoryHistory:
    """Bare-frame amplitudes sampled along the trajectory."""

    tau: np.ndarray
    amplitudes: np.ndarray  # shape (len(tau), basis size)


@dataclass(frozen=True, eq=False)
class PropagationResult:
    """Final amplitudes plus integration diagnostics."""

    final: AmplitudeVector
    norm_drift: float
    n_rhs_evaluations: int
    window_ok: bool
    history: Optional[TrajectoryHistory] = None


def initial_amplitudes(basis, tau=0.0):
    """Unit amplitude on the designated initial state of the basis."""
    amps = np.zeros(len(basis), dtype=complex)
    amps[basis.initial_index] = 1.0
    return AmplitudeVector(amplitudes=amps, time=tau)


def propagate(initial, basis, table, geometry, config=PropagationConfig(),
              tau_span=None):
    """Propagate ``initial`` across the fly-by window.

    Parameters
    ----------
    initial : AmplitudeVector
        Normalized start vector (checked to 1e-8).
    basis, table : BasisSet, DipoleTable
        The table must be built over ``basis``; its model supplies energies.
    geometry : FlybyGeometry
        Signed momentum selects the approach direction.
    config : PropagationConfig
    tau_span : (float, float), optional
        Explicit integration interval, overriding the symmetric default;
        a decreasing interval propagates backwards.

    Returns
    -------
    PropagationResult
        Amplitudes are reported in the bare frame at the final time.
    """
    if abs(initial.norm - 1.0) > 1e-8:
        raise ValueError(f"initial state not normalized: |C|^2 = {initial.norm}")
    model = table.model
    n0 = basis.initial.n
    params = dimensionless_params(model, n0, n0, geometry)
    kappa = params.kappa

    if tau_span is None:
        if config.tau_half_span is not None:
            t_half = config.tau_half_span
        else:
            if kappa == 0.0:
                raise ValueError("kappa = 0 has no default window; pass tau_span")
            t_half = config.kappa_tau_span / abs(kappa)
        tau_span = (-t_half, t_half)

    e_rel = (basis.energies(model) - basis.energies(model)[basis.initial_index])
    e_rel /= params.tau_scale
    g_mat = sparse.csr_matrix(table.mu / (2.0 * geometry.d**2 * params.tau_scale))
    g_dag = g_mat.conj().T.tocsr()

    def drive(tau):
        kt = kappa * tau
        return (kt - 1j) / (kt * kt + 1.0) ** 1.5

    if config.frame == "interaction":
        def rhs(tau, a):
            u = np.exp(-1j * e_rel * tau) * a
            f = drive(tau)
            v = f * (g_mat @ u) + np.conj(f) * (g_dag @ u)
            return -1j * (np.exp(1j * e_rel * tau) * v)

        y0 = np.exp(1j * e_rel * initial.time) * initial.amplitudes
    else:
        def rhs(tau, c):
            f = drive(tau)
            v = f * (g_mat @ c) + np.conj(f) * (g_dag @ c)
            return -1j * (e_rel * c + v)

        y0 = initial.amplitudes.astype(complex)

    t_eval = None
    if config.n_samples > 0:
        t_eval = np.linspace(tau_span[0], tau_span[1], config.n_samples)

    sol = solve_ivp(rhs, tau_span, y0, method="DOP853",
                    rtol=config.rel_tol, atol=config.abs_tol, t_eval=t_eval)
    if not sol.success:
        raise StiffFailureError(
            f"integrator step size underflow near tau = {sol.t[-1]!r}: {sol.message}",
            tau=float(sol.t[-1]),
        )

    def to_bare(tau, y):
        if config.frame == "interaction":
            return np.exp(-1j * e_rel * tau) * y
        return y

    tau_end = float(sol.t[-1])
    final_amps = to_bare(tau_end, sol.y[:, -1])
    norm_drift = abs(float(np.sum(np.abs(final_amps) ** 2)) - initial.norm)
    if norm_drift > 100.0 * config.norm_tol:
        raise IntegratorRejectionError(
            f"norm drift {norm_drift:.3e} exceeds 100 x norm_tol "
            f"({config.norm_tol:.1e}); tighten rel_tol/abs_tol"
        )

    history = None
    if t_eval is not None:
        amps = np.empty((sol.t.size, len(basis)), dtype=complex)
        for i, tau in enumerate(sol.t):
            amps[i] = to_bare(tau, sol.y[:, i])
        history = TrajectoryHistory(tau=sol.t.copy(), amplitudes=amps)

    # window sanity: residual coupling at the edges vs the smallest gap
    edge = max(abs(drive(tau_span[0])), abs(drive(tau_span[1])))
    max_g = np.abs(g_mat.data).max() if g_mat.nnz else 0.0
    e_sorted = np.sort(basis.energies(model))
    diffs = np.diff(e_sorted)
    diffs = diffs[diffs > 1e-300]
    min_gap = float(diffs.min()) if diffs.size else np.inf
    window_ok = bool(edge * max_g * params.tau_scale < 1e-6 * min_gap)

    return PropagationResult(
        final=AmplitudeVector(amplitudes=final_amps, time=tau_end),
        norm_drift=norm_drift,
        n_rhs_evaluations=int(sol.nfev),
        window_ok=window_ok,
        history=history,
    )


@dataclass(frozen=True, eq=False)
class Populations:
    """Per-state probabilities and the standard aggregates."""

    by_state: dict
    p_initial: float
    by_l: dict
    p_beyond_d: float
    p_other_s: float
    total: float

    def p_l(self, l):
        return self.by_l.get(l, 0.0)


def populations(final, basis):
    """Probabilities per state plus the P_ns / P_l / P_(l>d) aggregates."""
    p = np.abs(final.amplitudes) ** 2
    by_state = {}
    by_l = {}
    for i, s in enumerate(basis.states):
        by_state[(s.n, s.l, s.m)] = float(p[i])
        by_l[s.l] = by_l.get(s.l, 0.0) + float(p[i])
    p_initial = float(p[basis.initial_index])
    p_beyond_d = sum(v for l, v in by_l.items() if l > 2)
    return Populations(
        by_state=by_state,
        p_initial=p_initial,
        by_l=by_l,
        p_beyond_d=p_beyond_d,
        p_other_s=by_l.get(0, 0.0) - p_initial,
        total=float(p.sum()),
    )


def polarization(final, table):
    """Expectation values (<x>, <y>, <z>) of the final state, in a0."""
    x, y, z = position_matrices(table)
    v = final.amplitudes
    return tuple(float(np.real(np.vdot(v, m @ v))) for m in (x, y, z))


def write_trajectory_csv(history, basis, table, path):
    """Dump a sampled trajectory: populations, in-plane dipole, norm."""
    x_mat, y_mat, _ = position_matrices(table)
    rows = ["tau,P_ns,P_p,P_d,P_beyond_d,x_a0,y_a0,norm"]
    for i, tau in enumerate(history.tau):
        vec = AmplitudeVector(amplitudes=history.amplitudes[i], time=float(tau))
        pops = populations(vec, basis)
        v = vec.amplitudes
        px = float(np.real(np.vdot(v, x_mat @ v)))
        py = float(np.real(np.vdot(v, y_mat @ v)))
        rows.append(
            f"{float(tau)!r},{pops.p_initial!r},{pops.p_l(1)!r},{pops.p_l(2)!r},"
            f"{pops.p_beyond_d!r},{px!r},{py!r},{pops.total!r}"
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")
