"""Quantum-defect atomic structure: energies, bases, transition dipoles.

Energies follow the quantum-defect form E(n, l) = -1/(2 (n - delta_l)^2)
in Hartree.  Defect values are data, not physics hard-coded here: they ship
as plain-text files under ``flyby/data`` and can be replaced by the user.
Transition dipole matrix elements combine the Numerov radial integrals of
:mod:`flyby.radial` with the closed-form angular factors of
:mod:`flyby.angular`.
"""

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import angular, radial
from .errors import ConfigError, InvalidModelError

L_LETTERS = "spdfghiklmnoq"


@dataclass(frozen=True)
class QuantumDefectModel:
    """Element-specific quantum defects delta_l, zero above ``l_cutoff``."""

    element: str
    defects: tuple  # ((l, delta_l), ...) sorted by l
    l_cutoff: int

    def __post_init__(self):
        for l, d in self.defects:
            if d < 0.0:
                raise InvalidModelError(f"negative quantum defect for l={l}: {d}")
            if l < 0:
                raise InvalidModelError(f"negative orbital number in defect table: {l}")

    def defect(self, l):
        if l > self.l_cutoff:
            return 0.0
        for ll, d in self.defects:
            if ll == l:
                return d
        return 0.0

    def n_eff(self, n, l):
        """Effective quantum number n* = n - delta_l; must be positive."""
        ne = n - self.defect(l)
        if ne <= 0.0:
            raise InvalidModelError(
                f"{self.element}: n*={ne} not positive for n={n}, l={l}"
            )
        return ne


@dataclass(frozen=True, order=True)
class RydbergState:
    """One |n l m> basis state."""

    n: int
    l: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"principal quantum number must be >= 1, got {self.n}")
        if not 0 <= self.l < self.n:
            raise ValueError(f"need 0 <= l < n, got l={self.l}, n={self.n}")
        if abs(self.m) > self.l:
            raise ValueError(f"need |m| <= l, got m={self.m}, l={self.l}")

    @property
    def label(self):
        letter = L_LETTERS[self.l] if self.l < len(L_LETTERS) else f"(l={self.l})"
        return f"{self.n}{letter}[m={self.m:+d}]" if self.l else f"{self.n}s"


def energy(state, model):
    """Bound-state energy -1/(2 n*^2) in Hartree."""
    ne = model.n_eff(state.n, state.l)
    return -0.5 / (ne * ne)


def parse_defect_text(text, source="<string>"):
    """Parse an ``element`` / per-l key-value defect table.

    Keys are orbital letters (s, p, d, ...) or integers; values the defects.
    Unknown or duplicate keys are rejected with their line number.
    """
    element = None
    defects = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {rawline!r}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "element":
            if element is not None:
                raise ConfigError("duplicate 'element' key", line=lineno)
            element = value
            continue
        if key in L_LETTERS and len(key) == 1:
            l = L_LETTERS.index(key)
        else:
            try:
                l = int(key)
            except ValueError:
                raise ConfigError(f"unknown defect key {key!r}", line=lineno) from None
        if l in defects:
            raise ConfigError(f"duplicate defect for l={l}", line=lineno)
        try:
            defects[l] = float(value)
        except ValueError:
            raise ConfigError(f"bad defect value {value!r}", line=lineno) from None
    if element is None:
        raise ConfigError(f"defect table {source} is missing an 'element' key")
    if not defects:
        raise ConfigError(f"defect table {source} defines no defects")
    items = tuple(sorted(defects.items()))
    return QuantumDefectModel(element=element, defects=items, l_cutoff=max(defects))


def load_defect_model(path):
    """Read a quantum-defect model from a plain-text file."""
    with open(path, encoding="utf-8") as fh:
        return parse_defect_text(fh.read(), source=str(path))


_BUILTIN_FILES = {"rb": "rubidium.defects", "rubidium": "rubidium.defects",
                  "li": "lithium.defects", "lithium": "lithium.defects"}


def builtin_model(name):
    """Shipped defect model by element name ('Rb' or 'Li')."""
    key = name.strip().lower()
    if key not in _BUILTIN_FILES:
        raise ConfigError(f"no built-in defect model for {name!r}; use Rb, Li or a file")
    text = resources.files("flyby.data").joinpath(_BUILTIN_FILES[key]).read_text()
    return parse_defect_text(text, source=f"builtin:{name}")


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Deterministically ordered truncation of the Hilbert space."""

    states: tuple
    initial: RydbergState
    n_window: int
    l_max: int
    index_of: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.states)

    def index(self, state):
        return self.index_of[state]

    @property
    def initial_index(self):
        return self.index_of[self.initial]

    @property
    def n_min(self):
        return min(s.n for s in self.states)

    @property
    def n_max(self):
        return max(s.n for s in self.states)

    def energies(self, model):
        return np.array([energy(s, model) for s in self.states])


def build_basis(model, initial, n_window, l_max):
    """All (n, l, m) whose n* lies within n_window (+1/2) of the initial state.

    The window is measured on the effective-quantum-number axis, which is
    the energy ordering: |n*(n, l) - n*(initial)| <= n_window + 1/2.  The
    half-shell margin makes the window at size 0 still capture the p states
    belonging to the same shell as the initial s state.  Ordering is by
    energy, then l, then m, and is therefore deterministic.
    """
    if n_window < 0:
        raise ConfigError(f"n_window must be >= 0, got {n_window}")
    if l_max < 1:
        raise ConfigError(f"l_max must be >= 1, got {l_max}")
    ne0 = model.n_eff(initial.n, initial.l)
    half_width = n_window + 0.5
    max_defect = max((d for _, d in model.defects), default=0.0)
    n_lo = max(1, int(np.floor(ne0 - half_width)))
    n_hi = int(np.ceil(ne0 + half_width + max_defect)) + 1

    states = []
    for n in range(n_lo, n_hi + 1):
        for l in range(0, min(l_max, n - 1) + 1):
            if abs(model.n_eff(n, l) - ne0) > half_width:
                continue
            for m in range(-l, l + 1):
                states.append(RydbergState(n, l, m))
    if not states:
        raise ConfigError(
            f"empty basis for initial {initial.label}, window {n_window}, l_max {l_max}"
        )
    states.sort(key=lambda s: (energy(s, model), s.l, s.m))
    if initial not in states:
        raise ConfigError(f"basis does not contain the initial state {initial.label}")
    index_of = {s: i for i, s in enumerate(states)}
    return BasisSet(states=tuple(states), initial=initial, n_window=n_window,
                    l_max=l_max, index_of=index_of)


def radial_dipole_integral(s1, s2, model, dx=radial.DEFAULT_GRID_STEP):
    """Radial dipole factor between two states of one model, in a0."""
    return radial.radial_dipole_integral(
        model.n_eff(s1.n, s1.l), s1.l, model.n_eff(s2.n, s2.l), s2.l, dx=dx
    )


@dataclass(frozen=True, eq=False)
class DipoleTable:
    """Matrix of mu = <row| x + iy |col> over a basis, in a0.

    The x - iy matrix is the conjugate transpose; both circular components
    are carried by this single table.
    """

    basis: BasisSet
    model: QuantumDefectModel
    mu: np.ndarray

    @property
    def mu_dagger(self):
        return self.mu.conj().T


def dipole_table(basis, model, dx=radial.DEFAULT_GRID_STEP):
    """Assemble the x + iy dipole matrix over ``basis``.

    Entries factor into a radial integral (shared by all m) and an angular
    factor, so radial work scales with the number of (n, l) pairs only.
    Radial-solver failures are re-raised with the offending state labels.
    """
    n_states = len(basis)
    mu = np.zeros((n_states, n_states), dtype=complex)
    radial_cache = {}
    for i, si in enumerate(basis.states):
        for j, sj in enumerate(basis.states):
            if sj.l != si.l + 1 and sj.l != si.l - 1:
                continue
            ang = angular.angular_factor_plus(si.l, si.m, sj.l, sj.m)
            if ang == 0.0:
                continue
            key = (si.n, si.l, sj.n, sj.l) if si.l < sj.l else (sj.n, sj.l, si.n, si.l)
            if key not in radial_cache:
                try:
                    radial_cache[key] = radial.radial_dipole_integral(
                        model.n_eff(key[0], key[1]), key[1],
                        model.n_eff(key[2], key[3]), key[3], dx=dx,
                    )
                except Exception as exc:
                    raise type(exc)(
                        f"radial solver failed for pair {si.label} / {sj.label}: {exc}"
                    ) from exc
            mu[i, j] = radial_cache[key] * ang
    mu.flags.writeable = False
    return DipoleTable(basis=basis, model=model, mu=mu)


def position_matrices(table):
    """Hermitian x, y, z matrices over the table's basis, in a0.

    x and y come from the circular components already in the table; z is
    assembled from the same radial integrals with its own angular factors.
    """
    basis, model = table.basis, table.model
    m_plus = table.mu
    x = 0.5 * (m_plus + m_plus.conj().T)
    y = -0.5j * (m_plus - m_plus.conj().T)

    n_states = len(basis)
    z = np.zeros((n_states, n_states))
    radial_cache = {}
    for i, si in enumerate(basis.states):
        for j, sj in enumerate(basis.states):
            if j < i or abs(si.l - sj.l) != 1:
                continue
            ang = angular.angular_factor_z(si.l, si.m, sj.l, sj.m)
            if ang == 0.0:
                continue
            key = (si.n, si.l, sj.n, sj.l) if si.l < sj.l else (sj.n, sj.l, si.n, si.l)
            if key not in radial_cache:
                radial_cache[key] = radial.radial_dipole_integral(
                    model.n_eff(key[0], key[1]), key[1],
                    model.n_eff(key[2], key[3]), key[3],
                )
            z[i, j] = radial_cache[key] * ang
            z[j, i] = z[i, j]
    for m in (x, y, z):
        m.flags.writeable = False
    return x, y, z


def export_dipole_table_csv(table, path):
    """Write the non-zero table entries as CSV rows (n,l,m,n',l',m',Re,Im)."""
    rows = ["n,l,m,n_p,l_p,m_p,re_mu,im_mu"]
    for i, si in enumerate(table.basis.states):
        for j, sj in enumerate(table.basis.states):
            v = table.mu[i, j]
            if v == 0.0:
                continue
            rows.append(
                f"{si.n},{si.l},{si.m},{sj.n},{sj.l},{sj.m},{v.real!r},{v.imag!r}"
            )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")
