"""Angular factors of the dipole operator between spherical harmonics.

The in-plane operator splits into the two circular components x + iy and
x - iy; the out-of-plane component is z.  Dividing out the radial factor r
leaves matrix elements of sin(theta) e^{+/- i phi} and cos(theta) between
spherical harmonics with the Condon-Shortley phase.  Closed forms below;
the test suite pins them against a brute-force quadrature over the sphere.

Selection rules: the angular factor of x + iy, written <l', m' | . | l, m>,
vanishes unless l' = l +- 1 and m' = m + 1; x - iy requires m' = m - 1;
z requires m' = m.
"""

import math


def angular_factor_plus(l_bra, m_bra, l_ket, m_ket):
    """<l_bra, m_bra| sin(theta) e^{i phi} |l_ket, m_ket>.

    This is the angular part of (x + iy)/r.  Returns 0.0 for forbidden
    pairs rather than raising, so callers can loop over entire bases.
    """
    if abs(m_bra) > l_bra or abs(m_ket) > l_ket:
        return 0.0
    if m_bra != m_ket + 1:
        return 0.0
    l, m = l_ket, m_ket
    if l_bra == l + 1:
        return -math.sqrt((l + m + 1) * (l + m + 2) / ((2 * l + 1) * (2 * l + 3)))
    if l_bra == l - 1:
        return math.sqrt((l - m) * (l - m - 1) / ((2 * l - 1) * (2 * l + 1)))
    return 0.0


def angular_factor_minus(l_bra, m_bra, l_ket, m_ket):
    """<l_bra, m_bra| sin(theta) e^{-i phi} |l_ket, m_ket>, i.e. (x - iy)/r.

    Since (x - iy) is the adjoint of (x + iy) and the factors are real,
    this is the transpose of :func:`angular_factor_plus`.
    """
    return angular_factor_plus(l_ket, m_ket, l_bra, m_bra)


def angular_factor_z(l_bra, m_bra, l_ket, m_ket):
    """<l_bra, m_bra| cos(theta) |l_ket, m_ket>, the angular part of z/r."""
    if abs(m_bra) > l_bra or abs(m_ket) > l_ket:
        return 0.0
    if m_bra != m_ket:
        return 0.0
    l, m = l_ket, m_ket
    if l_bra == l + 1:
        return math.sqrt((l - m + 1) * (l + m + 1) / ((2 * l + 1) * (2 * l + 3)))
    if l_bra == l - 1:
        return math.sqrt((l - m) * (l + m) / ((2 * l - 1) * (2 * l + 1)))
    return 0.0
