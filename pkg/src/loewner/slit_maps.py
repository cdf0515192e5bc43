"""Elementary slit maps for the discretised Loewner equations.

All functions are vectorised over numpy arrays. ``u`` and ``theta`` may be
arrays broadcastable against ``w`` (one driving value per trace row).
"""

import numpy as np


def upper_sqrt(q, ref):
    """
    Square root of ``q`` on the branch with non-negative imaginary part.

    On the real axis (branch cut) the sign follows ``ref.real`` so that the
    map w -> upper_sqrt(w**2 + c, w) is continuous up to the real line.
    """
    s = np.sqrt(np.asarray(q, dtype=complex))
    ref = np.asarray(ref, dtype=complex)
    flip = (s.imag < 0) | ((s.imag == 0) & (s.real * ref.real < 0))
    return np.where(flip, -s, s)


# Chordal (half plane)


def chordal_slit_inverse(w, u, dt):
    """Inverse of the Loewner map removing a vertical slit of capacity 2*dt at ``u``.

    Maps the upper half plane onto H minus [u, u + 2i*sqrt(dt)].
    """
    d = np.asarray(w, dtype=complex) - u
    return u + upper_sqrt(d * d - 4.0 * dt, d)


def chordal_slit_inverse_deriv(w, u, dt):
    d = np.asarray(w, dtype=complex) - u
    return d / upper_sqrt(d * d - 4.0 * dt, d)


def chordal_slit_forward(z, u, dt):
    """Loewner map g(z) = u + sqrt((z - u)^2 + 4*dt) of H minus the slit onto H."""
    d = np.asarray(z, dtype=complex) - u
    return u + upper_sqrt(d * d + 4.0 * dt, d)


def chordal_tip(u, tau):
    """Tip of the slit grown for time ``tau`` from ``u``."""
    return np.asarray(u, dtype=complex) + 2j * np.sqrt(tau)


# Radial (unit disk)


def koebe(z):
    """Koebe function k(z) = z / (1 - z)^2."""
    z = np.asarray(z, dtype=complex)
    return z / (1.0 - z) ** 2


def koebe_deriv(z):
    z = np.asarray(z, dtype=complex)
    return (1.0 + z) / (1.0 - z) ** 3


def koebe_inverse(w):
    """Inverse of the Koebe function on C minus (-inf, -1/4]."""
    w = np.asarray(w, dtype=complex)
    root = np.sqrt(4.0 * w + 1.0)
    denom = 2.0 * w + 1.0 + root
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(w == 0, 0.0, 2.0 * w / denom)
        # k(z) = k(1/z); keep the root inside the disk
        z = np.where(np.abs(z) > 1.0, 1.0 / z, z)
    return z


def radial_tip_radius(tau):
    """Modulus of the radial slit tip after time ``tau`` (slit grown from 1 toward 0)."""
    e = np.exp(tau)
    return 2.0 * e - 1.0 - 2.0 * np.sqrt(e * e - e)


def radial_tip(theta, tau):
    """Tip of the radial slit grown for time ``tau`` from exp(i*theta)."""
    return np.exp(1j * np.asarray(theta, dtype=float)) * radial_tip_radius(tau)


def _radial_parts(w, theta, dt):
    rot = np.exp(1j * np.asarray(theta, dtype=float))
    u = -np.asarray(w, dtype=complex) / rot
    v = np.exp(-dt) * koebe(u)
    return rot, u, koebe_inverse(v)


def radial_slit_inverse(w, theta, dt):
    """Inverse radial Loewner map for a slit of capacity ``dt`` from exp(i*theta).

    Maps the disk onto the disk minus a radial slit, fixing 0 with derivative exp(-dt) there.
    """
    rot, _, z = _radial_parts(w, theta, dt)
    return -rot * z


def radial_slit_inverse_deriv(w, theta, dt):
    _, u, z = _radial_parts(w, theta, dt)
    return np.exp(-dt) * koebe_deriv(u) / koebe_deriv(z)


def radial_slit_forward(z, theta, dt):
    """Radial Loewner map of the slit disk back onto the disk."""
    rot = np.exp(1j * np.asarray(theta, dtype=float))
    u = -np.asarray(z, dtype=complex) / rot
    return -rot * koebe_inverse(np.exp(dt) * koebe(u))
