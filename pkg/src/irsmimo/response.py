"""Reflecting-element power response, far-field boundaries and common gain.

Each element of the surface scatters an incident plane-ish wave with an
amplitude pattern that peaks when the incident/reflected direction pair
matches the pair the element was programmed for, and rolls off as a
separable product of sinc factors in the two direction cosines.  The
polarization mismatch enters through ``tilde_g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ArrayPose, IrsLayout, antenna_position, centered_indices

SPEED_OF_LIGHT = 299792458.0

SINC_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class WaveConfig:
    """Carrier wavelength (meters) and molecular absorption rate (1/m)."""

    wavelength: float
    absorption: float = 0.0

    def __post_init__(self) -> None:
        if self.wavelength <= 0.0:
            raise ValueError("wavelength must be > 0")
        if self.absorption < 0.0:
            raise ValueError("absorption must be >= 0")

    @property
    def carrier(self) -> float:
        return SPEED_OF_LIGHT / self.wavelength

    @classmethod
    def from_carrier(cls, carrier_hz: float, absorption: float = 0.0) -> "WaveConfig":
        if carrier_hz <= 0.0:
            raise ValueError("carrier frequency must be > 0")
        return cls(SPEED_OF_LIGHT / carrier_hz, absorption)


@dataclass(frozen=True)
class ReflectionConfig:
    """Element reflection magnitude and the polarization angle of the surface."""

    amplitude: float = 1.0
    polarization: float = math.pi / 3

    def __post_init__(self) -> None:
        if not 0.0 < self.amplitude <= 1.0:
            raise ValueError("reflection amplitude must lie in (0, 1]")


@dataclass(frozen=True)
class IncidentDirection:
    """Arrival direction at the surface: polar angle from the normal, azimuth."""

    polar: float
    azimuth: float


@dataclass(frozen=True)
class ReflectDirection:
    """Departure direction from the surface, same convention as arrivals."""

    polar: float
    azimuth: float


def far_field_boundary_re(layout: IrsLayout, wavelength: float) -> float:
    """Fraunhofer distance of a single element: 2 (Lx^2 + Ly^2) / lambda."""
    return 2.0 * (layout.re_len_x**2 + layout.re_len_y**2) / wavelength


def far_field_boundary_irs(layout: IrsLayout, wavelength: float) -> float:
    """Fraunhofer distance of the whole surface aperture."""
    lx, ly = layout.total_len_x, layout.total_len_y
    return 2.0 * (lx**2 + ly**2) / wavelength


def sinc_ratio(x):
    """sin(x)/x, switching to the quadratic series 1 - x^2/6 near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


def tilde_g(incident: IncidentDirection, reflect: ReflectDirection, polarization: float) -> float:
    """Polarization-dependent reflection factor for a direction pair."""
    return float(
        _tilde_g(incident.polar, incident.azimuth, reflect.polar, reflect.azimuth, polarization)
    )


def _tilde_g(d_in, a_in, d_out, a_out, pol):
    a_z = np.cos(d_in)
    a_xy = np.sin(d_in) * (np.cos(pol) * np.cos(a_in) + np.sin(pol) * np.sin(a_in))
    c = a_z / np.sqrt(a_xy**2 + a_z**2)
    rel = a_out - pol
    return c * np.sqrt(np.cos(d_out) ** 2 * np.sin(rel) ** 2 + np.cos(rel) ** 2)


def re_response_amplitude(
    wave: WaveConfig,
    reflection: ReflectionConfig,
    layout: IrsLayout,
    incident: IncidentDirection,
    reflect: ReflectDirection,
    programmed_incident: IncidentDirection,
    programmed_reflect: ReflectDirection,
) -> float:
    """Magnitude of one element's response for an actual direction pair.

    The element is configured for the ``programmed_*`` pair; mismatch in the
    summed direction cosines is penalized by sinc rolloff along each side of
    the element.
    """
    return float(
        _pattern(
            wave,
            reflection,
            layout,
            incident.polar,
            incident.azimuth,
            reflect.polar,
            reflect.azimuth,
            programmed_incident.polar,
            programmed_incident.azimuth,
            programmed_reflect.polar,
            programmed_reflect.azimuth,
        )
    )


def _cosine_sums(d_in, a_in, d_out, a_out):
    ax = np.sin(d_in) * np.cos(a_in) + np.sin(d_out) * np.cos(a_out)
    ay = np.sin(d_in) * np.sin(a_in) + np.sin(d_out) * np.sin(a_out)
    return ax, ay


def _pattern(wave, reflection, layout, d_in, a_in, d_out, a_out, pd_in, pa_in, pd_out, pa_out):
    lam = wave.wavelength
    pol = reflection.polarization
    ax, ay = _cosine_sums(d_in, a_in, d_out, a_out)
    px, py = _cosine_sums(pd_in, pa_in, pd_out, pa_out)
    pre = math.sqrt(4.0 * math.pi) * reflection.amplitude * layout.re_len_x * layout.re_len_y / lam
    return (
        pre
        * _tilde_g(d_in, a_in, d_out, a_out, pol)
        * sinc_ratio(math.pi * layout.re_len_x * (ax - px) / lam)
        * sinc_ratio(math.pi * layout.re_len_y * (ay - py) / lam)
    )


def eta0(
    wave: WaveConfig,
    reflection: ReflectionConfig,
    layout: IrsLayout,
    tx: ArrayPose,
    rx: ArrayPose,
) -> float:
    """Common cascade gain: element area, spreading over both hops, absorption.

    Uses the center-to-center polarization factor, i.e. the reflection factor
    evaluated for the directions of the two array centers as seen from the
    surface origin.
    """
    g0 = _tilde_g(tx.elevation, tx.azimuth, rx.elevation, rx.azimuth, reflection.polarization)
    spread = (reflection.amplitude * layout.re_len_x * layout.re_len_y) / (
        4.0 * math.pi * tx.distance * rx.distance
    )
    damp = math.exp(-wave.absorption * (tx.distance + rx.distance) / 2.0)
    return spread * g0 * damp


def path_loss(wave: WaveConfig, distance: float) -> float:
    """Free-space power loss with molecular absorption over one hop."""
    return (wave.wavelength / (4.0 * math.pi * distance)) ** 2 * math.exp(
        -wave.absorption * distance
    )


def link_directions(layout: IrsLayout, pose: ArrayPose, antenna: int):
    """Direction from every element center to one antenna of a posed array.

    Returns (polar, azimuth) arrays of length q_x*q_y in row-major element
    order; polar is measured from the surface normal.
    """
    w = antenna_position(pose, antenna)
    ex = np.repeat(centered_indices(layout.q_x), layout.q_y) * layout.spacing_x
    ey = np.tile(centered_indices(layout.q_y), layout.q_x) * layout.spacing_y
    vx, vy, vz = w[0] - ex, w[1] - ey, np.full(ex.shape, w[2])
    r = np.sqrt(vx**2 + vy**2 + vz**2)
    return np.arccos(vz / r), np.arctan2(vy, vx)


def amplitude_variation(
    wave: WaveConfig,
    reflection: ReflectionConfig,
    layout: IrsLayout,
    tx: ArrayPose,
    rx: ArrayPose,
) -> float:
    """Worst relative deviation of element responses from the central one.

    Every element is programmed for the center antennas; the deviation is
    then scanned over all antenna pairs and all elements.  Small values mean
    a single common gain describes the whole surface well.
    """
    pol = reflection.polarization
    g0 = (
        math.sqrt(4.0 * math.pi)
        * reflection.amplitude
        * layout.re_len_x
        * layout.re_len_y
        / wave.wavelength
        * _tilde_g(tx.elevation, tx.azimuth, rx.elevation, rx.azimuth, pol)
    )
    prog_in = link_directions(layout, tx, 0)
    prog_out = link_directions(layout, rx, 0)
    worst = 0.0
    for p in centered_indices(tx.n_antennas):
        d_in, a_in = link_directions(layout, tx, int(p))
        for q in centered_indices(rx.n_antennas):
            d_out, a_out = link_directions(layout, rx, int(q))
            amp = _pattern(
                wave,
                reflection,
                layout,
                d_in,
                a_in,
                d_out,
                a_out,
                prog_in[0],
                prog_in[1],
                prog_out[0],
                prog_out[1],
            )
            worst = max(worst, float(np.max(np.abs(amp - g0) / abs(g0))))
    return worst
