"""Cascaded two-hop channel matrices and their closed form.

Every Tx-antenna/element and element/Rx-antenna link contributes a unit
phasor exp(-j*2*pi*d/lambda) with d the second-order expanded distance from
the geometry module.  The surface applies one programmable phase per
element; the end-to-end N_r x N_t channel is the phased double sum scaled
by the common gain.  For reflective focusing the double sum collapses to a
product of a per-antenna quadratic phase factor and two Dirichlet ratios,
which this module also evaluates directly.

Element-to-matrix ordering: elements are laid out row-major with the x
index k slow and the y index l fast, i.e. element (k, l) occupies row
(k + (Q_x-1)/2)*Q_y + (Q_y-1)/2 + l.  Antenna p maps to column
p + (N-1)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import response
from .geometry import ArrayPose, IrsLayout, centered_indices, re_local_components
from .scenario import Scenario

ComplexMatrix = np.ndarray

# A-factors below this are treated as a degenerate pose (array edge-on in
# the surface plane); the anchor angles are undefined there.
DEGENERATE_A = 1e-15


@dataclass(frozen=True)
class FocusingState:
    """Per-element programmed phases, in the module's element row order."""

    betas: np.ndarray

    @property
    def phasor(self) -> np.ndarray:
        return np.exp(1j * self.betas)


@dataclass(frozen=True)
class CouplingConstants:
    """Geometry couplings of both hops along both surface axes.

    c_* are the dimensionless spatial-frequency couplings; a_* the direction
    amplitudes in [0, 1]; gbar_* the anchor angles the array orientation is
    measured against.
    """

    c_tx: float
    c_ty: float
    c_rx: float
    c_ry: float
    a_tx: float
    a_ty: float
    a_rx: float
    a_ry: float
    gbar_tx: float
    gbar_ty: float
    gbar_rx: float
    gbar_ry: float


@dataclass(frozen=True)
class ChannelSet:
    """Both hop matrices, the surface phases, common gain and the cascade."""

    h_t: ComplexMatrix
    h_r: ComplexMatrix
    theta: np.ndarray
    eta0: float
    h: ComplexMatrix


def _phase_parts(wave, layout: IrsLayout, pose: ArrayPose):
    """(small, big) with small + big = 2*pi*d_approx/lambda per (element, antenna).

    The distance-dominated term big = 2*pi*D/lambda is kept separate so
    callers that only need phase differences can cancel it exactly; the
    remaining polynomial stays on the order of the array/surface spans.
    """
    v1, v2, v3 = re_local_components(layout, pose)
    r = centered_indices(pose.n_antennas) * pose.spacing
    sin_psi, cos_psi = math.sin(pose.orient_elevation), math.cos(pose.orient_elevation)
    cos_g, sin_g = math.cos(pose.orient_azimuth), math.sin(pose.orient_azimuth)
    a = (r * sin_psi * cos_g)[None, :] - v1[:, None]
    b = (r * sin_psi * sin_g)[None, :] - v2[:, None]
    ax = (r * cos_psi)[None, :] - v3[:, None]
    lam, d = wave.wavelength, pose.distance
    k0 = 2.0 * math.pi / lam
    small = math.pi * (a * a) / (lam * d) + math.pi * (b * b) / (lam * d) + k0 * ax
    return small, k0 * d


def propagation_phases(wave, layout: IrsLayout, pose: ArrayPose) -> np.ndarray:
    """Full link phases 2*pi*d_approx/lambda, shape (q_x*q_y, n_antennas)."""
    small, big = _phase_parts(wave, layout, pose)
    return small + big


def orientation_phase_jacobian(wave, layout: IrsLayout, pose: ArrayPose):
    """Partial derivatives of the link phases in the pose's orientation angles.

    Returns (d_phase/d_gamma, d_phase/d_psi), both shaped like
    propagation_phases.  The transverse offsets contribute through the
    quadratic terms; the tilt additionally moves the axial coordinate.
    """
    v1, v2, _ = re_local_components(layout, pose)
    r = centered_indices(pose.n_antennas) * pose.spacing
    sin_psi, cos_psi = math.sin(pose.orient_elevation), math.cos(pose.orient_elevation)
    cos_g, sin_g = math.cos(pose.orient_azimuth), math.sin(pose.orient_azimuth)
    a = (r * sin_psi * cos_g)[None, :] - v1[:, None]
    b = (r * sin_psi * sin_g)[None, :] - v2[:, None]
    lam, d = wave.wavelength, pose.distance
    k0 = 2.0 * math.pi / lam
    pref = k0 / d
    d_gamma = pref * (
        a * (-r * sin_psi * sin_g)[None, :] + b * (r * sin_psi * cos_g)[None, :]
    )
    d_psi = (
        pref * (a * (r * cos_psi * cos_g)[None, :] + b * (r * cos_psi * sin_g)[None, :])
        + k0 * (-r * sin_psi)[None, :]
    )
    return d_gamma, d_psi


def tx_irs_channel(scn: Scenario) -> ComplexMatrix:
    """Unit-modulus Tx-to-surface matrix, elements along rows."""
    return np.exp(-1j * propagation_phases(scn.wave, scn.irs, scn.tx))


def irs_rx_channel(scn: Scenario) -> ComplexMatrix:
    """Unit-modulus surface-to-Rx matrix, antennas along rows."""
    return np.exp(-1j * propagation_phases(scn.wave, scn.irs, scn.rx)).T.copy()


def reflective_focusing(scn: Scenario) -> FocusingState:
    """Phases that make all element paths from Tx center add in phase at Rx center.

    beta equals the summed center-link phases 2*pi*(d_t0 + d_0r)/lambda, so
    the compensated center-to-center entry carries zero residual phase.
    """
    small_t, big_t = _phase_parts(scn.wave, scn.irs, scn.tx)
    small_r, big_r = _phase_parts(scn.wave, scn.irs, scn.rx)
    ct = (scn.tx.n_antennas - 1) // 2
    cr = (scn.rx.n_antennas - 1) // 2
    betas = (small_t[:, ct] + small_r[:, cr]) + (big_t + big_r)
    return FocusingState(betas)


def scenario_focusing(scn: Scenario) -> FocusingState:
    """The FocusingState declared by the scenario's focusing mode."""
    if scn.focusing_mode == "reflective":
        return reflective_focusing(scn)
    if scn.focusing_mode == "zero":
        return FocusingState(np.zeros(scn.irs.n_elements))
    return FocusingState(np.asarray(scn.focusing_betas, dtype=float))


def assemble(scn: Scenario, focusing: FocusingState) -> ChannelSet:
    """Build both hops and the cascade h = eta0 * H_r diag(theta) H_t."""
    betas = np.asarray(focusing.betas, dtype=float)
    if betas.shape != (scn.irs.n_elements,):
        raise ValueError(
            f"focusing needs {scn.irs.n_elements} phases, got shape {betas.shape}"
        )
    h_t = tx_irs_channel(scn)
    h_r = irs_rx_channel(scn)
    theta = np.exp(1j * betas)
    gain = response.eta0(scn.wave, scn.reflection, scn.irs, scn.tx, scn.rx)
    h = gain * ((h_r * theta[None, :]) @ h_t)
    return ChannelSet(h_t=h_t, h_r=h_r, theta=theta, eta0=gain, h=h)


def build_channels(scn: Scenario) -> ChannelSet:
    """Assemble with the scenario's own focusing declaration."""
    return assemble(scn, scenario_focusing(scn))


def side_anchors(pose: ArrayPose) -> tuple[float, float, float, float]:
    """(a_x, gbar_x, a_y, gbar_y) for one array side.

    The a-factors measure how much of the surface's x / y axis survives
    projection transverse to the link; the gbar angles are where an array
    axis must point (in orientation-azimuth terms) to couple purely to that
    surface axis.
    """
    sin_o, cos_o = math.sin(pose.azimuth), math.cos(pose.azimuth)
    cos_p = math.cos(pose.elevation)
    a_x = math.hypot(sin_o, cos_p * cos_o)
    a_y = math.hypot(cos_o, cos_p * sin_o)
    if a_x < DEGENERATE_A or a_y < DEGENERATE_A:
        raise ValueError(
            "degenerate geometry: array direction lies in the surface plane "
            "along a surface axis, coupling anchors are undefined"
        )
    gbar_x = math.atan2(cos_p * cos_o, sin_o)
    gbar_y = math.atan2(cos_p * sin_o, -cos_o)
    return a_x, gbar_x, a_y, gbar_y


def coupling_constants(scn: Scenario) -> CouplingConstants:
    """All twelve coupling quantities of the cascade."""
    a_tx, g_tx, a_ty, g_ty = side_anchors(scn.tx)
    a_rx, g_rx, a_ry, g_ry = side_anchors(scn.rx)
    lam = scn.wave.wavelength

    def c(pose, spacing, count, amp, anchor):
        return (
            pose.spacing
            * spacing
            * count
            * amp
            * math.sin(pose.orient_elevation)
            * math.cos(pose.orient_azimuth - anchor)
            / (lam * pose.distance)
        )

    return CouplingConstants(
        c_tx=c(scn.tx, scn.irs.spacing_x, scn.irs.q_x, a_tx, g_tx),
        c_ty=c(scn.tx, scn.irs.spacing_y, scn.irs.q_y, a_ty, g_ty),
        c_rx=c(scn.rx, scn.irs.spacing_x, scn.irs.q_x, a_rx, g_rx),
        c_ry=c(scn.rx, scn.irs.spacing_y, scn.irs.q_y, a_ry, g_ry),
        a_tx=a_tx,
        a_ty=a_ty,
        a_rx=a_rx,
        a_ry=a_ry,
        gbar_tx=g_tx,
        gbar_ty=g_ty,
        gbar_rx=g_rx,
        gbar_ry=g_ry,
    )


def dirichlet_ratio(u, q: int):
    """sin(pi*u)/sin(pi*u/q), evaluated by the finite cosine sum where the
    denominator vanishes (removable singularities; the value there is q for
    odd q)."""
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    den = np.sin(np.pi * u / q)
    out = np.empty_like(u)
    singular = np.abs(den) < 1e-9
    ok = ~singular
    out[ok] = np.sin(np.pi * u[ok]) / den[ok]
    if np.any(singular):
        k = centered_indices(q)
        out[singular] = np.cos(2.0 * np.pi * np.outer(u[singular], k) / q).sum(axis=1)
    return float(out[0]) if scalar else out


def closed_form_channel(scn: Scenario) -> ComplexMatrix:
    """Cascade under reflective focusing without the double sum.

    Entry (q, p) is eta0 times a per-antenna quadratic/linear phase factor
    times the two Dirichlet ratios of the coupled spatial frequencies.
    """
    if scn.focusing_mode != "reflective":
        raise ValueError("closed form assumes reflective focusing on the center pair")
    cc = coupling_constants(scn)
    lam = scn.wave.wavelength
    p = centered_indices(scn.tx.n_antennas).astype(float)
    q = centered_indices(scn.rx.n_antennas).astype(float)

    def quad(pose, idx):
        sin_psi = math.sin(pose.orient_elevation)
        cos_psi = math.cos(pose.orient_elevation)
        return (pose.spacing * sin_psi) ** 2 * idx**2 / (2.0 * pose.distance) + (
            pose.spacing * cos_psi
        ) * idx

    phase = (2.0 * math.pi / lam) * (quad(scn.tx, p)[None, :] + quad(scn.rx, q)[:, None])
    ux = cc.c_tx * p[None, :] + cc.c_rx * q[:, None]
    uy = cc.c_ty * p[None, :] + cc.c_ry * q[:, None]
    gain = response.eta0(scn.wave, scn.reflection, scn.irs, scn.tx, scn.rx)
    return (
        gain
        * np.exp(-1j * phase)
        * dirichlet_ratio(ux, scn.irs.q_x)
        * dirichlet_ratio(uy, scn.irs.q_y)
    )
