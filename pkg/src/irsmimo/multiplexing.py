"""Full-multiplexing analysis: Rayleigh distances, orientation solvers,
the cascaded two-hop multiplexing region, and Gram-matrix verification.

A uniform line array talking to the surface supports orthogonal equal-gain
streams only up to a distance threshold (per surface axis) that scales with
the array span, the surface span and the direction amplitude.  For the
cascaded Tx-surface-Rx link the feasible (D_t, D_r) pairs form a region
bounded by those thresholds and a coupling curve between them; this module
computes the region, solves for the array orientations that realize any
interior point, and verifies the resulting channels numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ComplexMatrix, side_anchors
from .geometry import ArrayPose, IrsLayout
from .response import WaveConfig

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RayleighResult:
    """Per-axis multiplexing distance limits of one array side.

    d_r is the overall limit max(d_rx_axis, d_ry_axis); it is only
    meaningful when the surface outcounts the array on both axes, recorded
    by the two applicability flags (d_r is None otherwise).
    """

    d_rx_axis: float
    d_ry_axis: float
    x_applicable: bool
    y_applicable: bool
    d_r: float | None


@dataclass(frozen=True)
class OrientationSetting:
    """One array orientation (psi, gamma) plus the solver branch that chose it."""

    psi: float
    gamma: float
    branch: str


@dataclass(frozen=True)
class FmrBound:
    """Closed-form description of the cascaded multiplexing region.

    The x-region is the union of a rectangle (D_t up to d_t_star_x, D_r up
    to d_r_rayleigh_x) and a curved lobe for D_t in (d_t_star_x,
    d_t_rayleigh_x] capped by the boundary curve; the y-region mirrors it.
    boundary_x / boundary_y are (n, 2) sampled arrays of (D_t, cap) pairs.
    Corner points r_* are (D_t, D_r) tuples where boundary and rectangle
    edges meet.
    """

    d_t_star_x: float
    d_t_star_y: float
    gamma_star_x: float
    gamma_star_y: float
    d_t_rayleigh_x: float
    d_t_rayleigh_y: float
    d_r_rayleigh_x: float
    d_r_rayleigh_y: float
    d_r_star_x: float
    d_r_star_y: float
    gamma_star_rx: float
    gamma_star_ry: float
    boundary_x: np.ndarray
    boundary_y: np.ndarray
    r_tx: tuple[float, float]
    r_rx: tuple[float, float]
    r_ty: tuple[float, float]
    r_ry: tuple[float, float]
    a_tx: float
    a_ty: float
    a_rx: float
    a_ry: float
    gbar_tx: float
    gbar_ty: float
    gbar_rx: float
    gbar_ry: float


@dataclass(frozen=True)
class GramReport:
    """Outcome of an orthogonality/equal-gain check of a channel matrix."""

    max_offdiag: float
    diag_values: np.ndarray
    target_gain: float
    passed: bool


def rayleigh_distances(pose: ArrayPose, layout: IrsLayout, wave: WaveConfig) -> RayleighResult:
    """Per-axis multiplexing distance limits d*S*Q*A/lambda for one side."""
    a_x, _, a_y, _ = side_anchors(pose)
    lam = wave.wavelength
    drx = pose.spacing * layout.spacing_x * layout.q_x * a_x / lam
    dry = pose.spacing * layout.spacing_y * layout.q_y * a_y / lam
    xa = layout.q_x >= pose.n_antennas
    ya = layout.q_y >= pose.n_antennas
    return RayleighResult(
        d_rx_axis=drx,
        d_ry_axis=dry,
        x_applicable=xa,
        y_applicable=ya,
        d_r=max(drx, dry) if (xa and ya) else None,
    )


def single_hop_orientation(
    pose: ArrayPose, layout: IrsLayout, wave: WaveConfig, axis: str
) -> OrientationSetting:
    """Orientation giving orthogonal equal-gain single-hop streams via one axis.

    Default branch: point the array at the axis anchor angle and open the
    tilt so that sin(psi) = D / D_axis; requires D within the axis limit and
    enough surface elements along that axis.
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    rr = rayleigh_distances(pose, layout, wave)
    a_x, gbar_x, a_y, gbar_y = side_anchors(pose)
    if axis == "x":
        d_axis, anchor, count = rr.d_rx_axis, gbar_x, layout.q_x
    else:
        d_axis, anchor, count = rr.d_ry_axis, gbar_y, layout.q_y
    if count < pose.n_antennas:
        raise ValueError(
            f"axis '{axis}' has {count} elements for {pose.n_antennas} antennas; "
            "full multiplexing needs at least as many elements as antennas"
        )
    if pose.distance > d_axis:
        raise ValueError(
            f"distance {pose.distance:g} m exceeds the axis limit {d_axis:g} m"
        )
    psi = math.asin(min(1.0, pose.distance / d_axis))
    return OrientationSetting(psi=psi, gamma=anchor % TWO_PI, branch=f"{axis}-default")


def _gamma_star(a_t1, g_t1, a_t2, g_t2, a_r1, g_r1, a_r2, g_r2) -> float:
    """Apex orientation angle of the region rectangle along axis 1.

    Axis 1 is the region axis; axis 2 the other.  Mirrors by argument
    swapping for the y-region and the Rx-side variants.
    """
    num = a_t2 * a_r1 * math.cos(g_t2) - a_t1 * a_r2 * math.cos(g_r1 - g_r2) * math.cos(g_t1)
    den = a_t1 * a_r2 * math.cos(g_r1 - g_r2) * math.sin(g_t1) - a_t2 * a_r1 * math.sin(g_t2)
    return math.atan2(num, den)


def _boundary_gammas(a_t1, g_t1, g_t2, a_t2, a_r1, g_r1, a_r2, g_r2, ratio):
    """Both candidate Rx angles of the boundary curve at one D_t.

    ratio is sqrt((D_axis/D_t)^2 - 1); the two Tx tilt branches
    tan(gamma_t - g_t1) = s * ratio each induce one Rx angle.  Returns
    (gamma_r, s) pairs; the caller keeps the branch with the larger cap and
    must reuse its s for the Tx angle.
    """
    delta = g_t1 - g_t2
    out = []
    for s in (+1.0, -1.0):
        mix = math.cos(delta) - s * math.sin(delta) * ratio
        num = a_t1 * a_r2 * math.cos(g_r2) - a_t2 * a_r1 * math.cos(g_r1) * mix
        den = a_t2 * a_r1 * math.sin(g_r1) * mix - a_t1 * a_r2 * math.sin(g_r2)
        out.append((math.atan2(num, den), s))
    return out


def fmr_inner_bound(
    tx: ArrayPose,
    rx: ArrayPose,
    layout: IrsLayout,
    wave: WaveConfig,
    samples: int = 200,
) -> FmrBound:
    """Closed-form inner bound of the cascaded full-multiplexing region.

    Only the directions, spacings and counts of the poses matter here; the
    pose distance fields are ignored (the region lives on the (D_t, D_r)
    plane).
    """
    n_sum = tx.n_antennas + rx.n_antennas - 2
    if not n_sum < 2 * layout.q_x:
        raise ValueError(
            f"needs N_t + N_r - 2 < 2*Q_x ({n_sum} >= {2 * layout.q_x})"
        )
    if not n_sum < 2 * layout.q_y:
        raise ValueError(
            f"needs N_t + N_r - 2 < 2*Q_y ({n_sum} >= {2 * layout.q_y})"
        )
    a_tx, g_tx, a_ty, g_ty = side_anchors(tx)
    a_rx, g_rx, a_ry, g_ry = side_anchors(rx)
    lam = wave.wavelength
    drt_x = tx.spacing * layout.spacing_x * layout.q_x * a_tx / lam
    drt_y = tx.spacing * layout.spacing_y * layout.q_y * a_ty / lam
    drr_x = rx.spacing * layout.spacing_x * layout.q_x * a_rx / lam
    drr_y = rx.spacing * layout.spacing_y * layout.q_y * a_ry / lam

    gs_tx = _gamma_star(a_tx, g_tx, a_ty, g_ty, a_rx, g_rx, a_ry, g_ry)
    gs_ty = _gamma_star(a_ty, g_ty, a_tx, g_tx, a_ry, g_ry, a_rx, g_rx)
    gs_rx = _gamma_star(a_rx, g_rx, a_ry, g_ry, a_tx, g_tx, a_ty, g_ty)
    gs_ry = _gamma_star(a_ry, g_ry, a_rx, g_rx, a_ty, g_ty, a_tx, g_tx)
    dst_x = drt_x * abs(math.cos(gs_tx - g_tx))
    dst_y = drt_y * abs(math.cos(gs_ty - g_ty))
    dsr_x = drr_x * abs(math.cos(gs_rx - g_rx))
    dsr_y = drr_y * abs(math.cos(gs_ry - g_ry))

    def boundary(axis: str) -> np.ndarray:
        if axis == "x":
            d_lo, d_hi = dst_x, drt_x
        else:
            d_lo, d_hi = dst_y, drt_y
        d_vals = np.linspace(d_lo, d_hi, samples)
        rows = []
        for d_t in d_vals:
            cap, _, _ = _boundary_cap(
                axis, float(d_t), drt_x, drt_y, drr_x, drr_y,
                a_tx, g_tx, a_ty, g_ty, a_rx, g_rx, a_ry, g_ry,
            )
            rows.append((float(d_t), cap))
        return np.array(rows)

    return FmrBound(
        d_t_star_x=dst_x,
        d_t_star_y=dst_y,
        gamma_star_x=gs_tx,
        gamma_star_y=gs_ty,
        d_t_rayleigh_x=drt_x,
        d_t_rayleigh_y=drt_y,
        d_r_rayleigh_x=drr_x,
        d_r_rayleigh_y=drr_y,
        d_r_star_x=dsr_x,
        d_r_star_y=dsr_y,
        gamma_star_rx=gs_rx,
        gamma_star_ry=gs_ry,
        boundary_x=boundary("x"),
        boundary_y=boundary("y"),
        r_tx=(drt_x, dsr_x),
        r_rx=(dst_x, drr_x),
        r_ty=(drt_y, dsr_y),
        r_ry=(dst_y, drr_y),
        a_tx=a_tx,
        a_ty=a_ty,
        a_rx=a_rx,
        a_ry=a_ry,
        gbar_tx=g_tx,
        gbar_ty=g_ty,
        gbar_rx=g_rx,
        gbar_ry=g_ry,
    )


def _boundary_cap(axis, d_t, drt_x, drt_y, drr_x, drr_y,
                  a_tx, g_tx, a_ty, g_ty, a_rx, g_rx, a_ry, g_ry):
    """Boundary D_r cap and the Rx angle achieving it, at one D_t."""
    if axis == "x":
        d_axis, d_r_axis, g_r_anchor = drt_x, drr_x, g_rx
        args = (a_tx, g_tx, g_ty, a_ty, a_rx, g_rx, a_ry, g_ry)
    else:
        d_axis, d_r_axis, g_r_anchor = drt_y, drr_y, g_ry
        args = (a_ty, g_ty, g_tx, a_tx, a_ry, g_ry, a_rx, g_rx)
    ratio = math.sqrt(max(0.0, (d_axis / d_t) ** 2 - 1.0))
    best_cap, best_gamma, best_branch = -1.0, 0.0, 1.0
    for gamma, s in _boundary_gammas(*args, ratio):
        cap = d_r_axis * abs(math.cos(gamma - g_r_anchor))
        if cap > best_cap:
            best_cap, best_gamma, best_branch = cap, gamma, s
    return best_cap, best_gamma, best_branch


def boundary_cap(bound: FmrBound, axis: str, d_t: float) -> float:
    """Exact boundary D_r cap at one D_t (not interpolated from samples)."""
    cap, _, _ = _boundary_cap(
        axis, d_t,
        bound.d_t_rayleigh_x, bound.d_t_rayleigh_y,
        bound.d_r_rayleigh_x, bound.d_r_rayleigh_y,
        bound.a_tx, bound.gbar_tx, bound.a_ty, bound.gbar_ty,
        bound.a_rx, bound.gbar_rx, bound.a_ry, bound.gbar_ry,
    )
    return cap


def region_contains(bound: FmrBound, d_t: float, d_r: float, axis: str) -> bool:
    """Closed-form membership of (d_t, d_r) in the x- or y-region."""
    if d_t <= 0.0 or d_r <= 0.0:
        return False
    if axis == "x":
        d_star, d_ray_t, d_ray_r = bound.d_t_star_x, bound.d_t_rayleigh_x, bound.d_r_rayleigh_x
    else:
        d_star, d_ray_t, d_ray_r = bound.d_t_star_y, bound.d_t_rayleigh_y, bound.d_r_rayleigh_y
    if d_t <= d_star:
        return d_r <= d_ray_r
    if d_t <= d_ray_t:
        return d_r <= boundary_cap(bound, axis, d_t)
    return False


def _pick_gamma_pair(gamma_t_base, gamma_r_base, gbar_t1, gbar_t2, gbar_r1, gbar_r2):
    """Resolve the two-fold ambiguity of each tan-defined orientation angle.

    Both angles are only fixed modulo pi; of the four (gamma_t, gamma_r)
    combinations in [0, 2*pi) the solver keeps those where the coupling
    products along the two surface axes share signs, preferring smaller
    angles on ties.
    """
    cand_t = sorted((gamma_t_base % math.pi, gamma_t_base % math.pi + math.pi))
    cand_r = sorted((gamma_r_base % math.pi, gamma_r_base % math.pi + math.pi))
    viable = []
    for g_t in cand_t:
        for g_r in cand_r:
            s1 = np.sign(round_tiny(math.cos(g_t - gbar_t1)) * round_tiny(math.cos(g_r - gbar_r1)))
            s2 = np.sign(round_tiny(math.cos(g_t - gbar_t2)) * round_tiny(math.cos(g_r - gbar_r2)))
            if s1 == s2:
                viable.append((g_t, g_r))
    if not viable:
        # the sign condition cannot reject all four combinations; keep the
        # smallest pair as a safe fallback
        viable = [(cand_t[0], cand_r[0])]
    return min(viable)


def round_tiny(x: float, eps: float = 1e-12) -> float:
    """Snap values within eps of zero to exactly zero (sign bookkeeping)."""
    return 0.0 if abs(x) < eps else x


def fmr_orientations(
    bound: FmrBound, d_t: float, d_r: float, region: str
) -> tuple[OrientationSetting, OrientationSetting]:
    """Array orientations realizing full multiplexing at an in-region point.

    Rectangle part: the Tx points at its apex angle with sin(psi_t) =
    D_t/D_t_star, the Rx at its axis anchor with sin(psi_r) = D_r/D_r_axis.
    Lobe part: the Tx opens fully (psi_t = pi/2) with the angle offset
    tan(gamma_t - gbar) = ratio, and the Rx follows the boundary-curve
    angle.
    """
    if region not in ("x", "y"):
        raise ValueError("region must be 'x' or 'y'")
    if region == "x":
        d_star, d_ray_t, d_ray_r = bound.d_t_star_x, bound.d_t_rayleigh_x, bound.d_r_rayleigh_x
        g_star, g_anchor_t = bound.gamma_star_x, bound.gbar_tx
        g_anchor_r = bound.gbar_rx
        gbar_t1, gbar_t2 = bound.gbar_tx, bound.gbar_ty
        gbar_r1, gbar_r2 = bound.gbar_rx, bound.gbar_ry
    else:
        d_star, d_ray_t, d_ray_r = bound.d_t_star_y, bound.d_t_rayleigh_y, bound.d_r_rayleigh_y
        g_star, g_anchor_t = bound.gamma_star_y, bound.gbar_ty
        g_anchor_r = bound.gbar_ry
        gbar_t1, gbar_t2 = bound.gbar_ty, bound.gbar_tx
        gbar_r1, gbar_r2 = bound.gbar_ry, bound.gbar_rx
    if d_t <= 0.0 or d_r <= 0.0:
        raise ValueError("distances must be positive")

    if d_t <= d_star:
        if d_r > d_ray_r:
            raise ValueError(
                f"D_r = {d_r:g} m exceeds the rectangle cap {d_ray_r:g} m"
            )
        gamma_t, gamma_r = _pick_gamma_pair(
            g_star, g_anchor_r, gbar_t1, gbar_t2, gbar_r1, gbar_r2
        )
        psi_t = math.asin(min(1.0, d_t / d_star))
        psi_r = math.asin(min(1.0, d_r / d_ray_r))
        branch = f"{region}-rect"
    elif d_t <= d_ray_t:
        cap, gamma_curve, t_branch = _boundary_cap(
            region, d_t,
            bound.d_t_rayleigh_x, bound.d_t_rayleigh_y,
            bound.d_r_rayleigh_x, bound.d_r_rayleigh_y,
            bound.a_tx, bound.gbar_tx, bound.a_ty, bound.gbar_ty,
            bound.a_rx, bound.gbar_rx, bound.a_ry, bound.gbar_ry,
        )
        if d_r > cap:
            raise ValueError(
                f"D_r = {d_r:g} m exceeds the boundary cap {cap:g} m at D_t = {d_t:g} m"
            )
        ratio = math.sqrt(max(0.0, (d_ray_t / d_t) ** 2 - 1.0))
        gamma_t, gamma_r = _pick_gamma_pair(
            g_anchor_t + math.atan(t_branch * ratio), gamma_curve,
            gbar_t1, gbar_t2, gbar_r1, gbar_r2,
        )
        psi_t = math.pi / 2
        denom = d_ray_r * abs(math.cos(gamma_curve - g_anchor_r))
        psi_r = math.asin(min(1.0, d_r / denom))
        branch = f"{region}-lobe"
    else:
        raise ValueError(
            f"D_t = {d_t:g} m exceeds the axis limit {d_ray_t:g} m"
        )
    return (
        OrientationSetting(psi=psi_t, gamma=gamma_t % TWO_PI, branch=branch),
        OrientationSetting(psi=psi_r, gamma=gamma_r % TWO_PI, branch=branch),
    )


def fmr_probe_orientation(
    bound: FmrBound, d_t: float, d_r: float, region: str
) -> tuple[OrientationSetting, OrientationSetting]:
    """Best-effort orientations at any point, clamping the in-region formulas.

    Outside the region the tilt equations have no solution; the clamped
    settings are the natural diagnostic probe (they fail the Gram check
    there, which is the point)."""
    if region == "x":
        d_star, d_ray_r = bound.d_t_star_x, bound.d_r_rayleigh_x
        g_star, g_anchor_r = bound.gamma_star_x, bound.gbar_rx
        gbar_t1, gbar_t2 = bound.gbar_tx, bound.gbar_ty
        gbar_r1, gbar_r2 = bound.gbar_rx, bound.gbar_ry
    else:
        d_star, d_ray_r = bound.d_t_star_y, bound.d_r_rayleigh_y
        g_star, g_anchor_r = bound.gamma_star_y, bound.gbar_ry
        gbar_t1, gbar_t2 = bound.gbar_ty, bound.gbar_tx
        gbar_r1, gbar_r2 = bound.gbar_ry, bound.gbar_rx
    gamma_t, gamma_r = _pick_gamma_pair(g_star, g_anchor_r, gbar_t1, gbar_t2, gbar_r1, gbar_r2)
    psi_t = math.asin(min(1.0, d_t / d_star))
    psi_r = math.asin(min(1.0, d_r / d_ray_r))
    return (
        OrientationSetting(psi=psi_t, gamma=gamma_t % TWO_PI, branch=f"{region}-probe"),
        OrientationSetting(psi=psi_r, gamma=gamma_r % TWO_PI, branch=f"{region}-probe"),
    )


def check_orthogonality(
    matrix: ComplexMatrix,
    mode: str,
    target_gain: float,
    tol_off: float = 1e-6,
    tol_diag: float = 1e-8,
) -> GramReport:
    """Gram-matrix test: off-diagonals near zero, diagonals near target_gain.

    mode 'columns' checks pairwise column inner products (M^H M), 'rows'
    checks row inner products (M M^H).  Passing requires the largest
    off-diagonal magnitude to stay below tol_off * target_gain and every
    diagonal to stay within tol_diag relative of target_gain.
    """
    m = np.asarray(matrix)
    if m.size == 0:
        raise ValueError("matrix must be nonempty")
    if mode == "columns":
        gram = m.conj().T @ m
    elif mode == "rows":
        gram = m @ m.conj().T
    else:
        raise ValueError("mode must be 'columns' or 'rows'")
    diag = np.real(np.diag(gram)).copy()
    off = gram - np.diag(np.diag(gram))
    max_off = float(np.max(np.abs(off))) if gram.shape[0] > 1 else 0.0
    passed = bool(
        max_off <= tol_off * target_gain
        and np.all(np.abs(diag - target_gain) <= tol_diag * target_gain)
    )
    return GramReport(
        max_offdiag=max_off, diag_values=diag, target_gain=target_gain, passed=passed
    )
