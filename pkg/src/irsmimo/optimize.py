"""Mutual information and its maximization over surface phases and array tilts.

Three nested optimizers: a majorization-minimization (MM) loop for the
unit-modulus surface phases theta, a projected gradient descent with
backtracking for the four orientation angles [gamma_t, psi_t, gamma_r,
psi_r], and an alternating driver calling both until the MI gain per round
drops below threshold.  MI is reported in bits; the descent works on the
negated MI.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from . import channel as chan
from . import response
from .scenario import PowerConfig, Scenario  # noqa: F401  (PowerConfig re-exported)

LOG2 = math.log(2.0)
TWO_PI = 2.0 * math.pi

GAMMA_BOX = (-math.pi / 2, math.pi / 2)
PSI_BOX = (0.0, math.pi)

SIGMA_FLOOR_SCALE = 1e-12
POWER_ITER_TOL = 1e-10
POWER_ITER_MAX = 20000
EIGH_CUTOVER = 64

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MmAuxiliaries:
    """Fixed-point matrices of one MM outer step.

    phi is the MMSE receive filter in transmit coordinates, sigma the error
    covariance, lam the quadratic surface-phase coupling and alpha its
    linear term.
    """

    phi: np.ndarray
    sigma: np.ndarray
    lam: np.ndarray
    alpha: np.ndarray


@dataclass(frozen=True)
class OrientationVector:
    """The four orientation angles the descent optimizes, in radians."""

    gamma_t: float
    psi_t: float
    gamma_r: float
    psi_r: float

    def as_array(self) -> np.ndarray:
        return np.array([self.gamma_t, self.psi_t, self.gamma_r, self.psi_r])

    @classmethod
    def from_array(cls, vec) -> "OrientationVector":
        g_t, p_t, g_r, p_r = (float(x) for x in vec)
        return cls(g_t, p_t, g_r, p_r)


@dataclass
class OptTrace:
    """Progress log: (outer step, MI in bits, which block moved)."""

    iterations: list
    stop_reason: str

    @property
    def mi_values(self) -> list:
        return [row[1] for row in self.iterations]


@dataclass(frozen=True)
class SingularAllocation:
    """Squared singular values assigned to each hop under the gain budgets."""

    mu_t_sq: np.ndarray
    mu_r_sq: np.ndarray
    regime: str


def mutual_information(h, power: PowerConfig) -> float:
    """log2 det(rho H^H H + I) in bits, via the smaller-side Gram spectrum."""
    h = np.asarray(h)
    if h.ndim != 2:
        raise ValueError("expected a matrix")
    gram = h @ h.conj().T if h.shape[0] < h.shape[1] else h.conj().T @ h
    ev = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    return float(np.sum(np.log1p(power.snr * ev)) / LOG2)


def mi_upper_bound(h_t, h_r, eta0: float, power: PowerConfig) -> float:
    """Best MI any unit-modulus surface configuration could reach.

    Pairs the descending singular values of the two hops; independent of
    the surface phases.
    """
    h_t, h_r = np.asarray(h_t), np.asarray(h_r)
    n_t, n_r = h_t.shape[1], h_r.shape[0]
    if n_t < n_r:
        raise ValueError("requires N_t >= N_r")
    mu_t = np.linalg.svd(h_t, compute_uv=False)
    mu_r = np.linalg.svd(h_r, compute_uv=False)
    pair = (mu_r[:n_r] ** 2) * (mu_t[:n_r] ** 2)
    return float(np.sum(np.log1p(power.snr * eta0**2 * pair)) / LOG2)


def relaxed_optimum(power_regime: str, n_t: int, n_r: int, q_x: int, q_y: int) -> SingularAllocation:
    """Optimal singular-value split of the relaxed MI bound per SNR regime.

    High SNR spreads both budgets evenly over the first n_r modes; low SNR
    concentrates everything on the first mode.
    """
    if power_regime not in ("high", "low"):
        raise ValueError("power_regime must be 'high' or 'low'")
    if n_t < n_r:
        raise ValueError("requires N_t >= N_r")
    area = q_x * q_y
    mu_t = np.zeros(n_t)
    mu_r = np.zeros(n_r)
    if power_regime == "high":
        mu_t[:n_r] = n_t * area / n_r
        mu_r[:] = area
    else:
        mu_t[0] = n_t * area
        mu_r[0] = n_r * area
    return SingularAllocation(mu_t_sq=mu_t, mu_r_sq=mu_r, regime=power_regime)


def allocation_rate(alloc: SingularAllocation, rho_eta_sq: float) -> float:
    """MI bound value of an allocation at effective SNR rho*eta0^2."""
    n_r = len(alloc.mu_r_sq)
    pair = alloc.mu_r_sq * alloc.mu_t_sq[:n_r]
    return float(np.sum(np.log1p(rho_eta_sq * pair)) / LOG2)


def mm_auxiliaries(h_t, h_r, theta, eta0: float, power: PowerConfig) -> MmAuxiliaries:
    """Auxiliary matrices for one MM round at the current surface phases."""
    h_t, h_r = np.asarray(h_t), np.asarray(h_r)
    theta = np.asarray(theta)
    n_t, n_r = h_t.shape[1], h_r.shape[0]
    p_pow, noise = power.per_antenna_power, power.noise_power

    g = (h_r * theta[None, :]) @ h_t
    c_xy = p_pow * eta0 * g.conj().T
    c_yy = p_pow * eta0**2 * (g @ g.conj().T) + noise * np.eye(n_r)
    phi = np.linalg.solve(c_yy, c_xy.conj().T).conj().T
    sigma = p_pow * np.eye(n_t) - phi @ c_xy.conj().T
    sigma = 0.5 * (sigma + sigma.conj().T)

    floor = SIGMA_FLOOR_SCALE * float(np.real(np.trace(sigma))) / n_t
    ev_min = float(np.linalg.eigvalsh(sigma)[0])
    if ev_min < floor:
        logger.warning(
            "error covariance regularized: min eigenvalue %.3e lifted to %.3e", ev_min, floor
        )
        sigma = sigma + (floor - ev_min) * np.eye(n_t)

    s_inv_phi = np.linalg.solve(sigma, phi)
    core = phi.conj().T @ s_inv_phi
    lam = p_pow * eta0**2 * np.conj(h_t @ h_t.conj().T) * (h_r.conj().T @ core @ h_r)
    lam = 0.5 * (lam + lam.conj().T)

    left = h_r.conj().T @ s_inv_phi.conj().T
    alpha = -p_pow * eta0 * np.einsum("ij,ij->i", left, h_t.conj())
    return MmAuxiliaries(phi=phi, sigma=sigma, lam=lam, alpha=alpha)


def qcqp_objective(lam, alpha, theta) -> float:
    """Quadratic surrogate Re(theta^H lam theta) + 2 Re(alpha^H theta)."""
    theta = np.asarray(theta)
    return float(np.real(np.vdot(theta, lam @ theta)) + 2.0 * np.real(np.vdot(alpha, theta)))


def largest_eigenvalue(a) -> float:
    """Top eigenvalue of a Hermitian PSD matrix.

    Small matrices go through a full eigendecomposition; larger ones use
    power iteration with a relative Rayleigh-quotient tolerance.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if n < EIGH_CUTOVER:
        return float(np.linalg.eigvalsh(a)[-1])
    v = np.ones(n, dtype=complex) + 1e-3 * np.arange(n)
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(POWER_ITER_MAX):
        w = a @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        est = float(np.real(np.vdot(v, w)))
        v = w / norm
        if abs(est - prev) <= POWER_ITER_TOL * max(1.0, abs(est)):
            return est
        prev = est
    return prev


def mm_step(lam, alpha, theta, lam_max: float | None = None) -> np.ndarray:
    """One majorized phase update; entries with a zero update direction keep
    their current phase."""
    theta = np.asarray(theta)
    if lam_max is None:
        lam_max = largest_eigenvalue(lam)
    q = lam_max * theta - lam @ theta - alpha
    return np.where(q == 0, theta, np.exp(1j * np.angle(q)))


def _hop_matrices(scn: Scenario):
    h_t = chan.tx_irs_channel(scn)
    h_r = chan.irs_rx_channel(scn)
    gain = response.eta0(scn.wave, scn.reflection, scn.irs, scn.tx, scn.rx)
    return h_t, h_r, gain


def _cascade_mi(h_t, h_r, gain, theta, power) -> float:
    h = gain * ((h_r * theta[None, :]) @ h_t)
    return mutual_information(h, power)


def optimize_theta(
    scn: Scenario,
    theta_init,
    *,
    eps_theta: float = 1e-6,
    eps_mm: float = 1e-8,
    max_outer: int = 200,
    max_inner: int = 500,
) -> tuple[np.ndarray, OptTrace]:
    """MM maximization of MI over the surface phases at fixed geometry.

    Outer loop refreshes the auxiliaries and stops when the MI gain falls
    under eps_theta bits; the inner loop repeats the majorized update until
    the surrogate objective improves by less than eps_mm.
    """
    theta = np.asarray(theta_init, dtype=complex)
    mags = np.abs(theta)
    if np.any(mags == 0):
        raise ValueError("theta entries must be nonzero unit phasors")
    theta = theta / mags

    h_t, h_r, gain = _hop_matrices(scn)
    mi_prev = _cascade_mi(h_t, h_r, gain, theta, scn.power)
    rows = [(0, mi_prev, "theta")]
    reason = "max_iters"
    for outer in range(1, max_outer + 1):
        aux = mm_auxiliaries(h_t, h_r, theta, gain, scn.power)
        lam_max = largest_eigenvalue(aux.lam)
        obj = qcqp_objective(aux.lam, aux.alpha, theta)
        for _ in range(max_inner):
            theta = mm_step(aux.lam, aux.alpha, theta, lam_max=lam_max)
            new_obj = qcqp_objective(aux.lam, aux.alpha, theta)
            if obj - new_obj < eps_mm:
                obj = new_obj
                break
            obj = new_obj
        mi_now = _cascade_mi(h_t, h_r, gain, theta, scn.power)
        rows.append((outer, mi_now, "theta"))
        if mi_now - mi_prev < eps_theta:
            mi_prev = mi_now
            reason = "threshold"
            break
        mi_prev = mi_now
    return theta, OptTrace(iterations=rows, stop_reason=reason)


def _as_vector(m) -> np.ndarray:
    if isinstance(m, OrientationVector):
        return m.as_array()
    vec = np.asarray(m, dtype=float)
    if vec.shape != (4,):
        raise ValueError("orientation vector must have four components")
    return vec


def _posed(pose, gamma: float, psi: float):
    """Pose with the given orientation, folded into the pose's angle domain.

    (gamma, psi) and (gamma + pi, -psi) describe the same physical axis, so
    out-of-domain tilts are mirrored rather than rejected; this keeps
    finite-difference probes valid near the tilt limits.
    """
    if psi < 0.0:
        psi, gamma = -psi, gamma + math.pi
    if psi > math.pi:
        psi, gamma = TWO_PI - psi, gamma + math.pi
    return replace(pose, orient_azimuth=float(gamma % TWO_PI), orient_elevation=float(psi))


def oriented_scenario(scn: Scenario, m) -> Scenario:
    """Scenario with both array orientations replaced by the vector m."""
    g_t, p_t, g_r, p_r = _as_vector(m)
    return replace(scn, tx=_posed(scn.tx, g_t, p_t), rx=_posed(scn.rx, g_r, p_r))


def _descent_objective(scn: Scenario, theta, m) -> float:
    sc = oriented_scenario(scn, m)
    h_t, h_r, gain = _hop_matrices(sc)
    return -_cascade_mi(h_t, h_r, gain, theta, sc.power)


def mi_gradient(scn: Scenario, theta, m) -> np.ndarray:
    """Analytic gradient of the negated MI in the four orientation angles."""
    theta = np.asarray(theta)
    sc = oriented_scenario(scn, m)
    h_t, h_r, gain = _hop_matrices(sc)
    rho_eff = sc.power.snr * gain**2

    w = h_r * theta[None, :]
    g_mat = w @ h_t
    n_t = h_t.shape[1]
    delta = rho_eff * (g_mat.conj().T @ g_mat) + np.eye(n_t)
    x = np.linalg.solve(delta, g_mat.conj().T)

    e_t = (x @ w).T * h_t
    e_r = (theta[:, None] * (h_t @ x)).T * h_r
    dz_gt, dz_pt = chan.orientation_phase_jacobian(sc.wave, sc.irs, sc.tx)
    dz_gr, dz_pr = chan.orientation_phase_jacobian(sc.wave, sc.irs, sc.rx)
    coef = -(2.0 * rho_eff / LOG2)
    return np.array(
        [
            coef * float(np.imag(np.sum(e_t * dz_gt))),
            coef * float(np.imag(np.sum(e_t * dz_pt))),
            coef * float(np.imag(np.sum(e_r * dz_gr.T))),
            coef * float(np.imag(np.sum(e_r * dz_pr.T))),
        ]
    )


def finite_difference_gradient(scn: Scenario, theta, m, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of the negated MI (oracle for mi_gradient)."""
    if step <= 0.0:
        raise ValueError("step must be > 0")
    vec = _as_vector(m)
    out = np.zeros(4)
    for i in range(4):
        probe = np.zeros(4)
        probe[i] = step
        hi = _descent_objective(scn, theta, vec + probe)
        lo = _descent_objective(scn, theta, vec - probe)
        out[i] = (hi - lo) / (2.0 * step)
    return out


def normalize_orientation(m) -> np.ndarray:
    """Fold an orientation vector into the optimizer box, axis preserved.

    (gamma + pi, pi - psi) relabels the same antenna line, so gamma wraps
    into [-pi/2, pi/2) with the matching psi flip; psi then clips to
    [0, pi].  The fold never changes the physical configuration.
    """

    def fold(gamma, psi):
        gamma = gamma % TWO_PI
        if math.pi / 2 <= gamma < 3 * math.pi / 2:
            gamma, psi = gamma - math.pi, math.pi - psi
        elif gamma >= 3 * math.pi / 2:
            gamma -= TWO_PI
        return gamma, float(np.clip(psi, *PSI_BOX))

    g_t, p_t, g_r, p_r = _as_vector(m)
    g_t, p_t = fold(g_t, p_t)
    g_r, p_r = fold(g_r, p_r)
    return np.array([g_t, p_t, g_r, p_r])


def project_box(m) -> np.ndarray:
    """Clip an orientation vector to the box (after a descent step)."""
    g_t, p_t, g_r, p_r = _as_vector(m)
    return np.array(
        [
            float(np.clip(g_t, *GAMMA_BOX)),
            float(np.clip(p_t, *PSI_BOX)),
            float(np.clip(g_r, *GAMMA_BOX)),
            float(np.clip(p_r, *PSI_BOX)),
        ]
    )


def optimize_orientation(
    scn: Scenario,
    theta,
    m_init,
    *,
    eps_orient: float = 1e-6,
    max_iters: int = 200,
    shrink: float = 0.5,
    max_backtracks: int = 40,
    init_step: float = 1.0,
) -> tuple[OrientationVector, OptTrace]:
    """Projected gradient descent on the orientation angles.

    Backtracking halves the step until the objective does not increase
    (simple-decrease rule); each trial point is clipped to the box first.
    """
    theta = np.asarray(theta)
    m = normalize_orientation(m_init)
    obj = _descent_objective(scn, theta, m)
    rows = [(0, -obj, "orientation")]
    reason = "max_iters"
    for it in range(1, max_iters + 1):
        grad = mi_gradient(scn, theta, m)
        step = init_step
        trial, trial_obj, accepted = m, obj, False
        for _ in range(max_backtracks):
            cand = project_box(m - step * grad)
            cand_obj = _descent_objective(scn, theta, cand)
            if cand_obj <= obj:
                trial, trial_obj, accepted = cand, cand_obj, True
                break
            step *= shrink
        if not accepted:
            reason = "threshold"
            break
        m, gain = trial, obj - trial_obj
        obj = trial_obj
        rows.append((it, -obj, "orientation"))
        if gain < eps_orient:
            reason = "threshold"
            break
    return OrientationVector.from_array(m), OptTrace(iterations=rows, stop_reason=reason)


def random_init(scn: Scenario, seed) -> tuple[np.ndarray, OrientationVector]:
    """Seeded random start: uniform phases, orientations uniform in the box."""
    rng = np.random.default_rng(seed)
    theta = np.exp(1j * rng.uniform(0.0, TWO_PI, scn.irs.n_elements))
    m = OrientationVector(
        gamma_t=rng.uniform(*GAMMA_BOX),
        psi_t=rng.uniform(*PSI_BOX),
        gamma_r=rng.uniform(*GAMMA_BOX),
        psi_r=rng.uniform(*PSI_BOX),
    )
    return theta, m


def focusing_init(scn: Scenario) -> tuple[np.ndarray, OrientationVector]:
    """Start from the scenario's declared focusing phases and orientations.

    Because the alternation is monotone, a run launched here can only end
    at or above the plain focusing MI, which makes it the natural anchor of
    a multi-start portfolio.
    """
    theta = chan.scenario_focusing(scn).phasor
    m_vec = normalize_orientation(
        [
            scn.tx.orient_azimuth,
            scn.tx.orient_elevation,
            scn.rx.orient_azimuth,
            scn.rx.orient_elevation,
        ]
    )
    return theta, OrientationVector.from_array(m_vec)


def alternating_optimize(
    scn: Scenario,
    init=None,
    *,
    seed=None,
    eps_oa: float = 1e-6,
    max_rounds: int = 50,
    theta_stop: dict | None = None,
    orient_stop: dict | None = None,
) -> tuple[np.ndarray, OrientationVector, OptTrace]:
    """Alternate surface-phase MM and orientation descent until MI settles.

    init is a (theta, orientation) pair; when omitted a seeded random start
    is drawn.  Returns the final phases, orientation and the joint trace.
    """
    if init is None:
        theta, m = random_init(scn, seed)
    else:
        theta, m = init
        theta = np.asarray(theta, dtype=complex)
    m_vec = normalize_orientation(m)
    theta_stop = theta_stop or {}
    orient_stop = orient_stop or {}

    mi_prev = -_descent_objective(scn, theta, m_vec)
    rows = [(0, mi_prev, "init")]
    reason = "max_iters"
    for rnd in range(1, max_rounds + 1):
        sc = oriented_scenario(scn, m_vec)
        theta, _ = optimize_theta(sc, theta, **theta_stop)
        rows.append((rnd, -_descent_objective(scn, theta, m_vec), "theta"))
        m_out, _ = optimize_orientation(scn, theta, m_vec, **orient_stop)
        m_vec = m_out.as_array()
        mi_now = -_descent_objective(scn, theta, m_vec)
        rows.append((rnd, mi_now, "orientation"))
        if mi_now - mi_prev < eps_oa:
            reason = "threshold"
            mi_prev = mi_now
            break
        mi_prev = mi_now
    return theta, OrientationVector.from_array(m_vec), OptTrace(iterations=rows, stop_reason=reason)
