"""Command-line front end: scenario-driven experiments emitting CSV.

Every command reads one scenario file, computes, and writes CSV (or a small
key=value report) either to --out or stdout.  CSVs start with a comment
line carrying the scenario content hash, then a header row; floats are
printed with 17 significant digits so files are bit-reproducible and
round-trip exact.

Exit codes: 0 success, 1 usage or scenario errors, 2 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import channel as chan
from . import multiplexing as mux
from . import optimize as opt
from . import response
from .geometry import ArrayPose, IrsLayout
from .scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    scenario_hash,
    serialize_scenario,
)


@dataclass(frozen=True)
class SweepSpec:
    """One swept scenario field with its range and requested outputs."""

    variable: str
    start: float
    stop: float
    count: int
    outputs: tuple = ()

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if self.count >= 2 and not self.start < self.stop:
            raise ValueError("start must be < stop")

    def values(self) -> np.ndarray:
        if self.count == 0:
            return np.empty(0)
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _emit(args, header, rows, scn: Scenario) -> None:
    lines = [f"# scenario={scenario_hash(scn)}", ",".join(header)]
    lines += [",".join(_fmt(cell) for cell in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _print_kv(key: str, value) -> None:
    print(f"{key} = {_fmt(value)}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_rayleigh(args) -> int:
    scn = parse_scenario(args.scenario)
    rows = []
    for side, pose in (("tx", scn.tx), ("rx", scn.rx)):
        rr = mux.rayleigh_distances(pose, scn.irs, scn.wave)
        _print_kv(f"{side}.d_rayleigh_x_m", rr.d_rx_axis)
        _print_kv(f"{side}.d_rayleigh_y_m", rr.d_ry_axis)
        _print_kv(f"{side}.d_rayleigh_m", rr.d_r)
        rows.append((side, "x", rr.d_rx_axis, rr.x_applicable))
        rows.append((side, "y", rr.d_ry_axis, rr.y_applicable))
    if args.out:
        _emit(args, ["side", "axis", "rayleigh_m", "applicable"], rows, scn)
    return 0


def cmd_channel(args) -> int:
    scn = parse_scenario(args.scenario)
    if args.matrix == "closed":
        matrix = chan.closed_form_channel(scn)
    else:
        cs = chan.build_channels(scn)
        matrix = {"h": cs.h, "ht": cs.h_t, "hr": cs.h_r, "theta": cs.theta}[args.matrix]
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    rows = [
        (r, c, matrix[r, c].real, matrix[r, c].imag)
        for r in range(matrix.shape[0])
        for c in range(matrix.shape[1])
    ]
    _emit(args, ["row", "col", "re", "im"], rows, scn)
    if args.gnuplot_hints:
        _hint_matrix(args)
    return 0


def cmd_eigensweep(args) -> int:
    scn = parse_scenario(args.scenario)
    sweep = SweepSpec("tx.distance", args.start, args.stop, args.count, ("eigenvalues",))
    rr = mux.rayleigh_distances(scn.tx, scn.irs, scn.wave)
    axis = {"auto-x": "x", "auto-y": "y"}.get(args.orient)
    d_axis = rr.d_rx_axis if axis == "x" else rr.d_ry_axis

    def eigenvalues(d_t: float):
        pose = replace(scn.tx, distance=float(d_t))
        if axis is not None:
            # solve the per-distance orientation; beyond the limit keep the
            # setting solved exactly at the limit
            solved = mux.single_hop_orientation(
                replace(pose, distance=min(float(d_t), d_axis)), scn.irs, scn.wave, axis
            )
            pose = replace(pose, orient_azimuth=solved.gamma, orient_elevation=solved.psi)
        h_t = chan.tx_irs_channel(replace(scn, tx=pose))
        ev = np.linalg.eigvalsh(h_t.conj().T @ h_t) / scn.irs.n_elements
        return (float(d_t), *np.sort(ev)[::-1])

    rows = _pmap(eigenvalues, sweep.values(), args.threads)
    header = ["d_t"] + [f"eig_{i + 1}" for i in range(scn.tx.n_antennas)]
    _emit(args, header, rows, scn)
    if args.gnuplot_hints:
        _hint_eigensweep(args, scn.tx.n_antennas)
    return 0


def cmd_fmr_map(args) -> int:
    scn = parse_scenario(args.scenario)
    bound = mux.fmr_inner_bound(scn.tx, scn.rx, scn.irs, scn.wave)
    dt_vals = SweepSpec("tx.distance", args.dt_start, args.dt_stop, args.dt_count).values()
    dr_vals = SweepSpec("rx.distance", args.dr_start, args.dr_stop, args.dr_count).values()
    points = [(float(dt), float(dr)) for dt in dt_vals for dr in dr_vals]

    def survey(point):
        d_t, d_r = point
        in_x = mux.region_contains(bound, d_t, d_r, "x")
        in_y = mux.region_contains(bound, d_t, d_r, "y")
        gram_pass = None
        if args.verify:
            region = "x" if in_x else ("y" if in_y else None)
            if region is None:
                ot, orx = mux.fmr_probe_orientation(bound, d_t, d_r, "x")
            else:
                ot, orx = mux.fmr_orientations(bound, d_t, d_r, region)
            sc = replace(
                scn,
                tx=replace(scn.tx, distance=d_t, orient_azimuth=ot.gamma, orient_elevation=ot.psi),
                rx=replace(scn.rx, distance=d_r, orient_azimuth=orx.gamma, orient_elevation=orx.psi),
                focusing_mode="reflective",
                focusing_betas=None,
            )
            cs = chan.build_channels(sc)
            target = cs.eta0**2 * scn.irs.n_elements**2
            report = mux.check_orthogonality(
                cs.h, "rows", target, tol_off=args.tol_off, tol_diag=args.tol_diag
            )
            gram_pass = report.passed
        return (d_t, d_r, in_x, in_y, gram_pass)

    rows = _pmap(survey, points, args.threads)
    _emit(args, ["d_t", "d_r", "in_region_x", "in_region_y", "gram_pass"], rows, scn)
    if args.gnuplot_hints:
        _hint_fmr_map(args)
    return 0


def cmd_fmr_orient(args) -> int:
    scn = parse_scenario(args.scenario)
    bound = mux.fmr_inner_bound(scn.tx, scn.rx, scn.irs, scn.wave)
    region = args.region
    if region == "auto":
        if mux.region_contains(bound, args.dt, args.dr, "x"):
            region = "x"
        elif mux.region_contains(bound, args.dt, args.dr, "y"):
            region = "y"
        else:
            print(
                f"point (D_t={_fmt(args.dt)}, D_r={_fmt(args.dr)}) is outside both regions",
                file=sys.stderr,
            )
            return 1
    try:
        ot, orx = mux.fmr_orientations(bound, args.dt, args.dr, region)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sc = replace(
        scn,
        tx=replace(scn.tx, distance=args.dt, orient_azimuth=ot.gamma, orient_elevation=ot.psi),
        rx=replace(scn.rx, distance=args.dr, orient_azimuth=orx.gamma, orient_elevation=orx.psi),
    )
    cc = chan.coupling_constants(sc)
    _print_kv("region", region)
    _print_kv("branch", ot.branch)
    _print_kv("tx.orient_azimuth_rad", ot.gamma)
    _print_kv("tx.orient_elevation_rad", ot.psi)
    _print_kv("rx.orient_azimuth_rad", orx.gamma)
    _print_kv("rx.orient_elevation_rad", orx.psi)
    _print_kv("coupling.c_tx", cc.c_tx)
    _print_kv("coupling.c_ty", cc.c_ty)
    _print_kv("coupling.c_rx", cc.c_rx)
    _print_kv("coupling.c_ry", cc.c_ry)
    if args.out:
        _emit(
            args,
            ["d_t", "d_r", "region", "gamma_t", "psi_t", "gamma_r", "psi_r"],
            [(args.dt, args.dr, region, ot.gamma, ot.psi, orx.gamma, orx.psi)],
            scn,
        )
    return 0


def cmd_optimize(args) -> int:
    scn = parse_scenario(args.scenario)
    theta_stop = {
        "eps_theta": args.eps_theta,
        "eps_mm": args.eps_mm,
        "max_outer": args.max_outer,
        "max_inner": args.max_inner,
    }
    orient_stop = {"eps_orient": args.eps_orient, "max_iters": args.max_orient_iters}

    if args.seeds == 0:
        cs = chan.build_channels(scn)
        mi = opt.mutual_information(cs.h, scn.power)
        bound = opt.mi_upper_bound(cs.h_t, cs.h_r, cs.eta0, scn.power)
        print(
            f"seed=none mi_bits={_fmt(mi)} upper_bound_bits={_fmt(bound)} "
            f"gap_bits={_fmt(bound - mi)}"
        )
        _emit(args, ["round", "block", "mi_bits"], [(0, "init", mi)], scn)
        return 0

    def run(label):
        init = opt.focusing_init(scn) if label == "focus" else None
        seed = None if label == "focus" else label
        theta, m, trace = opt.alternating_optimize(
            scn,
            init,
            seed=seed,
            eps_oa=args.eps_oa,
            max_rounds=args.max_rounds,
            theta_stop=theta_stop,
            orient_stop=orient_stop,
        )
        sc = opt.oriented_scenario(scn, m)
        h_t, h_r, gain = opt._hop_matrices(sc)
        mi = trace.iterations[-1][1]
        bound = opt.mi_upper_bound(h_t, h_r, gain, scn.power)
        return label, theta, m, trace, mi, bound

    # the declared-focusing start anchors the portfolio: being monotone, it
    # cannot end below the plain focusing MI, so the best over all starts
    # always dominates it
    base = args.seed if args.seed is not None else 0
    labels = ["focus"] + list(range(base, base + args.seeds))
    results = _pmap(run, labels, args.threads)
    for label, _, _, _, mi, bound in results:
        print(
            f"seed={label} mi_bits={_fmt(mi)} upper_bound_bits={_fmt(bound)} "
            f"gap_bits={_fmt(bound - mi)}"
        )
    best = max(results, key=lambda item: item[4])
    label, theta, m, trace, mi, bound = best
    print(f"best_seed={label} mi_bits={_fmt(mi)}")
    _emit(
        args,
        ["round", "block", "mi_bits"],
        [(step, block, value) for step, value, block in trace.iterations],
        scn,
    )
    if args.overlay:
        betas = tuple(float(b) for b in np.angle(theta))
        converged = replace(
            opt.oriented_scenario(scn, m),
            focusing_mode="explicit",
            focusing_betas=betas,
            metadata={**scn.metadata, "converged_seed": str(label), "converged_mi_bits": _fmt(mi)},
        )
        with open(args.overlay, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(serialize_scenario(converged))
    return 0


# ---------------------------------------------------------------------------
# verification suite


def _golden_scenario() -> Scenario:
    """Reference setup used by the golden checks when no scenario is given."""
    return Scenario(
        wave=response.WaveConfig(0.005),
        tx=ArrayPose(
            n_antennas=5,
            spacing=0.1,
            distance=10.0,
            azimuth=7 * math.pi / 6,
            elevation=math.pi / 6,
        ),
        rx=ArrayPose(
            n_antennas=5,
            spacing=0.1,
            distance=10.0,
            azimuth=math.pi / 3,
            elevation=3 * math.pi / 7,
        ),
        irs=IrsLayout(15, 15, 0.1, 0.1, 0.1, 0.1),
    )


def _check_rayleigh_golden(scn: Scenario):
    rr = mux.rayleigh_distances(scn.tx, scn.irs, scn.wave)
    ok = abs(rr.d_rx_axis - 27.0416) <= 1e-3 and abs(rr.d_ry_axis - 29.0474) <= 1e-3
    return ok, f"d_rx={rr.d_rx_axis:.6f} m, d_ry={rr.d_ry_axis:.6f} m (want 27.0416, 29.0474)"


def _check_far_field_golden(_scn: Scenario):
    goldens = [(75e9, 0.4, 160.0), (140e9, 0.75, 298.7), (338e9, 1.8, 721.0)]
    layout = IrsLayout(19, 19, 0.38 / 18, 0.38 / 18, 0.02, 0.02)
    details = []
    ok = True
    for freq, want_re, want_irs in goldens:
        wave = response.WaveConfig.from_carrier(freq)
        b_re = response.far_field_boundary_re(layout, wave.wavelength)
        b_irs = response.far_field_boundary_irs(layout, wave.wavelength)
        ok = ok and abs(b_re - want_re) <= 0.01 * want_re
        ok = ok and abs(b_irs - want_irs) <= 0.01 * want_irs
        details.append(f"{freq / 1e9:g}GHz:({b_re:.4f},{b_irs:.1f})")
    return ok, " ".join(details)


def _response_scenario(distance: float) -> Scenario:
    pose = dict(n_antennas=5, spacing=0.01, distance=distance)
    return Scenario(
        wave=response.WaveConfig.from_carrier(140e9),
        tx=ArrayPose(azimuth=3 * math.pi / 2, elevation=math.pi / 4, **pose),
        rx=ArrayPose(azimuth=math.pi / 2, elevation=math.pi / 6, **pose),
        irs=IrsLayout(15, 15, 0.02, 0.02, 0.02, 0.02),
    )


def _check_response_flatness(_scn: Scenario):
    def xi(distance):
        sc = _response_scenario(distance)
        return response.amplitude_variation(sc.wave, sc.reflection, sc.irs, sc.tx, sc.rx)

    lo, hi = 0.5, 20.0
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if xi(mid) > 0.1:
            lo = mid
        else:
            hi = mid
    crossing = 0.5 * (lo + hi)
    ok = abs(crossing - 2.5) <= 0.2
    return ok, f"0.1-crossing at {crossing:.3f} m (want 2.5 +/- 0.2)"


def _random_scenario(rng) -> Scenario:
    n_t = int(rng.choice([3, 5, 7]))
    n_r = int(rng.choice([mm for mm in (1, 3, 5, 7) if mm <= n_t]))
    q_x = int(rng.choice([5, 9, 15]))
    q_y = int(rng.choice([5, 9, 15]))
    lam = float(rng.uniform(0.004, 0.012))

    def pose(count):
        return ArrayPose(
            n_antennas=count,
            spacing=float(rng.uniform(0.02, 0.12)),
            distance=float(rng.uniform(4.0, 16.0)),
            azimuth=float(rng.uniform(0.0, 2 * math.pi)),
            elevation=float(rng.uniform(0.05, math.pi / 2 - 0.05)),
            orient_azimuth=float(rng.uniform(0.0, 2 * math.pi)),
            orient_elevation=float(rng.uniform(0.2, math.pi - 0.2)),
        )

    spacing = float(rng.uniform(0.02, 0.08))
    return Scenario(
        wave=response.WaveConfig(lam),
        tx=pose(n_t),
        rx=pose(n_r),
        irs=IrsLayout(q_x, q_y, spacing, spacing, spacing, spacing),
    )


def _check_closed_form(scn: Scenario):
    worst = 0.0
    if scn.focusing_mode == "reflective":
        # symmetric user geometries can put exact Dirichlet zeros in the
        # matrix, where a plain entrywise ratio is meaningless; judge small
        # entries on absolute agreement instead
        cs = chan.build_channels(scn)
        cf = chan.closed_form_channel(scn)
        scale = float(np.max(np.abs(cs.h)))
        err = np.abs(cf - cs.h)
        big = np.abs(cs.h) > 1e-6 * scale
        worst = float(np.max(np.where(big, err / np.abs(cs.h), err / scale)))
    rng = np.random.default_rng(20260826)
    for _ in range(5):
        sc = _random_scenario(rng)
        cs = chan.build_channels(sc)
        cf = chan.closed_form_channel(sc)
        worst = max(worst, float(np.max(np.abs(cf - cs.h) / np.abs(cs.h))))
    return worst < 1e-8, f"max entrywise relative error {worst:.3e} (< 1e-8)"


def _check_gradient(_scn: Scenario):
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(3):
        sc = _random_scenario(rng)
        sc = replace(sc, power=opt.PowerConfig(1.0, 1e-12))
        theta = np.exp(1j * rng.uniform(0, 2 * math.pi, sc.irs.n_elements))
        m = np.array(
            [
                rng.uniform(-1.2, 1.2),
                rng.uniform(0.4, math.pi - 0.4),
                rng.uniform(-1.2, 1.2),
                rng.uniform(0.4, math.pi - 0.4),
            ]
        )
        an = opt.mi_gradient(sc, theta, m)
        fd = opt.finite_difference_gradient(sc, theta, m, step=1e-6)
        worst = max(worst, float(np.linalg.norm(an - fd) / np.linalg.norm(fd)))
    return worst < 1e-5, f"worst relative gradient error {worst:.3e} (< 1e-5)"


def _check_mm_monotone(_scn: Scenario):
    rng = np.random.default_rng(7)
    sc = _random_scenario(rng)
    sc = replace(sc, power=opt.PowerConfig(1.0, 1e-10))
    cs = chan.build_channels(sc)
    theta = np.exp(1j * rng.uniform(0, 2 * math.pi, sc.irs.n_elements))
    aux = opt.mm_auxiliaries(cs.h_t, cs.h_r, theta, cs.eta0, sc.power)
    lam_max = opt.largest_eigenvalue(aux.lam)
    obj = opt.qcqp_objective(aux.lam, aux.alpha, theta)
    worst_rise = 0.0
    for _ in range(20):
        theta = opt.mm_step(aux.lam, aux.alpha, theta, lam_max=lam_max)
        new = opt.qcqp_objective(aux.lam, aux.alpha, theta)
        worst_rise = max(worst_rise, new - obj)
        obj = new
    scale = max(1.0, abs(obj))
    return worst_rise <= 1e-9 * scale, f"largest surrogate rise {worst_rise:.3e}"


def _check_gram_fmr(_scn: Scenario):
    scn = _golden_scenario()
    bound = mux.fmr_inner_bound(scn.tx, scn.rx, scn.irs, scn.wave)
    d_t = 0.8 * bound.d_t_star_x
    d_r = 0.8 * bound.d_r_rayleigh_x
    ot, orx = mux.fmr_orientations(bound, d_t, d_r, "x")
    sc_in = replace(
        scn,
        tx=replace(scn.tx, distance=d_t, orient_azimuth=ot.gamma, orient_elevation=ot.psi),
        rx=replace(scn.rx, distance=d_r, orient_azimuth=orx.gamma, orient_elevation=orx.psi),
    )
    cs = chan.build_channels(sc_in)
    inside = mux.check_orthogonality(cs.h, "rows", cs.eta0**2 * scn.irs.n_elements**2)
    d_t_out = 1.5 * bound.d_t_rayleigh_x
    pt, pr = mux.fmr_probe_orientation(bound, d_t_out, d_r, "x")
    sc_out = replace(
        scn,
        tx=replace(scn.tx, distance=d_t_out, orient_azimuth=pt.gamma, orient_elevation=pt.psi),
        rx=replace(scn.rx, distance=d_r, orient_azimuth=pr.gamma, orient_elevation=pr.psi),
    )
    cs_out = chan.build_channels(sc_out)
    outside = mux.check_orthogonality(cs_out.h, "rows", cs_out.eta0**2 * scn.irs.n_elements**2)
    ok = inside.passed and not outside.passed
    return ok, f"in-region pass={inside.passed}, outside pass={outside.passed} (want True/False)"


CHECKS = [
    ("rayleigh_golden", _check_rayleigh_golden),
    ("far_field_golden", _check_far_field_golden),
    ("response_flatness", _check_response_flatness),
    ("closed_form", _check_closed_form),
    ("gradient", _check_gradient),
    ("mm_monotone", _check_mm_monotone),
    ("gram_fmr", _check_gram_fmr),
]


def cmd_verify(args) -> int:
    scn = parse_scenario(args.scenario) if args.scenario else _golden_scenario()
    if args.checks is None:
        selected = CHECKS
    else:
        wanted = [name for name in args.checks.split(",") if name.strip()]
        known = dict(CHECKS)
        for name in wanted:
            if name not in known:
                print(f"error: unknown check '{name}'", file=sys.stderr)
                return 1
        selected = [(name, known[name]) for name in wanted]
    if not selected:
        print("warning: no checks selected; nothing verified", file=sys.stderr)
        print("PASS (0 checks)")
        return 0
    failures = 0
    for name, fn in selected:
        ok, detail = fn(scn)
        line = "PASS" if ok else "FAIL"
        print(f"{line} {name}: {detail}")
        failures += 0 if ok else 1
    print(f"{len(selected) - failures}/{len(selected)} checks passed")
    return 2 if failures else 0


# ---------------------------------------------------------------------------
# gnuplot hints


def _hint_eigensweep(args, n: int) -> None:
    src = args.out or "eigensweep.csv"
    cols = ", ".join(f"'' using 1:{i + 2} with lines title 'eig {i + 1}'" for i in range(1, n))
    print(f"# gnuplot\nset datafile commentschars '#'\nset logscale y\n"
          f"plot '{src}' using 1:2 with lines title 'eig 1', {cols}")


def _hint_fmr_map(args) -> None:
    src = args.out or "fmr_map.csv"
    print(f"# gnuplot\nset datafile separator ','\n"
          f"plot '{src}' using 1:($3 > 0 ? $2 : 1/0) with points pt 5 title 'region x',\\\n"
          f"     '{src}' using 1:($4 > 0 ? $2 : 1/0) with points pt 7 title 'region y'")


def _hint_matrix(args) -> None:
    src = args.out or "matrix.csv"
    print(f"# gnuplot\nset datafile separator ','\n"
          f"plot '{src}' using 2:1:(sqrt($3**2+$4**2)) with image title '|entry|'")


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(sub, scenario_required=True):
    sub.add_argument("--scenario", required=scenario_required, help="scenario file path")
    sub.add_argument("--out", help="output CSV path (default stdout)")
    sub.add_argument("--seed", type=int, default=None, help="base RNG seed")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    sub.add_argument(
        "--gnuplot-hints", action="store_true", help="print a matching gnuplot script"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsmimo",
        description="Cascaded reflected-path MIMO toolkit: channels, "
        "multiplexing regions, phase/orientation optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rayleigh", help="per-axis multiplexing distance limits")
    _add_common(p)
    p.set_defaults(fn=cmd_rayleigh)

    p = sub.add_parser("channel", help="dump a channel matrix as CSV")
    _add_common(p)
    p.add_argument(
        "--matrix",
        choices=["h", "ht", "hr", "theta", "closed"],
        default="h",
        help="which matrix to export",
    )
    p.set_defaults(fn=cmd_channel)

    p = sub.add_parser("eigensweep", help="hop-Gram eigenvalues against Tx distance")
    _add_common(p)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument(
        "--orient",
        choices=["fixed", "auto-x", "auto-y"],
        default="fixed",
        help="keep scenario orientation or re-solve it per distance",
    )
    p.set_defaults(fn=cmd_eigensweep)

    p = sub.add_parser("fmr-map", help="region membership over a (D_t, D_r) grid")
    _add_common(p)
    p.add_argument("--dt-start", type=float, required=True)
    p.add_argument("--dt-stop", type=float, required=True)
    p.add_argument("--dt-count", type=int, required=True)
    p.add_argument("--dr-start", type=float, required=True)
    p.add_argument("--dr-stop", type=float, required=True)
    p.add_argument("--dr-count", type=int, required=True)
    p.add_argument(
        "--verify", action="store_true", help="also run the Gram check at every grid point"
    )
    p.add_argument("--tol-off", type=float, default=1e-6)
    p.add_argument("--tol-diag", type=float, default=1e-8)
    p.set_defaults(fn=cmd_fmr_map)

    p = sub.add_parser("fmr-orient", help="orientations realizing an in-region point")
    _add_common(p)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--dr", type=float, required=True)
    p.add_argument("--region", choices=["x", "y", "auto"], default="auto")
    p.set_defaults(fn=cmd_fmr_orient)

    p = sub.add_parser("optimize", help="alternating phase/orientation optimization")
    _add_common(p)
    p.add_argument("--seeds", type=int, default=1, help="number of random restarts")
    p.add_argument("--overlay", help="write the converged configuration as a scenario file")
    p.add_argument("--eps-theta", type=float, default=1e-6)
    p.add_argument("--eps-mm", type=float, default=1e-8)
    p.add_argument("--eps-orient", type=float, default=1e-6)
    p.add_argument("--eps-oa", type=float, default=1e-6)
    p.add_argument("--max-outer", type=int, default=200)
    p.add_argument("--max-inner", type=int, default=500)
    p.add_argument("--max-orient-iters", type=int, default=200)
    p.add_argument("--max-rounds", type=int, default=50)
    p.set_defaults(fn=cmd_optimize)

    p = sub.add_parser("verify", help="run named verification checks")
    _add_common(p, scenario_required=False)
    p.add_argument(
        "--checks",
        default=None,
        help="comma-separated check names (default: all); empty string runs none",
    )
    p.add_argument("--tol-off", type=float, default=1e-6)
    p.add_argument("--tol-diag", type=float, default=1e-8)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.fn(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
