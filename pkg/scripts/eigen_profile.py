#!/usr/bin/env python3
"""Sweep the Tx-hop Gram eigenvalue profile against distance.

Writes one CSV per orientation policy (fixed scenario orientation vs the
per-distance solved tilt) so the flat equal-gain regime and its collapse
beyond the axis limit can be plotted side by side.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from irsmimo import parse_scenario, rayleigh_distances, single_hop_orientation, tx_irs_channel
from irsmimo.scenario import scenario_hash


def eigen_rows(scn, distances, policy):
    rr = rayleigh_distances(scn.tx, scn.irs, scn.wave)
    axis = policy[-1] if policy.startswith("auto-") else None
    d_axis = {"x": rr.d_rx_axis, "y": rr.d_ry_axis, None: None}[axis]
    rows = []
    for d_t in distances:
        pose = replace(scn.tx, distance=float(d_t))
        if axis is not None:
            solved = single_hop_orientation(
                replace(pose, distance=min(float(d_t), d_axis)), scn.irs, scn.wave, axis
            )
            pose = replace(pose, orient_azimuth=solved.gamma, orient_elevation=solved.psi)
        h_t = tx_irs_channel(replace(scn, tx=pose))
        ev = np.sort(np.linalg.eigvalsh(h_t.conj().T @ h_t))[::-1] / scn.irs.n_elements
        rows.append([float(d_t), *ev])
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenario", default="scenarios/cascade_baseline.txt")
    ap.add_argument("--start", type=float, default=2.0)
    ap.add_argument("--stop", type=float, default=60.0)
    ap.add_argument("--count", type=int, default=60)
    ap.add_argument("--outdir", default="out")
    args = ap.parse_args(argv)

    scn = parse_scenario(args.scenario)
    distances = np.linspace(args.start, args.stop, args.count)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    header = ["d_t"] + [f"eig_{i + 1}" for i in range(scn.tx.n_antennas)]
    for policy in ("fixed", "auto-x", "auto-y"):
        rows = eigen_rows(scn, distances, policy)
        path = outdir / f"eigen_{policy.replace('-', '_')}.csv"
        with open(path, "w") as fh:
            fh.write(f"# scenario={scenario_hash(scn)}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join("%.17g" % v for v in row) + "\n")
        spreads = [row[1] / row[-1] for row in rows]
        print(f"{policy}: wrote {path}, spread range [{min(spreads):.3g}, {max(spreads):.3g}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
