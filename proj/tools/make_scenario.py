#!/usr/bin/env python3
"""Regenerates scenarios/new_tenant.json.

Hotspot peaks of the two existing tenants are solved so that the busy-hour
demand carried by the four initial cells (nearest-cell serving) matches
target_cell_mbps, split between tenants by `share`. The arriving tenant
follows the existing busy-hour map for `new_corr` of its 100 Mbps and puts
the rest in the `new_extra` hotspots.

usage: make_scenario.py CONFIG SEED OUT
"""
import json
import math
import sys

import numpy as np

W = H = 200.0
R = 3.0
C = math.ceil(W / R)
N = C * C
TARGET_CELL_MBPS = np.array([22.5, 27.9, 19.3, 16.6])

idx = np.arange(N)
x = np.minimum((idx % C + 0.5) * R, W)
y = np.minimum((idx // C + 0.5) * R, H)


def pixel(px, py):
    return int(min(int(py // R), C - 1) * C + min(int(px // R), C - 1))


def gauss(hx, hy, s):
    return np.exp(-0.5 * ((x - hx) ** 2 + (y - hy) ** 2) / s**2)


def main():
    cfg = json.load(open(sys.argv[1]))
    seed = int(sys.argv[2])
    sites = [pixel(*c) for c in cfg["cells"]]
    cx = np.array([x[s] for s in sites])
    cy = np.array([y[s] for s in sites])
    serv = np.argmin(np.hypot(x[:, None] - cx[None, :], y[:, None] - cy[None, :]), axis=1)

    fit = []
    for name, key in (("tenant-a", "a"), ("tenant-b", "b")):
        t = cfg[key]
        target = TARGET_CELL_MBPS * t["share"]
        base = np.bincount(serv, weights=np.full(N, t["floor"]), minlength=4)
        per_cell = [np.bincount(serv, weights=gauss(hx, hy, s), minlength=4) for hx, hy, s in t["spots"]]
        peaks = np.linalg.solve(np.array(per_cell).T, target - base)
        if not (peaks > 0).all():
            sys.exit(f"negative peaks for {name}: {peaks}")
        fit.append((name, t["floor"], [(hx, hy, s, float(p)) for (hx, hy, s), p in zip(t["spots"], peaks)]))

    profile = [round(0.25 + 0.75 * math.exp(-0.5 * (min((h - 20) % 24, (20 - h) % 24) / 4.0) ** 2), 3)
               for h in range(24)]
    tenants = []
    for (name, floor, spots), cap in zip(fit, [60.0, 45.0]):
        tenants.append({"id": name, "contracted_capacity_mbps": cap, "temporal_profile": profile,
                        "spatial": {"floor_mbps": floor,
                                    "hotspots": [{"x_m": a, "y_m": b, "sigma_m": s, "peak_mbps": round(p, 6)}
                                                 for a, b, s, p in spots]}})

    corr = cfg.get("new_corr", 1.0)
    spots = [(a, b, s, p) for (_, _, sp) in fit for a, b, s, p in sp]
    floor = sum(f for (_, f, _) in fit)
    base = floor * N + sum(p * gauss(a, b, s).sum() for a, b, s, p in spots)
    k = 100 * corr / base
    spots = [(a, b, s, p * k) for a, b, s, p in spots]
    extra = cfg.get("new_extra", [])
    if extra:
        mass = sum(gauss(a, b, s).sum() for a, b, s in extra)
        spots += [(a, b, s, 100 * (1 - corr) / mass) for a, b, s in extra]
    new = {"id": "tenant-new", "contracted_capacity_mbps": 100.0, "temporal_profile": profile,
           "spatial": {"floor_mbps": floor * k,
                       "hotspots": [{"x_m": a, "y_m": b, "sigma_m": round(s, 3), "peak_mbps": round(p, 6)}
                                    for a, b, s, p in spots]}}
    scenario = {"grid": {"width_m": W, "height_m": H, "resolution_m": R}, "horizon": 48, "tenants": tenants,
                "candidate_sites": {"fraction": 0.02, "seed": seed, "pin_initial_sites": True},
                "initial_cells": [{"site": s, "channels": [0]} for s in sites],
                "monitor": {"alpha": 0.9, "window": 24, "consecutive": 3},
                "planner": {"beta": 0.7, "gamma": 0.05, "k_max": 2, "n_max_cells": 10,
                            "step4_threshold": "printed"},
                "arrival": {"step": 20, "tenant": new, "map_known": False}}
    json.dump(scenario, open(sys.argv[3], "w"), indent=2)


if __name__ == "__main__":
    main()
