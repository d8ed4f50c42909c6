#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generate the bundled spin-orbital integral tables under data/.

Requires pyscf. Not needed at build or test time; the JSON outputs are
committed. Each file records how it was produced in its "provenance" block.

Tensor convention written here: ordering "physicist", meaning h_two[i,j,k,l]
is the coefficient of a+_i a+_j a_k a_l in  H = 1/2 sum h_ijkl a+_i a+_j a_k a_l,
i.e. <ij|lk> = (il|jk) over spin-orbitals. Spin layout is interleaved:
spin-orbital 2p is alpha of spatial MO p, 2p+1 is beta.
"""

import argparse
import json
import os

import numpy as np
from pyscf import ao2mo, gto, mcscf, scf


def water(d, angle=104.5):
    t = np.radians(angle / 2)
    return (f"O 0 0 0; H {d * np.sin(t):.10f} {d * np.cos(t):.10f} 0; "
            f"H {-d * np.sin(t):.10f} {d * np.cos(t):.10f} 0")


def ammonia(height, bond=1.012):
    # height: distance between N and the plane of the three H atoms.
    r = np.sqrt(max(bond**2 - height**2, 0.25))
    hs = "; ".join(f"H {r * np.cos(a):.10f} {r * np.sin(a):.10f} 0"
                   for a in np.radians([0.0, 120.0, 240.0]))
    return f"N 0 0 {height:.10f}; {hs}"


MOLECULES = {
    # name: (geometry builder, active spatial MOs (lowest), description)
    "h2": (lambda d: f"H 0 0 0; H 0 0 {d}", 2, "H-H distance"),
    "lih": (lambda d: f"Li 0 0 0; H 0 0 {d}", 3, "Li-H distance"),
    "h2o": (water, 6, "O-H distance, H-O-H angle 104.5 deg"),
    "nh3": (ammonia, 7, "N to H3-plane height, N-H bond 1.012 A"),
}


DISPLAY = {"h2": "H2", "lih": "LiH", "h2o": "H2O", "nh3": "NH3"}


def build(name, distance, basis="sto-3g"):
    geom_fn, n_active, what = MOLECULES[name]
    atom = geom_fn(distance)
    mol = gto.M(atom=atom, basis=basis, verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff[:, :n_active]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), n_active)  # chemist (pq|rs)

    nso = 2 * n_active
    h_one = np.zeros((nso, nso))
    for p in range(n_active):
        for q in range(n_active):
            for s in range(2):
                h_one[2 * p + s, 2 * q + s] = h1[p, q]
    h_two = []
    for i in range(nso):
        for j in range(nso):
            for k in range(nso):
                for l in range(nso):
                    if i % 2 != l % 2 or j % 2 != k % 2:
                        continue
                    v = eri[i // 2, l // 2, j // 2, k // 2]
                    if abs(v) > 1e-12:
                        h_two.append([i, j, k, l, float(v)])

    nelec = mol.nelectron
    mc = mcscf.CASCI(mf, n_active, nelec)
    mc.verbose = 0
    e_cas = mc.kernel()[0]

    return {
        "n_orbitals": nso,
        "n_electrons": nelec,
        "ordering": "physicist",
        "spin_layout": "interleaved",
        "e_const": float(mol.energy_nuc()),
        "h_one": h_one.tolist(),
        "h_two": h_two,
        "provenance": {
            "molecule": DISPLAY[name],
            "basis": basis,
            "distance_angstrom": distance,
            "distance_meaning": what,
            "geometry": atom,
            "active_space": f"lowest {n_active} RHF MOs, all {nelec} electrons",
            "source": "pyscf RHF molecular-orbital integrals (tools/gen_integrals.py)",
            "reference_hf_energy": float(mf.e_tot),
            "reference_casci_energy": float(e_cas),
        },
    }


def write(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    out = os.path.abspath(args.out)
    os.makedirs(out, exist_ok=True)

    fixed = {"h2": 0.7314, "lih": 1.5065, "h2o": 1.0812, "nh3": 0.4033}
    for name, d in fixed.items():
        write(build(name, d), os.path.join(out, f"{name}_{d}.json"))

    scans = {
        "h2": [0.5, 0.6, 0.7, 0.7314, 0.8, 0.9, 1.0, 1.2, 1.5],
        "lih": [1.2, 1.4, 1.5065, 1.6, 1.8, 2.0],
        "h2o": [0.8, 0.9, 1.0, 1.0812, 1.2],
        "nh3": [0.3, 0.4033, 0.5],
    }
    for name, ds in scans.items():
        d_out = os.path.join(out, "scan", name)
        os.makedirs(d_out, exist_ok=True)
        for d in ds:
            write(build(name, d), os.path.join(d_out, f"{name}_{d}.json"))


if __name__ == "__main__":
    main()
