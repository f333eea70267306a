"""Cross-checks the CLI oracle against cvxpy on random 1D instances.

usage: check_reference.py SUMSPACE_BINARY WORKDIR
"""

import json
import os
import subprocess
import sys

import numpy as np

from oracle1d_ref import solve


def main():
    binary, workdir = sys.argv[1], sys.argv[2]
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in range(25):
        m = int(rng.integers(2, 10))
        p = float(rng.choice([1.5, 2.0, 3.0]))
        x = np.sort(rng.uniform(0, 10, m))
        w = 10 ** rng.uniform(-1, 1, m)
        f = rng.uniform(-1, 1, m)
        mpath = os.path.join(workdir, f"ref_m{k}.json")
        fpath = os.path.join(workdir, f"ref_f{k}.json")
        with open(mpath, "w") as fh:
            json.dump({"n": 1, "atoms": [{"x": [float(a)], "w": float(b)} for a, b in zip(x, w)]}, fh)
        with open(fpath, "w") as fh:
            json.dump({"values": [float(v) for v in f]}, fh)
        out = subprocess.run([binary, "oracle", "--measure", mpath, "--function", fpath, "--p", str(p)],
                             check=True, capture_output=True, text=True).stdout
        ours, ref = float(out), solve(x, w, f, p)
        rel = abs(ours - ref) / max(ref, 1e-300)
        worst = max(worst, rel)
        if rel > 1e-6:
            print(f"instance {k}: cli {ours} reference {ref} rel {rel:.3e}")
            return 1
    print(f"25 instances, worst relative difference {worst:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
