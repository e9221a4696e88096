#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) problem with cvxopt and write an SDPA-style result file.

Usage: sdpa_cvxopt.py INPUT.dat-s OUTPUT

SDPA form: minimize c.x subject to sum_k x_k F_k - F0 PSD. The result file carries
phase.value, objValPrimal, objValDual and xVec, which is all belltasks reads back.
Point BELLTASKS_SDPA_COMMAND at "python3 path/to/sdpa_cvxopt.py" to use it.
"""

import re
import sys


def read_sdpa(path):
    with open(path) as f:
        lines = [ln for ln in f if ln.strip() and ln.lstrip()[0] not in '"*']
    tokens = lambda s: [t for t in re.split(r"[\s{}(),=]+", s) if t]
    m = int(tokens(lines[0])[0])
    nblocks = int(tokens(lines[1])[0])
    sizes = [int(t) for t in tokens(lines[2])[:nblocks]]
    c = [float(t) for t in tokens(lines[3])[:m]]
    entries = [[] for _ in range(nblocks)]
    for ln in lines[4:]:
        k, b, i, j, v = tokens(ln)[:5]
        entries[int(b) - 1].append((int(k), int(i) - 1, int(j) - 1, float(v)))
    return m, sizes, c, entries


def solve(path):
    """cvxopt form: minimize c.x s.t. G x + s = h, s >= 0 (diagonal blocks) or PSD.
    With G_k = -F_k and h = -F0 the slack is exactly sum_k x_k F_k - F0."""
    from cvxopt import matrix, solvers, spmatrix

    m, sizes, c, entries = read_sdpa(path)
    lin_rows, lin_cols, lin_vals, lin_h = [], [], [], []
    gs, hs = [], []
    lin_offset = 0
    for size, block in zip(sizes, entries):
        n = abs(size)
        if size < 0:
            h = [0.0] * n
            for k, i, j, v in block:
                if i != j:
                    raise ValueError("off-diagonal entry in a diagonal block")
                if k == 0:
                    h[i] -= v
                else:
                    lin_rows.append(lin_offset + i)
                    lin_cols.append(k - 1)
                    lin_vals.append(-v)
            lin_h += h
            lin_offset += n
            continue
        rows, cols, vals = [], [], []
        h = matrix(0.0, (n, n))
        for k, i, j, v in block:
            for a, b in {(i, j), (j, i)}:
                if k == 0:
                    h[a, b] -= v
                else:
                    rows.append(b * n + a)  # column-major vec
                    cols.append(k - 1)
                    vals.append(-v)
        gs.append(spmatrix(vals, rows, cols, (n * n, m)))
        hs.append(h)
    kwargs = {}
    if lin_offset:
        kwargs["G"] = spmatrix(lin_vals, lin_rows, lin_cols, (lin_offset, m))
        kwargs["h"] = matrix(lin_h)
    solvers.options["show_progress"] = False
    solvers.options["abstol"] = 1e-9
    solvers.options["reltol"] = 1e-9
    solvers.options["feastol"] = 1e-9
    return solvers.sdp(matrix(c), Gs=gs, hs=hs, **kwargs)


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    sol = solve(argv[1])
    status = sol["status"]
    if status == "optimal" or (status == "unknown" and sol["x"] is not None):
        phase = "pdOPT" if status == "optimal" else "noINFO"
    elif status == "primal infeasible":
        phase = "pINF"
    elif status == "dual infeasible":
        phase = "dINF"
    else:
        phase = "noINFO"
    primal = sol["primal objective"] if sol["primal objective"] is not None else 0.0
    dual = sol["dual objective"] if sol["dual objective"] is not None else 0.0
    with open(argv[2], "w") as out:
        out.write(f"phase.value  = {phase}\n")
        out.write(f"objValPrimal = {primal:+.16e}\n")
        out.write(f"objValDual   = {dual:+.16e}\n")
        if sol["x"] is not None:
            out.write("xVec = \n{" + ",".join(f"{v:+.16e}" for v in sol["x"]) + "}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
