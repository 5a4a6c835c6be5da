#!/usr/bin/env python3
"""Independent check of exported LP files.

Parses the CPLEX-style LP subset written by the exporter and feeds the model
to scipy's HiGHS-backed MILP solver. Usage:

    lp_crosscheck.py parse FILE.lp      -> prints "rows R cols C"
    lp_crosscheck.py solve FILE.lp      -> prints "Feasible" or "Infeasible"
"""

import sys

import numpy as np
from scipy import optimize, sparse


def parse_lp(text):
    section = None
    rows = []  # (terms, sense, rhs); terms = list of (coef, var)
    bounds = {}
    binaries = []
    generals = []
    current = []

    def flush():
        nonlocal current
        if not current:
            return
        row = " ".join(current)
        current = []
        name, _, body = row.partition(":")
        for sense in ("<=", ">=", "="):
            lhs, mid, rhs = body.partition(f" {sense} ")
            if mid:
                rows.append((parse_terms(lhs), sense, float(rhs)))
                return
        raise ValueError(f"row without sense: {row!r}")

    def parse_terms(lhs):
        terms = []
        sign = 1
        coef = None
        for tok in lhs.split():
            if tok == "+":
                sign = 1
            elif tok == "-":
                sign = -1
            else:
                try:
                    value = float(tok)
                    coef = sign * value
                except ValueError:
                    terms.append((1.0 if coef is None else coef, tok))
                    sign, coef = 1, None
        return terms

    for raw in text.splitlines():
        line = raw.rstrip()
        if not line or line.lstrip().startswith("\\"):
            continue
        stripped = line.strip()
        lowered = stripped.lower()
        if lowered in ("minimize", "maximize"):
            section = "objective"
            continue
        if lowered == "subject to":
            flush()
            section = "rows"
            continue
        if lowered == "bounds":
            flush()
            section = "bounds"
            continue
        if lowered == "binaries" or lowered == "binary":
            flush()
            section = "binaries"
            continue
        if lowered in ("generals", "general", "integers"):
            flush()
            section = "generals"
            continue
        if lowered == "end":
            flush()
            break
        if section == "objective":
            continue
        if section == "rows":
            if ":" in stripped.split()[0]:
                flush()
                current = [stripped]
            elif current:
                current.append(stripped)
            else:
                current = [stripped]
            continue
        if section == "bounds":
            lo, _, rest = stripped.partition(" <= ")
            var, _, hi = rest.partition(" <= ")
            bounds[var] = (float(lo), float(hi))
            continue
        if section == "binaries":
            binaries.append(stripped)
            continue
        if section == "generals":
            generals.append(stripped)
            continue
    return rows, bounds, binaries, generals


def build_problem(rows, bounds, binaries, generals):
    names = []
    index = {}

    def var_id(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for name in binaries:
        var_id(name)
    for name in generals:
        var_id(name)
    for terms, _, _ in rows:
        for _, name in terms:
            var_id(name)

    n = len(names)
    lb = np.zeros(n)
    ub = np.ones(n)
    for name in generals:
        lo, hi = bounds.get(name, (0.0, np.inf))
        lb[index[name]] = lo
        ub[index[name]] = hi

    data, ri, ci, con_lb, con_ub = [], [], [], [], []
    for r, (terms, sense, rhs) in enumerate(rows):
        for coef, name in terms:
            data.append(coef)
            ri.append(r)
            ci.append(index[name])
        if sense == "<=":
            con_lb.append(-np.inf)
            con_ub.append(rhs)
        elif sense == ">=":
            con_lb.append(rhs)
            con_ub.append(np.inf)
        else:
            con_lb.append(rhs)
            con_ub.append(rhs)
    a = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
    return names, a, np.array(con_lb), np.array(con_ub), lb, ub


def solve_status(path):
    with open(path) as fh:
        rows, bounds, binaries, generals = parse_lp(fh.read())
    names, a, con_lb, con_ub, lb, ub = build_problem(rows, bounds, binaries, generals)
    res = optimize.milp(
        c=np.zeros(len(names)),
        constraints=optimize.LinearConstraint(a, con_lb, con_ub),
        integrality=np.ones(len(names)),
        bounds=optimize.Bounds(lb, ub),
        options={"time_limit": 300},
    )
    if res.status == 0:
        return "Feasible"
    if res.status == 2:
        return "Infeasible"
    return f"Unknown({res.status})"


def main():
    mode, paths = sys.argv[1], sys.argv[2:]
    if mode == "parse":
        with open(paths[0]) as fh:
            rows, bounds, binaries, generals = parse_lp(fh.read())
        names, *_ = build_problem(rows, bounds, binaries, generals)
        print(f"rows {len(rows)} cols {len(names)}")
        return 0

    bad = 0
    for path in paths:
        status = solve_status(path)
        print(f"{path}\t{status}")
        bad += status.startswith("Unknown")
    return 2 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
