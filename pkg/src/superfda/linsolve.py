"""Exact sparse linear solving over Q(i).

Equations are scaled to Gaussian-integer coefficients and eliminated
fraction-free (row <- p*row - q*pivot_row, then divided by its integer
content).  Only the connected block of the row/column incidence graph that
touches the right-hand side is ever eliminated.
"""

from __future__ import annotations

from math import gcd, lcm
from typing import Hashable, Mapping, Optional, Sequence

from .scalars import GaussianRational

GI = tuple  # Gaussian integer (a, b)


def _components(columns: Sequence[Mapping], rhs_rows) -> set[int]:
    """Indices of columns connected (via shared rows) to any rhs row."""
    row_cols: dict = {}
    for j, col in enumerate(columns):
        for r in col:
            row_cols.setdefault(r, []).append(j)
    seen_rows = set()
    seen_cols: set[int] = set()
    stack = [r for r in rhs_rows]
    while stack:
        r = stack.pop()
        if r in seen_rows:
            continue
        seen_rows.add(r)
        for j in row_cols.get(r, ()):
            if j not in seen_cols:
                seen_cols.add(j)
                stack.extend(columns[j].keys())
    return seen_cols


def _to_gaussian_integers(coeffs: dict, rhs: GaussianRational):
    dens = [rhs.re.denominator, rhs.im.denominator]
    for c in coeffs.values():
        dens.append(c.re.denominator)
        dens.append(c.im.denominator)
    L = 1
    for d in dens:
        L = lcm(L, int(d))
    row = {j: (int(c.re * L), int(c.im * L)) for j, c in coeffs.items()}
    return row, (int(rhs.re * L), int(rhs.im * L))


def _gmul(a: GI, b: GI) -> GI:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _normalize(row: dict, rhs: GI):
    g = 0
    for a, b in row.values():
        g = gcd(g, a, b)
        if g == 1:
            return row, rhs
    g = gcd(g, rhs[0], rhs[1])
    if g > 1:
        row = {j: (a // g, b // g) for j, (a, b) in row.items()}
        rhs = (rhs[0] // g, rhs[1] // g)
    return row, rhs


def solve_sparse(columns: Sequence[Mapping[Hashable, GaussianRational]],
                 rhs: Mapping[Hashable, GaussianRational]) -> Optional[dict[int, GaussianRational]]:
    """Solve sum_j x_j * columns[j] = rhs.  Returns {j: x_j} (free variables 0) or None."""
    if not rhs:
        return {}
    keep = _components(columns, rhs.keys())
    # every rhs row must be reachable by some column
    covered = set()
    for j in keep:
        covered.update(columns[j].keys())
    if any(r not in covered for r in rhs):
        return None
    rows: dict = {}
    for j in sorted(keep):
        for r, c in columns[j].items():
            rows.setdefault(r, {})[j] = c
    zero = GaussianRational(0)
    pivots: dict[int, tuple[dict, GI]] = {}
    for r in sorted(rows, key=repr):
        row, b = _to_gaussian_integers(rows[r], rhs.get(r, zero))
        row, b = _eliminate(row, b, pivots)
        if row is None:
            return None
        if not row:
            continue
        # column pivoting: choose the lowest column among those with the smallest |entry|
        pc = min(row, key=lambda j: (abs(row[j][0]) + abs(row[j][1]), j))
        pivots[pc] = (row, b, len(pivots))
    # back substitution in reverse pivot-creation order is valid because each
    # stored row was reduced against all earlier pivots
    sol: dict[int, GaussianRational] = {}
    order = list(pivots.keys())
    for pc in reversed(order):
        row, b, _ = pivots[pc]
        acc = GaussianRational(b[0], b[1])
        for j, (a, c) in row.items():
            if j != pc and j in sol:
                acc = acc - GaussianRational(a, c) * sol[j]
        p = row[pc]
        sol[pc] = acc / GaussianRational(p[0], p[1])
    return {j: v for j, v in sol.items() if v}


def _eliminate(row: dict, b: GI, pivots: dict):
    """Reduce row against existing pivots; return (row, b), or (None, None) when inconsistent."""
    while True:
        # eliminate the oldest pivot first: a pivot row never contains the
        # columns of pivots created before it, so this terminates
        hit = None
        best = None
        for j in row:
            pv = pivots.get(j)
            if pv is not None and (best is None or pv[2] < best):
                hit, best = j, pv[2]
        if hit is None:
            break
        prow, pb, _ = pivots[hit]
        p = prow[hit]
        q = row[hit]
        new = {}
        for j, v in row.items():
            w = _gmul(p, v)
            if w[0] or w[1]:
                new[j] = w
        for j, v in prow.items():
            w = _gmul(q, v)
            old = new.get(j)
            if old is None:
                new[j] = (-w[0], -w[1])
            else:
                s = (old[0] - w[0], old[1] - w[1])
                if s[0] or s[1]:
                    new[j] = s
                else:
                    del new[j]
        new.pop(hit, None)
        bp = _gmul(p, b)
        bq = _gmul(q, pb)
        row, b = _normalize(new, (bp[0] - bq[0], bp[1] - bq[1]))
    if not row:
        if b[0] or b[1]:
            return None, None
        return {}, (0, 0)
    return row, b


def nullspace(equations: Sequence[Mapping[int, GaussianRational]], nvars: int) -> list[dict[int, GaussianRational]]:
    """Basis of {x : Σ_j eq[j] x_j = 0 for every equation}, by Gauss-Jordan over Q(i)."""
    pivots: dict[int, dict] = {}  # pivot var -> normalized row (pivot coefficient 1)
    for eq in equations:
        row = {j: v for j, v in eq.items() if v}
        # reduce by existing pivots (rows are fully reduced, so one pass suffices)
        for pv in [j for j in row if j in pivots]:
            c = row.get(pv)
            if not c:
                continue
            for j, v in pivots[pv].items():
                w = row.get(j, GaussianRational(0)) - c * v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
        if not row:
            continue
        pv = min(row)
        inv = row[pv].inverse()
        row = {j: v * inv for j, v in row.items()}
        # keep all stored rows free of the new pivot variable
        for q, prow in pivots.items():
            c = prow.get(pv)
            if c:
                for j, v in row.items():
                    w = prow.get(j, GaussianRational(0)) - c * v
                    if w:
                        prow[j] = w
                    else:
                        prow.pop(j, None)
        pivots[pv] = row
    free = [j for j in range(nvars) if j not in pivots]
    basis = []
    for f in free:
        vec = {f: GaussianRational(1)}
        for pv, prow in pivots.items():
            c = prow.get(f)
            if c:
                vec[pv] = -c
        basis.append(vec)
    return basis
