"""Exact linear algebra and linear programming over Fraction.

Internal helpers shared by the geometry modules.  Everything here is
deterministic and allocation-light at desk scale (dimension <= 8, a few
dozen rows); no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c, a: Sequence[Fraction]) -> Vec:
    c = frac(c)
    return tuple(c * x for x in a)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Sequence[Fraction]) -> Vec:
    """Scale a nonzero rational vector by a positive rational to coprime ints."""
    denom = 1
    for x in a:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in a]
    g = 0
    for n in ints:
        g = gcd(g, abs(n))
    if g == 0:
        return tuple(Fraction(0) for _ in a)
    return tuple(Fraction(n // g) for n in ints)


def lex_positive(a: Sequence[Fraction]) -> Vec:
    """Flip sign so the first nonzero coordinate is positive (0 stays 0)."""
    for x in a:
        if x != 0:
            return tuple(a) if x > 0 else tuple(-y for y in a)
    return tuple(a)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form.

    Returns:
        (reduced nonzero rows, pivot column indices).
    """
    mat = [list(vec(r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return [tuple(row) for row in mat[:r]], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[Vec]:
    """Basis of {x : row . x = 0 for all rows} (primitive integer vectors)."""
    rows = [vec(r) for r in rows if not is_zero(r)]
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for empty row set")
        return [tuple(Fraction(1 if i == j else 0) for i in range(ncols)) for j in range(ncols)]
    n = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(primitive(v))
    return basis


def solve_affine(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve rows . x = rhs exactly.

    Returns:
        (particular solution, nullspace basis) or None when inconsistent.
    """
    rows = [vec(r) for r in rows]
    rhs = vec(rhs)
    n = len(rows[0]) if rows else 0
    aug = [r + (b,) for r, b in zip(rows, rhs, strict=True)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = red[i][n]
    return tuple(x), nullspace(rows, n)


def extend_to_basis(vectors: Sequence[Vec], dim: int) -> list[Vec]:
    """Extend independent vectors to a basis using standard basis vectors."""
    basis = [vec(v) for v in vectors]
    for j in range(dim):
        e = tuple(Fraction(1 if i == j else 0) for i in range(dim))
        if rank(basis + [e]) > len(basis):
            basis.append(e)
        if len(basis) == dim:
            break
    if len(basis) != dim:
        raise ValueError("input vectors were dependent")
    return basis


def invert(mat: Sequence[Sequence[Fraction]]) -> list[Vec]:
    """Inverse of a square rational matrix (rows)."""
    n = len(mat)
    aug = [vec(mat[i]) + tuple(Fraction(1 if j == i else 0) for j in range(n)) for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in red]


def in_int_span(target: Sequence[Fraction], gens: Sequence[Sequence[Fraction]]) -> list[int] | None:
    """Integer coefficients expressing target in the integer span of gens.

    Returns the coefficient list, or None when target is not in the span.
    Exact column-style Hermite reduction; generators and target must be
    integer vectors.
    """
    cols = [[int(x) for x in g] for g in gens]
    tgt = [int(x) for x in target]
    n = len(tgt)
    # Track coefficients: each working column = integer combo of original gens.
    coeffs = [[1 if i == j else 0 for i in range(len(cols))] for j in range(len(cols))]
    work = [list(c) for c in cols]
    row = 0
    used: list[tuple[int, int]] = []  # (pivot row, column index in work)
    avail = list(range(len(work)))
    for row in range(n):
        live = [j for j in avail if work[j][row] != 0]
        if not live:
            continue
        # gcd-reduce the live columns on this row.
        while len(live) > 1:
            live.sort(key=lambda j: abs(work[j][row]))
            j0 = live[0]
            for j in live[1:]:
                q = work[j][row] // work[j0][row]
                if q:
                    for r in range(n):
                        work[j][r] -= q * work[j0][r]
                    for r in range(len(coeffs[j])):
                        coeffs[j][r] -= q * coeffs[j0][r]
            live = [j for j in live if work[j][row] != 0]
        piv = live[0]
        used.append((row, piv))
        avail.remove(piv)
    # Back-substitute target against pivot columns.
    t = list(tgt)
    out = [0] * len(cols)
    for row, piv in used:
        if t[row] % work[piv][row] != 0:
            return None
        q = t[row] // work[piv][row]
        for r in range(n):
            t[r] -= q * work[piv][r]
        for r in range(len(cols)):
            out[r] += q * coeffs[piv][r]
    if any(t):
        return None
    return out


# ---------------------------------------------------------------------------
# Exact simplex.
# ---------------------------------------------------------------------------


class LPResult:
    __slots__ = ("status", "value", "x")

    def __init__(self, status: str, value: Fraction | None = None, x: Vec | None = None):
        self.status = status
        self.value = value
        self.x = x

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"LPResult({self.status}, {self.value}, {self.x})"


def maximize(
    c: Sequence[Fraction],
    a_ub: Sequence[Sequence[Fraction]] = (),
    b_ub: Sequence[Fraction] = (),
    a_eq: Sequence[Sequence[Fraction]] = (),
    b_eq: Sequence[Fraction] = (),
) -> LPResult:
    """Maximize c.x subject to a_ub.x <= b_ub and a_eq.x == b_eq (x free).

    Two-phase simplex with Bland's rule over exact rationals.

    Returns:
        LPResult with status in {"optimal", "unbounded", "infeasible"}.
    """
    n = len(c)
    c = vec(c)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    # Free x -> u - v with u, v >= 0; slack per <= row.
    n_ub = len(a_ub)
    for r, b in zip(a_ub, b_ub, strict=True):
        rows.append(list(vec(r)))
        rhs.append(frac(b))
    for r, b in zip(a_eq, b_eq, strict=True):
        rows.append(list(vec(r)))
        rhs.append(frac(b))
    m = len(rows)
    nvars = 2 * n + n_ub
    tab = []
    for i, row in enumerate(rows):
        ext = [Fraction(0)] * nvars
        for j in range(n):
            ext[j] = row[j]
            ext[n + j] = -row[j]
        if i < n_ub:
            ext[2 * n + i] = Fraction(1)
        if rhs[i] < 0:
            ext = [-x for x in ext]
            rhs[i] = -rhs[i]
        tab.append(ext)
    obj = [Fraction(0)] * nvars
    for j in range(n):
        obj[j] = c[j]
        obj[n + j] = -c[j]

    basis = list(range(nvars, nvars + m))
    for i in range(m):
        tab[i] = tab[i] + [Fraction(1 if k == i else 0) for k in range(m)]
    width = nvars + m

    def pivot(bi: int, col: int):
        pv = tab[bi][col]
        tab[bi] = [x / pv for x in tab[bi]]
        rhs[bi] /= pv
        for i in range(m):
            if i != bi and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[bi])]
                rhs[i] -= f * rhs[bi]

    def run(costs: list[Fraction], allowed: int) -> Fraction | None:
        # Maximize costs.x over current tableau; Bland's rule.
        # Returns the optimal value, or None when unbounded.
        while True:
            red = list(costs[:allowed])
            offset = Fraction(0)
            for i, bv in enumerate(basis):
                if bv < allowed and costs[bv] != 0:
                    f = costs[bv]
                    for j in range(allowed):
                        red[j] -= f * tab[i][j]
                    offset += f * rhs[i]
            col = next((j for j in range(allowed) if red[j] > 0), None)
            if col is None:
                return offset
            ratios = [(rhs[i] / tab[i][col], basis[i], i) for i in range(m) if tab[i][col] > 0]
            if not ratios:
                return None
            _, _, bi = min(ratios)
            basis[bi] = col
            pivot(bi, col)

    # Phase 1: drive artificials out.
    art_cost = [Fraction(0)] * width
    for k in range(nvars, width):
        art_cost[k] = Fraction(-1)
    val = run(art_cost, width)
    if val is None or val < 0:
        return LPResult("infeasible")
    # Pivot any artificial still basic (degenerate) to a real column, else drop row.
    for i in range(m):
        if basis[i] >= nvars:
            col = next((j for j in range(nvars) if tab[i][j] != 0), None)
            if col is not None:
                basis[i] = col
                pivot(i, col)
    # Phase 2.
    full_obj = obj + [Fraction(0)] * m
    val = run(full_obj, nvars)
    if val is None:
        return LPResult("unbounded")
    x = [Fraction(0)] * nvars
    for i, bv in enumerate(basis):
        if bv < nvars:
            x[bv] = rhs[i]
    sol = tuple(x[j] - x[n + j] for j in range(n))
    return LPResult("optimal", dot(c, sol), sol)


def strictly_feasible(
    strict_pos: Sequence[Sequence[Fraction]],
    eqs: Sequence[Sequence[Fraction]] = (),
    dim: int | None = None,
) -> Vec | None:
    """Find x with row.x > 0 for every strict row and row.x == 0 on eqs.

    Homogeneous system: solved as max t <= 1 s.t. row.x >= t.  Returns a
    witness x or None.
    """
    strict_pos = [vec(r) for r in strict_pos]
    eqs = [vec(r) for r in eqs]
    if dim is None:
        dim = len(strict_pos[0]) if strict_pos else len(eqs[0])
    if not strict_pos:
        if not eqs:
            return tuple(Fraction(0) for _ in range(dim))
        ns = nullspace(eqs, dim)
        return ns[0] if ns else tuple(Fraction(0) for _ in range(dim))
    # Variables (x, t): maximize t.
    a_ub = [tuple(-x for x in r) + (Fraction(1),) for r in strict_pos]
    a_ub.append(tuple(Fraction(0) for _ in range(dim)) + (Fraction(1),))
    b_ub = [Fraction(0)] * len(strict_pos) + [Fraction(1)]
    a_eq = [r + (Fraction(0),) for r in eqs]
    b_eq = [Fraction(0)] * len(eqs)
    c = tuple(Fraction(0) for _ in range(dim)) + (Fraction(1),)
    res = maximize(c, a_ub, b_ub, a_eq, b_eq)
    if res.status != "optimal" or res.value <= 0:
        return None
    return res.x[:dim]
