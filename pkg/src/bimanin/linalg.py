"""Exact linear algebra over Q and Z: RREF, kernels, spans, lattices.

Small matrices go through fraction-free Bareiss elimination (pivoting on the
smallest nonzero entry to limit coefficient growth); large ones through the
certified multi-modular engine in _modular.  Both produce the same canonical
reduced row echelon form, so equal subspaces always compare equal.

Integer row lattices are compared through the Hermite normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _modular

# Above this many cells, elimination switches to the multi-modular engine.
EXACT_CELL_LIMIT = 20000


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class SubspaceBasis:
    """Canonical basis (RREF rows, leading ones) of a subspace of Q^n."""

    ambient_dim: int
    rows: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self):
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.rows)

    def contains(self, vec) -> bool:
        v = [Fraction(x) for x in vec]
        if len(v) != self.ambient_dim:
            raise LinalgError("vector has wrong ambient dimension")
        for row in self.rows:
            piv = next(j for j, x in enumerate(row) if x)
            if v[piv]:
                f = v[piv]
                for j in range(piv, self.ambient_dim):
                    v[j] -= f * row[j]
        return not any(v)


def _to_fraction_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]


def _integerize_rows(rows):
    out = []
    for row in rows:
        mult = 1
        for x in row:
            mult = mult * x.denominator // gcd(mult, x.denominator)
        out.append([int(x * mult) for x in row])
    return out


def _bareiss_ref(m):
    """Fraction-free row echelon form in place; returns pivot (row, col) list."""
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        cand = [(abs(m[i][c]), i) for i in range(r, nrows) if m[i][c]]
        if not cand:
            continue
        _, i = min(cand)
        if i != r:
            m[r], m[i] = m[i], m[r]
        pc = m[r][c]
        for i2 in range(r + 1, nrows):
            f = m[i2][c]
            row = m[i2]
            src = m[r]
            for j in range(c, ncols):
                row[j] = (pc * row[j] - f * src[j]) // prev
        prev = pc
        pivots.append((r, c))
        r += 1
    return pivots


def _rref_exact(rows):
    ints = _integerize_rows(rows)
    pivots = _bareiss_ref(ints)
    out = []
    piv_cols = []
    for r, c in pivots:
        lead = Fraction(ints[r][c])
        out.append([Fraction(x) / lead for x in ints[r]])
        piv_cols.append(c)
    # Eliminate above each pivot, bottom-up.
    for k in range(len(out) - 1, -1, -1):
        c = piv_cols[k]
        for i in range(k):
            f = out[i][c]
            if f:
                src = out[k]
                row = out[i]
                for j in range(c, len(row)):
                    row[j] -= f * src[j]
    return out, tuple(piv_cols)


def rref(rows, method=None):
    """Canonical RREF (rows, pivot columns); method in {None, 'bareiss', 'modular'}."""
    frac = _to_fraction_rows(rows)
    frac = [row for row in frac if any(row)]
    if not frac:
        return [], ()
    cells = len(frac) * len(frac[0])
    if method == "modular" or (method is None and cells > EXACT_CELL_LIMIT):
        reduced, pivots, _ = _modular.rref_of_int_rows(_integerize_rows(frac))
        return reduced, pivots
    return _rref_exact(frac)


def rank(rows, method=None) -> int:
    return len(rref(rows, method=method)[1])


def row_space(rows, ambient_dim: int, method=None) -> SubspaceBasis:
    reduced, _ = rref(rows, method=method)
    if any(len(r) != ambient_dim for r in reduced):
        raise LinalgError("rows have inconsistent width")
    return SubspaceBasis(ambient_dim, tuple(tuple(r) for r in reduced))


def _kernel_rows_from_rref(reduced, pivots, ncols):
    piv_set = set(pivots)
    free = [c for c in range(ncols) if c not in piv_set]
    rows = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -reduced[i][f]
        rows.append(v)
    return rows


def kernel_basis(rows, ncols: int, method=None) -> SubspaceBasis:
    """Canonical basis of {v : rows . v = 0} in Q^ncols."""
    frac = [row for row in _to_fraction_rows(rows) if any(row)]
    for row in frac:
        if len(row) != ncols:
            raise LinalgError("rows have inconsistent width")
    if not frac:
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(ncols))
                      for i in range(ncols))
        return SubspaceBasis(ncols, ident)
    cells = len(frac) * ncols
    if method == "modular" or (method is None and cells > EXACT_CELL_LIMIT):
        op = _modular.IntRowsOp(_integerize_rows(frac))
        out, _ = _modular.kernel_of_ops([op], ncols)
        return SubspaceBasis(ncols, tuple(tuple(r) for r in out))
    reduced, pivots = _rref_exact(frac)
    kernel_rows = _kernel_rows_from_rref(reduced, pivots, ncols)
    reduced2, _ = rref(kernel_rows) if kernel_rows else ([], ())
    return SubspaceBasis(ncols, tuple(tuple(r) for r in reduced2))


def kernel_of_operators(ops, ncols: int, parity_width=None):
    """Common kernel of _modular operators (certified exact).

    Returns the canonical basis, or (basis, (dim_even, dim_odd)) when
    parity_width is given.
    """
    out, parity = _modular.kernel_of_ops(ops, ncols,
                                         parity_width=parity_width)
    basis = SubspaceBasis(ncols, tuple(tuple(r) for r in out))
    return basis if parity_width is None else (basis, parity)


def row_space_with_parity(rows, ambient_dim: int, parity_width: int):
    """(row space basis, certified (dim_even, dim_odd) of the span)."""
    frac = [row for row in _to_fraction_rows(rows) if any(row)]
    if not frac:
        return SubspaceBasis(ambient_dim, ()), (0, 0)
    reduced, _, parity = _modular.rref_of_int_rows(
        _integerize_rows(frac), parity_width=parity_width)
    return SubspaceBasis(ambient_dim, tuple(tuple(r) for r in reduced)), parity


def span_equal(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError("ambient dimensions differ")
    return a.rows == b.rows


def sum_spaces(ambient_dim: int, *parts) -> SubspaceBasis:
    rows = []
    for part in parts:
        rows.extend(part.rows if isinstance(part, SubspaceBasis) else part)
    return row_space(rows, ambient_dim)


def rref_with_transform(rows):
    """(R, pivots, G) with R = G @ rows, exact; for small matrices only."""
    m = _to_fraction_rows(rows)
    nrows = len(m)
    g = [[Fraction(int(i == j)) for j in range(nrows)] for i in range(nrows)]
    r = 0
    pivots = []
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        if r == nrows:
            break
        i = next((i for i in range(r, nrows) if m[i][c]), None)
        if i is None:
            continue
        m[r], m[i] = m[i], m[r]
        g[r], g[i] = g[i], g[r]
        f = m[r][c]
        m[r] = [x / f for x in m[r]]
        g[r] = [x / f for x in g[r]]
        for i2 in range(nrows):
            if i2 != r and m[i2][c]:
                f2 = m[i2][c]
                m[i2] = [x - f2 * y for x, y in zip(m[i2], m[r])]
                g[i2] = [x - f2 * y for x, y in zip(g[i2], g[r])]
        pivots.append(c)
        r += 1
    return m[:r], tuple(pivots), g[:r]


class SpanSolver:
    """Coordinate solver for a fixed independent row family."""

    def __init__(self, rows):
        self.rows = _to_fraction_rows(rows)
        reduced, pivots, g = rref_with_transform(self.rows)
        if len(reduced) != len(self.rows):
            raise LinalgError("rows are not independent")
        self.reduced = reduced
        self.pivots = pivots
        self.transform = g

    def coordinates(self, vec):
        """c with c . rows = vec, or None if vec is outside the span."""
        v = [Fraction(x) for x in vec]
        lead = [v[c] for c in self.pivots]
        # Membership check: v must equal sum lead_i * reduced_i.
        residual = list(v)
        for coef, row in zip(lead, self.reduced):
            if coef:
                for j, x in enumerate(row):
                    residual[j] -= coef * x
        if any(residual):
            return None
        n = len(self.rows)
        return [sum(lead[i] * self.transform[i][j] for i in range(n))
                for j in range(n)]


# ----------------------------------------------------------- integer lattices

def hnf(rows):
    """Row-style Hermite normal form; canonical, zero rows dropped."""
    m = [[int(x) for x in row] for row in rows if any(row)]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        # Euclid on column c across rows >= r until one entry survives.
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c]]
            if not nz:
                pivot = None
                break
            pivot = min(nz, key=lambda i: abs(m[i][c]))
            if len(nz) == 1:
                break
            for i in nz:
                if i != pivot:
                    q = m[i][c] // m[pivot][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[pivot])]
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    return tuple(tuple(row) for row in m[:r])


def lattice_equal(rows_a, rows_b) -> bool:
    """True iff the two integer row families span the same Z-lattice."""
    wa = {len(r) for r in rows_a} | {len(r) for r in rows_b}
    if len(wa) > 1:
        raise LinalgError("column counts differ")
    return hnf(rows_a) == hnf(rows_b)


def integer_kernel(rows, ncols: int):
    """Basis of {x in Z^ncols : rows . x = 0} (saturated), via HNF."""
    m = [[int(x) for x in row] for row in rows]
    nrows = len(m)
    aug = [[m[i][j] for i in range(nrows)] + [int(i == j) for i in range(ncols)]
           for j in range(ncols)]
    reduced = hnf(aug)
    out = []
    for row in reduced:
        if any(row[:nrows]):
            continue
        out.append(tuple(row[nrows:]))
    return out
