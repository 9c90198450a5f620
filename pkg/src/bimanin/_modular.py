"""Multi-modular engine behind the exact linear algebra.

Row reduction runs mod a few ~26-bit primes in numpy int64, answers are
CRT-combined and rationally reconstructed, and everything returned is then
*certified* exactly:

* kernels: the reconstructed rows satisfy op @ K^T = 0 over Z (checked via
  residues modulo fresh primes whose product exceeds an explicit bound on
  the entries), and dim K equals the mod-p nullity, which always
  upper-bounds the rational nullity;
* row spaces: M = M[:, pivots] @ R is checked the same way, and the mod-p
  rank lower-bounds the rational rank.

A verified answer is therefore correct no matter how the primes behaved;
failures just trigger more primes.

Parity dimensions ride along for free: once the exact basis B is certified
and the projected rows P+B, P-B are verified to stay inside the space, the
space splits as the direct sum of its even and odd parts, so the projected
mod-p ranks (which bound the true dimensions from below) are pinned by
dim+ + dim- = dim.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

_CHUNK = 512
_LIMB_BITS = 48
_LIMB = 1 << _LIMB_BITS


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(start: int, count: int):
    out = []
    n = start if start % 2 else start - 1
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 2
    return out

_POOL = _primes_below(2**26 - 1, 160)
WORK_PRIMES = _POOL[:80]
VERIFY_PRIMES = _POOL[80:]

_BATCHES = (1, 1, 2, 2, 4, 4, 4, 4, 6, 6, 6, 6, 6, 6, 6, 6)


class IntRowsOp:
    """Exact integer matrix presented through mod-p snapshots.

    Large entries are decomposed once into 48-bit limbs so that per-prime
    reduction is a handful of vectorized operations.
    """

    def __init__(self, rows):
        self.rows = [[int(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        self._small = None
        self._limbs = None

    def bound(self) -> int:
        return max((abs(x) for row in self.rows for x in row), default=0)

    def _prepare(self):
        if self._small is not None or self._limbs is not None:
            return
        if self.bound() < 2**62:
            self._small = np.array(self.rows, dtype=np.int64).reshape(
                self.nrows, self.ncols)
            return
        flat = [x for row in self.rows for x in row]
        signs = np.array([-1 if x < 0 else 1 for x in flat], dtype=np.int64)
        mags = [abs(x) for x in flat]
        nlimbs = max((m.bit_length() + _LIMB_BITS - 1) // _LIMB_BITS
                     for m in mags)
        limbs = np.zeros((max(nlimbs, 1), len(flat)), dtype=np.int64)
        for i, m in enumerate(mags):
            j = 0
            while m:
                limbs[j, i] = m & (_LIMB - 1)
                m >>= _LIMB_BITS
                j += 1
        self._limbs = (signs, limbs)

    def mod(self, p: int) -> np.ndarray:
        self._prepare()
        if self._small is not None:
            return self._small % p
        signs, limbs = self._limbs
        acc = np.zeros(limbs.shape[1], dtype=np.int64)
        shift = 1
        for row in limbs:
            acc = (acc + (row % p) * shift) % p
            shift = shift * _LIMB % p
        return (acc * signs % p).reshape(self.nrows, self.ncols)


class KronSumOp:
    """sum_i c_i * kron(A_i, B_i) for small-entry int64 factor matrices."""

    def __init__(self, terms, ncols):
        self.terms = []
        for c, a, b in terms:
            a = np.asarray(a, dtype=np.int64)
            b = np.asarray(b, dtype=np.int64)
            if int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) >= 2**62:
                raise OverflowError("kron factors too large for int64 path")
            self.terms.append((int(c), a, b))
        self.ncols = ncols
        self.nrows = ncols

    def bound(self) -> int:
        return sum(abs(c) * int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0))
                   for c, a, b in self.terms)

    def mod(self, p: int) -> np.ndarray:
        acc = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for c, a, b in self.terms:
            acc = (acc + (c % p) * (np.kron(a % p, b % p) % p)) % p
        return acc


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b mod p for nonnegative int64 entries < p < 2**26.

    The left factor splits into 13-bit halves so both partial products stay
    below 2**53 for inner dimensions up to 8192, making float64 BLAS exact.
    """
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(0, a.shape[1], 8192):
        ac = a[:, i:i + 8192]
        bc = b[i:i + 8192, :].astype(np.float64)
        hi = (ac >> 13).astype(np.float64) @ bc
        lo = (ac & 8191).astype(np.float64) @ bc
        part = ((hi.astype(np.int64) % p << 13)
                + lo.astype(np.int64) % p) % p
        out = (out + part) % p
    return out


_PANEL = 100


def _rref_mod(m: np.ndarray, p: int):
    """Reduced row echelon form of m over GF(p); returns (rows, pivots).

    Blocked (LAPACK-style): echelon elimination is done eagerly inside column
    panels, with the trailing matrix updated by one matmul per panel; the
    Jordan (clear-above) pass is blocked the same way bottom-up.
    """
    m = m % p
    nrows, ncols = m.shape
    r = 0
    pivots = []
    c0 = 0
    while c0 < ncols and r < nrows:
        c1 = min(c0 + _PANEL, ncols)
        fcols, prows, invs = [], [], []
        for c in range(c0, c1):
            if r == nrows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                m[[r, i]] = m[[i, r]]
                for f in fcols:
                    f[r], f[i] = f[i], f[r]
            inv = pow(int(m[r, c]), p - 2, p)
            m[r, c:c1] = m[r, c:c1] * inv % p
            col = m[:, c].copy()
            col[:r + 1] = 0
            if col.any():
                m[r + 1:, c:c1] = (m[r + 1:, c:c1]
                                   - col[r + 1:, None] * m[r, c:c1][None, :]) % p
            fcols.append(col)
            prows.append(r)
            invs.append(inv)
            pivots.append(c)
            r += 1
        if prows and c1 < ncols:
            f = np.stack(fcols, axis=1)
            trail = m[:, c1:]
            ptrail = np.zeros((len(prows), ncols - c1), dtype=np.int64)
            for j, (row_idx, inv) in enumerate(zip(prows, invs)):
                rowj = trail[row_idx]
                if j:
                    # direct int64 accumulate: j <= panel, so sums stay < 2^59
                    corr = (f[row_idx, :j, None] * ptrail[:j]).sum(axis=0) % p
                    rowj = (rowj - corr) % p
                ptrail[j] = rowj * inv % p
                trail[row_idx] = ptrail[j]
            mask = np.ones(nrows, dtype=bool)
            mask[prows] = False
            below = f[mask]
            if below.any():
                trail[mask] = (trail[mask] - _matmul_mod(below, ptrail, p)) % p
        c0 = c1
    # Jordan pass: clear above each pivot, blocked bottom-up.
    rr = m[:r]
    j1 = r
    while j1 > 0:
        j0 = max(0, j1 - _PANEL)
        for j in range(j1 - 1, j0 - 1, -1):
            c = pivots[j]
            col = rr[j0:j, c].copy()
            if col.any():
                rr[j0:j, c:] = (rr[j0:j, c:]
                                - col[:, None] * rr[j, c:][None, :]) % p
        if j0:
            block_cols = [pivots[j] for j in range(j0, j1)]
            coef = rr[:j0, block_cols].copy()
            if coef.any():
                rr[:j0, :] = (rr[:j0, :]
                              - _matmul_mod(coef, rr[j0:j1, :], p)) % p
        j1 = j0
    return rr, tuple(pivots)


def _kernel_from_rref(rref: np.ndarray, pivots, ncols: int, p: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in set(pivots)]
    k = np.zeros((len(free), ncols), dtype=np.int64)
    for j, f in enumerate(free):
        k[j, f] = 1
    if pivots and free:
        k[:, list(pivots)] = (-rref[:, free].T) % p
    return k


def _kernel_mod(ops, ncols: int, p: int):
    """Canonical (RREF) basis mod p of the common kernel of ops."""
    k = None
    for op in ops:
        a = op.mod(p)
        if k is None:
            r, piv = _rref_mod(a, p)
            k = _kernel_from_rref(r, piv, ncols, p)
        else:
            if k.shape[0] == 0:
                break
            b = _matmul_mod(a, k.T, p)
            r, piv = _rref_mod(b, p)
            coeffs = _kernel_from_rref(r, piv, k.shape[0], p)
            k = _matmul_mod(coeffs, k, p)
    if k is None:
        k = np.eye(ncols, dtype=np.int64)
    return _rref_mod(k, p)


def _parity_mask(ncols: int, width: int, want: int) -> np.ndarray:
    idx = np.arange(ncols)
    return ((idx // width + idx % width) % 2 == want).astype(np.int64)


def _parity_ranks_mod(mat: np.ndarray, p: int, width: int):
    out = []
    for want in (0, 1):
        mask = _parity_mask(mat.shape[1], width, want)
        out.append(len(_rref_mod(mat * mask[None, :], p)[1]))
    return tuple(out)


# ------------------------------------------------------- CRT reconstruction

def _rat_recon(u: int, m: int):
    """p/q congruent to u mod m with |p|, q <= sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return Fraction(r1, s1)


class _Group:
    """Snapshots sharing one (metric, pivots) key, with incremental CRT."""

    def __init__(self):
        self.primes = []
        self.crt = None       # nested lists of ints
        self.modulus = 1
        self.probe = None     # entry index where reconstruction last failed

    def absorb(self, mat: np.ndarray, p: int):
        vals = mat.tolist()
        if self.crt is None:
            self.crt = vals
            self.modulus = p
        else:
            m = self.modulus
            inv = pow(m % p, p - 2, p)
            for row, new in zip(self.crt, vals):
                for j, r in enumerate(new):
                    u = row[j]
                    row[j] = u + m * ((r - u) * inv % p)
            self.modulus = m * p
        self.primes.append(p)

    def reconstruct(self):
        m = self.modulus
        if self.probe is not None:
            i, j = self.probe
            if _rat_recon(self.crt[i][j], m) is None:
                return None
        out = []
        for i, row in enumerate(self.crt):
            frow = []
            for j, u in enumerate(row):
                if u < 2**20:
                    frow.append(Fraction(u))
                    continue
                val = _rat_recon(u, m)
                if val is None:
                    self.probe = (i, j)
                    return None
                frow.append(val)
            out.append(frow)
        return out


def _is_structural_rref(rows) -> bool:
    prev = -1
    for row in rows:
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None or piv <= prev or row[piv] != 1:
            return False
        for other in rows:
            if other is not row and other[piv] != 0:
                return False
        prev = piv
    return True


def _integerized(rows):
    """Per-row integer scalings (numerator rows, multipliers, max |entry|)."""
    int_rows, mults, biggest = [], [], 0
    for row in rows:
        mult = 1
        for x in row:
            mult = mult * x.denominator // gcd(mult, x.denominator)
        ints = [int(x * mult) for x in row]
        int_rows.append(ints)
        mults.append(mult)
        biggest = max(biggest, max((abs(v) for v in ints), default=0))
    return int_rows, mults, biggest


def _verify_primes_for(bound: int):
    need, acc = [], 1
    for q in VERIFY_PRIMES:
        need.append(q)
        acc *= q
        if acc > 2 * bound + 1:
            return need
    raise ArithmeticError("verification prime pool exhausted")


def _project_rows(rows, width: int, want: int):
    out = []
    for row in rows:
        proj = list(row)
        for i in range(len(proj)):
            if (i // width + i % width) % 2 != want:
                proj[i] = Fraction(0)
        out.append(proj)
    return out


def _verify_annihilation(ops, rows) -> bool:
    """Exact check that op @ rows^T = 0 for every op, via residue cover."""
    if not rows:
        return True
    int_rows, _, biggest = _integerized(rows)
    kop = IntRowsOp(int_rows)
    bound = max((op.ncols * op.bound() * biggest for op in ops), default=0)
    if bound == 0:
        return True
    for q in _verify_primes_for(bound):
        kq = kop.mod(q).T
        for op in ops:
            if _matmul_mod(op.mod(q), kq, q).any():
                return False
    return True


def _verify_in_span(basis_rows, pivots, query_rows) -> bool:
    """Exact check that each rational query row lies in span(basis_rows).

    basis_rows must be in RREF with the given pivots, so the only possible
    coordinates are the query entries at the pivot columns.
    """
    if not query_rows:
        return True
    if not basis_rows:
        return all(not any(row) for row in query_rows)
    q_ints, q_mults, q_big = _integerized(query_rows)
    b_ints, b_mults, b_big = _integerized(basis_rows)
    coeff = [[row[c] for c in pivots] for row in q_ints]
    max_c = max((abs(x) for row in coeff for x in row), default=0)
    scale = 1
    for m in b_mults:
        scale = scale * m // gcd(scale, m)
    bound = scale * q_big + len(pivots) * max_c * b_big * scale
    qop = IntRowsOp(q_ints)
    cop = IntRowsOp(coeff)
    bop = IntRowsOp(b_ints)
    for q in _verify_primes_for(bound):
        if any(m % q == 0 for m in b_mults):
            continue
        inv = np.array([pow(m % q, q - 2, q) for m in b_mults],
                       dtype=np.int64)
        rq = bop.mod(q) * inv[:, None] % q
        if ((qop.mod(q) - _matmul_mod(cop.mod(q), rq, q)) % q).any():
            return False
    return True


def _rows_mod(rows, group):
    """Reduction of exact rational rows modulo some prime of the group."""
    for p in group.primes:
        if any(x.denominator % p == 0 for row in rows for x in row):
            continue
        arr = np.array(
            [[int(x.numerator) % p * pow(x.denominator % p, p - 2, p) % p
              for x in row] for row in rows], dtype=np.int64)
        return arr, p
    return None, None


def _escalate(snapshot, pick, certify):
    """Drive primes through snapshot(), group, reconstruct, certify()."""
    groups = {}
    pool = iter(WORK_PRIMES)
    for batch in _BATCHES:
        for _ in range(batch):
            p = next(pool)
            key, mat = snapshot(p)
            groups.setdefault(key, _Group()).absorb(mat, p)
        key = pick(groups)
        rows = groups[key].reconstruct()
        if rows is None:
            continue
        result = certify(key, rows, groups[key])
        if result is not None:
            return result
    raise ArithmeticError("modular computation failed to certify")


def kernel_of_ops(ops, ncols: int, parity_width=None):
    """Exact canonical RREF kernel basis; optionally certified parity dims.

    Returns (rows, parity_dims); parity_dims is (dim_even, dim_odd) when
    parity_width is given (the second-coordinate width w2 + 1) and the
    kernel splits under the global sign flip, else None.
    """
    def snapshot(p):
        k, piv = _kernel_mod(ops, ncols, p)
        return (k.shape[0], piv), k

    def pick(groups):
        return min(groups)

    def certify(key, rows, group):
        if not _is_structural_rref(rows):
            return None
        if not _verify_annihilation(ops, rows):
            return None
        if parity_width is None:
            return (rows, None)
        plus = _project_rows(rows, parity_width, 0)
        minus = _project_rows(rows, parity_width, 1)
        if not _verify_annihilation(ops, plus + minus):
            return None
        k, p = _rows_mod(rows, group)
        if k is None:
            return None
        rplus, rminus = _parity_ranks_mod(k, p, parity_width)
        if rplus + rminus != len(rows):
            return None
        return (rows, (rplus, rminus))

    return _escalate(snapshot, pick, certify)


def rref_of_int_rows(int_rows, parity_width=None):
    """Exact canonical RREF of an integer matrix: (rows, pivots, parity)."""
    op = IntRowsOp(int_rows)
    if op.nrows == 0 or op.ncols == 0:
        return [], (), (0, 0) if parity_width else None

    def snapshot(p):
        r, piv = _rref_mod(op.mod(p), p)
        return (-r.shape[0], piv), r

    def pick(groups):
        return min(groups)

    def certify(key, rows, group):
        pivots = key[1]
        if rows and not _is_structural_rref(rows):
            return None
        if not _verify_in_span(rows, pivots, _fraction_rows(op.rows)):
            return None
        if parity_width is None:
            return (rows, pivots, None)
        plus = _project_rows(rows, parity_width, 0)
        minus = _project_rows(rows, parity_width, 1)
        if not _verify_in_span(rows, pivots, plus + minus):
            return None
        r, p = _rows_mod(rows, group)
        if r is None:
            return None
        rplus, rminus = _parity_ranks_mod(r, p, parity_width)
        if rplus + rminus != len(rows):
            return None
        return (rows, pivots, (rplus, rminus))

    return _escalate(snapshot, pick, certify)


def _fraction_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]
