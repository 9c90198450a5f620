"""Weight actions of PSL2(Z) on polynomial spaces and the Haberland pairing.

For g = (a, b; c, d) the weight-w action sends X^m to (dX - b)^m (-cX + a)^(w-m),
so the action matrix is integral in the monomial basis {X^m}.  Pairs act
coordinatewise and the action matrix on V_{w1,w2} is the Kronecker product in
the (m1, m2) basis, m1 major.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import _modular
from .groupalgebra import GroupAlgebraElement
from .psl2 import Psl2Element


class PolyError(ValueError):
    pass


@dataclass(frozen=True)
class PolyVec:
    """Element of V_{w1,w2}: coefficient grid indexed by (m1, m2).

    Order-1 polynomials use w2 = 0 and live in the single column m2 = 0.
    """

    w1: int
    w2: int
    coeffs: tuple  # (w1+1) rows of (w2+1) Fractions

    @staticmethod
    def zero(w1: int, w2: int = 0) -> "PolyVec":
        return PolyVec(w1, w2, tuple(tuple(Fraction(0) for _ in range(w2 + 1))
                                     for _ in range(w1 + 1)))

    @staticmethod
    def from_terms(w1: int, w2: int, terms) -> "PolyVec":
        grid = [[Fraction(0)] * (w2 + 1) for _ in range(w1 + 1)]
        for (m1, m2), coef in terms.items():
            if not (0 <= m1 <= w1 and 0 <= m2 <= w2):
                raise PolyError(f"monomial X1^{m1}*X2^{m2} exceeds weights "
                                f"({w1}, {w2})")
            grid[m1][m2] += Fraction(coef)
        return PolyVec(w1, w2, tuple(tuple(row) for row in grid))

    @staticmethod
    def from_flat(w1: int, w2: int, vec) -> "PolyVec":
        it = iter(vec)
        grid = tuple(tuple(Fraction(next(it)) for _ in range(w2 + 1))
                     for _ in range(w1 + 1))
        return PolyVec(w1, w2, grid)

    def flatten(self):
        return tuple(x for row in self.coeffs for x in row)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.coeffs)

    def __add__(self, other):
        self._compat(other)
        return PolyVec(self.w1, self.w2, tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._compat(other)
        return PolyVec(self.w1, self.w2, tuple(
            tuple(a - b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return PolyVec(self.w1, self.w2, tuple(tuple(-a for a in row)
                                               for row in self.coeffs))

    def scale(self, factor):
        f = Fraction(factor)
        return PolyVec(self.w1, self.w2, tuple(tuple(f * a for a in row)
                                               for row in self.coeffs))

    def diagonal(self) -> "PolyVec":
        """P(Z, Z) as an order-1 polynomial of weight w1 + w2."""
        out = [Fraction(0)] * (self.w1 + self.w2 + 1)
        for m1, row in enumerate(self.coeffs):
            for m2, coef in enumerate(row):
                out[m1 + m2] += coef
        return PolyVec.from_flat(self.w1 + self.w2, 0, out)

    def _compat(self, other):
        if (self.w1, self.w2) != (other.w1, other.w2):
            raise PolyError("weight mismatch")

    def __str__(self):
        return format_poly(self)


# ----------------------------------------------------------- action matrices

def _check_weight(w: int):
    if w < 0 or w % 2:
        raise PolyError(f"weight {w} is not an even nonnegative integer")


def act1_matrix(g: Psl2Element, w: int):
    """(w+1) x (w+1) integer matrix of P -> g.P in the basis {X^m}."""
    _check_weight(w)
    cols = []
    for m in range(w + 1):
        # (dX - b)^m convolved with (-cX + a)^(w - m).
        first = [comb(m, j) * g.d**j * (-g.b) ** (m - j) for j in range(m + 1)]
        second = [comb(w - m, j) * (-g.c) ** j * g.a ** (w - m - j)
                  for j in range(w - m + 1)]
        col = [0] * (w + 1)
        for j1, x in enumerate(first):
            if x:
                for j2, y in enumerate(second):
                    col[j1 + j2] += x * y
        cols.append(col)
    return [[cols[m][i] for m in range(w + 1)] for i in range(w + 1)]


def kron(a, b):
    """Kronecker product of integer matrices given as nested lists."""
    rows = []
    for ra in a:
        for rb in b:
            rows.append([x * y for x in ra for y in rb])
    return rows


def act2_matrix(g1: Psl2Element, g2: Psl2Element, w1: int, w2: int):
    """Matrix of the pair action on V_{w1,w2}, (m1, m2) basis, m1 major."""
    return kron(act1_matrix(g1, w1), act1_matrix(g2, w2))


def mat_add(a, b, coef=1):
    return [[x + coef * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_apply(mat, vec):
    return [sum(m_ij * v for m_ij, v in zip(row, vec) if m_ij) for row in mat]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def ga_action_matrix(x: GroupAlgebraElement, w1: int, w2: int = 0):
    """Integer action matrix of a group-algebra element on V_{w1,w2}."""
    dim = (w1 + 1) * (w2 + 1)
    total = [[0] * dim for _ in range(dim)]
    for key, coef in x.terms.items():
        if x.order == 1:
            if w2 != 0:
                raise PolyError("order-1 elements act on V_{w,0} only")
            part = act1_matrix(key, w1)
        else:
            part = act2_matrix(key[0], key[1], w1, w2)
        total = mat_add(total, part, coef)
    return total


def ga_action_op(x: GroupAlgebraElement, w1: int, w2: int):
    """The same action as a lazy Kronecker-sum operator (modular engine)."""
    if x.order != 2:
        raise PolyError("operator form is for order-2 elements")
    terms = [(coef, act1_matrix(g1, w1), act1_matrix(g2, w2))
             for (g1, g2), coef in x.terms.items()]
    return _modular.KronSumOp(terms, (w1 + 1) * (w2 + 1))


def act_poly(x, p: PolyVec) -> PolyVec:
    """Apply a group element or group-algebra element to a polynomial."""
    if isinstance(x, Psl2Element):
        if p.w2 == 0:
            mat = act1_matrix(x, p.w1)
        else:
            mat = act2_matrix(x, x, p.w1, p.w2)
    else:
        mat = ga_action_matrix(x, p.w1, p.w2)
    return PolyVec.from_flat(p.w1, p.w2, mat_apply(mat, p.flatten()))


def act_pair_poly(g1: Psl2Element, g2: Psl2Element, p: PolyVec) -> PolyVec:
    return PolyVec.from_flat(
        p.w1, p.w2, mat_apply(act2_matrix(g1, g2, p.w1, p.w2), p.flatten()))


def parity_projector(w1: int, w2: int, sign: str):
    """Projector onto monomials with m1 + m2 even ('+') or odd ('-')."""
    if sign not in ("+", "-"):
        raise PolyError("sign must be '+' or '-'")
    want = 0 if sign == "+" else 1
    dim = (w1 + 1) * (w2 + 1)
    mat = [[0] * dim for _ in range(dim)]
    for m1 in range(w1 + 1):
        for m2 in range(w2 + 1):
            i = m1 * (w2 + 1) + m2
            if (m1 + m2) % 2 == want:
                mat[i][i] = 1
    return mat


def parity_flip_matrix(w1: int, w2: int):
    """Matrix of P(X1, X2) -> P(-X1, -X2)."""
    dim = (w1 + 1) * (w2 + 1)
    mat = [[0] * dim for _ in range(dim)]
    for m1 in range(w1 + 1):
        for m2 in range(w2 + 1):
            i = m1 * (w2 + 1) + m2
            mat[i][i] = (-1) ** (m1 + m2)
    return mat


def second_flip(p: PolyVec) -> PolyVec:
    """(1, eps).P = P(X1, -X2)."""
    return PolyVec(p.w1, p.w2, tuple(
        tuple(x if m2 % 2 == 0 else -x for m2, x in enumerate(row))
        for row in p.coeffs))


# ------------------------------------------------------------------ pairing

def haberland_pairing(p: PolyVec, q: PolyVec) -> Fraction:
    """[X^m, X^(w-m)] = (-1)^m / C(w, m), zero on other monomial pairs."""
    if p.w2 or q.w2:
        raise PolyError("order-1 pairing needs w2 = 0")
    if p.w1 != q.w1:
        raise PolyError("weight mismatch")
    w = p.w1
    return sum((-1) ** m * p.coeffs[m][0] * q.coeffs[w - m][0]
               / comb(w, m) for m in range(w + 1))


def haberland_pairing2(p: PolyVec, q: PolyVec) -> Fraction:
    """Tensor pairing on V_{w1,w2}: factor-wise Haberland."""
    p._compat(q)
    w1, w2 = p.w1, p.w2
    total = Fraction(0)
    for m1 in range(w1 + 1):
        for m2 in range(w2 + 1):
            x = p.coeffs[m1][m2]
            if x:
                y = q.coeffs[w1 - m1][w2 - m2]
                if y:
                    total += ((-1) ** (m1 + m2)) * x * y \
                        / (comb(w1, m1) * comb(w2, m2))
    return total


# ------------------------------------------------------------- text grammar

_COEF_RE = re.compile(r"^[+-]?\d+(?:/\d+)?")
_FACTOR_RE = re.compile(r"^\*?(X1|X2|X|Z)(?:\^(\d+))?")


def parse_poly(text: str, w1: int, w2: int = 0) -> PolyVec:
    """Parse the term grammar: terms joined by + / -, term =
    [rational][*X1^a][*X2^b]; single-variable input uses Z or X."""
    squeezed = text.replace(" ", "")
    if not squeezed:
        raise PolyError("empty polynomial")
    chunks = [c for c in squeezed.replace("-", "+-").split("+") if c]
    terms = {}
    for chunk in chunks:
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:]
        m = _COEF_RE.match(chunk)
        coef = Fraction(m.group()) if m else Fraction(1)
        rest = chunk[m.end():] if m else chunk
        e1 = e2 = 0
        while rest:
            fm = _FACTOR_RE.match(rest)
            if not fm:
                raise PolyError(f"cannot parse term {chunk!r}")
            var, exp = fm.group(1), int(fm.group(2) or 1)
            if var == "X2":
                e2 += exp
            else:
                e1 += exp
            rest = rest[fm.end():]
        key = (e1, e2)
        terms[key] = terms.get(key, Fraction(0)) + sign * coef
    return PolyVec.from_terms(w1, w2, terms)


def format_poly(p: PolyVec) -> str:
    """Canonical text form, terms in (m1, m2) order, m1 major."""
    single = p.w2 == 0
    pieces = []
    for m1, row in enumerate(p.coeffs):
        for m2, coef in enumerate(row):
            if not coef:
                continue
            factors = []
            if m1:
                factors.append(("X" if single else "X1")
                               + (f"^{m1}" if m1 > 1 else ""))
            if m2:
                factors.append("X2" + (f"^{m2}" if m2 > 1 else ""))
            mag = abs(coef)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(("+" if coef > 0 else "-", body))
    if not pieces:
        return "0"
    sign, body = pieces[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
