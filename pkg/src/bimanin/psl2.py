"""Canonical PSL2(Z) elements, cusps, and the cusp graph.

Group elements are stored as integer matrices (a, b; c, d) with ad - bc = 1,
normalized so that c > 0, or c == 0 and a > 0; the two lifts of a PSL2(Z)
class therefore collapse to one hashable value.  Cusps are coprime pairs
(p : q) with q > 0, or (1 : 0) for infinity.

The cusp graph has vertex set P^1(Q) and an edge between x and y exactly when
|p_x q_y - p_y q_x| = 1; group elements are its oriented edges (g.oo -> g.0).
Distance is the minimal chain length in that graph, computed through minimal
integer continued fractions (negative partial quotients allowed).
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd


class Psl2Error(ValueError):
    pass


class Psl2Element:
    """An element of PSL2(Z) in canonical-sign form."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        if a * d - b * c != 1:
            raise Psl2Error(f"determinant of ({a},{b};{c},{d}) is not 1")
        if c < 0 or (c == 0 and a < 0):
            a, b, c, d = -a, -b, -c, -d
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Psl2Element is immutable")

    def key(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        return isinstance(other, Psl2Element) and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        return Psl2Element(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self):
        return Psl2Element(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        out = ID
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def act(self, x: "Cusp") -> "Cusp":
        return Cusp(self.a * x.p + self.b * x.q, self.c * x.p + self.d * x.q)

    def __repr__(self):
        return f"Psl2Element({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        return word(self)


def psl2_make(a, b, c, d) -> Psl2Element:
    """Canonical representative of +-(a, b; c, d); requires ad - bc = 1."""
    return Psl2Element(a, b, c, d)


ID = Psl2Element(1, 0, 0, 1)
S = Psl2Element(0, -1, 1, 0)
U = Psl2Element(0, 1, -1, 1)
U2 = U * U
T = Psl2Element(1, 1, 0, 1)
US = U * S
V = S * U2 * S


def eps_conjugate(g: Psl2Element) -> Psl2Element:
    """Conjugation by eps = (-1, 0; 0, 1): (a, b; c, d) -> (a, -b; -c, d)."""
    return Psl2Element(g.a, -g.b, -g.c, g.d)


_SHORT_WORDS = None


def _short_words():
    global _SHORT_WORDS
    if _SHORT_WORDS is None:
        table = {}
        for name, g in [
            ("1", ID), ("S", S), ("U", U), ("U^2", U2), ("U*S", US),
            ("U^2*S", U2 * S), ("V", V), ("V^2", V * V), ("V*S", V * S),
            ("V^2*S", V * V * S), ("T^-1", T.inv()),
        ]:
            table.setdefault(g, name)
        _SHORT_WORDS = table
    return _SHORT_WORDS


def word(g: Psl2Element) -> str:
    """A word for g in the letters S and T (short U/V names when available)."""
    short = _short_words().get(g)
    if short is not None:
        return short
    tokens = []
    m = g
    while m.c != 0:
        k = m.a // m.c
        if k != 0:
            tokens.append(f"T^{k}" if k != 1 else "T")
        # T^-k * m has upper-left entry a - k*c in [0, c); then swap with S.
        m = (T ** (-k)) * m if k else m
        tokens.append("S")
        m = S.inv() * m
    # c = 0 and canonical sign force m = T^b.
    k = m.b
    if k != 0:
        tokens.append(f"T^{k}" if k != 1 else "T")
    return "*".join(tokens) if tokens else "1"


class CuspError(ValueError):
    pass


class Cusp:
    """A point (p : q) of P^1(Q) with gcd(p, q) = 1 and q > 0, or (1 : 0)."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        if p == 0 and q == 0:
            raise CuspError("(0 : 0) is not a point of P^1(Q)")
        g = gcd(p, q)
        p //= g
        q //= g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("Cusp is immutable")

    def key(self):
        return (self.p, self.q)

    def __eq__(self, other):
        return isinstance(other, Cusp) and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash(self.key())

    def is_infinity(self):
        return self.q == 0

    def __repr__(self):
        return f"Cusp({self.p}, {self.q})"

    def __str__(self):
        return format_cusp(self)


INF = Cusp(1, 0)
ZERO = Cusp(0, 1)
ONE = Cusp(1, 1)
MINUS_ONE = Cusp(-1, 1)


def parse_cusp(text: str) -> Cusp:
    """Parse 'p/q', a bare integer, or 'oo'."""
    t = text.strip()
    if t in ("oo", "-oo"):
        return INF
    try:
        if "/" in t:
            num, den = t.split("/")
            return Cusp(int(num), int(den))
        return Cusp(int(t), 1)
    except (ValueError, CuspError) as exc:
        raise CuspError(f"cannot parse cusp {text!r}") from exc


def format_cusp(x: Cusp) -> str:
    if x.q == 0:
        return "oo"
    if x.q == 1:
        return str(x.p)
    return f"{x.p}/{x.q}"


def cusp_act(g: Psl2Element, x: Cusp) -> Cusp:
    return g.act(x)


def cusp_adjacent(x: Cusp, y: Cusp) -> bool:
    """Distance-1 test: |p_x q_y - p_y q_x| = 1."""
    return abs(x.p * y.q - y.p * x.q) == 1


def psl2_from_cusps(x: Cusp, y: Cusp) -> Psl2Element:
    """The unique g in PSL2(Z) with g.oo = x and g.0 = y (x, y adjacent)."""
    det = x.p * y.q - y.p * x.q
    if det == 1:
        return Psl2Element(x.p, y.p, x.q, y.q)
    if det == -1:
        return Psl2Element(x.p, -y.p, x.q, -y.q)
    raise CuspError(f"cusps {x} and {y} are not adjacent")


def psl2_mapping(x1: Cusp, x2: Cusp, y1: Cusp, y2: Cusp):
    """The g in PSL2(Z) with g.x1 = y1 and g.x2 = y2, or None.

    Two distinct cusps pin g down completely (the stabilizer of an ordered
    pair is trivial in PSL2(Z)), so at most one solution exists.
    """
    if x1 == x2 or y1 == y2:
        raise CuspError("mapping keys need distinct source and target pairs")
    da = x1.p * x2.q - x2.p * x1.q
    db = y1.p * y2.q - y2.p * y1.q
    if abs(da) != abs(db):
        return None
    # Solve M * (x1 | x2) = (y1 | y2) * diag(s1, s2) over the two sign choices.
    s2 = 1 if da == db else -1
    m00 = y1.p * x2.q - s2 * y2.p * x1.q
    m01 = -y1.p * x2.p + s2 * y2.p * x1.p
    m10 = y1.q * x2.q - s2 * y2.q * x1.q
    m11 = -y1.q * x2.p + s2 * y2.q * x1.p
    if any(v % da for v in (m00, m01, m10, m11)):
        return None
    return Psl2Element(m00 // da, m01 // da, m10 // da, m11 // da)


@lru_cache(maxsize=None)
def _cf_min_len(p: int, q: int) -> int:
    """Minimal number of partial quotients over integer continued fractions.

    Chains out of infinity match expansions p/q = a0 + 1/(a1 + 1/(...)) with
    arbitrary integer quotients, one chain step per quotient; at every level
    only the two nearest integers can start a minimal expansion.
    """
    if q < 0:
        p, q = -p, -q
    if q == 1:
        return 1
    r = p % q
    return 1 + min(_cf_min_len(q, r), _cf_min_len(q, r - q))


def matrix_sending_to_infinity(a: Cusp) -> Psl2Element:
    """Some mu in PSL2(Z) with mu.a = oo."""
    if a.is_infinity():
        return ID
    # p*s - q*r = 1, then (s, -r; -q, p) sends (p : q) to (1 : 0).
    r, s = _bezout(a.p, a.q)
    return Psl2Element(s, -r, -a.q, a.p)


def _bezout(p: int, q: int):
    """(r, s) with p*s - q*r = 1 for coprime p, q."""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r == -1:
        old_s, old_t = -old_s, -old_t
    # old_s * p + old_t * q = 1  ->  s = old_s, r = -old_t
    return -old_t, old_s


def cusp_distance(a: Cusp, b: Cusp) -> int:
    """Graph distance, via translation to d(oo, x) and minimal fractions."""
    if a == b:
        return 0
    mu = matrix_sending_to_infinity(a)
    x = mu.act(b)
    if x.is_infinity():
        return 0
    return _cf_min_len(x.p, x.q)


def cusp_height(a: Cusp) -> int:
    """h(a) = max(d(a, oo), d(a, 0))."""
    return max(cusp_distance(a, INF), cusp_distance(a, ZERO))


def cusp_region(a: Cusp) -> str:
    """Which of B0..B4 holds the cusp (B0 = {oo, 0, 1, -1})."""
    if a in (INF, ZERO, ONE, MINUS_ONE):
        return "B0"
    p, q = a.p, a.q
    if p > 0:
        return "B1" if p < q else "B2"
    return "B3" if -p < q else "B4"


def cusp_path(a: Cusp, b: Cusp):
    """A chain g1..gN with g1.oo = a, gi.0 = g(i+1).oo, gN.0 = b.

    Built from the convergents of a continued fraction after moving a to
    infinity (Manin's trick); valid but not necessarily minimal.
    """
    if a == b:
        return []
    mu = matrix_sending_to_infinity(a)
    x = mu.act(b)
    inv = mu.inv()
    return [inv * g for g in _path_from_infinity(x)]


def _path_from_infinity(x: Cusp):
    num, den = x.p, x.q
    digits = []
    while den:
        quo = num // den
        digits.append(quo)
        num, den = den, num - quo * den
    hs = [(1, 0), (digits[0], 1)]
    for quo in digits[1:]:
        (h2, k2), (h1, k1) = hs[-2], hs[-1]
        hs.append((quo * h1 + h2, quo * k1 + k2))
    steps = []
    for (h0, k0), (h1, k1) in zip(hs, hs[1:]):
        steps.append(psl2_from_cusps(Cusp(h0, k0), Cusp(h1, k1)))
    return steps


def common_neighbors(x: Cusp, y: Cusp):
    """Both cusps at distance 1 from an adjacent pair: mediant and difference."""
    if not cusp_adjacent(x, y):
        raise CuspError(f"{x} and {y} are not adjacent")
    return [Cusp(x.p + y.p, x.q + y.q), Cusp(x.p - y.p, x.q - y.q)]
