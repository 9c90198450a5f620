"""Exact arithmetic in Z[Gamma] and Z[Gamma^2]; ideal generators; identities.

Order-1 elements are finite integer combinations of canonical PSL2(Z)
elements, order-2 elements of ordered pairs.  The published generator lists
for I1, I2, IH, IV, ID and the eps-conjugated I2^- are fixed here, as is the
suite of twelve decomposition identities behind the generation theorem for
the order-2 relations (each generator split into explicit left multiples of
the IH, IV and ID generators).

Three of the published identities carry typos in their left factors; the
corrected factors used here are machine-verified as exact identities by
thm3_identity_suite (see the decisions ledger for the diffs).
"""

from __future__ import annotations

from .psl2 import ID as GID, Psl2Element, S, T, U, U2, US, V, eps_conjugate


class GroupAlgebraError(ValueError):
    pass


class GroupAlgebraElement:
    """Finite Z-linear combination of group elements or of ordered pairs."""

    __slots__ = ("order", "terms")

    def __init__(self, order, terms):
        if order not in (1, 2):
            raise GroupAlgebraError("order must be 1 or 2")
        clean = {}
        for key, coef in terms.items():
            if coef:
                clean[key] = clean.get(key, 0) + coef
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("GroupAlgebraElement is immutable")

    def __eq__(self, other):
        return (isinstance(other, GroupAlgebraElement)
                and self.order == other.order and self.terms == other.terms)

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return GroupAlgebraElement(self.order, out)

    def __neg__(self):
        return GroupAlgebraElement(self.order,
                                   {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar: int):
        return GroupAlgebraElement(self.order,
                                   {k: scalar * v for k, v in self.terms.items()})

    def __mul__(self, other):
        """Convolution product; keys multiply componentwise."""
        self._check(other)
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                if self.order == 1:
                    key = k1 * k2
                else:
                    key = (k1[0] * k2[0], k1[1] * k2[1])
                out[key] = out.get(key, 0) + v1 * v2
        return GroupAlgebraElement(self.order, out)

    def _check(self, other):
        if not isinstance(other, GroupAlgebraElement) or other.order != self.order:
            raise GroupAlgebraError("order mismatch")

    def support(self):
        return sorted(self.terms)

    def __str__(self):
        return format_ga(self)

    def __repr__(self):
        return f"<GroupAlgebraElement order {self.order}: {format_ga(self)}>"


def ga1(*terms) -> GroupAlgebraElement:
    """Order-1 element from (coef, g) pairs or bare group elements."""
    out = {}
    for t in terms:
        coef, g = t if isinstance(t, tuple) else (1, t)
        out[g] = out.get(g, 0) + coef
    return GroupAlgebraElement(1, out)


def ga2(*terms) -> GroupAlgebraElement:
    """Order-2 element from (coef, g1, g2) triples or (g1, g2) pairs."""
    out = {}
    for t in terms:
        if len(t) == 3:
            coef, g1, g2 = t
        else:
            coef, (g1, g2) = 1, t
        out[(g1, g2)] = out.get((g1, g2), 0) + coef
    return GroupAlgebraElement(2, out)


def ga_mul(x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    return x * y


def unit(order: int) -> GroupAlgebraElement:
    return ga1(GID) if order == 1 else ga2((GID, GID))


def format_ga(x: GroupAlgebraElement) -> str:
    if not x.terms:
        return "0"
    chunks = []
    for key in x.support():
        coef = x.terms[key]
        name = str(key) if x.order == 1 else f"({key[0]}, {key[1]})"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag}*{name}"
        chunks.append(("+" if coef > 0 else "-", body))
    sign, body = chunks[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text


def eps_conj_pairwise(x: GroupAlgebraElement) -> GroupAlgebraElement:
    """(1, eps)-conjugation term by term: (g1, g2) -> (g1, eps g2 eps)."""
    if x.order != 2:
        raise GroupAlgebraError("(1, eps)-conjugation needs an order-2 element")
    return GroupAlgebraElement(
        2, {(g1, eps_conjugate(g2)): v for (g1, g2), v in x.terms.items()})


# ------------------------------------------------------------------- ideals

ONE1 = ga1(GID)
ONE_PLUS_S = ga1(GID, S)
ONE_PLUS_U_UU = ga1(GID, U, U2)

DIAG_S = ga2((GID, GID), (S, S))
DIAG_U = ga2((GID, GID), (U, U), (U2, U2))

I2_GENERATORS = (
    ga2((GID, GID), (GID, S), (S, GID), (S, S)),
    ga2((S, S), (S, US), (US, US), (GID, U)) + ga2((-1, U2, U2)),
    ga2((GID, GID), (U, GID), (U2, GID)) * DIAG_S,
    ga2((GID, GID), (GID, U), (GID, U2)) * DIAG_S,
)

IDEAL_NAMES = ("I1", "I2", "IH", "IV", "ID", "I2minus")


def ideal_generators(name: str):
    """The published generator list of the named left ideal."""
    if name == "I1":
        return [ONE_PLUS_S, ONE_PLUS_U_UU]
    if name == "I2":
        return list(I2_GENERATORS)
    if name == "IH":
        return [ga2((GID, GID), (S, GID)),
                ga2((GID, GID), (U, GID), (U2, GID)),
                ga2((GID, GID), (-1, GID, T))]
    if name == "IV":
        return [ga2((GID, GID), (GID, S)),
                ga2((GID, GID), (GID, U), (GID, U2)),
                ga2((GID, GID), (-1, US, GID))]
    if name == "ID":
        return [DIAG_S, DIAG_U]
    if name == "I2minus":
        return [eps_conj_pairwise(g) for g in I2_GENERATORS]
    raise GroupAlgebraError(f"unknown ideal {name!r}")


# ------------------------------------------- generation-theorem identities

def _p(g1, g2):
    return ga2((g1, g2))


def thm3_decompositions():
    """Twelve decompositions: each I2 generator as left multiples of
    IH / IV / ID generators, returned as (label, generator, ideal,
    [(left_factor, ideal_generator), ...])."""
    ih1, ih2, ih3 = ideal_generators("IH")
    iv1, iv2, iv3 = ideal_generators("IV")
    id1, id2 = ideal_generators("ID")
    g1, g2, g3, g4 = I2_GENERATORS
    one_u = ga1(GID, U)
    return [
        ("g1 in IH", g1, "IH", [(_p(GID, GID) + _p(GID, S), ih1)]),
        ("g1 in IV", g1, "IV", [(_p(GID, GID) + _p(S, GID), iv1)]),
        ("g1 in ID", g1, "ID", [(_p(GID, GID) + _p(GID, S), id1)]),
        ("g2 in IH", g2, "IH", [
            (_p(GID, S), ih1),
            (_p(GID, U), ih3),
            (_p(GID, US) + _p(U, US), ih1),
            (-1 * _p(GID, US), ih2),
            (-1 * _p(U2, U2), ih3),
        ]),
        ("g2 in IV", g2, "IV", [
            (_p(US, U), iv1),
            (_p(GID, U), iv3),
            (_p(S, GID) + _p(S, U), iv1),
            (-1 * _p(S, GID), iv2),
            (-1 * _p(U2, U2), iv3),
        ]),
        ("g2 in ID", g2, "ID", [
            (_p(GID, U), id1),
            (_p(GID, GID) + _p(U, U), id1),
            (-1 * _p(GID, GID), id2),
        ]),
        ("g3 in IH", g3, "IH", [
            (_p(GID, S) + _p(U, S) + _p(U2, S), ih1),
            (_p(GID, GID), ih2),
            (-1 * _p(GID, S), ih2),
        ]),
        ("g3 in IV", g3, "IV", [
            (_p(S, GID) + _p(US, GID) + _p(U2 * S, GID), iv1),
            (_p(GID, GID) + _p(U, GID) + _p(U2, GID), iv3),
        ]),
        ("g3 in ID", g3, "ID", [(ga2((GID, GID), (U, GID), (U2, GID)), id1)]),
        ("g4 in IH", g4, "IH", [
            (_p(GID, S) + _p(GID, US) + _p(GID, U2 * S), ih1),
            (_p(GID, GID) + _p(GID, U) + _p(GID, U2), ih3),
        ]),
        ("g4 in IV", g4, "IV", [
            (_p(GID, GID), iv2),
            (_p(S, GID) + _p(S, U) + _p(S, U2), iv1),
            (-1 * _p(S, GID), iv2),
        ]),
        ("g4 in ID", g4, "ID", [(ga2((GID, GID), (GID, U), (GID, U2)), id1)]),
    ]


def thm3_identity_suite(corrupt: bool = False):
    """Verify all twelve decompositions as exact Z[Gamma^2] identities.

    Returns a list of {check, status, witness} dicts.  With corrupt=True a
    sign is flipped in the first generator first, as a negative control.
    """
    report = []
    for label, gen, ideal, pieces in thm3_decompositions():
        if corrupt:
            flip_key = gen.support()[0]
            gen = gen + ga2((-2 * gen.terms[flip_key], *flip_key))
        total = None
        for left, igen in pieces:
            term = left * igen
            total = term if total is None else total + term
        ok = total == gen
        witness = "" if ok else f"difference {format_ga(total - gen)}"
        report.append({
            "check": f"thm3/{label}",
            "status": "pass" if ok else "fail",
            "witness": witness or f"{len(pieces)} left multiples of {ideal}",
        })
    return report
