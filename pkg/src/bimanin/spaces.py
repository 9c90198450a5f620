"""Relation spaces: W_w, W_{w1,w2}, V[I_D], the Eisenstein part, Phi_S, table.

Every space is the exact kernel of the stacked action matrices of an ideal's
generators, reported as a canonical RREF basis; parity parts are the images
under the even/odd projectors (the spaces are stable under the simultaneous
sign flip, which the tests check).  Computed bases are cached to disk keyed
by weights, ideal, parity and a hash of the generator list.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .groupalgebra import ideal_generators
from .linalg import (
    SpanSolver, SubspaceBasis, kernel_basis, kernel_of_operators, rank,
    row_space, row_space_with_parity, span_equal, sum_spaces,
)
from .polyaction import PolyVec, ga_action_matrix, ga_action_op

# Stacked exact elimination below this ambient dimension, modular above.
_OPS_DIM_THRESHOLD = 100


class SpaceError(ValueError):
    pass


@dataclass(frozen=True)
class TableRow:
    w1: int
    w2: int
    dim_w_pair: int
    dim_e_pair: int
    gap_pair: int
    dim_w_imp: int
    dim_e_imp: int
    gap_imp: int

    def csv(self) -> str:
        return ",".join(str(v) for v in (
            self.w1, self.w2, self.dim_w_pair, self.dim_e_pair, self.gap_pair,
            self.dim_w_imp, self.dim_e_imp, self.gap_imp))


CSV_HEADER = "w1,w2,dim_W_pair,dim_E_pair,gap_pair,dim_W_imp,dim_E_imp,gap_imp"


def dim_s_oracle(k: int) -> int:
    """dim S_k for level one: the classical formula; k even and >= 0."""
    if k % 2 or k < 0:
        raise SpaceError(f"weight {k} is not an even nonnegative integer")
    if k < 4:
        return 0
    full = k // 12 + (0 if k % 12 == 2 else 1)
    return full - 1


def _parity_project(vec, w2: int, want: int):
    out = list(vec)
    width = w2 + 1
    for i in range(len(out)):
        m1, m2 = divmod(i, width)
        if (m1 + m2) % 2 != want:
            out[i] = Fraction(0)
    return out


def _embed_left(row, w1: int, w2: int):
    vec = [Fraction(0)] * ((w1 + 1) * (w2 + 1))
    for m1, x in enumerate(row):
        vec[m1 * (w2 + 1)] = x
    return vec


def _embed_right(row, w1: int, w2: int):
    vec = [Fraction(0)] * ((w1 + 1) * (w2 + 1))
    for m2, x in enumerate(row):
        vec[w1 * (w2 + 1) + m2] = x
    return vec


def _flip_second(vec, w2: int):
    width = w2 + 1
    return [x if (i % width) % 2 == 0 else -x for i, x in enumerate(vec)]


def basis_to_json(basis: SubspaceBasis, w1, w2, ideal, parity) -> dict:
    polys = []
    width = w2 + 1
    for row in basis.rows:
        terms = []
        for i, x in enumerate(row):
            if x:
                m1, m2 = divmod(i, width)
                terms.append({"m1": m1, "m2": m2,
                              "num": str(x.numerator), "den": str(x.denominator)})
        polys.append(terms)
    return {"w1": w1, "w2": w2, "ideal": ideal, "parity": parity,
            "basis": polys}


def basis_from_json(data: dict) -> SubspaceBasis:
    w1, w2 = data["w1"], data["w2"]
    width = w2 + 1
    ambient = (w1 + 1) * width
    rows = []
    for poly in data["basis"]:
        vec = [Fraction(0)] * ambient
        for term in poly:
            vec[term["m1"] * width + term["m2"]] = Fraction(
                int(term["num"]), int(term["den"]))
        rows.append(tuple(vec))
    return SubspaceBasis(ambient, tuple(rows))


def _generator_hash(*ideals: str) -> str:
    blob = repr([[sorted(g.terms.items(), key=repr)
                  for g in ideal_generators(name)] for name in ideals])
    return hashlib.sha256(blob.encode()).hexdigest()[:10]


_PARITY_NAMES = {None: "both", "+": "even", "-": "odd"}


class SpaceComputer:
    """Computes and caches the relation-space bases."""

    def __init__(self, cache_dir=None):
        self.cache_dir = cache_dir or os.environ.get("BIMANIN_CACHE")
        self._memory = {}
        self._lock = threading.Lock()
        self.stats = {"cache_hits": 0, "cache_misses": 0}

    # ----------------------------------------------------------- caching

    _DISK_KINDS = {"annfull": lambda ideal: (ideal,),
                   "efull": lambda ideal: ("I1", "ID")}

    def _cache_path(self, key):
        kind, w1, w2, ideal = key
        tag = _generator_hash(*self._DISK_KINDS[kind](ideal))
        return os.path.join(self.cache_dir,
                            f"{kind}_{w1}_{w2}_{ideal}_{tag}.json")

    def _cached(self, key, compute):
        with self._lock:
            if key in self._memory:
                self.stats["cache_hits"] += 1
                return self._memory[key]
        path = None
        if self.cache_dir and key[0] in self._DISK_KINDS:
            path = self._cache_path(key)
            if os.path.exists(path):
                with open(path, encoding="utf-8") as fh:
                    data = json.load(fh)
                value = (basis_from_json(data), tuple(data["parity_dims"]))
                with self._lock:
                    self._memory[key] = value
                    self.stats["cache_hits"] += 1
                return value
        value = compute()
        with self._lock:
            self._memory[key] = value
            self.stats["cache_misses"] += 1
        if path:
            os.makedirs(self.cache_dir, exist_ok=True)
            kind, w1, w2, ideal = key
            basis, dims = value
            payload = basis_to_json(basis, w1, w2, ideal, "both")
            payload["parity_dims"] = list(dims)
            fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh)
            os.replace(tmp, path)
        return value

    # ------------------------------------------------------------ spaces

    def w_space(self, w: int) -> SubspaceBasis:
        """W_w = V_w[I1], the order-1 relation space (W_0 = 0)."""
        if w % 2 or w < 0:
            raise SpaceError(f"weight {w} must be even and nonnegative")
        def compute():
            rows = []
            for gen in ideal_generators("I1"):
                rows.extend(ga_action_matrix(gen, w))
            return kernel_basis(rows, w + 1)
        return self._cached(("w1space", w), compute)

    def dim_w(self, w: int) -> int:
        return self.w_space(w).dim

    def _ann_full(self, w1: int, w2: int, ideal: str):
        """(basis, certified parity dims) of the full annihilator."""
        if w1 % 2 or w2 % 2 or w1 < 0 or w2 < 0:
            raise SpaceError("weights must be even and nonnegative")
        def compute():
            dim = (w1 + 1) * (w2 + 1)
            gens = ideal_generators(ideal)
            if dim > _OPS_DIM_THRESHOLD:
                ops = [ga_action_op(g, w1, w2) for g in gens]
                return kernel_of_operators(ops, dim, parity_width=w2 + 1)
            rows = []
            for gen in gens:
                rows.extend(ga_action_matrix(gen, w1, w2))
            basis = kernel_basis(rows, dim)
            return basis, self._exact_parity_dims(basis, w2)
        return self._cached(("annfull", w1, w2, ideal), compute)

    @staticmethod
    def _exact_parity_dims(basis: SubspaceBasis, w2: int):
        dims = []
        for want in (0, 1):
            rows = [_parity_project(row, w2, want) for row in basis.rows]
            dims.append(rank(rows))
        if dims[0] + dims[1] != basis.dim:
            raise SpaceError("space is not parity stable")
        return tuple(dims)

    def annihilator(self, w1: int, w2: int, ideal: str = "I2",
                    parity=None) -> SubspaceBasis:
        """Common kernel of the ideal's generators on V_{w1,w2}."""
        if parity not in (None, "+", "-"):
            raise SpaceError("parity must be None, '+' or '-'")
        full, _ = self._ann_full(w1, w2, ideal)
        if parity is None:
            return full
        def compute_part():
            want = 0 if parity == "+" else 1
            rows = [_parity_project(row, w2, want) for row in full.rows]
            return row_space(rows, full.ambient_dim)
        return self._cached(("ann", w1, w2, ideal, parity), compute_part)

    def parity_dims(self, w1: int, w2: int, ideal: str = "I2"):
        """Certified (dim even part, dim odd part) of the annihilator."""
        return self._ann_full(w1, w2, ideal)[1]

    def id_space(self, w1: int, w2: int, parity=None) -> SubspaceBasis:
        return self.annihilator(w1, w2, "ID", parity)

    def _e_rows(self, w1: int, w2: int):
        rows = [_embed_left(r, w1, w2) for r in self.w_space(w1).rows]
        rows += [_embed_right(r, w1, w2) for r in self.w_space(w2).rows]
        rows += [list(r) for r in self.id_space(w1, w2).rows]
        return rows

    def _e_full(self, w1: int, w2: int):
        def compute():
            dim = (w1 + 1) * (w2 + 1)
            rows = self._e_rows(w1, w2)
            if dim > _OPS_DIM_THRESHOLD:
                return row_space_with_parity(rows, dim, w2 + 1)
            basis = row_space(rows, dim)
            return basis, self._exact_parity_dims(basis, w2)
        return self._cached(("efull", w1, w2, "E"), compute)

    def e_space(self, w1: int, w2: int, parity=None) -> SubspaceBasis:
        """E = (W_{w1} x 1) + V[I_D] + (X1^{w1} x W_{w2})."""
        full = self._e_full(w1, w2)[0]
        if parity is None:
            return full
        def compute_part():
            want = 0 if parity == "+" else 1
            rows = [_parity_project(r, w2, want) for r in full.rows]
            return row_space(rows, full.ambient_dim)
        return self._cached(("espace", w1, w2, parity), compute_part)

    def e_parity_dims(self, w1: int, w2: int):
        """Certified (dim even part, dim odd part) of E_{w1,w2}."""
        return self._e_full(w1, w2)[1]

    def w_minus(self, w1: int, w2: int) -> SubspaceBasis:
        """V[I2^-]; verified to be the (1, eps)-image of W_{w1,w2}."""
        def compute():
            basis = self.annihilator(w1, w2, "I2minus")
            flipped = [_flip_second(row, w2)
                       for row in self.annihilator(w1, w2, "I2").rows]
            image = row_space(flipped, basis.ambient_dim)
            if not span_equal(basis, image):
                raise SpaceError("W^- does not match the (1, eps)-image of W")
            return basis
        return self._cached(("wminus", w1, w2), compute)

    # -------------------------------------------------------- section map

    def section_id(self, p: PolyVec, w1: int, w2: int) -> PolyVec:
        """The rational section of the diagonal restriction on V[I_D].

        Requires p in W_{w1+w2}; returns q in V_{w1,w2}[I_D] with
        q(Z, Z) = p(Z), both facts verified before returning.
        """
        w = w1 + w2
        if p.w1 != w or p.w2 != 0:
            raise SpaceError(f"polynomial weight {p.w1} does not match {w}")
        if not self.w_space(w).contains(p.flatten()):
            raise SpaceError("polynomial is not in the order-1 relation space")
        # p(Z) = sum_m C(w, m) a_m (-Z)^(w-m)
        a = [p.coeffs[w - m][0] * (-1) ** m / comb(w, m) for m in range(w + 1)]
        grid = {}
        for m1 in range(w1 + 1):
            for m2 in range(w2 + 1):
                j1, j2 = w1 - m1, w2 - m2
                coef = comb(w1, m1) * comb(w2, m2) * a[m1 + m2] \
                    * (-1) ** (j1 + j2)
                if coef:
                    grid[(j1, j2)] = coef
        q = PolyVec.from_terms(w1, w2, grid)
        if q.diagonal() != p:
            raise SpaceError("section does not restrict to the input")
        flat = q.flatten()
        for gen in ideal_generators("ID"):
            mat = ga_action_matrix(gen, w1, w2)
            if any(sum(m_ij * v for m_ij, v in zip(mrow, flat))
                   for mrow in mat):
                raise SpaceError("section image is not killed by I_D")
        return q

    # ------------------------------------------------------------- Phi_S

    def _adapted_w_basis(self, w: int):
        """Basis of W_w starting with 1 - X^w, completed from the RREF rows."""
        e = [Fraction(0)] * (w + 1)
        e[0], e[w] = Fraction(1), Fraction(-1)
        rows = [e]
        for row in self.w_space(w).rows:
            if rank(rows + [list(row)]) > len(rows):
                rows.append(list(row))
        if len(rows) != self.dim_w(w):
            raise SpaceError("adapted basis construction failed")
        return rows

    def phi_s(self, w1: int, w2: int, parity=None) -> dict:
        """Matrix/rank of P -> [(1,1)+(S,S)].P into W/E x W/E, plus the gap."""
        from .groupalgebra import ga2
        from .psl2 import ID as GID, S as GS
        domain = self.annihilator(w1, w2, "I2", parity)
        f_rows = self._adapted_w_basis(w1)
        g_rows = self._adapted_w_basis(w2)
        n1, n2 = len(f_rows), len(g_rows)
        tensor = []
        for fr in f_rows:
            for gr in g_rows:
                tensor.append([x * y for x in fr for y in gr])
        solver = SpanSolver(tensor)
        kmat = ga_action_matrix(ga2((GID, GID), (GS, GS)), w1, w2)
        matrix = []
        for v in domain.rows:
            image = [sum(m_ij * x for m_ij, x in zip(mrow, v) if m_ij)
                     for mrow in kmat]
            coords = solver.coordinates(image)
            if coords is None:
                raise SpaceError("Phi_S image left W_{w1} x W_{w2}")
            matrix.append([coords[i * n2 + j]
                           for i in range(1, n1) for j in range(1, n2)])
        phi_rank = rank(matrix) if matrix else 0
        gap = domain.dim - self.e_space(w1, w2, parity).dim
        if phi_rank != gap:
            raise SpaceError(
                f"rank of Phi_S ({phi_rank}) differs from dim W - dim E ({gap})")
        return {"matrix": matrix, "rank": phi_rank, "gap": gap,
                "target_dim": (n1 - 1) * (n2 - 1)}

    # -------------------------------------------------------------- table

    def table_row(self, w1: int, w2: int) -> TableRow:
        if w1 < 2 or w2 < 2 or w1 % 2 or w2 % 2:
            raise SpaceError("table weights must be even and >= 2")
        dim_w_pair, dim_w_imp = self.parity_dims(w1, w2, "I2")
        dim_e_pair, dim_e_imp = self.e_parity_dims(w1, w2)
        row = TableRow(w1, w2, dim_w_pair, dim_e_pair, dim_w_pair - dim_e_pair,
                       dim_w_imp, dim_e_imp, dim_w_imp - dim_e_imp)
        if row.gap_pair < 0 or row.gap_imp < 0:
            raise SpaceError(f"negative gap in row {row}")
        return row


_DEFAULT = None


def default_computer() -> SpaceComputer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = SpaceComputer()
    return _DEFAULT
