"""Chevalley-Eilenberg (co)homology of the nilradical n of a Borel subalgebra.

Structure constants come from explicit matrix realizations (sl_n, so(5), and
G2 as the triality-fixed part of so(8)).  Root vectors of non-simple roots are
defined recursively: for beta = alpha_i + gamma with i the smallest such index,
``e_beta = [e_i, e_gamma] / (p + 1)`` where p is the length of the
alpha_i-string below gamma.  With this choice every structure constant is
``+-(p + 1)``.

Cochains in degree k are wedges ``c^S`` over subsets S of the positive roots
in the global root order; ``c^S`` has weight ``-sum(S)``.  The differential on
generators is ``d c^a = - sum_{b < g} f^a_{bg} c^b c^g``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import Matrix
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import DomainError
from .rootdata import RootDatum, as_exact, vadd, vsub
from .weyl import WeylElement, dot_finite, weyl_group

SparseMatrix = dict  # (row, col) -> Fraction


# ---------------------------------------------------------------------------
# matrix realizations


def _unit(i: int, j: int) -> SparseMatrix:
    return {(i, j): Fraction(1)}


def _lin(*pairs) -> SparseMatrix:
    out: dict = {}
    for c, m in pairs:
        for k, v in m.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    out: dict = {}
    for (i, k), x in a.items():
        for (k2, j), y in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + x * y
    for (i, k), x in b.items():
        for (k2, j), y in a.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) - x * y
    return {k: v for k, v in out.items() if v}


def _orthogonal_root_vector(n: int, i: int, j: int) -> SparseMatrix:
    """E_ij - E_{n-1-j, n-1-i}, preserving the antidiagonal form."""
    return _lin((1, _unit(i, j)), (-1, _unit(n - 1 - j, n - 1 - i)))


def simple_root_matrices(type_label: str) -> list[SparseMatrix]:
    """Matrices of the simple root vectors e_1, ..., e_r in a faithful representation."""
    base = type_label.rstrip("^")
    if base in ("A1", "A2", "A3"):
        r = int(base[1])
        return [_unit(i, i + 1) for i in range(r)]
    if base == "B2":
        return [_orthogonal_root_vector(5, 0, 1), _orthogonal_root_vector(5, 1, 2)]
    if base == "G2":
        d = [
            _orthogonal_root_vector(8, 0, 1),
            _orthogonal_root_vector(8, 1, 2),
            _orthogonal_root_vector(8, 2, 3),
            _orthogonal_root_vector(8, 2, 4),
        ]
        return [_lin((1, d[0]), (1, d[2]), (1, d[3])), d[1]]
    raise DomainError(f"no matrix realization for {type_label}")


class NilpotentRadical:
    """Structure constants of n in the positive-root basis (global root order)."""

    def __init__(self, datum: RootDatum, simple_matrices: list[SparseMatrix] | None = None):
        self.datum = datum
        if simple_matrices is None:
            simple_matrices = simple_root_matrices(datum.type_label)
        roots = datum.positive_roots_rc
        self.roots_rc = roots
        self.dim = len(roots)
        index = {r: k for k, r in enumerate(roots)}
        self.index = index
        rank = datum.rank
        vectors: list[SparseMatrix | None] = [None] * self.dim
        for k, beta in enumerate(roots):
            if sum(beta) == 1:
                vectors[k] = simple_matrices[beta.index(1)]
                continue
            for i in range(rank):
                gamma = tuple(b - (t == i) for t, b in enumerate(beta))
                if gamma in index:
                    p = 0
                    down = list(gamma)
                    while True:
                        down[i] -= 1
                        if tuple(down) in index:
                            p += 1
                        else:
                            break
                    br = _commutator(simple_matrices[i], vectors[index[gamma]])
                    vectors[k] = {key: v / (p + 1) for key, v in br.items()}
                    break
            if not vectors[k]:
                raise AssertionError(f"root vector for {beta} vanished")
        self.vectors = vectors
        # bracket[(j, k)] = (l, c) with [e_j, e_k] = c e_l
        self.bracket: dict[tuple[int, int], tuple[int, int]] = {}
        for j, k in itertools.combinations(range(self.dim), 2):
            br = _commutator(vectors[j], vectors[k])
            target = tuple(a + b for a, b in zip(roots[j], roots[k]))
            if target not in index:
                if br:
                    raise AssertionError("bracket outside the root system is nonzero")
                continue
            l = index[target]
            ev = vectors[l]
            pivot = next(iter(ev))
            c = br.get(pivot, Fraction(0)) / ev[pivot]
            if _lin((1, br), (-c, ev)):
                raise AssertionError("bracket is not proportional to the root vector")
            if c == 0 or c.denominator != 1:
                raise AssertionError(f"non-integral structure constant {c}")
            self.bracket[(j, k)] = (l, int(c))
            self.bracket[(k, j)] = (l, -int(c))
        self._check_jacobi()

    def _check_jacobi(self) -> None:
        for a, b, c in itertools.combinations(range(self.dim), 3):
            total: dict[int, int] = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket.get((y, z))
                if inner is None:
                    continue
                outer = self.bracket.get((x, inner[0]))
                if outer is None:
                    continue
                total[outer[0]] = total.get(outer[0], 0) + inner[1] * outer[1]
            if any(total.values()):
                raise AssertionError("Jacobi identity fails")

    def root_weight(self, k: int) -> tuple:
        return self.datum.positive_roots[k]

    def structure_constant(self, alpha: int, beta: int, gamma: int) -> int:
        """f^alpha_{beta gamma}."""
        hit = self.bracket.get((beta, gamma))
        return hit[1] if hit and hit[0] == alpha else 0


@lru_cache(maxsize=None)
def nilpotent_radical(datum: RootDatum) -> NilpotentRadical:
    return NilpotentRadical(datum)


# ---------------------------------------------------------------------------
# exterior algebra helpers


def wedge_sort(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted tuple of c^{s_1} ... c^{s_k}; sign 0 on repeats."""
    if len(set(seq)) != len(seq):
        return 0, ()
    arr = list(seq)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


def _d_generator(nil: NilpotentRadical, a: int) -> dict[tuple[int, int], int]:
    out = {}
    for (b, g), (l, c) in nil.bracket.items():
        if l == a and b < g:
            out[(b, g)] = -c
    return out


@lru_cache(maxsize=None)
def _d_generators(nil: NilpotentRadical) -> tuple:
    return tuple(_d_generator(nil, a) for a in range(nil.dim))


def d_trivial(nil: NilpotentRadical, S: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Differential of c^S with trivial coefficients."""
    gens = _d_generators(nil)
    out: dict[tuple, int] = {}
    for p, a in enumerate(S):
        for (b, g), c in gens[a].items():
            seq = S[:p] + (b, g) + S[p + 1:]
            sgn, T = wedge_sort(seq)
            if sgn:
                out[T] = out.get(T, 0) + (-1) ** p * sgn * c
    return {k: v for k, v in out.items() if v}


def _rank(rows: list[list[int]], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return DomainMatrix([[ZZ(x) for x in r] for r in rows], (len(rows), ncols), ZZ).rank()


def _matrix(columns: list[dict], row_index: dict) -> list[list[int]]:
    rows = [[0] * len(columns) for _ in row_index]
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows[row_index[key]][j] += v
    return rows


# ---------------------------------------------------------------------------
# complexes and tables


@dataclass
class WeightComplex:
    """The finite complex in one h*-weight: bases per degree and differential columns."""

    weight: tuple
    bases: dict[int, list]
    differentials: dict[int, list[dict]]  # degree k -> image of each basis element of C^k

    def matrix(self, k: int) -> list[list[int]]:
        target = {b: i for i, b in enumerate(self.bases.get(k + 1, []))}
        cols = self.differentials.get(k, [])
        for col in cols:
            for key in col:
                if key not in target:
                    raise AssertionError(f"differential leaves the weight space at {key}")
        return _matrix(cols, target)

    def rank(self, k: int) -> int:
        return _rank(self.matrix(k), len(self.bases.get(k, [])))

    def check_d_squared(self) -> None:
        for k in self.bases:
            if k + 1 not in self.bases or k + 2 not in self.bases:
                continue
            A = Matrix(self.matrix(k))
            B = Matrix(self.matrix(k + 1))
            if A.shape[0] and A.shape[1] and B.shape[0] and not (B * A).is_zero_matrix:
                raise AssertionError(f"d^2 != 0 in weight {self.weight}, degree {k}")

    def cohomology(self) -> dict[int, int]:
        out = {}
        ranks = {k: self.rank(k) for k in self.bases}
        for k, basis in self.bases.items():
            h = len(basis) - ranks[k] - ranks.get(k - 1, 0)
            if h < 0:
                raise AssertionError("negative cohomology dimension")
            if h:
                out[k] = h
        return out


@dataclass
class CEComplex:
    datum: RootDatum
    weights: dict[tuple, WeightComplex]
    degree_range: tuple[int, int]
    weight_truncation: int | None = None
    label: str = ""
    module: "SemiInducedModule | None" = field(default=None, repr=False)

    def verify_d_squared(self) -> None:
        for wc in self.weights.values():
            wc.check_d_squared()


@dataclass
class CohomologyTable:
    type_label: str
    entries: dict[tuple[int, tuple], int]  # (degree, weight) -> dim
    chain_dims: dict[tuple[int, tuple], int] = field(default_factory=dict)
    cocycles: dict[str, tuple] = field(default_factory=dict)
    status: str = "pass"
    predicted: list[tuple[int, tuple]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    trusted_depth: int | None = None

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (k, _), v in self.entries.items():
            out[k] = out.get(k, 0) + v
        return dict(sorted(out.items()))

    def classes(self) -> list[tuple[int, tuple]]:
        out = []
        for (k, w), v in sorted(self.entries.items()):
            out.extend([(k, w)] * v)
        return out

    def total_dim(self) -> int:
        return sum(self.entries.values())

    def euler_consistent(self) -> bool:
        weights = {w for (_, w) in self.chain_dims} | {w for (_, w) in self.entries}
        for w in weights:
            h = sum((-1) ** (k % 2) * v for (k, ww), v in self.entries.items() if ww == w)
            c = sum((-1) ** (k % 2) * v for (k, ww), v in self.chain_dims.items() if ww == w)
            if h != c:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "status": self.status,
            "trusted_depth": self.trusted_depth,
            "classes": [
                {"degree": k, "weight_coords": list(w), "dim": v} for (k, w), v in sorted(self.entries.items())
            ],
            "predicted": [{"degree": k, "weight_coords": list(w)} for k, w in self.predicted],
            "cocycles": {k: list(v) for k, v in sorted(self.cocycles.items())},
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# trivial coefficients


def _subset_weight(nil: NilpotentRadical, S: Iterable[int]) -> tuple:
    out = (0,) * nil.datum.rank
    for k in S:
        out = vadd(out, nil.root_weight(k))
    return out


@lru_cache(maxsize=None)
def ce_complex_trivial(datum: RootDatum) -> CEComplex:
    nil = nilpotent_radical(datum)
    by_weight: dict[tuple, dict[int, list]] = {}
    for k in range(nil.dim + 1):
        for S in itertools.combinations(range(nil.dim), k):
            w = tuple(-x for x in _subset_weight(nil, S))
            by_weight.setdefault(w, {}).setdefault(k, []).append(S)
    weights = {}
    for w, bases in by_weight.items():
        diffs = {k: [d_trivial(nil, S) for S in basis] for k, basis in bases.items()}
        wc = WeightComplex(w, bases, diffs)
        wc.check_d_squared()
        weights[w] = wc
    return CEComplex(datum, weights, (0, nil.dim), None, "trivial")


def inversion_subset(datum: RootDatum, w: WeylElement) -> tuple[int, ...]:
    """Indices of {alpha > 0 : w^{-1} alpha < 0}; the wedge over them is omega_w."""
    return weyl_group(datum).inversion_set(w)


def _solve_class_coefficient(wc: WeightComplex, k: int, vector: dict, cls: dict) -> Fraction | None:
    """c with vector = c * cls modulo the image of d, or None if no such c."""
    basis = wc.bases.get(k, [])
    idx = {b: i for i, b in enumerate(basis)}
    image_cols = wc.differentials.get(k - 1, []) if k > 0 else []
    cols = [[col.get(b, 0) for b in basis] for col in image_cols] + [[cls.get(b, 0) for b in basis]]
    A = Matrix(cols).T if cols else Matrix.zeros(len(basis), 0)
    rhs = Matrix([vector.get(b, 0) for b in basis])
    for key in vector:
        if key not in idx:
            raise AssertionError("vector outside the weight space")
    try:
        sol, params = A.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    c = sol[len(cols) - 1]
    return Fraction(int(c.p), int(c.q))


def cohomology_trivial(datum: RootDatum) -> CohomologyTable:
    """H^*(n, C) weight by weight, checked against Kostant's description."""
    cx = ce_complex_trivial(datum)
    entries, chain = {}, {}
    for w, wc in cx.weights.items():
        for k, basis in wc.bases.items():
            chain[(k, w)] = len(basis)
        for k, h in wc.cohomology().items():
            entries[(k, w)] = h
    W = weyl_group(datum)
    zero = (0,) * datum.rank
    predicted = sorted((u.length, dot_finite(datum, u, zero)) for u in W)
    cocycles = {}
    notes = []
    status = "pass"
    for u in W:
        S = inversion_subset(datum, u)
        wt = dot_finite(datum, u, zero)
        wc = cx.weights[wt]
        if d_trivial(nilpotent_radical(datum), S):
            status = "fail"
            notes.append(f"omega_{u.label} is not closed")
        elif _solve_class_coefficient(wc, u.length, {}, {S: 1}) != 0:
            status = "fail"
            notes.append(f"omega_{u.label} is exact")
        cocycles[u.label] = S
    table = CohomologyTable(datum.type_label, entries, chain, cocycles, status, predicted, notes)
    if sorted(table.classes()) != predicted:
        table.status = "fail"
        table.notes.append("classes differ from {(l(w), w.0)}")
    if not table.euler_consistent():
        table.status = "fail"
        table.notes.append("Euler characteristic mismatch")
    return table


@dataclass(frozen=True)
class CupResult:
    sign: int
    element: WeylElement | None

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_json(self) -> dict:
        return {"sign": self.sign, "class": self.element.label if self.element else None}


def cup_product(datum: RootDatum, w1: WeylElement, w2: WeylElement) -> CupResult:
    """omega_{w1} . omega_{w2} reduced in cohomology: +-omega_{w''} or zero."""
    nil = nilpotent_radical(datum)
    S1, S2 = inversion_subset(datum, w1), inversion_subset(datum, w2)
    sgn, S = wedge_sort(S1 + S2)
    if sgn == 0:
        return CupResult(0, None)
    k = len(S)
    weight = tuple(-x for x in _subset_weight(nil, S))
    zero = (0,) * datum.rank
    target = None
    for u in weyl_group(datum):
        if u.length == k and dot_finite(datum, u, zero) == weight:
            target = u
            break
    wc = ce_complex_trivial(datum).weights[weight]
    if target is None:
        if _solve_class_coefficient(wc, k, {S: sgn}, {}) is None:
            raise AssertionError("product of cocycles is not a cocycle class")
        return CupResult(0, None)
    c = _solve_class_coefficient(wc, k, {S: sgn}, {inversion_subset(datum, target): 1})
    if c is None or c not in (-1, 0, 1):
        raise AssertionError(f"unexpected cup coefficient {c}")
    return CupResult(int(c), target if c else None)


@lru_cache(maxsize=None)
def cup_table(datum: RootDatum) -> dict[tuple[str, str], CupResult]:
    W = weyl_group(datum)
    return {(u.label, v.label): cup_product(datum, u, v) for u in W for v in W}


# ---------------------------------------------------------------------------
# PBW straightening in U(n)


class PBWAlgebra:
    """U(n) with the PBW basis for a chosen ordering of the root vectors.

    Monomials are exponent tuples indexed by position in ``order``.
    """

    def __init__(self, nil: NilpotentRadical, order: Sequence[int]):
        self.nil = nil
        self.order = tuple(order)
        self.position = {r: p for p, r in enumerate(self.order)}
        self._left: dict = {}
        self._mul: dict = {}

    def bracket_pos(self, i: int, j: int):
        hit = self.nil.bracket.get((self.order[i], self.order[j]))
        if hit is None:
            return None
        return self.position[hit[0]], hit[1]

    def left_mul(self, j: int, mono: tuple) -> dict[tuple, int]:
        """x_j * x^mono expanded in the PBW basis."""
        key = (j, mono)
        hit = self._left.get(key)
        if hit is not None:
            return hit
        k = next((p for p, e in enumerate(mono) if e), None)
        if k is None or j <= k:
            new = list(mono)
            new[j] += 1
            out = {tuple(new): 1}
        else:
            rest = list(mono)
            rest[k] -= 1
            rest = tuple(rest)
            out: dict[tuple, int] = {}
            for m1, c1 in self.left_mul(j, rest).items():
                for m2, c2 in self.left_mul(k, m1).items():
                    out[m2] = out.get(m2, 0) + c1 * c2
            br = self.bracket_pos(j, k)
            if br is not None:
                l, c = br
                for m1, c1 in self.left_mul(l, rest).items():
                    out[m1] = out.get(m1, 0) + c * c1
            out = {m: c for m, c in out.items() if c}
        self._left[key] = out
        return out

    def multiply(self, m1: tuple, m2: tuple) -> dict[tuple, int]:
        key = (m1, m2)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        acc = {m2: 1}
        for p in reversed(range(len(m1))):
            for _ in range(m1[p]):
                nxt: dict[tuple, int] = {}
                for m, c in acc.items():
                    for m3, c3 in self.left_mul(p, m).items():
                        nxt[m3] = nxt.get(m3, 0) + c * c3
                acc = {m: c for m, c in nxt.items() if c}
        self._mul[key] = acc
        return acc


# ---------------------------------------------------------------------------
# semi-induced modules Ind_a^n Coind_0^a C_tau with a = n cap w n w^{-1}


def _exponent_vectors(weights: Sequence[int], bound: int) -> list[tuple]:
    """All exponent tuples e with sum e_i * weights_i <= bound (weights positive)."""
    out = []

    def rec(i, left, cur):
        if i == len(weights):
            out.append(tuple(cur))
            return
        e = 0
        while e * weights[i] <= left:
            cur.append(e)
            rec(i + 1, left - e * weights[i], cur)
            cur.pop()
            e += 1

    rec(0, bound, [])
    return out


class SemiInducedModule:
    """Weight-truncated model of Ind_a^n Coind_0^a C_tau, a = n cap w n w^{-1}.

    Basis vectors are pairs (P, Q): P an exponent vector over the roots of
    m = span{alpha > 0 : w^{-1} alpha < 0} (a PBW monomial of U(m)) and Q an
    exponent vector over the roots of a (the dual basis vector of U(a)).  The
    weight of (P, Q) is tau + P.m - Q.a.  Its depth is ht(w^{-1}(tau - weight)),
    which is nonnegative; vectors of depth <= ``depth`` are kept.
    """

    def __init__(self, datum: RootDatum, w: WeylElement, tau: Sequence, depth: int):
        if depth < 1:
            raise DomainError("truncation depth must be at least 1")
        self.datum = datum
        self.w = w
        self.tau = datum.check_weight(tau)
        self.depth = depth
        nil = nilpotent_radical(datum)
        self.nil = nil
        inv = set(inversion_subset(datum, w))
        self.m_roots = tuple(k for k in range(nil.dim) if k in inv)
        self.a_roots = tuple(k for k in range(nil.dim) if k not in inv)
        self.pbw = PBWAlgebra(nil, self.m_roots + self.a_roots)
        self.winv = weyl_group(datum).inverse(w)
        self.nm = len(self.m_roots)
        heights = [self._root_depth(k) for k in self.m_roots + self.a_roots]
        self.basis: list[tuple[tuple, tuple]] = []
        for e in _exponent_vectors(heights, depth):
            self.basis.append((e[: self.nm], e[self.nm:]))
        self.basis.sort(key=lambda v: (self.vector_depth(v), v))
        self.by_weight: dict[tuple, list] = {}
        for v in self.basis:
            self.by_weight.setdefault(self.weight(v), []).append(v)
        self._dual_cache: dict = {}
        self._act_cache: dict = {}

    # root depth = change of depth when the root's weight is subtracted
    def _root_depth(self, k: int) -> int:
        img = self.datum.root_height(self.winv.act(self.nil.root_weight(k)))
        return -img if k in self.m_roots else img

    def weight(self, v) -> tuple:
        P, Q = v
        out = self.tau
        for e, k in zip(P, self.m_roots):
            if e:
                out = vadd(out, tuple(e * x for x in self.nil.root_weight(k)))
        for e, k in zip(Q, self.a_roots):
            if e:
                out = vsub(out, tuple(e * x for x in self.nil.root_weight(k)))
        return out

    def weight_depth(self, mu: Sequence) -> int:
        return as_exact(self.datum.root_height(self.winv.act(vsub(self.tau, mu))))

    def vector_depth(self, v) -> int:
        return self.weight_depth(self.weight(v))

    def _a_partitions(self, gamma_weight: tuple) -> list[tuple]:
        """Exponent vectors Q over a-roots with Q.a = gamma_weight."""
        hit = self._dual_cache.get(gamma_weight)
        if hit is not None:
            return hit
        target = self.datum.to_root_coords(gamma_weight)
        roots = [self.datum.positive_roots_rc[k] for k in self.a_roots]
        out = []

        def rec(i, rem, cur):
            if i == len(roots):
                if not any(rem):
                    out.append(tuple(cur))
                return
            e = 0
            r = rem
            while all(x >= 0 for x in r):
                cur.append(e)
                rec(i + 1, r, cur)
                cur.pop()
                e += 1
                r = tuple(a - b for a, b in zip(r, roots[i]))

        if all(isinstance(x, int) and x >= 0 for x in target):
            rec(0, tuple(target), [])
        self._dual_cache[gamma_weight] = out
        return out

    def _a_weight(self, Q: tuple) -> tuple:
        out = (0,) * self.datum.rank
        for e, k in zip(Q, self.a_roots):
            if e:
                out = vadd(out, tuple(e * x for x in self.nil.root_weight(k)))
        return out

    def _act_dual(self, R: tuple, Q: tuple) -> dict[tuple, int]:
        """a^R . Q^vee = sum_{Q'} <Q^vee, a^{Q'} a^R> Q'^vee."""
        if not any(R):
            return {Q: 1}
        gamma = vsub(self._a_weight(Q), self._a_weight(R))
        out = {}
        pad = (0,) * self.nm
        for Qp in self._a_partitions(gamma):
            prod = self.pbw.multiply(pad + Qp, pad + R)
            c = prod.get(pad + Q, 0)
            if c:
                out[Qp] = c
        return out

    def act(self, root: int, v) -> dict:
        """e_root . v as {basis vector: coeff}; exact (targets may exceed the stored depth)."""
        key = (root, v)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        P, Q = v
        mono = P + (0,) * len(self.a_roots)
        out: dict = {}
        for m, c in self.pbw.left_mul(self.pbw.position[root], mono).items():
            Pp, R = m[: self.nm], m[self.nm:]
            for Qp, c2 in self._act_dual(R, Q).items():
                t = (Pp, Qp)
                out[t] = out.get(t, 0) + c * c2
        out = {k: c for k, c in out.items() if c}
        self._act_cache[key] = out
        return out

    def check_bracket_relations(self) -> bool:
        """[x, y] v = x(y v) - y(x v) for all basis v of depth <= depth - ht(theta)."""
        bound = self.depth - self.datum.root_height(self.datum.theta)
        for v in self.basis:
            if self.vector_depth(v) > bound:
                continue
            for (j, k), (l, c) in self.nil.bracket.items():
                if j > k:
                    continue
                lhs: dict = {}
                for u, a in self.act(k, v).items():
                    for t, b in self.act(j, u).items():
                        lhs[t] = lhs.get(t, 0) + a * b
                for u, a in self.act(j, v).items():
                    for t, b in self.act(k, u).items():
                        lhs[t] = lhs.get(t, 0) - a * b
                for t, b in self.act(l, v).items():
                    lhs[t] = lhs.get(t, 0) - c * b
                if any(lhs.values()):
                    return False
        return True

    def trusted_depth(self) -> int:
        """CE weights of depth <= this bound only involve stored basis vectors."""
        return self.depth - self.nil.dim * self.datum.root_height(self.datum.theta)


def build_semi_induced(datum: RootDatum, w: WeylElement, tau: Sequence, depth: int) -> SemiInducedModule:
    return SemiInducedModule(datum, w, tau, depth)


def _subsets(n: int):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def ce_complex_with_coefficients(module: SemiInducedModule) -> CEComplex:
    """Cochains v (x) c^S of weight wt(v) - sum(S), kept on the trusted window."""
    nil = module.nil
    bound = module.trusted_depth()
    subsets = list(_subsets(nil.dim))
    sweights = {S: _subset_weight(nil, S) for S in subsets}
    candidates = set()
    for mu in module.by_weight:
        for S in subsets:
            nu = vsub(mu, sweights[S])
            if module.weight_depth(nu) <= bound:
                candidates.add(nu)
    weights = {}
    for nu in sorted(candidates):
        bases: dict[int, list] = {}
        for S in subsets:
            for v in module.by_weight.get(vadd(nu, sweights[S]), []):
                bases.setdefault(len(S), []).append((v, S))
        diffs = {}
        for k, basis in bases.items():
            cols = []
            for v, S in basis:
                col: dict = {}
                for a in range(nil.dim):
                    sgn, T = wedge_sort((a,) + S)
                    if not sgn:
                        continue
                    for u, c in module.act(a, v).items():
                        col[(u, T)] = col.get((u, T), 0) + sgn * c
                for T, c in d_trivial(nil, S).items():
                    col[(v, T)] = col.get((v, T), 0) + c
                cols.append({k2: c for k2, c in col.items() if c})
            diffs[k] = cols
        weights[nu] = WeightComplex(nu, bases, diffs)
    cx = CEComplex(module.datum, weights, (0, nil.dim), bound, f"cochains w={module.w.label}", module)
    cx.verify_d_squared()
    return cx


def ce_chains_with_coefficients(module: SemiInducedModule) -> CEComplex:
    """Chains v (x) x_S of weight wt(v) + sum(S) in degree -|S|."""
    nil = module.nil
    bound = module.trusted_depth()
    subsets = list(_subsets(nil.dim))
    sweights = {S: _subset_weight(nil, S) for S in subsets}
    candidates = set()
    for mu in module.by_weight:
        for S in subsets:
            nu = vadd(mu, sweights[S])
            if module.weight_depth(nu) <= bound:
                candidates.add(nu)
    weights = {}
    for nu in sorted(candidates):
        bases: dict[int, list] = {}
        for S in subsets:
            for v in module.by_weight.get(vsub(nu, sweights[S]), []):
                bases.setdefault(-len(S), []).append((v, S))
        diffs = {}
        for deg, basis in bases.items():
            cols = []
            for v, S in basis:
                col: dict = {}
                for i, a in enumerate(S):
                    rest = S[:i] + S[i + 1:]
                    for u, c in module.act(a, v).items():
                        col[(u, rest)] = col.get((u, rest), 0) + (-1) ** (i + 1) * c
                for i, j in itertools.combinations(range(len(S)), 2):
                    hit = nil.bracket.get((S[i], S[j]))
                    if hit is None:
                        continue
                    l, c = hit
                    rest = tuple(x for t, x in enumerate(S) if t not in (i, j))
                    sgn, T = wedge_sort((l,) + rest)
                    if sgn:
                        col[(v, T)] = col.get((v, T), 0) + (-1) ** (i + j) * sgn * c
                cols.append({k2: c for k2, c in col.items() if c})
            diffs[deg] = cols
        weights[nu] = WeightComplex(nu, bases, diffs)
    cx = CEComplex(module.datum, weights, (-nil.dim, 0), bound, f"chains w={module.w.label}", module)
    cx.verify_d_squared()
    return cx


def _table_from_complex(cx: CEComplex, predicted: list, module: SemiInducedModule) -> CohomologyTable:
    entries, chain = {}, {}
    for nu, wc in cx.weights.items():
        for k, basis in wc.bases.items():
            chain[(k, nu)] = len(basis)
        for k, h in wc.cohomology().items():
            entries[(k, nu)] = h
    table = CohomologyTable(cx.datum.type_label, entries, chain, {}, "pass", predicted, [], cx.weight_truncation)
    for k, nu in predicted:
        if module.weight_depth(nu) > cx.weight_truncation:
            table.status = "inconclusive"
            table.notes.append(f"predicted class at depth {module.weight_depth(nu)} lies outside the trusted window")
            return table
    if sorted(table.classes()) != sorted(predicted):
        table.status = "fail"
        table.notes.append("computed classes differ from the prediction")
    if not table.euler_consistent():
        table.status = "fail"
        table.notes.append("Euler characteristic mismatch")
    return table


def delta_cohomology_prediction(datum: RootDatum, w: WeylElement, chi: Sequence) -> tuple[int, tuple]:
    """One class of weight w.(-chi) in degree l(w)."""
    neg = tuple(-x for x in datum.check_weight(chi))
    return w.length, dot_finite(datum, w, neg)


def delta_homology_prediction(datum: RootDatum, w: WeylElement, chi: Sequence) -> tuple[int, tuple]:
    """One class of weight -w.(chi - 2 rho) in degree -(N - l(w))."""
    chi = datum.check_weight(chi)
    two_rho = tuple(2 * x for x in datum.rho)
    wt = tuple(-x for x in dot_finite(datum, w, vsub(chi, two_rho)))
    return -(len(datum.positive_roots) - w.length), wt


def shapiro_convert(datum: RootDatum, cohomology_class: tuple[int, tuple]) -> tuple[int, tuple]:
    """Degree/weight of the matching homology class: degree - N, weight + 2 rho."""
    k, wt = cohomology_class
    return k - len(datum.positive_roots), vadd(wt, tuple(2 * x for x in datum.rho))


def cohomology_with_coefficients(
    complex_or_module, chi: Sequence | None = None
) -> CohomologyTable:
    """Per-weight cohomology of the coefficient complex on its trusted window.

    Accepts a :class:`SemiInducedModule` (the complex is built here) or a
    complex built from one.  ``chi`` is recovered from tau = w(-chi) when omitted.
    """
    module, cx = _module_and_complex(complex_or_module, ce_complex_with_coefficients)
    chi = _recover_chi(module) if chi is None else chi
    predicted = [delta_cohomology_prediction(module.datum, module.w, chi)]
    return _table_from_complex(cx, predicted, module)


def homology_with_coefficients(complex_or_module, chi: Sequence | None = None) -> CohomologyTable:
    module, cx = _module_and_complex(complex_or_module, ce_chains_with_coefficients)
    chi = _recover_chi(module) if chi is None else chi
    predicted = [delta_homology_prediction(module.datum, module.w, chi)]
    return _table_from_complex(cx, predicted, module)


def _module_and_complex(obj, builder):
    if isinstance(obj, SemiInducedModule):
        return obj, builder(obj)
    module = obj.module
    if module is None:
        raise DomainError("complex has no attached coefficient module")
    return module, obj


def _recover_chi(module: SemiInducedModule) -> tuple:
    winv = weyl_group(module.datum).inverse(module.w)
    return tuple(-x for x in winv.act(module.tau))


def delta_module(datum: RootDatum, w: WeylElement, chi: Sequence, depth: int) -> SemiInducedModule:
    """The model for the delta section at wB: tau = w(-chi)."""
    neg = tuple(-x for x in datum.check_weight(chi))
    return build_semi_induced(datum, w, w.act(neg), depth)
