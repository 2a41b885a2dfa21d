"""Twisted commutative algebras: lattice algebras, H^*(n), twisted tensor products.

A basis element is a pair ``(grade, label)`` where ``grade`` is a lattice
point.  Products of basis elements are returned as ``{element: coefficient}``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConstructionError, DomainError
from .nilcoh import cup_product
from .rootdata import RootDatum, as_exact, vadd
from .weyl import WeylElement, dot_finite, weyl_group

Element = tuple  # (grade tuple, label)


def _is_int(x) -> bool:
    return isinstance(as_exact(x), int)


class TwistedAlgebra:
    """Lattice-graded algebra with pairing, parity and a twisted commutativity law.

    ``multiply_basis(x, y)`` gives the product of two basis elements;
    ``elements(radius)`` lists the basis elements in a finite lattice window.
    """

    def __init__(
        self,
        name: str,
        lattice_rank: int,
        pairing: Callable[[tuple, tuple], object],
        parity: Callable[[tuple], int],
        multiply_basis: Callable[[Element, Element], dict],
        elements: Callable[[int], list],
        unit: Element,
        metadata: dict | None = None,
    ):
        self.name = name
        self.lattice_rank = lattice_rank
        self._pairing = pairing
        self._parity = parity
        self._mul = multiply_basis
        self._elements = elements
        self.unit = unit
        self.metadata = dict(metadata or {})
        self._cache: dict = {}

    def pairing(self, lam: tuple, chi: tuple):
        return as_exact(self._pairing(tuple(lam), tuple(chi)))

    def parity(self, lam: tuple) -> int:
        return self._parity(tuple(lam)) % 2

    def multiply(self, x: Element, y: Element) -> dict:
        key = (x, y)
        hit = self._cache.get(key)
        if hit is None:
            hit = {k: v for k, v in self._mul(x, y).items() if v}
            if len(self._cache) < 200_000:
                self._cache[key] = hit
        return hit

    def multiply_vectors(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                for z, c in self.multiply(x, y).items():
                    out[z] = out.get(z, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def elements(self, radius: int) -> list:
        return self._elements(radius)

    def twist_sign(self, lam: tuple, chi: tuple) -> int:
        e = self.parity(lam) * self.parity(chi) + self.pairing(lam, chi)
        if not _is_int(e):
            raise DomainError("twist exponent is not an integer")
        return -1 if as_exact(e) % 2 else 1

    def table(self, radius: int) -> list[dict]:
        rows = []
        els = self.elements(radius)
        for x in els:
            for y in els:
                for z, c in sorted(self.multiply(x, y).items(), key=lambda t: repr(t[0])):
                    rows.append({"left": _el_json(x), "right": _el_json(y), "result": _el_json(z), "coeff": _num(c)})
        return rows

    def dumps_table(self, radius: int) -> str:
        return json.dumps({"algebra": self.name, "radius": radius, "metadata": self.metadata,
                           "products": self.table(radius)}, sort_keys=True)

    def __repr__(self) -> str:
        return f"TwistedAlgebra({self.name})"


def _num(c):
    c = as_exact(c)
    return c if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def _el_json(x: Element):
    grade, label = x
    return {"grade": [_num(g) for g in _flatten(grade)], "label": _label_str(label)}


def _flatten(grade):
    for g in grade:
        if isinstance(g, tuple):
            yield from _flatten(g)
        else:
            yield g


def _label_str(label) -> str:
    if isinstance(label, tuple):
        return "(x)".join(_label_str(p) for p in label)
    return str(label)


# ---------------------------------------------------------------------------
# invariant checks


@dataclass
class InvariantReport:
    algebra: str
    radius: int
    elements: int
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "radius": self.radius, "elements": self.elements,
                "checks": self.checks, "passed": self.passed, "violations": self.violations[:10]}


def _monomial(prod: dict):
    """(sign, element) for +-1 times one basis element, (0, None) for zero, or None otherwise."""
    if not prod:
        return 0, None
    if len(prod) == 1:
        (z, c), = prod.items()
        if c in (1, -1):
            return c, z
    return None


def check_invariants(alg: TwistedAlgebra, radius: int, associativity: bool = True) -> InvariantReport:
    """Integrality, twisted commutativity, parity compatibility, unit and associativity."""
    els = alg.elements(radius)
    rep = InvariantReport(alg.name, radius, len(els))
    viol = rep.violations
    counts = {"integrality": 0, "commutativity": 0, "parity": 0, "unit": 0, "associativity": 0}
    for x in els:
        if alg.multiply(alg.unit, x) != {x: 1} or alg.multiply(x, alg.unit) != {x: 1}:
            viol.append(("unit", _el_json(x)))
        counts["unit"] += 1
    for x, y in itertools.product(els, repeat=2):
        lam, chi = x[0], y[0]
        xy = alg.multiply(x, y)
        pr = alg.pairing(lam, chi)
        if xy:
            counts["integrality"] += 1
            if not _is_int(pr):
                viol.append(("integrality", _el_json(x), _el_json(y), str(pr)))
                continue
        yx = alg.multiply(y, x)
        if xy or yx:
            counts["commutativity"] += 1
            if not _is_int(pr):
                viol.append(("integrality", _el_json(y), _el_json(x), str(pr)))
                continue
            s = alg.twist_sign(lam, chi)
            if yx != {k: s * v for k, v in xy.items()}:
                viol.append(("commutativity", _el_json(x), _el_json(y)))
        if x == y and xy:
            counts["parity"] += 1
            if not _is_int(pr) or (alg.parity(lam) - as_exact(pr)) % 2:
                viol.append(("parity", _el_json(x)))
    if associativity:
        counts["associativity"] = _check_associativity(alg, els, viol)
    rep.checks = counts
    return rep


def _check_associativity(alg: TwistedAlgebra, els: list, viol: list) -> int:
    """(xy)z = x(yz) over all triples of window elements; vectorized for monomial products."""
    n = len(els)
    index = {e: i for i, e in enumerate(els)}
    ext: list = [None]  # slot 0 is the zero element
    ext_index: dict = {}

    def slot(z):
        if z is None:
            return 0
        k = ext_index.get(z)
        if k is None:
            k = len(ext)
            ext_index[z] = k
            ext.append(z)
        return k

    S1 = np.zeros((n, n), dtype=np.int8)
    T1 = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            m = _monomial(alg.multiply(x, y))
            if m is None:
                return _check_associativity_slow(alg, els, viol)
            S1[i, j], T1[i, j] = m[0], slot(m[1])
    mids = list(range(len(ext)))
    # left: (xy) z ; right: x (yz)
    final: dict = {}
    S2 = np.zeros((len(mids), n), dtype=np.int8)
    T2 = np.zeros((len(mids), n), dtype=np.int64)
    S3 = np.zeros((n, len(mids)), dtype=np.int8)
    T3 = np.zeros((n, len(mids)), dtype=np.int64)

    def fslot(z):
        if z is None:
            return 0
        k = final.get(z)
        if k is None:
            k = len(final) + 1
            final[z] = k
        return k

    for t in mids[1:]:
        left_factor = ext[t]
        for k, z in enumerate(els):
            m = _monomial(alg.multiply(left_factor, z))
            if m is None:
                return _check_associativity_slow(alg, els, viol)
            S2[t, k], T2[t, k] = m[0], fslot(m[1])
            m = _monomial(alg.multiply(z, left_factor))
            if m is None:
                return _check_associativity_slow(alg, els, viol)
            S3[k, t], T3[k, t] = m[0], fslot(m[1])
    for i in range(n):
        # left[j, k] = S1[i, j] * S2[T1[i, j], k]
        ls = S1[i, :, None] * S2[T1[i, :], :]
        lt = T2[T1[i, :], :]
        # right[j, k] = S1[j, k] * S3[i, T1[j, k]]
        rs = S1 * S3[i, T1]
        rt = T3[i, T1]
        bad = (ls != rs) | ((ls != 0) & (lt != rt))
        if bad.any():
            j, k = map(int, np.argwhere(bad)[0])
            viol.append(("associativity", _el_json(els[i]), _el_json(els[j]), _el_json(els[k])))
            return n ** 3
    del index
    return n ** 3


def _check_associativity_slow(alg: TwistedAlgebra, els: list, viol: list) -> int:
    count = 0
    for x, y, z in itertools.product(els, repeat=3):
        count += 1
        left = alg.multiply_vectors(alg.multiply(x, y), {z: 1})
        right = alg.multiply_vectors({x: 1}, alg.multiply(y, z))
        if left != right:
            viol.append(("associativity", _el_json(x), _el_json(y), _el_json(z)))
            break
    return count


# ---------------------------------------------------------------------------
# the lattice algebra of the coroot lattice


class SignCocycle:
    """r(lam, chi) = sum_{i > j} lam_i chi_j (p_i p_j + (e_i, e_j)) on an ordered basis."""

    def __init__(self, gram: Sequence[Sequence], parities: Sequence[int]):
        self.gram = [[as_exact(x) for x in row] for row in gram]
        self.parities = [int(p) % 2 for p in parities]
        n = len(self.gram)
        self.matrix = [[(self.parities[i] * self.parities[j] + self.gram[i][j]) if i > j else 0
                        for j in range(n)] for i in range(n)]

    def __call__(self, lam: Sequence, chi: Sequence):
        n = len(self.matrix)
        return as_exact(sum(lam[i] * self.matrix[i][j] * chi[j] for i in range(n) for j in range(n)))

    def on_basis(self, i: int, j: int):
        return self.matrix[i][j]


def _box(rank: int, radius: int) -> list[tuple]:
    return sorted(itertools.product(range(-radius, radius + 1), repeat=rank), key=lambda c: (sum(map(abs, c)), c))


def lattice_hwa(datum: RootDatum, level) -> TwistedAlgebra:
    """Twisted group algebra of the coroot lattice with pairing level * (.,.)_0."""
    k = as_exact(level)
    n = datum.rank
    gram = [[as_exact(k * datum.coroot_form[i][j]) for j in range(n)] for i in range(n)]
    if not all(_is_int(x) for row in gram for x in row):
        raise DomainError(f"level {k} is not integral on the coroot lattice")
    parities = [gram[i][i] % 2 for i in range(n)]
    r = SignCocycle(gram, parities)

    def pairing(lam, chi):
        return sum(lam[i] * gram[i][j] * chi[j] for i in range(n) for j in range(n))

    def parity(lam):
        return pairing(lam, lam) % 2

    def mul(x, y):
        (lam, _), (chi, _) = x, y
        sign = -1 if r(lam, chi) % 2 else 1
        return {(vadd(lam, chi), "x"): sign}

    def elements(radius):
        return [(c, "x") for c in _box(n, radius)]

    alg = TwistedAlgebra(
        f"lattice[{datum.type_label}, level={k}]", n, pairing, parity, mul, elements, ((0,) * n, "x"),
        {"lattice": "coroot lattice, simple-coroot basis", "level": _num(k), "basis_order": list(range(1, n + 1))},
    )
    alg.cocycle = r
    alg.gram = gram
    return alg


# ---------------------------------------------------------------------------
# H^*(n, C)


def cohomology_hwa(datum: RootDatum, level) -> TwistedAlgebra:
    """Lines C omega_w at w.0; pairing (.,.)_0 / level; parity l(w) mod 2; cup product."""
    k = as_exact(level)
    if k == 0:
        raise DomainError("level must be nonzero")
    W = weyl_group(datum)
    zero = (0,) * datum.rank
    by_grade = {dot_finite(datum, u, zero): u for u in W}
    labels = {u.label: u for u in W}

    def pairing(mu, nu):
        return Fraction(datum.form(mu, nu)) / k

    def parity(mu):
        u = by_grade.get(tuple(mu))
        return u.length % 2 if u is not None else 0

    def mul(x, y):
        u, v = labels[x[1]], labels[y[1]]
        res = cup_product(datum, u, v)
        if res.is_zero:
            return {}
        return {(dot_finite(datum, res.element, zero), res.element.label): res.sign}

    def elements(radius):
        return [(dot_finite(datum, u, zero), u.label) for u in W]

    notes = []
    for u in W:
        if cup_product(datum, u, u).is_zero and u.length:
            notes.append(f"parity of omega_{u.label} is extra data (square vanishes)")
    return TwistedAlgebra(
        f"H(n)[{datum.type_label}, level={k}]", datum.rank, pairing, parity, mul, elements, (zero, "e"),
        {"lattice": "weight lattice, fundamental basis", "level": _num(k), "vacuous_parity": notes},
    )


# ---------------------------------------------------------------------------
# twisted tensor product


def twisted_tensor(
    A: TwistedAlgebra,
    B: TwistedAlgebra,
    cross_pairing: Callable[[tuple, tuple], object],
    check_radius: int | None = 1,
) -> TwistedAlgebra:
    """A (x) B with (a (x) b)(a' (x) b') = (-1)^{p(lam)p(chi) + (lam, chi)} aa' (x) bb'.

    Here b lies in B^lam, a' in A^chi and ``cross_pairing(chi, lam)`` gives the
    pairing of an A-grade with a B-grade.
    """

    def pairing(g, h):
        (la, lb), (ca, cb) = g, h
        return as_exact(A.pairing(la, ca) + B.pairing(lb, cb) + cross_pairing(la, cb) + cross_pairing(ca, lb))

    def parity(g):
        return A.parity(g[0]) + B.parity(g[1])

    def mul(x, y):
        (ga, gb), (la, lb) = x
        (ha, hb), (ma, mb) = y
        e = B.parity(gb) * A.parity(ha) + as_exact(cross_pairing(ha, gb))
        pa = A.multiply((ga, la), (ha, ma))
        if not pa:
            return {}
        pb = B.multiply((gb, lb), (hb, mb))
        if not pb:
            return {}
        if not _is_int(e):
            raise ConstructionError(f"cross pairing is not integral on a nonzero product {x} * {y}")
        sign = -1 if e % 2 else 1
        out = {}
        for (g1, l1), c1 in pa.items():
            for (g2, l2), c2 in pb.items():
                out[((g1, g2), (l1, l2))] = sign * c1 * c2
        return out

    def elements(radius):
        return [((ga, gb), (la, lb)) for (ga, la) in A.elements(radius) for (gb, lb) in B.elements(radius)]

    unit = ((A.unit[0], B.unit[0]), (A.unit[1], B.unit[1]))
    T = TwistedAlgebra(f"{A.name} (x)~ {B.name}", A.lattice_rank + B.lattice_rank, pairing, parity, mul,
                       elements, unit, {"left": A.metadata, "right": B.metadata})
    T.left, T.right, T.cross_pairing = A, B, cross_pairing
    if check_radius is not None:
        rep = check_invariants(T, check_radius)
        if not rep.passed:
            raise ConstructionError(f"twisted tensor violates {rep.violations[0]}")
    return T


def natural_cross_pairing(datum: RootDatum):
    """(lam, mu) -> mu(lam) for a coweight lam and a weight mu."""
    return lambda lam, mu: datum.pair(lam, mu)


def hwa_reduction(datum: RootDatum, level, check_radius: int | None = 1) -> TwistedAlgebra:
    """The lattice algebra of the coroot lattice twisted-tensored with H^*(n)."""
    return twisted_tensor(lattice_hwa(datum, level), cohomology_hwa(datum, level),
                          natural_cross_pairing(datum), check_radius)


# ---------------------------------------------------------------------------
# scalar formulas


def maintheorem_sign(datum: RootDatum, w: WeylElement, chi: Sequence, level) -> int:
    """(-1)^{l(w) (chi, chi)_level + (w.0)(chi)} for a coweight chi."""
    chi = datum.check_weight(chi)
    norm = as_exact(as_exact(level) * datum.coweight_form(chi, chi))
    if not _is_int(norm):
        raise DomainError("(chi, chi) is not integral at this level")
    zero = (0,) * datum.rank
    e = w.length * norm + datum.pair(chi, dot_finite(datum, w, zero))
    return -1 if e % 2 else 1


def ope_leading_order(datum: RootDatum, lam: Sequence, chi: Sequence, level) -> int:
    """(lam, chi)_level for coweights: the leading exponent of the lam-field on the chi-component."""
    v = as_exact(as_exact(level) * datum.coweight_form(lam, chi))
    if not _is_int(v):
        raise DomainError("pairing is not integral")
    return v


def parity_hecke(datum: RootDatum, chi: Sequence, level) -> int:
    """(chi, chi)_level mod 2 for a weight chi."""
    v = as_exact(as_exact(level) * datum.form(chi, chi))
    if not _is_int(v):
        raise DomainError(f"(chi, chi) at level {level} is {v}, not an integer")
    return v % 2


def congruence_classes_distinct(datum: RootDatum, level) -> bool:
    """Whether the points w.0 are pairwise distinct modulo level * (coroot lattice)."""
    from .weyl import congruence_collision

    return congruence_collision(datum, level) is None


def elements_from(alg: TwistedAlgebra, grades: Iterable[tuple]) -> list:
    return [e for e in alg.elements(0) if e[0] in set(grades)]
