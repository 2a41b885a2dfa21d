"""Exact multigraded characters, weight multiplicities and Fock characters.

A :class:`GradedCharacter` is a finite sum ``sum c * x^mu q^n t^k`` with integer
coefficients, stored sparsely.  ``mu`` is a weight in fundamental coordinates,
``n >= 0`` is the energy grading and ``k`` the cohomological degree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, UsageError
from .rootdata import RootDatum, as_exact, vadd, vsub
from .weyl import weyl_group

Key = tuple  # (weight tuple, q, t)


def _min_cut(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class Cutoffs:
    """Truncation record; ``None`` means no truncation in that direction.

    ``weight_window`` bounds the largest absolute fundamental coordinate.
    """

    q_max: int | None = None
    weight_window: int | None = None

    def meet(self, other: "Cutoffs") -> "Cutoffs":
        return Cutoffs(_min_cut(self.q_max, other.q_max), _min_cut(self.weight_window, other.weight_window))

    def admits(self, key: Key) -> bool:
        weight, q, _ = key
        if self.q_max is not None and q > self.q_max:
            return False
        if self.weight_window is not None and weight and max(abs(x) for x in weight) > self.weight_window:
            return False
        return True

    def to_json(self) -> dict:
        return {"q_max": self.q_max, "weight_window": self.weight_window}


def _coord_str(x) -> str:
    x = as_exact(x)
    return str(x) if isinstance(x, int) else f"{x.numerator}/{x.denominator}"


def _coord_json(x):
    x = as_exact(x)
    return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"


class GradedCharacter:
    """Sparse exact character; treat instances as immutable values."""

    __slots__ = ("_terms", "cutoffs", "flags", "rank")

    def __init__(
        self,
        terms: Mapping[Key, int] | Iterable[tuple[Key, int]] = (),
        rank: int | None = None,
        cutoffs: Cutoffs = Cutoffs(),
        flags: Iterable[str] = (),
    ):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, int] = {}
        for (weight, q, t), c in items:
            if not isinstance(c, int) or isinstance(c, bool):
                raise DomainError(f"coefficients must be integers, got {c!r}")
            weight = tuple(as_exact(x) for x in weight)
            if rank is None:
                rank = len(weight)
            elif len(weight) != rank:
                raise UsageError("terms of different ranks in one character")
            if q < 0:
                raise DomainError("energy degree must be nonnegative")
            key = (weight, int(q), int(t))
            if not cutoffs.admits(key):
                continue
            acc[key] = acc.get(key, 0) + c
        self._terms = {k: v for k, v in acc.items() if v != 0}
        self.rank = rank
        self.cutoffs = cutoffs
        self.flags = tuple(sorted(set(flags)))

    # -- container protocol ------------------------------------------------

    @property
    def terms(self) -> dict[Key, int]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def coefficient(self, weight: Sequence, q: int = 0, t: int = 0) -> int:
        return self._terms.get((tuple(as_exact(x) for x in weight), q, t), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedCharacter):
            return NotImplemented
        return self._terms == other._terms and self.cutoffs == other.cutoffs

    def __hash__(self):
        return hash((frozenset(self._terms.items()), self.cutoffs))

    def __repr__(self) -> str:
        return f"GradedCharacter({len(self)} terms, cutoffs={self.cutoffs})"

    def is_zero(self) -> bool:
        return not self._terms

    # -- ring operations ----------------------------------------------------

    def _check_rank(self, other: "GradedCharacter") -> int | None:
        if self.rank is not None and other.rank is not None and self.rank != other.rank:
            raise UsageError("characters of different rank")
        return self.rank if self.rank is not None else other.rank

    def _merged_meta(self, other: "GradedCharacter"):
        cut = self.cutoffs.meet(other.cutoffs)
        flags = set(self.flags) | set(other.flags)
        if self.cutoffs != other.cutoffs:
            flags.add(f"cutoff-mismatch: used {cut.to_json()}")
        return cut, flags

    def __add__(self, other: "GradedCharacter") -> "GradedCharacter":
        rank = self._check_rank(other)
        cut, flags = self._merged_meta(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, 0) + v
        return GradedCharacter(terms, rank, cut, flags)

    def __neg__(self) -> "GradedCharacter":
        return self.scale(-1)

    def __sub__(self, other: "GradedCharacter") -> "GradedCharacter":
        return self + (-other)

    def scale(self, c: int) -> "GradedCharacter":
        return GradedCharacter({k: c * v for k, v in self._terms.items()}, self.rank, self.cutoffs, self.flags)

    def __mul__(self, other: "GradedCharacter") -> "GradedCharacter":
        rank = self._check_rank(other)
        cut, flags = self._merged_meta(other)
        out: dict[Key, int] = {}
        for (w1, q1, t1), c1 in self._terms.items():
            for (w2, q2, t2), c2 in other._terms.items():
                q = q1 + q2
                if cut.q_max is not None and q > cut.q_max:
                    continue
                key = (vadd(w1, w2), q, t1 + t2)
                out[key] = out.get(key, 0) + c1 * c2
        return GradedCharacter(out, rank, cut, flags)

    def shift_coh(self, n: int) -> "GradedCharacter":
        """Add ``n`` to every cohomological degree."""
        return GradedCharacter(
            {(w, q, t + n): c for (w, q, t), c in self._terms.items()}, self.rank, self.cutoffs, self.flags
        )

    def twist_weight(self, mu: Sequence) -> "GradedCharacter":
        """Multiply by ``x^mu``."""
        if self.rank is not None and len(mu) != self.rank:
            raise UsageError("twist weight has the wrong rank")
        return GradedCharacter(
            {(vadd(w, mu), q, t): c for (w, q, t), c in self._terms.items()},
            self.rank if self.rank is not None else len(mu),
            self.cutoffs,
            self.flags,
        )

    def truncate(self, cutoffs: Cutoffs) -> "GradedCharacter":
        cut = self.cutoffs.meet(cutoffs)
        return GradedCharacter(self._terms, self.rank, cut, self.flags)

    def restrict(self, predicate) -> "GradedCharacter":
        return GradedCharacter(
            {k: v for k, v in self._terms.items() if predicate(k)}, self.rank, self.cutoffs, self.flags
        )

    def coh_degrees(self) -> list[int]:
        return sorted({t for (_, _, t) in self._terms})

    def at_coh(self, t: int) -> "GradedCharacter":
        return self.restrict(lambda k: k[2] == t)

    def euler(self) -> dict[tuple, int]:
        """Collapse the cohomological grading with signs: (weight, q) -> sum (-1)^t c."""
        out: dict[tuple, int] = {}
        for (w, q, t), c in self._terms.items():
            out[(w, q)] = out.get((w, q), 0) + (-1) ** (t % 2) * c
        return {k: v for k, v in out.items() if v}

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "cutoffs": self.cutoffs.to_json(),
            "flags": list(self.flags),
            "terms": [
                {"weight_coords": [_coord_json(x) for x in w], "q": q, "t": t, "coeff": c}
                for (w, q, t), c in sorted(self._terms.items(), key=_sort_key)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "GradedCharacter":
        if isinstance(data, str):
            data = json.loads(data)
        cut = Cutoffs(**data.get("cutoffs", {}))
        terms = [
            ((tuple(as_exact(Fraction(x)) if isinstance(x, str) else x for x in e["weight_coords"]), e["q"], e["t"]), e["coeff"])
            for e in data["terms"]
        ]
        return cls(terms, data.get("rank"), cut, data.get("flags", ()))

    def to_tsv(self) -> str:
        lines = [
            f"# rank={self.rank} q_max={self.cutoffs.q_max} weight_window={self.cutoffs.weight_window}",
            *(f"# flag={f}" for f in self.flags),
            "weight_coords\tq\tt\tcoeff",
        ]
        for (w, q, t), c in sorted(self._terms.items(), key=_sort_key):
            lines.append(f"{','.join(_coord_str(x) for x in w)}\t{q}\t{t}\t{c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "GradedCharacter":
        meta: dict[str, str] = {}
        flags = []
        terms = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("# flag="):
                flags.append(line[len("# flag="):])
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    k, v = tok.split("=", 1)
                    meta[k] = v
                continue
            if line.startswith("weight_coords"):
                continue
            wc, q, t, c = line.split("\t")
            weight = tuple(as_exact(Fraction(x)) for x in wc.split(",")) if wc else ()
            terms.append(((weight, int(q), int(t)), int(c)))

        def opt(v):
            return None if v in (None, "None") else int(v)

        rank = opt(meta.get("rank"))
        return cls(terms, rank, Cutoffs(opt(meta.get("q_max")), opt(meta.get("weight_window"))), flags)


def _sort_key(item):
    (w, q, t), _ = item
    return (t, q, tuple(Fraction(x) for x in w))


def monomial(weight: Sequence, q: int = 0, t: int = 0, coeff: int = 1, cutoffs: Cutoffs = Cutoffs()) -> GradedCharacter:
    weight = tuple(weight)
    return GradedCharacter({(weight, q, t): coeff}, len(weight), cutoffs)


def zero(rank: int, cutoffs: Cutoffs = Cutoffs()) -> GradedCharacter:
    return GradedCharacter({}, rank, cutoffs)


def add(a: GradedCharacter, b: GradedCharacter) -> GradedCharacter:
    return a + b


def multiply(a: GradedCharacter, b: GradedCharacter) -> GradedCharacter:
    return a * b


def shift_coh(a: GradedCharacter, n: int) -> GradedCharacter:
    return a.shift_coh(n)


def twist_weight(a: GradedCharacter, mu: Sequence) -> GradedCharacter:
    return a.twist_weight(mu)


# ---------------------------------------------------------------------------
# Weyl characters by exact Laurent division


def _monomial_order(datum: RootDatum):
    """Total group order on weights: root height, then root coordinates lexicographically."""

    def key(mu):
        m = datum.to_root_coords(mu)
        return (sum(m), m)

    return key


def alternant(datum: RootDatum, mu: Sequence) -> dict[tuple, int]:
    """sum_w sign(w) x^{w(mu)} as a sparse Laurent polynomial."""
    out: dict[tuple, int] = {}
    for w in weyl_group(datum):
        k = w.act(mu)
        out[k] = out.get(k, 0) + (-1) ** w.length
    return {k: v for k, v in out.items() if v}


def laurent_divide(numerator: dict, denominator: dict, order_key) -> dict:
    """Exact division of sparse Laurent polynomials; raises if there is a remainder."""
    lead = max(denominator, key=order_key)
    lead_c = denominator[lead]
    rem = dict(numerator)
    quot: dict[tuple, int] = {}
    floor = order_key(min(numerator, key=order_key)) if numerator else None
    while rem:
        top = max(rem, key=order_key)
        c = rem[top]
        if c % lead_c:
            raise DomainError("Laurent division is not exact")
        qc = c // lead_c
        mono = vsub(top, lead)
        quot[mono] = quot.get(mono, 0) + qc
        for k, v in denominator.items():
            kk = vadd(mono, k)
            nv = rem.get(kk, 0) - qc * v
            if nv:
                rem[kk] = nv
            else:
                rem.pop(kk, None)
        if rem and order_key(max(rem, key=order_key)) < floor:
            raise DomainError("Laurent division is not exact")
    return quot


def _require_dominant_integral(datum: RootDatum, chi: Sequence) -> tuple:
    chi = datum.check_weight(chi)
    if not all(isinstance(x, int) and x >= 0 for x in chi):
        raise DomainError(f"{chi} is not a dominant integral weight")
    return chi


@lru_cache(maxsize=None)
def _weyl_character_terms(datum: RootDatum, chi: tuple) -> tuple:
    num = alternant(datum, vadd(chi, datum.rho))
    den = alternant(datum, datum.rho)
    quot = laurent_divide(num, den, _monomial_order(datum))
    return tuple(sorted(quot.items()))


def weyl_character(datum: RootDatum, chi: Sequence, weight_window: int | None = None) -> GradedCharacter:
    """Character of the irreducible module of highest weight ``chi`` via the Weyl formula."""
    chi = _require_dominant_integral(datum, chi)
    terms = {(w, 0, 0): c for w, c in _weyl_character_terms(datum, chi)}
    return GradedCharacter(terms, datum.rank, Cutoffs(None, weight_window))


# ---------------------------------------------------------------------------
# Weight multiplicities


def dominant_representative(datum: RootDatum, mu: Sequence) -> tuple:
    mu = list(datum.check_weight(mu))
    simple = datum.simple_roots
    while True:
        for i, x in enumerate(mu):
            if x < 0:
                mu = [mu[j] - x * simple[i][j] for j in range(len(mu))]
                break
        else:
            return tuple(mu)


def _below(datum: RootDatum, chi: Sequence, mu: Sequence) -> bool:
    """chi - mu is a nonnegative integral combination of simple roots."""
    m = datum.to_root_coords(vsub(chi, mu))
    return all(isinstance(x, int) and x >= 0 for x in m)


@lru_cache(maxsize=None)
def _freudenthal(datum: RootDatum, chi: tuple, mu: tuple) -> int:
    # mu is dominant here
    if mu == chi:
        return 1
    if not _below(datum, chi, mu):
        return 0
    rho = datum.rho
    denom = datum.form(vadd(chi, rho), vadd(chi, rho)) - datum.form(vadd(mu, rho), vadd(mu, rho))
    total = Fraction(0)
    for alpha in datum.positive_roots:
        k = 1
        while True:
            nu = vadd(mu, tuple(k * a for a in alpha))
            nu_dom = dominant_representative(datum, nu)
            if not _below(datum, chi, nu_dom):
                break
            m = _freudenthal(datum, chi, nu_dom)
            total += m * datum.form(nu, alpha)
            k += 1
    value = 2 * total / denom
    if value.denominator != 1 or value < 0:
        raise AssertionError(f"Freudenthal produced {value} at {mu}")
    return int(value)


def freudenthal_multiplicity(datum: RootDatum, chi: Sequence, mu: Sequence) -> int:
    chi = _require_dominant_integral(datum, chi)
    mu = datum.check_weight(mu)
    if not all(isinstance(x, int) for x in mu):
        return 0
    dom = dominant_representative(datum, mu)
    if not _below(datum, chi, dom):
        return 0
    return _freudenthal(datum, chi, dom)


class KostantPartition:
    """Number of ways to write a root-lattice vector as a sum of positive roots."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.roots = datum.positive_roots_rc
        self._cache: dict[tuple, int] = {}

    def __call__(self, gamma_rc: Sequence[int]) -> int:
        return self._count(len(self.roots), tuple(gamma_rc))

    def _count(self, k: int, gamma: tuple) -> int:
        if any(x < 0 for x in gamma):
            return 0
        if k == 0:
            return int(not any(gamma))
        key = (k, gamma)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        beta = self.roots[k - 1]
        total = 0
        cur = gamma
        while all(x >= 0 for x in cur):
            total += self._count(k - 1, cur)
            cur = tuple(a - b for a, b in zip(cur, beta))
        self._cache[key] = total
        return total


@lru_cache(maxsize=None)
def kostant_partition_function(datum: RootDatum) -> KostantPartition:
    return KostantPartition(datum)


def kostant_multiplicity(datum: RootDatum, chi: Sequence, mu: Sequence) -> int:
    chi = _require_dominant_integral(datum, chi)
    mu = datum.check_weight(mu)
    P = kostant_partition_function(datum)
    rho = datum.rho
    total = 0
    for w in weyl_group(datum):
        gamma = datum.to_root_coords(vsub(w.act(vadd(chi, rho)), vadd(mu, rho)))
        if all(isinstance(x, int) for x in gamma):
            total += (-1) ** w.length * P(gamma)
    return total


def weight_multiplicity(datum: RootDatum, chi: Sequence, mu: Sequence, algorithm: str = "freudenthal") -> int:
    if algorithm == "freudenthal":
        return freudenthal_multiplicity(datum, chi, mu)
    if algorithm == "kostant":
        return kostant_multiplicity(datum, chi, mu)
    raise UsageError(f"unknown multiplicity algorithm {algorithm!r}")


def weight_support(datum: RootDatum, chi: Sequence) -> list[tuple]:
    """All weights of the irreducible module of highest weight chi (without multiplicity)."""
    chi = _require_dominant_integral(datum, chi)
    seen = {chi}
    layer = [chi]
    while layer:
        nxt = []
        for mu in layer:
            for a in datum.simple_roots:
                nu = vsub(mu, a)
                if nu not in seen and _below(datum, chi, dominant_representative(datum, nu)):
                    seen.add(nu)
                    nxt.append(nu)
        layer = nxt
    return sorted(seen, key=lambda m: (-datum.root_height(m), m))


def weyl_dimension(datum: RootDatum, chi: Sequence) -> int:
    """prod_{alpha > 0} (chi + rho, alpha) / (rho, alpha)."""
    chi = _require_dominant_integral(datum, chi)
    out = Fraction(1)
    for alpha in datum.positive_roots:
        out *= Fraction(datum.form(vadd(chi, datum.rho), alpha)) / datum.form(datum.rho, alpha)
    if out.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    return int(out)


def dominant_weights_up_to_height(datum: RootDatum, max_height: int) -> list[tuple]:
    """Dominant integral weights with coordinate sum at most max_height."""
    pts = [c for c in itertools.product(range(max_height + 1), repeat=datum.rank) if sum(c) <= max_height]
    return sorted(pts, key=lambda c: (sum(c), c))


# ---------------------------------------------------------------------------
# Fock characters and the triple product


def partition_counts(q_max: int, colors: int = 1) -> list[int]:
    """Coefficients of prod_{n >= 1} (1 - q^n)^{-colors} up to q^q_max."""
    if q_max < 0:
        raise DomainError("q_max must be nonnegative")
    series = [1] + [0] * q_max
    for _ in range(colors):
        for n in range(1, q_max + 1):
            for k in range(n, q_max + 1):
                series[k] += series[k - n]
    return series


def fock_character(datum: RootDatum, alpha: Sequence, q_max: int) -> GradedCharacter:
    """x^alpha prod (1 - q^n)^{-rank}, highest-weight vector at q^0."""
    alpha = datum.check_weight(alpha)
    coeffs = partition_counts(q_max, datum.rank)
    terms = {(alpha, n, 0): c for n, c in enumerate(coeffs)}
    return GradedCharacter(terms, datum.rank, Cutoffs(q_max, None))


@dataclass
class TripleProductReport:
    passed: bool
    q_max: int
    z_window: int
    compared: int
    first_mismatch: tuple | None = None
    fermionic: dict = field(default_factory=dict, repr=False)
    bosonic: dict = field(default_factory=dict, repr=False)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "q_max": self.q_max,
            "z_window": self.z_window,
            "compared": self.compared,
            "first_mismatch": list(self.first_mismatch) if self.first_mismatch else None,
        }


def _fermionic_side(q_max: int) -> dict[tuple[int, int], int]:
    """prod_{n >= 1} (1 + z q^n)(1 + z^{-1} q^{n-1}) as {(m, q): coeff}, q <= q_max."""
    poly = {(0, 0): 1}
    for n in range(1, q_max + 2):
        for zexp, qexp in ((1, n), (-1, n - 1)):
            if qexp > q_max:
                continue
            new = dict(poly)
            for (m, q), c in poly.items():
                if q + qexp <= q_max:
                    k = (m + zexp, q + qexp)
                    new[k] = new.get(k, 0) + c
            poly = new
    return {k: v for k, v in poly.items() if v}


def _bosonic_side(q_max: int, z_window: int) -> dict[tuple[int, int], int]:
    """sum_m z^m q^{m(m+1)/2} / prod (1 - q^n), for |m| <= z_window."""
    p = partition_counts(q_max)
    out = {}
    for m in range(-z_window, z_window + 1):
        base = m * (m + 1) // 2
        for n in range(q_max - base + 1):
            if p[n]:
                out[(m, base + n)] = p[n]
    return out


def jacobi_triple_check(q_max: int, z_window: int) -> TripleProductReport:
    if q_max < 0 or z_window < 0:
        raise DomainError("cutoffs must be nonnegative")
    ferm = {k: v for k, v in _fermionic_side(q_max).items() if abs(k[0]) <= z_window}
    bos = _bosonic_side(q_max, z_window)
    keys = sorted(set(ferm) | set(bos), key=lambda k: (k[1], k[0]))
    for k in keys:
        if ferm.get(k, 0) != bos.get(k, 0):
            return TripleProductReport(False, q_max, z_window, len(keys), k, ferm, bos)
    return TripleProductReport(True, q_max, z_window, len(keys), None, ferm, bos)
