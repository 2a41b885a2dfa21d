"""Finite and affine Weyl groups, dot actions and the level predicates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, UsageError
from .rootdata import RootDatum, as_exact, vadd, vec, vsub

Matrix = tuple[tuple[int, ...], ...]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _apply(m: Matrix, x: Sequence) -> tuple:
    return tuple(as_exact(sum(m[i][j] * x[j] for j in range(len(x)))) for i in range(len(m)))


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def simple_reflection_matrix(datum: RootDatum, i: int) -> Matrix:
    """s_i on fundamental-weight coordinates: chi -> chi - chi_i a_i."""
    n = datum.rank
    a = datum.simple_roots[i]
    return tuple(tuple(int(r == c) - (a[r] if c == i else 0) for c in range(n)) for r in range(n))


def simple_coreflection_matrix(datum: RootDatum, i: int) -> Matrix:
    """s_i on simple-coroot coordinates: lam -> lam - a_i(lam) H_i."""
    n = datum.rank
    A = datum.cartan_matrix
    # a_i(H_j) = A[j][i]
    return tuple(tuple(int(r == c) - (A[c][i] if r == i else 0) for c in range(n)) for r in range(n))


@dataclass(frozen=True)
class WeylElement:
    word: tuple[int, ...]
    matrix: Matrix
    comatrix: Matrix

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, chi: Sequence) -> tuple:
        return _apply(self.matrix, vec(chi))

    def act_coweight(self, lam: Sequence) -> tuple:
        return _apply(self.comatrix, vec(lam))

    @property
    def label(self) -> str:
        return "e" if not self.word else "s" + "s".join(str(i + 1) for i in self.word)

    def __repr__(self) -> str:
        return f"WeylElement({self.label})"


class WeylGroup:
    """All elements of W with lexicographically minimal reduced words."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        n = datum.rank
        refl = [simple_reflection_matrix(datum, i) for i in range(n)]
        corefl = [simple_coreflection_matrix(datum, i) for i in range(n)]
        e = WeylElement((), _identity(n), _identity(n))
        seen = {e.matrix: e}
        elements = [e]
        layer = [e]
        while layer:
            nxt = []
            for w in layer:
                for i in range(n):
                    m = _matmul(w.matrix, refl[i])
                    if m in seen:
                        continue
                    u = WeylElement(w.word + (i,), m, _matmul(w.comatrix, corefl[i]))
                    seen[m] = u
                    nxt.append(u)
            elements.extend(nxt)
            layer = nxt
        self.elements: tuple[WeylElement, ...] = tuple(elements)
        self._by_matrix = seen

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    @property
    def longest(self) -> WeylElement:
        return max(self.elements, key=lambda w: w.length)

    def multiply(self, u: WeylElement, v: WeylElement) -> WeylElement:
        return self._by_matrix[_matmul(u.matrix, v.matrix)]

    def inverse(self, w: WeylElement) -> WeylElement:
        for u in self.elements:
            if _matmul(u.matrix, w.matrix) == self.identity.matrix:
                return u
        raise AssertionError("no inverse found")

    def from_word(self, word: Iterable[int]) -> WeylElement:
        m = self.identity.matrix
        for i in word:
            m = _matmul(m, simple_reflection_matrix(self.datum, i))
        return self._by_matrix[m]

    def by_label(self, label: str) -> WeylElement:
        if label in ("e", "1", ""):
            return self.identity
        digits = [int(x) - 1 for x in label.lstrip("s").split("s") if x]
        return self.from_word(digits)

    def inversion_set(self, w: WeylElement) -> tuple[int, ...]:
        """Indices of positive roots alpha with w^{-1} alpha < 0 (the roots of n / (n cap w n w^-1))."""
        winv = self.inverse(w)
        out = []
        for k, alpha in enumerate(self.datum.positive_roots):
            img = self.datum.to_root_coords(winv.act(alpha))
            if all(x <= 0 for x in img):
                out.append(k)
        return tuple(out)

    def count_inversions(self, w: WeylElement) -> int:
        """Number of positive roots sent negative by w."""
        cnt = 0
        for alpha in self.datum.positive_roots:
            if all(x <= 0 for x in self.datum.to_root_coords(w.act(alpha))):
                cnt += 1
        return cnt


@lru_cache(maxsize=None)
def _weyl_group_cached(datum: RootDatum) -> WeylGroup:
    return WeylGroup(datum)


def weyl_group(datum: RootDatum) -> WeylGroup:
    return _weyl_group_cached(datum)


def enumerate_W(datum: RootDatum) -> list[WeylElement]:
    return list(weyl_group(datum).elements)


def dot_finite(datum: RootDatum, w: WeylElement, chi: Sequence) -> tuple:
    """w . chi = w(chi + rho) - rho."""
    chi = datum.check_weight(chi)
    return vsub(w.act(vadd(chi, datum.rho)), datum.rho)


@dataclass(frozen=True)
class AffineWeylElement:
    """w = t^lambda w_bar with lambda a coweight (simple-coroot coordinates)."""

    translation: tuple[int, ...]
    finite: WeylElement

    @property
    def label(self) -> str:
        return f"({','.join(map(str, self.translation))};{self.finite.label})"

    def height(self) -> int:
        return sum(self.translation)

    def compose(self, other: "AffineWeylElement", group: WeylGroup) -> "AffineWeylElement":
        """(lam, u)(mu, v) = (lam + u(mu), uv)."""
        lam = vadd(self.translation, self.finite.act_coweight(other.translation))
        return AffineWeylElement(lam, group.multiply(self.finite, other.finite))

    def affine_root_image(self, datum: RootDatum, alpha: Sequence, n: int) -> tuple[tuple, int]:
        """Image of the affine root (alpha, n): (w_bar alpha, n + (w_bar alpha)(lambda))."""
        beta = self.finite.act(alpha)
        return beta, n + datum.pair(self.translation, beta)

    def __repr__(self) -> str:
        return f"AffineWeylElement{self.label}"


def dot_affine(datum: RootDatum, w: AffineWeylElement, chi: Sequence, shifted_level) -> tuple:
    """w . chi = w_bar . chi - (shifted_level)(lambda_w), the image taken under the level form."""
    shift = datum.coweight_to_weight(w.translation, shifted_level)
    return vsub(dot_finite(datum, w.finite, chi), shift)


def coweight_window(datum: RootDatum, max_height: int) -> list[tuple[int, ...]]:
    """Coroot-lattice points with sum |c_i| <= max_height (so also |ht| <= max_height)."""
    if max_height < 0:
        raise DomainError("max_height must be >= 0")
    r = range(-max_height, max_height + 1)
    pts = [c for c in itertools.product(r, repeat=datum.rank) if sum(abs(x) for x in c) <= max_height]
    return sorted(pts, key=lambda c: (sum(c), c))


def enumerate_Waff_window(datum: RootDatum, max_height: int) -> list[AffineWeylElement]:
    """Translations from :func:`coweight_window` times all of W.

    Order: height, then translation coordinates, then reduced word (all lexicographic).
    """
    W = weyl_group(datum)
    finite = sorted(W.elements, key=lambda w: w.word)
    return [AffineWeylElement(lam, u) for lam in coweight_window(datum, max_height) for u in finite]


@dataclass(frozen=True)
class LevelPredicates:
    irreducible: bool
    orbit_free: bool
    sufficient: bool
    integral_level: bool

    def to_json(self) -> dict:
        return {
            "irreducible": self.irreducible,
            "orbit_free": self.orbit_free,
            "sufficient": self.sufficient,
            "integral_level": self.integral_level,
        }


def level_predicates(datum: RootDatum, chi: Sequence, kappa) -> LevelPredicates:
    """The three 'sufficiently negative' conditions for (chi, kappa); kappa is the absolute level."""
    chi = datum.check_weight(chi)
    kappa = as_exact(kappa)
    shifted = as_exact(kappa - datum.critical_level)
    if shifted == 0:
        raise DomainError("kappa equals the critical level; orbit_free is undefined")
    theta = datum.theta
    irreducible = kappa <= -datum.form(chi, theta) - 1
    mu = vsub(chi, datum.rho)
    orbit_free = True
    roots = list(datum.positive_roots)
    for w in weyl_group(datum).elements[1:]:
        diff = vsub(mu, w.act(mu))
        if all(isinstance(as_exact(Fraction(datum.form(a, diff)) / shifted), int) for a in roots):
            orbit_free = False
            break
    sufficient = shifted < -2 * datum.form(mu, theta)
    return LevelPredicates(bool(irreducible), orbit_free, bool(sufficient), isinstance(kappa, int))


def distinct_dot_orbit(datum: RootDatum, chi: Sequence, shifted_level, max_height: int) -> bool:
    """True iff the affine dot images of -chi are pairwise distinct over the window."""
    return dot_orbit_collision(datum, chi, shifted_level, max_height) is None


def dot_orbit_collision(datum: RootDatum, chi: Sequence, shifted_level, max_height: int):
    """First pair (w, w') in window order with w . (-chi) == w' . (-chi), or None."""
    neg = tuple(-as_exact(x) for x in datum.check_weight(chi))
    seen: dict[tuple, AffineWeylElement] = {}
    for w in enumerate_Waff_window(datum, max_height):
        img = dot_affine(datum, w, neg, shifted_level)
        if img in seen:
            return seen[img], w
        seen[img] = w
    return None


def congruence_collision(datum: RootDatum, shifted_level):
    """First pair (w, w') in W with w.0 = w'.0 modulo shifted_level * Gamma, or None."""
    W = weyl_group(datum)
    zero = (0,) * datum.rank
    pts = [(w, dot_finite(datum, w, zero)) for w in W]
    for (u, a), (v, b) in itertools.combinations(pts, 2):
        lam = datum.weight_to_coweight(vsub(a, b), shifted_level)
        if all(isinstance(x, int) for x in lam):
            return u, v
    return None


def check_same_datum(*data: RootDatum) -> RootDatum:
    first = data[0]
    for d in data[1:]:
        if d is not first and d != first:
            raise UsageError("operands belong to different root data")
    return first
