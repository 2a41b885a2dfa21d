"""Root data and invariant forms for simple Lie algebras of small rank.

Conventions
-----------
* Weights are integer (occasionally rational) tuples in the fundamental-weight
  basis, so ``chi[i] = chi(H_i)`` for the simple coroots ``H_i``.
* Coweights live in the coroot lattice (we fix the simply connected group) and
  are stored in the simple-coroot basis.  Their height is the coordinate sum,
  which equals the pairing with rho.
* ``cartan_matrix[i][j] = 2 (a_i, a_j) / (a_i, a_i) = a_j(H_i)``, so the
  fundamental-weight coordinates of the simple root ``a_j`` form column ``j``.
* The normalized form gives long roots squared length 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from sympy import Matrix

from .errors import ConfigurationError, DomainError, UsageError

Weight = tuple  # fundamental-weight coordinates
Coweight = tuple  # simple-coroot coordinates

CARTAN_MATRICES: dict[str, tuple[tuple[int, ...], ...]] = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    # a1 long, a2 short
    "B2": ((2, -1), (-2, 2)),
    # a1 short, a2 long
    "G2": ((2, -3), (-1, 2)),
}

SUPPORTED_TYPES = tuple(CARTAN_MATRICES)


def as_exact(x) -> int | Fraction:
    """Collapse a rational with denominator 1 to ``int``; reject floats."""
    if isinstance(x, bool):
        raise DomainError("booleans are not lattice coordinates")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_exact(Fraction(x))
    if hasattr(x, "p") and hasattr(x, "q"):  # sympy Rational
        return as_exact(Fraction(int(x.p), int(x.q)))
    raise DomainError(f"inexact coordinate {x!r}; only int/Fraction are allowed")


def vec(xs: Sequence) -> tuple:
    return tuple(as_exact(x) for x in xs)


def vadd(x: Sequence, y: Sequence) -> tuple:
    return tuple(as_exact(a + b) for a, b in zip(x, y))


def vsub(x: Sequence, y: Sequence) -> tuple:
    return tuple(as_exact(a - b) for a, b in zip(x, y))


def vscale(c, x: Sequence) -> tuple:
    return tuple(as_exact(c * a) for a in x)


def is_integral(x: Sequence) -> bool:
    return all(isinstance(as_exact(a), int) for a in x)


def _symmetrizer(cartan: Sequence[Sequence[int]]) -> list[Fraction]:
    """Half squared lengths d_i of the simple roots, normalized so max d_i = 1."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and d[j] is None:
                # (a_i, a_j) = a_ij d_i = a_ji d_j
                d[j] = Fraction(cartan[i][j]) * d[i] / cartan[j][i]
                stack.append(j)
    if any(x is None for x in d):
        raise ConfigurationError("Cartan matrix is not connected")
    top = max(d)
    return [x / top for x in d]


@dataclass(frozen=True)
class RootDatum:
    type_label: str
    cartan_matrix: tuple[tuple[int, ...], ...]
    half_lengths: tuple[Fraction, ...] = field(repr=False)
    positive_roots_rc: tuple[tuple[int, ...], ...] = field(repr=False)

    # -- basic structure ---------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @cached_property
    def simple_roots(self) -> tuple[Weight, ...]:
        A = self.cartan_matrix
        return tuple(tuple(A[i][j] for i in range(self.rank)) for j in range(self.rank))

    @cached_property
    def positive_roots(self) -> tuple[Weight, ...]:
        """Positive roots in fundamental-weight coordinates, in the global basis order."""
        return tuple(self.from_root_coords(m) for m in self.positive_roots_rc)

    @property
    def fundamental_weights(self) -> str:
        return "fundamental-weight basis"

    @cached_property
    def _cartan_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        inv = Matrix(self.cartan_matrix).inv()
        return tuple(
            tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        )

    @cached_property
    def normalized_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix of (.,.)_0 on the fundamental weights."""
        inv = self._cartan_inverse
        n = self.rank
        # (w_i, a_j) = d_j delta_ij and w_k = sum_j inv[j][k] a_j
        return tuple(
            tuple(inv[i][k] * self.half_lengths[i] for k in range(n)) for i in range(n)
        )

    @cached_property
    def coroot_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix of (.,.)_0 on the simple coroots."""
        A, d = self.cartan_matrix, self.half_lengths
        n = self.rank
        return tuple(tuple(Fraction(A[i][j]) * d[i] / (d[i] * d[j]) for j in range(n)) for i in range(n))

    # -- coordinate changes ------------------------------------------------

    def check_weight(self, x: Sequence) -> Weight:
        if len(x) != self.rank:
            raise UsageError(f"expected a rank-{self.rank} vector for {self.type_label}, got {tuple(x)!r}")
        return vec(x)

    def to_root_coords(self, chi: Sequence) -> tuple:
        chi = self.check_weight(chi)
        inv = self._cartan_inverse
        return tuple(as_exact(sum(inv[i][j] * chi[j] for j in range(self.rank))) for i in range(self.rank))

    def from_root_coords(self, m: Sequence) -> Weight:
        A = self.cartan_matrix
        return tuple(as_exact(sum(A[i][j] * m[j] for j in range(self.rank))) for i in range(self.rank))

    def weight_height(self, chi: Sequence) -> int | Fraction:
        """Sum of fundamental-weight coordinates, i.e. chi paired with the sum of simple coroots."""
        return as_exact(sum(self.check_weight(chi)))

    def root_height(self, chi: Sequence) -> int | Fraction:
        return as_exact(sum(self.to_root_coords(chi)))

    def coweight_height(self, lam: Sequence) -> int:
        return sum(self.check_weight(lam))

    def coweight_to_dual_fundamental(self, lam: Sequence) -> tuple:
        """Coordinates a_i(lam); the fundamental-weight coordinates for the dual datum."""
        lam = self.check_weight(lam)
        A = self.cartan_matrix
        return tuple(sum(lam[j] * A[j][i] for j in range(self.rank)) for i in range(self.rank))

    # -- forms and pairings ------------------------------------------------

    def form(self, x: Sequence, y: Sequence) -> int | Fraction:
        """(x, y)_0 for weights in fundamental coordinates."""
        x, y = self.check_weight(x), self.check_weight(y)
        F = self.normalized_form
        return as_exact(sum(x[i] * F[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)))

    def coweight_form(self, lam: Sequence, mu: Sequence) -> int | Fraction:
        lam, mu = self.check_weight(lam), self.check_weight(mu)
        G = self.coroot_form
        return as_exact(sum(lam[i] * G[i][j] * mu[j] for i in range(self.rank) for j in range(self.rank)))

    def pair(self, lam: Sequence, chi: Sequence) -> int | Fraction:
        """<lam, chi> for a coweight lam (coroot basis) and a weight chi (fundamental basis)."""
        lam, chi = self.check_weight(lam), self.check_weight(chi)
        return as_exact(sum(a * b for a, b in zip(lam, chi)))

    def weight_to_coweight(self, chi: Sequence, kappa=1) -> tuple:
        """Inverse of :meth:`coweight_to_weight`; coordinates may be rational."""
        kappa = as_exact(kappa)
        if kappa == 0:
            raise DomainError("the level-0 form is degenerate")
        m = self.to_root_coords(chi)
        return tuple(as_exact(Fraction(m[j]) * self.half_lengths[j] / kappa) for j in range(self.rank))

    def coweight_to_weight(self, lam: Sequence, kappa=1) -> Weight:
        """The weight mu with mu(H) = kappa (lam, H)_0 for every coweight H."""
        lam = self.check_weight(lam)
        kappa = as_exact(kappa)
        m = [Fraction(kappa) * lam[j] / self.half_lengths[j] for j in range(self.rank)]
        return self.from_root_coords(m)

    # -- distinguished elements -------------------------------------------

    @cached_property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @cached_property
    def theta(self) -> Weight:
        return self.positive_roots[-1]

    @cached_property
    def dual_coxeter(self) -> int:
        h = 1 + self.form(self.rho, self.theta)
        if not isinstance(h, int):
            raise AssertionError(f"non-integral dual Coxeter number {h}")
        return h

    @property
    def critical_level(self) -> int:
        return -self.dual_coxeter

    @cached_property
    def positive_coroots(self) -> tuple[Coweight, ...]:
        """H_alpha in the simple-coroot basis, aligned with ``positive_roots``."""
        out = []
        for alpha in self.positive_roots:
            scale = Fraction(2) / self.form(alpha, alpha)
            out.append(vscale(scale, self.weight_to_coweight(alpha)))
        return tuple(out)

    @cached_property
    def dual(self) -> "RootDatum":
        """Root datum of the Langlands dual (transposed Cartan matrix)."""
        A = self.cartan_matrix
        At = tuple(tuple(A[j][i] for j in range(self.rank)) for i in range(self.rank))
        return _build(self.type_label + "^", At)

    # -- predicates ---------------------------------------------------------

    def coroot_values(self, chi: Sequence) -> list:
        """chi(H_alpha) for every positive coroot, in root order."""
        chi = self.check_weight(chi)
        out = []
        for alpha in self.positive_roots:
            # H_alpha = 2 alpha / (alpha, alpha) under the form
            out.append(as_exact(2 * Fraction(self.form(chi, alpha)) / self.form(alpha, alpha)))
        return out

    def is_dominant(self, chi: Sequence) -> bool:
        """(chi + rho)(H_alpha) avoids {-1, -2, ...} for all positive coroots."""
        chi = self.check_weight(chi)
        shifted = vadd(chi, self.rho)
        for v in self.coroot_values(shifted):
            if isinstance(v, int) and v < 0:
                return False
        return True

    def is_dominant_regular(self, chi: Sequence) -> bool:
        return self.is_dominant(vsub(chi, self.rho))

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "cartan_matrix": [list(r) for r in self.cartan_matrix],
            "positive_roots": [list(r) for r in self.positive_roots],
            "rho": list(self.rho),
            "theta": list(self.theta),
            "dual_coxeter": self.dual_coxeter,
            "lattice_convention": "simply connected: coweights = coroot lattice, weights = full weight lattice",
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _positive_roots_from_cartan(cartan) -> list[tuple[int, ...]]:
    n = len(cartan)
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            # beta(H_i) = sum_j a_ij m_j
            for i in range(n):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                q = p - sum(cartan[i][j] * beta[j] for j in range(n))
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(found, key=lambda m: (sum(m), tuple(-x for x in m)))


def _build(label: str, cartan) -> RootDatum:
    cartan = tuple(tuple(int(x) for x in row) for row in cartan)
    return RootDatum(
        type_label=label,
        cartan_matrix=cartan,
        half_lengths=tuple(_symmetrizer(cartan)),
        positive_roots_rc=tuple(_positive_roots_from_cartan(cartan)),
    )


_CACHE: dict[str, RootDatum] = {}


def build_root_datum(type_label: str) -> RootDatum:
    """Root datum for one of ``SUPPORTED_TYPES``; instances are cached and shared."""
    key = str(type_label).upper()
    if key not in CARTAN_MATRICES:
        raise ConfigurationError(f"unsupported type {type_label!r}; choose from {', '.join(SUPPORTED_TYPES)}")
    if key not in _CACHE:
        _CACHE[key] = _build(key, CARTAN_MATRICES[key])
    return _CACHE[key]


def dual_coxeter(datum: RootDatum) -> int:
    return datum.dual_coxeter


def is_dominant(datum: RootDatum, chi) -> bool:
    return datum.is_dominant(chi)


def is_dominant_regular(datum: RootDatum, chi) -> bool:
    return datum.is_dominant_regular(chi)


@dataclass(frozen=True)
class Level:
    """A level kappa, i.e. the form (.,.)_kappa = kappa (.,.)_0."""

    datum: RootDatum
    kappa: int | Fraction

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_exact(self.kappa))

    @property
    def is_integral(self) -> bool:
        return isinstance(self.kappa, int)

    @property
    def shifted(self) -> int | Fraction:
        """kappa - kappa_c."""
        return as_exact(self.kappa - self.datum.critical_level)

    def form(self, x, y):
        return as_exact(self.kappa * self.datum.form(x, y))

    def coweight_form(self, lam, mu):
        return as_exact(self.kappa * self.datum.coweight_form(lam, mu))


def critical(datum: RootDatum) -> Level:
    return Level(datum, datum.critical_level)


def pair(lam, chi, datum: RootDatum | None = None):
    if datum is not None:
        return datum.pair(lam, chi)
    if len(lam) != len(chi):
        raise UsageError("coweight and weight have different ranks")
    return as_exact(sum(a * b for a, b in zip(vec(lam), vec(chi))))


def form_value(level: Level, x, y):
    return level.form(x, y)


def coweight_to_weight(level: Level, lam) -> Weight:
    return level.datum.coweight_to_weight(lam, level.kappa)
