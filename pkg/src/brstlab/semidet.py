"""Relative determinants and dimensions of semi-infinite subspaces of n(K).

Subspaces spanned by root vectors ``e_alpha t^n`` (alpha > 0) are modelled as
finite sets of affine roots ``(alpha, n)`` with ``|n| <= depth``.  Beyond the
window every subspace considered agrees with the baseline n(O), so finite
symmetric differences compute the relative invariants exactly.

Conventions: the Iwahori root set is ``n > 0``, or ``n = 0`` and ``alpha > 0``.
The determinant line of (U, V) is the U-excess factor followed by the dual of
the V-excess factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .rootdata import RootDatum, vadd, vscale, vsub
from .weyl import AffineWeylElement, dot_finite, enumerate_Waff_window, weyl_group

AffineRoot = tuple  # (root in fundamental coordinates, t-degree)


@dataclass(frozen=True)
class AffineRootWindow:
    datum: RootDatum
    entries: frozenset
    depth: int
    label: str = ""

    def is_complete(self) -> bool:
        """Outermost shells agree with n(O): everything at +depth, nothing at -depth."""
        for alpha in self.datum.positive_roots:
            if (alpha, self.depth) not in self.entries or (alpha, -self.depth) in self.entries:
                return False
        return True

    def __contains__(self, item) -> bool:
        return item in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def _in_iwahori(datum: RootDatum, alpha: Sequence, n: int) -> bool:
    if n > 0:
        return True
    if n < 0:
        return False
    return all(x >= 0 for x in datum.to_root_coords(alpha))


def baseline_window(datum: RootDatum, depth: int) -> AffineRootWindow:
    """n(O) = {(alpha, n) : alpha > 0, n >= 0}."""
    entries = frozenset((a, n) for a in datum.positive_roots for n in range(0, depth + 1))
    return AffineRootWindow(datum, entries, depth, "n(O)")


def required_depth(datum: RootDatum, w: AffineWeylElement) -> int:
    lam = w.translation
    shift = max((abs(datum.pair(lam, a)) for a in datum.positive_roots), default=0)
    return max(2 * (abs(sum(lam)) + 1), shift + 2)


def conjugated_subspace(datum: RootDatum, w: AffineWeylElement, depth: int | None = None) -> AffineRootWindow:
    """Window model of n(K) cap w i w^{-1}.

    ``(alpha, n)`` lies in it iff ``w^{-1}(alpha, n) = (wbar^{-1} alpha, n - alpha(lambda))``
    is an Iwahori root.
    """
    need = required_depth(datum, w)
    if depth is None:
        depth = need
    if depth < need:
        raise DomainError(f"depth {depth} is too small for {w.label}; need at least {need}")
    W = weyl_group(datum)
    winv = W.inverse(w.finite)
    entries = set()
    for alpha in datum.positive_roots:
        shift = datum.pair(w.translation, alpha)
        pre = winv.act(alpha)
        for n in range(-depth, depth + 1):
            if _in_iwahori(datum, pre, n - shift):
                entries.add((alpha, n))
    out = AffineRootWindow(datum, frozenset(entries), depth, w.label)
    if not out.is_complete():
        raise AssertionError(f"boundary shell touched for {w.label} at depth {depth}")
    return out


def relative_det_dim(U: AffineRootWindow, V: AffineRootWindow) -> tuple[tuple, int]:
    """(weight of det(U, V), dim(U, V))."""
    if U.datum != V.datum:
        raise DomainError("windows belong to different root data")
    if U.depth != V.depth:
        raise DomainError("windows have different depths")
    if not (U.is_complete() and V.is_complete()):
        raise DomainError("incomplete window: a boundary shell differs from n(O)")
    zero = (0,) * U.datum.rank
    weight = zero
    for alpha, _ in U.entries - V.entries:
        weight = vadd(weight, alpha)
    for alpha, _ in V.entries - U.entries:
        weight = vsub(weight, alpha)
    return weight, len(U.entries - V.entries) - len(V.entries - U.entries)


def predicted_det_dim(datum: RootDatum, w: AffineWeylElement) -> tuple[tuple, int]:
    """(wbar . 0 + kappa_c(lambda), -2 ht(lambda) - l(wbar))."""
    zero = (0,) * datum.rank
    weight = vadd(dot_finite(datum, w.finite, zero), datum.coweight_to_weight(w.translation, datum.critical_level))
    return weight, -2 * sum(w.translation) - w.finite.length


def translation_weight(datum: RootDatum, lam: Sequence) -> tuple:
    """sum over alpha > 0 of -alpha(lambda) alpha."""
    out = (0,) * datum.rank
    for alpha in datum.positive_roots:
        out = vadd(out, vscale(-datum.pair(lam, alpha), alpha))
    return out


@dataclass
class DetLemmaRow:
    element: AffineWeylElement
    predicted: tuple
    enumerated: tuple

    @property
    def passed(self) -> bool:
        return self.predicted == self.enumerated

    def to_json(self) -> dict:
        return {
            "w": self.element.label,
            "predicted": {"weight": list(self.predicted[0]), "dim": self.predicted[1]},
            "enumerated": {"weight": list(self.enumerated[0]), "dim": self.enumerated[1]},
            "pass": self.passed,
        }

    def tsv(self) -> str:
        p, e = self.predicted, self.enumerated
        return f"{self.element.label}\t{list(p[0])};{p[1]}\t{list(e[0])};{e[1]}\t{'pass' if self.passed else 'FAIL'}"


@dataclass
class DetLemmaReport:
    type_label: str
    max_height: int
    rows: list[DetLemmaRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def first_failure(self):
        return next((r for r in self.rows if not r.passed), None)

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "max_height": self.max_height,
            "count": len(self.rows),
            "passed": self.passed,
            "rows": [r.to_json() for r in self.rows],
        }

    def to_tsv(self) -> str:
        return "w\tpredicted\tenumerated\tpass\n" + "\n".join(r.tsv() for r in self.rows) + "\n"


def verify_det_lemma(datum: RootDatum, max_height: int, stop_on_failure: bool = True) -> DetLemmaReport:
    rows = []
    for w in enumerate_Waff_window(datum, max_height):
        U = conjugated_subspace(datum, w)
        V = baseline_window(datum, U.depth)
        row = DetLemmaRow(w, predicted_det_dim(datum, w), relative_det_dim(U, V))
        rows.append(row)
        if stop_on_failure and not row.passed:
            break
    return DetLemmaReport(datum.type_label, max_height, rows)
