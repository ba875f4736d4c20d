"""Exact counts and degree bookkeeping.

Everything here is exact integer/rational arithmetic; ranks in the nerve
spectral sequence are tracked only as "zero" versus "free, possibly of
infinite rank".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

ZERO = "0"
FREE = "free"

AUTOMATIC = "automatic"
NOT_AUTOMATIC = "degeneration not automatic"


def component_count(genus: int) -> Fraction:
    """``|Sp_g(Z/2)| / |S_{2g+2}| = 2^{g^2} prod_{k=1}^g (2^{2k} - 1) / (2g+2)!``."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    num = 2 ** (genus * genus) * math.prod(2 ** (2 * k) - 1 for k in range(1, genus + 1))
    return Fraction(num, math.factorial(2 * genus + 2))


def poincare_polynomial(genus: int) -> list[int]:
    """Coefficients (constant term first) of ``prod_{j=2}^{2g} (j t + 1)``."""
    coeffs = [1]
    for j in range(2, 2 * genus + 1):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] += j * c
        coeffs = nxt
    return coeffs


def moduli_betti(genus: int) -> int:
    """First Betti number of M_{0,2g+2}: the linear coefficient of its Poincare polynomial."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    return poincare_polynomial(genus)[1]


def moduli_betti_closed_form(genus: int) -> int:
    return genus * (2 * genus + 1) - 1


def weierstrass_split_types(n_points: int = 8, part: int = 3) -> int:
    """Number of ways to split the Weierstrass points into blocks of sizes ``part`` and ``n - part``.

    Only the count C(8, 3) = 56 is computed; the correspondence with boundary
    component types of the genus-3 hyperelliptic locus is not checked here.
    """
    return math.comb(n_points, part)


# --- nerve spectral sequence --------------------------------------------------


@dataclass(frozen=True)
class NerveInput:
    """``levels[s]`` lists the dimensions of the Euclidean cells making up the s-fold intersections."""

    levels: tuple[tuple[int, ...], ...]
    ambient_dim: int | None = None

    def __post_init__(self):
        levels = tuple(tuple(int(d) for d in lvl) for lvl in self.levels)
        if any(d < 0 for lvl in levels for d in lvl):
            raise ValueError("cell dimensions must be nonnegative")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_json(cls, obj: Mapping) -> NerveInput:
        if "levels" not in obj:
            raise ValueError("missing field 'levels'")
        return cls(tuple(tuple(lvl) for lvl in obj["levels"]), obj.get("ambient_dim"))

    def to_json(self) -> dict:
        return {"levels": [list(lvl) for lvl in self.levels], "ambient_dim": self.ambient_dim}


def boundary_configuration() -> NerveInput:
    """D_alpha^red: components are 8-cells (h_2 x h_1), double intersections 6-cells (h_1^3)."""
    return NerveInput(((8,), (6,)), ambient_dim=10)


@dataclass(frozen=True)
class NerveTable:
    entries: Mapping[tuple[int, int], str]

    def support(self) -> set[tuple[int, int]]:
        return {pos for pos, flag in self.entries.items() if flag != ZERO}

    def to_json(self) -> dict:
        return {"support": sorted([list(p) for p in self.support()])}


def nerve_e1(data: NerveInput) -> NerveTable:
    """``E_1^{s,t} = H_c^t(Y_s)``: a d-cell contributes a free group in degree d only."""
    entries = {}
    for s, dims in enumerate(data.levels):
        for t in set(dims):
            entries[(s, t)] = FREE
    return NerveTable(entries)


@dataclass(frozen=True)
class DegreeSupport:
    degrees: frozenset[int]
    degeneration: str
    differential_pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    shared_degrees: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "degrees": sorted(self.degrees),
            "degeneration": self.degeneration,
            "differential_pairs": [[list(a), list(b)] for a, b in self.differential_pairs],
            "shared_degrees": list(self.shared_degrees),
        }


def supported_degrees(table: NerveTable) -> DegreeSupport:
    """Total degrees ``s + t`` that can carry H_c, plus a degeneration verdict.

    ``d_r`` maps ``(s, t)`` to ``(s + r, t - r + 1)``.  Degeneration is
    reported automatic when no nonzero source has a nonzero target for any
    ``r >= 1`` and no total degree is hit by two positions; otherwise the
    obstructions are listed.
    """
    support = sorted(table.support())
    supp = set(support)
    pairs = []
    for s, t in support:
        for s2, t2 in support:
            r = s2 - s
            if r >= 1 and t2 == t - r + 1:
                pairs.append(((s, t), (s2, t2)))
    by_degree: dict[int, int] = {}
    for s, t in supp:
        by_degree[s + t] = by_degree.get(s + t, 0) + 1
    shared = tuple(sorted(k for k, n in by_degree.items() if n > 1))
    verdict = AUTOMATIC if not pairs and not shared else NOT_AUTOMATIC
    return DegreeSupport(frozenset(by_degree), verdict, tuple(pairs), shared)


def gysin_support(ambient_dim: int = 10, boundary_support: Iterable[int] = (7, 8),
                  complement_vanishes_from: int = 3) -> dict[int, str]:
    """Constraints on ``H_k(D)`` from the segment

        H_k(D - D^red) -> H_k(D) -> H_c^{n-k}(D^red)

    given that ``H_k(D - D^red) = 0`` for ``k >= complement_vanishes_from``
    and that ``H_c^*(D^red)`` is free and supported on ``boundary_support``.
    Values: ``"zero"``, ``"free"`` (injects into a free group) or ``"unconstrained"``.
    """
    support = set(boundary_support)
    out = {}
    for k in range(ambient_dim + 1):
        left_zero = k >= complement_vanishes_from
        right_zero = (ambient_dim - k) not in support
        if left_zero and right_zero:
            out[k] = "zero"
        elif left_zero:
            out[k] = "free"
        else:
            out[k] = "unconstrained"
    return out

