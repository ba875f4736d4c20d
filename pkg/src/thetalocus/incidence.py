"""Which even genus-3 thetanulls vanish on the reducible strata of h_3.

Every question is answered twice: exactly, by splitting characteristics over
F2 along the block structure, and numerically, by evaluating the 36 even
thetanulls at sampled block-diagonal period matrices and classifying the
magnitudes with the two-threshold rule of :func:`thetanum.classify`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .charalg import EVEN, ODD, Characteristic, enumerate_characteristics, split_grouping
from .rng import LCG64
from .siegel import (
    DEFAULT_TOL,
    PeriodMatrix,
    SymplecticMatrix,
    act,
    embed_grouping,
    off_block_residual,
    sample_generic,
)
from .thetanum import DEFAULT_EVAL_TOL, TOL_NONZERO, TOL_ZERO, classify, eval_thetanull

GENERIC = "generic"
RED = "red"
RED_SING = "red_sing"
KINDS = (GENERIC, RED, RED_SING)

SINGLETONS = ((0,), (1,), (2,))
# minimum |Omega_0[0, 1]| for the genus-2 block of a red point
_OFFDIAG_MARGIN = 1e-3
_MAX_ATTEMPTS = 100


class IncidenceError(ValueError):
    pass


class ClassificationUncertain(ArithmeticError):
    """Some thetanull magnitudes fell between the zero and nonzero thresholds."""

    def __init__(self, message: str, offending: Sequence[Characteristic]):
        super().__init__(message)
        self.offending = list(offending)


def _canonical(grouping) -> tuple[tuple[int, ...], ...]:
    blocks = [tuple(sorted(int(i) for i in b)) for b in grouping]
    if sorted(i for b in blocks for i in b) != [0, 1, 2]:
        raise IncidenceError(f"{grouping} is not a partition of {{0, 1, 2}}")
    return tuple(sorted(blocks, key=lambda b: (-len(b), b)))


def _normalize_grouping(grouping) -> tuple[tuple[int, ...], ...]:
    items = list(grouping)
    if all(isinstance(s, int) for s in items):
        # block sizes such as [2, 1] or [1, 2]: consecutive blocks
        out, start = [], 0
        for s in items:
            out.append(tuple(range(start, start + s)))
            start += s
        items = out
    return _canonical(items)


def red_groupings() -> list[tuple[tuple[int, ...], ...]]:
    """The three coordinate [2,1] groupings, ordered by the separated coordinate."""
    return [_canonical([tuple(i for i in range(3) if i != l), (l,)]) for l in range(3)]


def separated_coordinate(grouping) -> int:
    g = _normalize_grouping(grouping)
    if [len(b) for b in g] != [2, 1]:
        raise IncidenceError(f"{grouping} is not of shape [2,1]")
    return g[1][0]


@dataclass(frozen=True)
class StratumPoint:
    kind: str
    grouping: tuple[tuple[int, ...], ...]
    data: PeriodMatrix
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise IncidenceError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "grouping", _canonical(self.grouping))
        shape = [len(b) for b in self.grouping]
        expected = {GENERIC: [3], RED: [2, 1], RED_SING: [1, 1, 1]}[self.kind]
        if shape != expected:
            raise IncidenceError(f"kind {self.kind} needs block shape {expected}, got {shape}")
        if self.data.genus != 3:
            raise IncidenceError("stratum points live in h_3")
        if off_block_residual(self.data, self.grouping) > DEFAULT_TOL:
            raise IncidenceError(f"data is not block-diagonal for grouping {self.grouping}")
        if self.kind == RED:
            j, k = self.grouping[0]
            if abs(self.data.matrix[j, k]) <= _OFFDIAG_MARGIN:
                raise IncidenceError("genus-2 block is (nearly) reducible")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "grouping": [list(b) for b in self.grouping],
            "omega": self.data.to_json(),
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> StratumPoint:
        for key in ("kind", "grouping", "omega"):
            if key not in obj:
                raise IncidenceError(f"missing field {key!r}")
        return cls(obj["kind"], obj["grouping"], PeriodMatrix.from_json(obj["omega"]), obj.get("seed"))


def _genus2_generic(omega0: PeriodMatrix, tol: float) -> bool:
    if abs(omega0.matrix[0, 1]) <= _OFFDIAG_MARGIN:
        return False
    return all(
        eval_thetanull(d, omega0, tol).normalized() > TOL_NONZERO
        for d in enumerate_characteristics(2, EVEN)
    )


def sample_point(kind: str, seed: int, grouping=None, tol: float = DEFAULT_EVAL_TOL) -> StratumPoint:
    """Seeded point of the given stratum kind.

    ``red`` points are ``Omega_0 (+) tau_0`` placed on ``grouping`` (default
    ``((0, 1), (2,))``) with ``Omega_0`` resampled until it is off the diagonal
    and all ten even genus-2 thetanulls clear the nonzero threshold.
    Sub-seeds are drawn from an :class:`LCG64` started at ``seed``.
    """
    rng = LCG64(seed)
    if kind == GENERIC:
        return StratumPoint(GENERIC, ((0, 1, 2),), sample_generic(3, rng.next_u64()), seed)
    if kind == RED_SING:
        taus = [sample_generic(1, rng.next_u64()) for _ in range(3)]
        return StratumPoint(RED_SING, SINGLETONS, embed_grouping(taus, SINGLETONS), seed)
    if kind == RED:
        grouping = _canonical(grouping or ((0, 1), (2,)))
        if [len(b) for b in grouping] != [2, 1]:
            raise IncidenceError(f"red points need a [2,1] grouping, got {grouping}")
        for _ in range(_MAX_ATTEMPTS):
            omega0 = sample_generic(2, rng.next_u64())
            tau0 = sample_generic(1, rng.next_u64())
            if _genus2_generic(omega0, tol):
                return StratumPoint(RED, grouping, embed_grouping([omega0, tau0], grouping), seed)
        raise IncidenceError(f"no generic genus-2 block found in {_MAX_ATTEMPTS} attempts")
    raise IncidenceError(f"unknown kind {kind!r}")


# --- exact path ----------------------------------------------------------------


def vanishing_set_combinatorial(grouping) -> frozenset[Characteristic]:
    """Even genus-3 characteristics forced to vanish on the coordinate stratum.

    Shape [2,1]: both factors odd.  Shape [1,1,1]: exactly two odd factors.
    """
    g = _normalize_grouping(grouping)
    shape = [len(b) for b in g]
    if shape not in ([2, 1], [1, 1, 1]):
        raise IncidenceError(f"unsupported grouping {grouping}; need shape [2,1] or [1,1,1]")
    out = set()
    for delta in enumerate_characteristics(3, EVEN):
        # an even delta splits with an even number of odd factors
        if sum(f.parity == ODD for f in split_grouping(delta, g)) == 2:
            out.add(delta)
    return frozenset(out)


def components_containing(delta: Characteristic, grouping=SINGLETONS) -> frozenset:
    """The [2,1] coordinate strata through a [1,1,1] point that lie inside ``D_delta``.

    These are the groupings separating off one of the two odd genus-1
    positions of ``delta``; the result always has two elements.
    """
    if [len(b) for b in _normalize_grouping(grouping)] != [1, 1, 1]:
        raise IncidenceError("components_containing needs the [1,1,1] stratum")
    if delta not in vanishing_set_combinatorial(SINGLETONS):
        raise IncidenceError(f"{delta} does not vanish at points of h_1^3")
    return frozenset(g for g in red_groupings() if delta in vanishing_set_combinatorial(g))


@dataclass(frozen=True)
class Census:
    components_of_red_at_point: int
    hyp_per_red_point: int
    incidences_with_multiplicity: int
    distinct_hyp: int
    containments_per_delta: int
    max_containments: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def local_intersection_census() -> Census:
    """Double count of hyperelliptic components through a point of h_3^{red,sing}.

    Each of the three [2,1] strata through the point carries its own
    vanishing set; summing their sizes counts the 9 distinct components with
    multiplicity.
    """
    reds = red_groupings()
    per_red = {len(vanishing_set_combinatorial(g)) for g in reds}
    if len(per_red) != 1:
        raise AssertionError(f"[2,1] strata have unequal vanishing counts {per_red}")
    singular = vanishing_set_combinatorial(SINGLETONS)
    containments = {len(components_containing(d)) for d in singular}
    with_mult = sum(len(vanishing_set_combinatorial(g)) for g in reds)
    if with_mult != sum(len(components_containing(d)) for d in singular):
        raise AssertionError("double count does not balance")
    return Census(
        components_of_red_at_point=len(reds),
        hyp_per_red_point=per_red.pop(),
        incidences_with_multiplicity=with_mult,
        distinct_hyp=len(singular),
        containments_per_delta=containments.pop() if len(containments) == 1 else -1,
        max_containments=max(len(components_containing(d)) for d in singular),
    )


# --- numeric path ------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceReport:
    point: StratumPoint
    vanishing_even: frozenset
    magnitudes: dict = field(compare=False)
    tol_zero: float = TOL_ZERO
    tol_nonzero: float = TOL_NONZERO

    @property
    def count(self) -> int:
        return len(self.vanishing_even)

    def margins(self) -> tuple[float, float]:
        """(largest vanishing magnitude, smallest nonvanishing magnitude)."""
        zero = [m for d, m in self.magnitudes.items() if d in self.vanishing_even]
        nonzero = [m for d, m in self.magnitudes.items() if d not in self.vanishing_even]
        return max(zero, default=0.0), min(nonzero, default=float("inf"))

    def expected(self) -> frozenset:
        if self.point.kind == GENERIC:
            return frozenset()
        return vanishing_set_combinatorial(self.point.grouping)

    def agrees(self) -> bool:
        return self.vanishing_even == self.expected()

    def to_json(self) -> dict:
        largest_zero, smallest_nonzero = self.margins()
        return {
            "point": self.point.to_json(),
            "vanishing_even": [d.to_json() for d in sorted(self.vanishing_even)],
            "count": self.count,
            "magnitudes": {d.compact(): m for d, m in sorted(self.magnitudes.items())},
            "tol_zero": self.tol_zero,
            "tol_nonzero": self.tol_nonzero,
            "largest_vanishing": largest_zero,
            "smallest_nonvanishing": smallest_nonzero,
            "agrees_with_exact": self.agrees(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> IncidenceReport:
        for key in ("point", "vanishing_even", "magnitudes"):
            if key not in obj:
                raise IncidenceError(f"missing field {key!r}")
        return cls(
            StratumPoint.from_json(obj["point"]),
            frozenset(Characteristic.from_json(d) for d in obj["vanishing_even"]),
            {Characteristic.parse(k): float(v) for k, v in obj["magnitudes"].items()},
            float(obj.get("tol_zero", TOL_ZERO)),
            float(obj.get("tol_nonzero", TOL_NONZERO)),
        )


def _classify_all(omega, tol, tol_zero, tol_nonzero):
    mags, zero, unsure = {}, set(), []
    for delta in enumerate_characteristics(3, EVEN):
        mag = eval_thetanull(delta, omega, tol).normalized()
        mags[delta] = mag
        c = classify(mag, tol_zero, tol_nonzero)
        if c == "zero":
            zero.add(delta)
        elif c == "indeterminate":
            unsure.append(delta)
    if unsure:
        raise ClassificationUncertain(
            "magnitudes between thresholds for " + ", ".join(d.compact() for d in unsure), unsure
        )
    return frozenset(zero), mags


def vanishing_set_numeric(point: StratumPoint, tol: float = DEFAULT_EVAL_TOL,
                          tol_zero: float = TOL_ZERO, tol_nonzero: float = TOL_NONZERO) -> IncidenceReport:
    """Evaluate the 36 even thetanulls at ``point`` and collect the vanishing ones."""
    zero, mags = _classify_all(point.data, tol, tol_zero, tol_nonzero)
    return IncidenceReport(point, zero, mags, tol_zero, tol_nonzero)


def vanishing_count(omega, tol: float = DEFAULT_EVAL_TOL, tol_zero: float = TOL_ZERO,
                    tol_nonzero: float = TOL_NONZERO) -> int:
    return len(_classify_all(omega, tol, tol_zero, tol_nonzero)[0])


def sp_invariance_check(point: StratumPoint, m: SymplecticMatrix, tol: float = DEFAULT_EVAL_TOL) -> bool:
    """Whether the vanishing count at ``M . point`` equals the count at ``point``."""
    if m.genus != 3:
        raise IncidenceError("need a genus-3 symplectic matrix")
    before = vanishing_count(point.data, tol)
    after = vanishing_count(act(m, point.data), tol)
    return before == after


def excluded_grouping(delta: Characteristic) -> tuple[tuple[int, ...], ...]:
    """The [2,1] grouping through an h_1^3 point that is not contained in ``D_delta``."""
    inside = components_containing(delta)
    (out,) = [g for g in red_groupings() if g not in inside]
    return out


def all_red_sing_pairs():
    """(delta, grouping, contained?) over the 9 vanishing deltas and the 3 [2,1] groupings."""
    singular = sorted(vanishing_set_combinatorial(SINGLETONS))
    for delta, g in itertools.product(singular, red_groupings()):
        yield delta, g, g in components_containing(delta)
