"""Half-integer theta characteristics as pairs of F2 bit-vectors.

A characteristic ``delta = (delta', delta'')`` in ``(1/2)Z^{2g} / Z^{2g}`` is
stored as two tuples of bits; bit ``b`` stands for the coordinate ``b/2``.
``top`` holds ``delta'`` (the shift of the summation index) and ``bottom``
holds ``delta''`` (the shift of ``z``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

EVEN = "even"
ODD = "odd"

_COMPACT = re.compile(r"^\s*(?:g=(\d+):)?\[([01]*)\|([01]*)\]\s*$")


class CharacteristicError(ValueError):
    pass


def _bits(value) -> tuple[int, ...]:
    if isinstance(value, str):
        if not set(value) <= {"0", "1"}:
            raise CharacteristicError(f"not a bit-string: {value!r}")
        return tuple(int(c) for c in value)
    out = tuple(int(b) for b in value)
    if any(b not in (0, 1) for b in out):
        raise CharacteristicError(f"bits must be 0 or 1, got {out}")
    return out


@dataclass(frozen=True, order=True)
class Characteristic:
    """A theta characteristic of genus ``g``.

    Instances are immutable and hashable, so they can be collected in sets.
    Ordering is the enumeration order: top bits are more significant than
    bottom bits, and within each vector the first coordinate is most
    significant.
    """

    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __init__(self, top, bottom):
        t, b = _bits(top), _bits(bottom)
        if len(t) != len(b) or len(t) == 0:
            raise CharacteristicError(
                f"top and bottom must have equal positive length, got {len(t)} and {len(b)}"
            )
        object.__setattr__(self, "top", t)
        object.__setattr__(self, "bottom", b)

    @property
    def genus(self) -> int:
        return len(self.top)

    @classmethod
    def zero(cls, genus: int) -> Characteristic:
        return cls((0,) * genus, (0,) * genus)

    @classmethod
    def parse(cls, text: str) -> Characteristic:
        """Parse ``"[110|100]"`` or ``"g=3:[110|100]"``."""
        m = _COMPACT.match(text)
        if m is None:
            raise CharacteristicError(f"cannot parse characteristic {text!r}")
        g, top, bottom = m.groups()
        delta = cls(top, bottom)
        if g is not None and int(g) != delta.genus:
            raise CharacteristicError(f"declared genus {g} does not match bits in {text!r}")
        return delta

    @property
    def parity(self) -> str:
        return parity(self)

    @property
    def is_even(self) -> bool:
        return parity(self) == EVEN

    def shifts(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(delta', delta'')`` as float arrays with entries in {0, 1/2}."""
        return 0.5 * np.array(self.top, dtype=float), 0.5 * np.array(self.bottom, dtype=float)

    def restrict(self, indices: Sequence[int]) -> Characteristic:
        """Characteristic on the coordinates ``indices`` (0-based), in that order."""
        return Characteristic([self.top[i] for i in indices], [self.bottom[i] for i in indices])

    def compact(self) -> str:
        return "[{}|{}]".format("".join(map(str, self.top)), "".join(map(str, self.bottom)))

    def __str__(self) -> str:
        return f"g={self.genus}:{self.compact()}"

    def __repr__(self) -> str:
        return f"Characteristic({self.compact()!r})"

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "top": "".join(map(str, self.top)),
            "bottom": "".join(map(str, self.bottom)),
        }

    @classmethod
    def from_json(cls, obj: dict) -> Characteristic:
        for key in ("genus", "top", "bottom"):
            if key not in obj:
                raise CharacteristicError(f"missing field {key!r}")
        if not isinstance(obj["top"], str) or not isinstance(obj["bottom"], str):
            raise CharacteristicError("fields 'top' and 'bottom' must be bit-strings")
        delta = cls(obj["top"], obj["bottom"])
        if obj["genus"] != delta.genus:
            raise CharacteristicError(
                f"field 'genus' is {obj['genus']} but bit-strings have length {delta.genus}"
            )
        return delta


def parity(delta: Characteristic) -> str:
    """``"even"`` iff the F2 dot product of top and bottom vanishes."""
    dot = sum(t & b for t, b in zip(delta.top, delta.bottom)) & 1
    return ODD if dot else EVEN


def direct_sum(parts: Iterable[Characteristic]) -> Characteristic:
    parts = list(parts)
    if not parts:
        raise CharacteristicError("direct_sum needs at least one part")
    top = tuple(b for p in parts for b in p.top)
    bottom = tuple(b for p in parts for b in p.bottom)
    return Characteristic(top, bottom)


def split(delta: Characteristic, block_sizes: Sequence[int]) -> list[Characteristic]:
    """Inverse of :func:`direct_sum` for consecutive blocks."""
    sizes = [int(s) for s in block_sizes]
    if any(s <= 0 for s in sizes) or sum(sizes) != delta.genus:
        raise CharacteristicError(
            f"block sizes {sizes} do not partition genus {delta.genus}"
        )
    out, start = [], 0
    for s in sizes:
        out.append(delta.restrict(range(start, start + s)))
        start += s
    return out


def split_grouping(delta: Characteristic, grouping: Sequence[Sequence[int]]) -> list[Characteristic]:
    """Split along an arbitrary partition of the coordinates (0-based index blocks)."""
    flat = sorted(i for block in grouping for i in block)
    if flat != list(range(delta.genus)):
        raise CharacteristicError(f"{grouping} is not a partition of range({delta.genus})")
    return [delta.restrict(block) for block in grouping]


def enumerate_characteristics(genus: int, parity_filter: str | None = None) -> list[Characteristic]:
    """All ``4**genus`` characteristics in lexicographic order, optionally filtered.

    >>> len(enumerate_characteristics(3, "even"))
    36
    """
    if genus < 1:
        raise CharacteristicError("genus must be positive")
    if parity_filter not in (None, EVEN, ODD):
        raise CharacteristicError(f"unknown parity filter {parity_filter!r}")
    out = []
    for bits in itertools.product((0, 1), repeat=2 * genus):
        delta = Characteristic(bits[:genus], bits[genus:])
        if parity_filter is None or parity(delta) == parity_filter:
            out.append(delta)
    return out


def count_by_parity(genus: int) -> dict[str, int]:
    """Closed forms 2^(g-1)(2^g + 1) even and 2^(g-1)(2^g - 1) odd."""
    return {
        EVEN: 2 ** (genus - 1) * (2**genus + 1),
        ODD: 2 ** (genus - 1) * (2**genus - 1),
    }
