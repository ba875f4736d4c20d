"""Siegel upper half space, block-diagonal strata and the action of Sp_g(Z).

Period matrices are complex symmetric ``g x g`` arrays with positive-definite
imaginary part.  Symplectic matrices are kept as exact Python integers
(``dtype=object``) so that ``M^T J M == J`` is checked without rounding; only
the fractional-linear action on period matrices is done in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import LCG64

DEFAULT_TOL = 1e-9
# entries beyond this lose exactness once converted to float64 in `act`
MAX_ENTRY = 2**53


class SiegelError(ValueError):
    """Input is not a point of Siegel space (or not a valid symplectic matrix)."""


class DegenerateActionError(ArithmeticError):
    """C @ Omega + D is numerically singular."""


def is_member(omega, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``omega`` is symmetric and ``Im omega`` is positive definite, both to ``tol``."""
    a = np.asarray(omega, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SiegelError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.T), initial=0.0) > tol:
        return False
    y = 0.5 * (a.imag + a.imag.T)
    return bool(np.linalg.eigvalsh(y)[0] > tol)


class PeriodMatrix:
    """A point of the Siegel upper half space ``h_g``.

    The stored matrix is exactly symmetric: an input whose symmetry residual
    is within ``tol`` is replaced by its symmetrization, anything else is
    rejected along with inputs whose imaginary part is not positive definite.
    """

    __slots__ = ("_m",)

    def __init__(self, entries, tol: float = DEFAULT_TOL):
        a = np.array(entries, dtype=complex)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise SiegelError(f"period matrix must be square and nonempty, got shape {a.shape}")
        asym = float(np.max(np.abs(a - a.T)))
        if asym > tol:
            raise SiegelError(f"symmetry: residual {asym:.3e} exceeds tolerance {tol:.1e}")
        a = 0.5 * (a + a.T)
        lam = float(np.linalg.eigvalsh(a.imag)[0])
        if not lam > tol:
            raise SiegelError(
                f"positive-definite imaginary part: smallest eigenvalue {lam:.3e} <= {tol:.1e}"
            )
        a.setflags(write=False)
        self._m = a

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def genus(self) -> int:
        return self._m.shape[0]

    @property
    def real(self) -> np.ndarray:
        return self._m.real

    @property
    def imag(self) -> np.ndarray:
        return self._m.imag

    def min_imag_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self._m.imag)[0])

    def __array__(self, dtype=None, copy=None):
        return self._m if dtype is None else self._m.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, PeriodMatrix):
            return NotImplemented
        return self._m.shape == other._m.shape and bool(np.array_equal(self._m, other._m))

    def __hash__(self):
        return hash(self._m.tobytes())

    def __repr__(self):
        return f"PeriodMatrix(genus={self.genus}, {np.array2string(self._m, precision=4)})"

    def to_json(self) -> dict:
        return {"genus": self.genus, "re": self._m.real.tolist(), "im": self._m.imag.tolist()}

    @classmethod
    def from_json(cls, obj: dict, tol: float = DEFAULT_TOL) -> PeriodMatrix:
        for key in ("genus", "re", "im"):
            if key not in obj:
                raise SiegelError(f"missing field {key!r}")
        re_, im_ = np.array(obj["re"], dtype=float), np.array(obj["im"], dtype=float)
        g = obj["genus"]
        if re_.shape != (g, g) or im_.shape != (g, g):
            raise SiegelError(f"fields 're'/'im' must be {g}x{g}, got {re_.shape} and {im_.shape}")
        return cls(re_ + 1j * im_, tol=tol)


def as_period_matrix(omega) -> PeriodMatrix:
    return omega if isinstance(omega, PeriodMatrix) else PeriodMatrix(omega)


# --- block structure --------------------------------------------------------


@dataclass(frozen=True)
class BlockShape:
    """Consecutive block sizes ``(g_1, ..., g_n)``."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s <= 0 for s in sizes):
            raise SiegelError(f"block sizes must be positive, got {self.sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def genus(self) -> int:
        return sum(self.sizes)

    def grouping(self) -> tuple[tuple[int, ...], ...]:
        out, start = [], 0
        for s in self.sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return tuple(out)


def block_sum(parts: Iterable) -> PeriodMatrix:
    """Block-diagonal assembly ``Omega_1 (+) ... (+) Omega_n``."""
    mats = [as_period_matrix(p).matrix for p in parts]
    if not mats:
        raise SiegelError("block_sum needs at least one part")
    g = sum(m.shape[0] for m in mats)
    out = np.zeros((g, g), dtype=complex)
    k = 0
    for m in mats:
        n = m.shape[0]
        out[k : k + n, k : k + n] = m
        k += n
    return PeriodMatrix(out)


def off_block_residual(omega, grouping: Sequence[Sequence[int]]) -> float:
    """Largest modulus of an entry coupling two different blocks of ``grouping``."""
    a = np.asarray(omega, dtype=complex)
    label = np.empty(a.shape[0], dtype=int)
    for b, block in enumerate(grouping):
        label[list(block)] = b
    mask = label[:, None] != label[None, :]
    return float(np.max(np.abs(a[mask]), initial=0.0))


def is_block_diagonal(omega, shape, tol: float = DEFAULT_TOL) -> bool:
    """``shape`` is a :class:`BlockShape`, a list of sizes, or a grouping of index blocks."""
    grouping = _as_grouping(shape)
    return off_block_residual(omega, grouping) <= tol


def _as_grouping(shape) -> tuple[tuple[int, ...], ...]:
    if isinstance(shape, BlockShape):
        return shape.grouping()
    shape = list(shape)
    if all(isinstance(s, (int, np.integer)) for s in shape):
        return BlockShape(tuple(shape)).grouping()
    return tuple(tuple(int(i) for i in block) for block in shape)


def embed_grouping(parts: Sequence, grouping: Sequence[Sequence[int]]) -> PeriodMatrix:
    """Place ``parts[b]`` on the coordinates ``grouping[b]`` (a permuted block sum)."""
    mats = [as_period_matrix(p).matrix for p in parts]
    if len(mats) != len(grouping):
        raise SiegelError("one part per block is required")
    g = sum(len(b) for b in grouping)
    if sorted(i for b in grouping for i in b) != list(range(g)):
        raise SiegelError(f"{grouping} is not a partition of range({g})")
    out = np.zeros((g, g), dtype=complex)
    for m, block in zip(mats, grouping):
        if m.shape[0] != len(block):
            raise SiegelError(f"block {block} needs a {len(block)}x{len(block)} part")
        idx = np.array(block)
        out[np.ix_(idx, idx)] = m
    return PeriodMatrix(out)


def sample_generic(genus: int, rng_seed: int) -> PeriodMatrix:
    """Seeded random point ``X + iY`` with ``Y = I + L^T L``.

    Draw order from :class:`~thetalocus.rng.LCG64`: the upper triangle of
    ``X`` row by row (diagonal included) uniform in [-1, 1], then ``L`` row by
    row uniform in [-1/2, 1/2].
    """
    rng = LCG64(rng_seed)
    g = int(genus)
    x = np.zeros((g, g))
    for j in range(g):
        for k in range(j, g):
            x[j, k] = x[k, j] = rng.uniform(-1.0, 1.0)
    lower = np.array([[rng.uniform(-0.5, 0.5) for _ in range(g)] for _ in range(g)])
    y = np.eye(g) + lower.T @ lower
    y = 0.5 * (y + y.T)
    return PeriodMatrix(x + 1j * y)


# --- Sp_g(Z) -----------------------------------------------------------------


def standard_form(genus: int) -> np.ndarray:
    """``J = [[0, I], [-I, 0]]`` as an exact integer matrix."""
    g = int(genus)
    j = np.zeros((2 * g, 2 * g), dtype=object)
    j[:, :] = 0
    for i in range(g):
        j[i, g + i] = 1
        j[g + i, i] = -1
    return j


def _int_matrix(entries) -> np.ndarray:
    a = np.array(entries, dtype=object)
    if a.ndim != 2:
        raise SiegelError("expected a 2-d integer matrix")
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        if isinstance(v, (float, np.floating)):
            if v != int(v):
                raise SiegelError(f"non-integer entry {v}")
        out[idx] = int(v)
    return out


def is_symplectic(m) -> bool:
    a = _int_matrix(m)
    n = a.shape[0]
    if a.shape != (n, n) or n % 2:
        return False
    j = standard_form(n // 2)
    return bool(np.array_equal(a.T.dot(j).dot(a), j))


class SymplecticMatrix:
    """An element of Sp_g(Z), stored with exact integer entries."""

    __slots__ = ("_m",)

    def __init__(self, entries):
        a = _int_matrix(entries)
        if not is_symplectic(a):
            raise SiegelError("matrix does not satisfy M^T J M = J")
        a.setflags(write=False)
        self._m = a

    @classmethod
    def identity(cls, genus: int) -> SymplecticMatrix:
        return cls(np.eye(2 * genus, dtype=int))

    @property
    def genus(self) -> int:
        return self._m.shape[0] // 2

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def blocks(self):
        """``(A, B, C, D)`` as exact integer arrays."""
        g = self.genus
        m = self._m
        return m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:]

    def max_entry(self) -> int:
        return max(abs(int(v)) for v in self._m.flat)

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if other.genus != self.genus:
            raise SiegelError("genus mismatch")
        return SymplecticMatrix(self._m.dot(other._m))

    def inverse(self) -> SymplecticMatrix:
        # M^{-1} = -J M^T J
        j = standard_form(self.genus)
        return SymplecticMatrix(-(j.dot(self._m.T).dot(j)))

    def is_level2(self) -> bool:
        """``M == I (mod 2)``, membership in the level-2 congruence subgroup."""
        eye = np.eye(2 * self.genus, dtype=int)
        return all((int(a) - int(b)) % 2 == 0 for a, b in zip(self._m.flat, eye.flat))

    def __eq__(self, other):
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        return bool(np.array_equal(self._m, other._m))

    def __hash__(self):
        return hash(tuple(int(v) for v in self._m.flat))

    def __repr__(self):
        return f"SymplecticMatrix({self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self._m]


def act(m: SymplecticMatrix, omega, tol: float = DEFAULT_TOL) -> PeriodMatrix:
    """``M . Omega = (A Omega + B)(C Omega + D)^{-1}``."""
    if not isinstance(m, SymplecticMatrix):
        m = SymplecticMatrix(m)
    omega = as_period_matrix(omega)
    if m.genus != omega.genus:
        raise SiegelError(f"genus mismatch: M has genus {m.genus}, Omega has genus {omega.genus}")
    if m.max_entry() > MAX_ENTRY:
        raise OverflowError("symplectic matrix entries exceed 2**53")
    a, b, c, d = (x.astype(float) for x in m.blocks())
    w = omega.matrix
    num = a @ w + b
    den = c @ w + d
    cond = np.linalg.cond(den)
    if not np.isfinite(cond) or cond > 1e12:
        raise DegenerateActionError(f"C Omega + D is numerically singular (condition {cond:.3e})")
    # X = num @ inv(den)  <=>  den^T X^T = num^T
    out = np.linalg.solve(den.T, num.T).T
    scale = max(1.0, float(np.max(np.abs(out))))
    return PeriodMatrix(out, tol=max(tol, 1e-10 * scale * cond))


def block_embed(parts: Sequence[SymplecticMatrix]) -> SymplecticMatrix:
    """Embed ``Sp_{g_1}(Z) x ... x Sp_{g_n}(Z)`` block-diagonally into ``Sp_g(Z)``."""
    parts = list(parts)
    g = sum(p.genus for p in parts)
    out = np.zeros((2 * g, 2 * g), dtype=object)
    out[:, :] = 0
    k = 0
    for p in parts:
        h = p.genus
        a, b, c, d = p.blocks()
        out[k : k + h, k : k + h] = a
        out[k : k + h, g + k : g + k + h] = b
        out[g + k : g + k + h, k : k + h] = c
        out[g + k : g + k + h, g + k : g + k + h] = d
        k += h
    return SymplecticMatrix(out)


def translation(sym) -> SymplecticMatrix:
    """``Omega -> Omega + B`` for a symmetric integer matrix ``B``."""
    b = _int_matrix(sym)
    g = b.shape[0]
    out = np.eye(2 * g, dtype=int).astype(object)
    out[:g, g:] = b
    return SymplecticMatrix(out)


def gl_embedding(u) -> SymplecticMatrix:
    """``Omega -> U Omega U^T`` for ``U`` in GL_g(Z)."""
    u = _int_matrix(u)
    g = u.shape[0]
    det = round(np.linalg.det(u.astype(float)))
    if abs(det) != 1:
        raise SiegelError("U must be unimodular")
    # adjugate-free exact inverse: solve in floats, round, then verify
    u_inv = np.rint(np.linalg.inv(u.astype(float))).astype(int).astype(object)
    if not np.array_equal(u.dot(u_inv), np.eye(g, dtype=int)):
        raise SiegelError("failed to invert U exactly")
    out = np.zeros((2 * g, 2 * g), dtype=object)
    out[:, :] = 0
    out[:g, :g] = u
    out[g:, g:] = u_inv.T
    return SymplecticMatrix(out)


def permutation(perm: Sequence[int]) -> SymplecticMatrix:
    """Symplectic matrix that relabels coordinates: new coordinate ``i`` is old ``perm[i]``."""
    g = len(perm)
    u = np.zeros((g, g), dtype=int)
    for i, p in enumerate(perm):
        u[i, p] = 1
    return gl_embedding(u)


def generators(genus: int) -> list[SymplecticMatrix]:
    """A generating set of Sp_g(Z) closed under inverses.

    Contains the inversion ``J`` and ``J^{-1} = -J``, elementary translations
    ``Omega -> Omega +/- E`` (``E`` running over ``E_jj`` and ``E_jk + E_kj``),
    and the GL_g(Z) moves ``Omega -> U Omega U^T`` for elementary transvections,
    their inverses and the sign flip of the first coordinate.
    """
    g = int(genus)
    if not 1 <= g <= 4:
        raise SiegelError("generators are provided for 1 <= genus <= 4")
    j = standard_form(g)
    out = [SymplecticMatrix(j), SymplecticMatrix(-j)]
    for a in range(g):
        for b in range(a, g):
            e = np.zeros((g, g), dtype=int)
            e[a, b] = e[b, a] = 1
            out.append(translation(e))
            out.append(translation(-e))
    for a in range(g):
        for b in range(g):
            if a != b:
                u = np.eye(g, dtype=int)
                u[a, b] = 1
                out.append(gl_embedding(u))
                u[a, b] = -1
                out.append(gl_embedding(u))
    flip = np.eye(g, dtype=int)
    flip[0, 0] = -1
    out.append(gl_embedding(flip))
    return out


def random_word(genus: int, length: int, rng_seed: int) -> SymplecticMatrix:
    """Product of ``length`` generators, each picked by :class:`LCG64` from ``generators(genus)``."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    gens = generators(genus)
    rng = LCG64(rng_seed)
    m = SymplecticMatrix.identity(genus)
    for _ in range(length):
        m = m @ gens[rng.randbelow(len(gens))]
        if m.max_entry() > MAX_ENTRY:
            raise OverflowError(f"word entries exceed 2**53 after {length} letters")
    return m
