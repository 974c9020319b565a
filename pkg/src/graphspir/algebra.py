"""Exact arithmetic over prime fields and over the rationals.

Rank and left-solving of small dense matrices over F_q are the workhorses of
every entropy computation in this package: for linear answer maps applied to
uniform independent sources, entropy in q-ary units equals matrix rank, so all
verification reduces to exact integer linear algebra.  Rates and randomness
ratios are plain stdlib fractions, which are always kept in lowest terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction

_KNOWN_PRIMES: set[int] = set()


def is_prime(n: int) -> bool:
    """Trial-division primality test; moduli here are small."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_modulus(q: int) -> int:
    """Validate a field modulus, raising ValueError for non-primes."""
    if q not in _KNOWN_PRIMES:
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime; F_q needs a prime q")
        _KNOWN_PRIMES.add(q)
    return q


def inverse_mod(a: int, q: int) -> int:
    """Multiplicative inverse of a nonzero residue (Fermat; q prime)."""
    a %= q
    if a == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    return pow(a, q - 2, q)


@dataclass(frozen=True)
class FieldElement:
    """One residue of F_q.  Mixed-modulus arithmetic is rejected."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        check_modulus(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _match(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ValueError(
                f"modulus mismatch: F_{self.modulus} vs F_{other.modulus}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return FieldElement((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return FieldElement((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return FieldElement((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.modulus, self.modulus)

    def inverse(self) -> "FieldElement":
        return FieldElement(inverse_mod(self.value, self.modulus), self.modulus)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return self * other.inverse()

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


# ---------------------------------------------------------------------------
# Row-level engines.  Rows are plain integer sequences (dense) for general q,
# or single bit-packed integers for q = 2.  These are the hot paths shared by
# FieldMatrix and the audit sweeps.
# ---------------------------------------------------------------------------


def gf2_pack(row: Sequence[int]) -> int:
    """Pack a 0/1 row into an integer, bit i = column i."""
    bits = 0
    for i, v in enumerate(row):
        if v & 1:
            bits |= 1 << i
    return bits


def gf2_echelon(rows: Iterable[int]) -> list[int]:
    """Echelon basis (descending leading bits) of bit-packed GF(2) rows."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            if row ^ b < row:  # b's leading bit is set in row
                row ^= b
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return basis


def gf2_reduce(vec: int, basis: list[int]) -> int:
    """Residual of vec after elimination against an echelon basis."""
    for b in basis:
        if vec ^ b < vec:
            vec ^= b
    return vec


def gf2_rank(rows: Iterable[int]) -> int:
    return len(gf2_echelon(rows))


def gf2_solve_left(target: int, rows: Sequence[int], cols: int) -> Optional[int]:
    """Find bit-packed x with xM = target over GF(2); None if unsolvable.

    Rows are bit-packed with `cols` meaningful bits.  The augmented trick keeps
    per-row history in the low bits: row i is stored as (row << n) | (1 << i),
    and elimination only ever pivots on the shifted (vector) part, so the low
    bits of the reduced target record which original rows were combined.
    """
    n = len(rows)
    history_mask = (1 << n) - 1
    basis: list[int] = []
    for i, row in enumerate(rows):
        aug = (row << n) | (1 << i)
        for b in basis:
            if (aug ^ b) >> n < aug >> n:
                aug ^= b
        if aug >> n:
            basis.append(aug)
            basis.sort(reverse=True)
    t = target << n
    for b in basis:
        if (t ^ b) >> n < t >> n:
            t ^= b
    if t >> n:
        return None
    return t & history_mask


def modq_echelon(rows: Iterable[Sequence[int]], q: int) -> list[list[int]]:
    """Row-echelon basis of dense rows over F_q (pivots normalized to 1)."""
    basis: list[list[int]] = []  # each with leading coefficient 1
    pivots: list[int] = []
    for row in rows:
        work = [v % q for v in row]
        for b, p in zip(basis, pivots):
            if work[p]:
                f = work[p]
                for c in range(len(work)):
                    work[c] = (work[c] - f * b[c]) % q
        lead = next((c for c, v in enumerate(work) if v), None)
        if lead is not None:
            inv = inverse_mod(work[lead], q)
            work = [(v * inv) % q for v in work]
            basis.append(work)
            pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [basis[i] for i in order]


def modq_rank(rows: Iterable[Sequence[int]], q: int) -> int:
    return len(modq_echelon(rows, q))


def modq_solve_left(
    target: Sequence[int], rows: Sequence[Sequence[int]], q: int
) -> Optional[tuple[int, ...]]:
    """Find x with xM = target over F_q; None if target is outside the row space."""
    n = len(rows)
    width = len(target)
    # Augment each row with its history vector, eliminate on the row part only.
    basis: list[tuple[list[int], list[int]]] = []
    pivots: list[int] = []
    for i, row in enumerate(rows):
        work = [v % q for v in row]
        hist = [0] * n
        hist[i] = 1
        for (b, bh), p in zip(basis, pivots):
            if work[p]:
                f = work[p]
                for c in range(width):
                    work[c] = (work[c] - f * b[c]) % q
                for c in range(n):
                    hist[c] = (hist[c] - f * bh[c]) % q
        lead = next((c for c, v in enumerate(work) if v), None)
        if lead is not None:
            inv = inverse_mod(work[lead], q)
            work = [(v * inv) % q for v in work]
            hist = [(v * inv) % q for v in hist]
            basis.append((work, hist))
            pivots.append(lead)
    t = [v % q for v in target]
    coeffs = [0] * n
    for (b, bh), p in zip(basis, pivots):
        if t[p]:
            f = t[p]
            for c in range(width):
                t[c] = (t[c] - f * b[c]) % q
            for c in range(n):
                coeffs[c] = (coeffs[c] + f * bh[c]) % q
    if any(t):
        return None
    return tuple(coeffs)


@dataclass(frozen=True)
class FieldMatrix:
    """Dense matrix over F_q; entries stored as plain residues."""

    entries: tuple[tuple[int, ...], ...]
    modulus: int

    def __post_init__(self) -> None:
        check_modulus(self.modulus)
        q = self.modulus
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged rows")
        object.__setattr__(
            self, "entries", tuple(tuple(v % q for v in r) for r in self.entries)
        )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], q: int) -> "FieldMatrix":
        return cls(tuple(tuple(r) for r in rows), q)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.entries[i][j], self.modulus)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(tuple(zip(*self.entries)) if self.entries else (), self.modulus)


def rank(matrix: FieldMatrix) -> int:
    """Rank over F_q (exact Gaussian elimination; bit-packed when q = 2)."""
    if matrix.modulus == 2:
        return gf2_rank(gf2_pack(r) for r in matrix.entries)
    return modq_rank(matrix.entries, matrix.modulus)


def solve_left(target: Sequence[int], matrix: FieldMatrix) -> Optional[tuple[int, ...]]:
    """Coefficients x with x·M = target, or None if no solution exists."""
    if len(target) != matrix.ncols:
        raise ValueError(f"target has {len(target)} entries, matrix has {matrix.ncols} columns")
    q = matrix.modulus
    if q == 2:
        packed = [gf2_pack(r) for r in matrix.entries]
        sol = gf2_solve_left(gf2_pack(target), packed, matrix.ncols)
        if sol is None:
            return None
        return tuple((sol >> i) & 1 for i in range(matrix.nrows))
    return modq_solve_left(target, matrix.entries, q)


def permutation_unrank(n: int, index: int) -> tuple[int, ...]:
    """index-th permutation of (1..n) in lexicographic order (0-based index)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    if not 0 <= index < fact:
        raise ValueError(f"permutation index {index} out of range for n={n}")
    items = list(range(1, n + 1))
    out: list[int] = []
    for k in range(n, 0, -1):
        fact //= k
        pos, index = divmod(index, fact)
        out.append(items.pop(pos))
    return tuple(out)
