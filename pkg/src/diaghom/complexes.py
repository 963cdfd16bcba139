"""Finitely generated free chain complexes and their homology.

A :class:`ChainComplex` stores ranks and differentials for a contiguous
degree range, with ``d_q : C_q -> C_{q-1}`` and ``d o d = 0`` checked at
construction.  Homology works over Z (Smith normal form gives free rank and
the torsion invariant factors) or over a field (ranks only); composite
moduli are rejected here, not at scalar level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linalg import SparseMatrix, invariant_factors, rank_of
from .rings import ModRing, Ring


class UnsupportedRingError(ValueError):
    """Homology needs the integers or a field."""


@dataclass(frozen=True)
class HomologyGroup:
    """Free rank plus ordered torsion invariant factors d1 | d2 | ..."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {self.torsion} is not a divisor chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self, ring: Optional[Ring] = None) -> str:
        if ring is not None and ring.is_field:
            return f"rank {self.free_rank}"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def check_homology_ring(ring: Ring):
    if ring.is_integers or ring.is_field:
        return
    if isinstance(ring, ModRing):
        raise UnsupportedRingError(
            f"homology needs Z or a field, not {ring.name} (composite modulus)"
        )
    raise UnsupportedRingError(f"homology needs Z or a field, not {ring.name}")


class ChainComplex:
    """Graded free modules C_lo..C_hi with differentials d_q: C_q -> C_{q-1}."""

    def __init__(
        self,
        ring: Ring,
        lo: int,
        hi: int,
        dims: dict[int, int],
        differentials: dict[int, SparseMatrix],
        validate: bool = True,
    ):
        if lo > hi:
            raise ValueError("empty degree range")
        self.ring = ring
        self.lo = lo
        self.hi = hi
        self.dims = {q: int(dims.get(q, 0)) for q in range(lo, hi + 1)}
        self.differentials = dict(differentials)
        if validate:
            self._validate()

    def dim(self, q: int) -> int:
        return self.dims.get(q, 0)

    def differential(self, q: int) -> SparseMatrix:
        """d_q, materializing a zero matrix at the boundary degrees."""
        d = self.differentials.get(q)
        if d is None:
            d = SparseMatrix(self.ring, self.dim(q - 1), self.dim(q))
            self.differentials[q] = d
        return d

    def _validate(self):
        for q in range(self.lo + 1, self.hi + 1):
            d = self.differential(q)
            if d.shape != (self.dim(q - 1), self.dim(q)):
                raise ValueError(
                    f"differential at degree {q} has shape {d.shape}, "
                    f"expected {(self.dim(q - 1), self.dim(q))}"
                )
            if d.ring != self.ring:
                raise ValueError(f"differential at degree {q} has wrong ring")
        for q in range(self.lo + 2, self.hi + 1):
            if not self.differential(q - 1).matmul(self.differential(q)).is_zero():
                raise ValueError(f"d_{q - 1} o d_{q} != 0")

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * self.dim(q) for q in self.degrees())


def homology(complex_: ChainComplex, q: int) -> HomologyGroup:
    """H_q = ker d_q / im d_{q+1}; torsion read off the Smith form of d_{q+1}."""
    check_homology_ring(complex_.ring)
    if q < complex_.lo or q > complex_.hi:
        return HomologyGroup(0)
    dim_q = complex_.dim(q)
    rank_out = rank_of(complex_.differential(q)) if q > complex_.lo else 0
    if q < complex_.hi:
        incoming = complex_.differential(q + 1)
        rank_in = rank_of(incoming)
        torsion: tuple[int, ...] = ()
        if complex_.ring.is_integers:
            torsion = tuple(f for f in invariant_factors(incoming) if f > 1)
    else:
        rank_in = 0
        torsion = ()
    return HomologyGroup(dim_q - rank_out - rank_in, torsion)


def homology_all(complex_: ChainComplex) -> dict[int, HomologyGroup]:
    return {q: homology(complex_, q) for q in complex_.degrees()}


def dualize(complex_: ChainComplex) -> ChainComplex:
    """Hom into the ground ring: transposed differentials, reversed grading.

    Degree p of the dual is degree -p of the original, so cohomology in
    degree q of the original is homology of the dual in degree -q.
    """
    lo, hi = -complex_.hi, -complex_.lo
    dims = {p: complex_.dim(-p) for p in range(lo, hi + 1)}
    diffs = {}
    for p in range(lo + 1, hi + 1):
        diffs[p] = complex_.differential(-p + 1).transpose()
    return ChainComplex(complex_.ring, lo, hi, dims, diffs, validate=False)


def cohomology(complex_: ChainComplex, q: int) -> HomologyGroup:
    return homology(dualize(complex_), -q)


def check_exactness(complex_: ChainComplex, degrees) -> tuple[bool, Optional[int]]:
    """(True, None) if H_q vanishes in all requested degrees, else the first
    failing degree.  Over Z exactness means free rank 0 and no torsion."""
    for q in degrees:
        if not homology(complex_, q).is_zero():
            return False, q
    return True, None
