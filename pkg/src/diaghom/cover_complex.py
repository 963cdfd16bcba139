"""The chain complex attached to a verified idempotent left cover.

Degree p (1 <= p <= w) is the direct sum over size-p index subsets S of the
intersections of the covering ideals; degree 0 is the whole algebra and
degree -1 the quotient by the covered ideal, realized on the permutation
diagram basis.  The differential is the alternating sum of subset-dropping
inclusions, the degree-0 piece is the projection onto permutation diagrams.

Because the ideals are spanned by basis diagrams, every matrix here has
entries 0 and +-1 and the complex can be built over any coefficient ring.
Summand blocks are independent and assembled in a fixed order (subset size,
then lexicographic subset), so construction is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .complexes import ChainComplex
from .cover import CoverReport, CoverSpec, intersection_basis, verify_cover
from .diagrams import Diagram, is_permutation
from .linalg import SparseMatrix
from .rings import Ring


def sign_count(subset: Sequence[int], j: int) -> int:
    """Number of elements of the subset smaller than j; j must belong."""
    if j not in subset:
        raise ValueError(f"{j} is not in {tuple(subset)}")
    return sum(1 for s in subset if s < j)


@dataclass(frozen=True)
class Summand:
    p: int
    subset: tuple[int, ...]
    labels: tuple[str, ...]
    offset: int
    diagrams: tuple[Diagram, ...]

    @property
    def dim(self) -> int:
        return len(self.diagrams)


class CoverComplex:
    def __init__(self, cover: CoverSpec, report: CoverReport, ring: Ring):
        self.cover = cover
        self.report = report
        self.ring = ring
        ctx = cover.context
        w = cover.width

        self.summands: dict[int, list[Summand]] = {}
        self._coord: dict[tuple[tuple[int, ...], Diagram], int] = {}
        dims = {}
        # degree -1: the quotient, on the permutation diagram basis
        perms = [d for d in ctx.basis if is_permutation(d)]
        self._perm_index = {d: i for i, d in enumerate(perms)}
        dims[-1] = len(perms)
        dims[0] = ctx.dim
        for p in range(1, w + 1):
            offset = 0
            level = []
            for subset in itertools.combinations(range(w), p):
                specs = [cover.ideals[i] for i in subset]
                diagrams = tuple(intersection_basis(ctx, specs))
                if not diagrams:
                    continue
                summand = Summand(
                    p,
                    subset,
                    tuple(s.label for s in specs),
                    offset,
                    diagrams,
                )
                level.append(summand)
                for local, d in enumerate(diagrams):
                    self._coord[(subset, d)] = offset + local
                offset += len(diagrams)
            self.summands[p] = level
            dims[p] = offset

        diffs: dict[int, SparseMatrix] = {}
        one = ring.one
        # projection A -> A/I: permutation diagrams survive
        d0 = SparseMatrix(ring, dims[-1], dims[0])
        for i, d in enumerate(ctx.basis):
            if is_permutation(d):
                d0.set_entry(self._perm_index[d], i, one)
        diffs[0] = d0
        # signed subset-dropping inclusions
        for p in range(1, w + 1):
            mat = SparseMatrix(ring, dims[p - 1], dims[p])
            for summand in self.summands[p]:
                for local, d in enumerate(summand.diagrams):
                    col = summand.offset + local
                    for j in summand.subset:
                        smaller = tuple(s for s in summand.subset if s != j)
                        if p == 1:
                            row = ctx.index[d]
                        else:
                            row = self._coord[(smaller, d)]
                        sign = sign_count(summand.subset, j)
                        mat.set_entry(row, col, one if sign % 2 == 0 else ring.neg(one))
            diffs[p] = mat

        self.complex = ChainComplex(ring, -1, w, dims, diffs, validate=True)

    def summand_directory(self):
        return [
            {"p": s.p, "S": list(s.labels), "dim": s.dim}
            for p in sorted(self.summands)
            for s in self.summands[p]
        ]

    def to_json_dict(self):
        dims = {str(q): self.complex.dim(q) for q in self.complex.degrees()}
        matrices = {
            str(q): [
                [r, c, str(v)]
                for r, c, v in self.complex.differential(q).to_triplets()
            ]
            for q in range(self.complex.lo + 1, self.complex.hi + 1)
        }
        return {
            "ring": self.ring.name,
            "degrees": [self.complex.lo, self.complex.hi],
            "dims": dims,
            "differentials": matrices,
            "summands": self.summand_directory(),
        }


def build_cover_complex(
    cover: CoverSpec,
    ring: Optional[Ring] = None,
    report: Optional[CoverReport] = None,
) -> CoverComplex:
    """Verify the cover (if no report is supplied) and assemble the complex."""
    if report is None:
        report = verify_cover(cover)
    if not report.covers:
        raise ValueError(
            "cover verification failed: " + "; ".join(report.failures[:3])
        )
    return CoverComplex(cover, report, ring if ring is not None else cover.context.ring)


def tensor_with_trivial(cc: CoverComplex) -> ChainComplex:
    """Apply (trivial module) tensor (-) over the algebra.

    Each intersection summand is the principal left ideal on its idempotent
    witness e, and tensoring collapses it to the span of the augmentation of
    e.  Witnesses sit inside the covered ideal, so their augmentation
    vanishes and every degree p >= 1 collapses to zero; degree 0 is one copy
    of the ground ring and so is the quotient in degree -1.
    """
    ring = cc.ring
    witness = {}
    for w in cc.report.intersections:
        if w.generator is not None:
            witness[w.subset] = w.generator
    dims = {-1: 1, 0: 1}
    for p, level in cc.summands.items():
        rank = 0
        for s in level:
            e = witness.get(s.labels)
            if e is None:
                raise ValueError(f"no idempotent witness recorded for {s.labels}")
            if is_permutation(e):
                rank += 1
        dims[p] = rank
    hi = cc.complex.hi
    diffs = {0: SparseMatrix.from_triplets(ring, 1, 1, [(0, 0, ring.one)])}
    for p in range(1, hi + 1):
        diffs[p] = SparseMatrix(ring, dims.get(p - 1, 0), dims.get(p, 0))
    return ChainComplex(ring, -1, hi, dims, diffs, validate=True)
