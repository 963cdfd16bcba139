"""Tor and Ext of the trivial module via truncated normalized bar complexes.

The normalized bar complex of an augmented algebra A on a distinguished
basis has degree-q module free of rank (dim A - 1)^q, spanned by tuples of
the reduced basis elements b - eps(b).1 for b running over the non-identity
basis.  Both trivial-module actions act through the augmentation and kill
the outer face maps, so the differential is the alternating sum of the inner
multiplications, reduced modulo the identity coordinate.  Homology of the
truncation at Q is Tor in degrees strictly below Q; cohomology of the
transposed complex is Ext in the same range.

Small complexes are materialized as ChainComplexes (with a full d o d = 0
check); large ones are streamed column by column into the exact rank and
Smith form engines, with d o d = 0 spot-checked on a deterministic sample of
columns.  Rank and invariant factor results are cached per degree, and since
invariant factors are transpose-invariant the cached data serves homology
and cohomology alike.

The symmetric group oracle lives here too: the group algebra built directly
from permutations (never from diagram composition), with every group element
augmented to 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .algebra import AlgebraContext
from .complexes import (
    ChainComplex,
    HomologyGroup,
    check_homology_ring,
    dualize,
    homology,
)
from .diagrams import Diagram, ResourceGuardError, all_diagrams, compose, is_permutation
from .linalg import (
    FieldEngine,
    GF2Engine,
    IntEngine,
    SparseMatrix,
    invariant_factors,
    rank_of,
)
from .rings import ModRing, Ring

DEFAULT_MAX_RANK = 2_000_000
MATERIALIZE_LIMIT = 120_000


class BasisAlgebra:
    """Augmented algebra on a distinguished basis with monomial products.

    ``product(i, j)`` returns ``(k, coeff)`` with basis_i * basis_j equal to
    coeff * basis_k; augmentations are 0 or 1 per basis element.
    """

    def __init__(
        self,
        ring: Ring,
        dim: int,
        identity: int,
        eps,
        product: Callable[[int, int], tuple[int, object]],
        label: str,
    ):
        self.ring = ring
        self.dim = dim
        self.identity = identity
        self.eps = tuple(eps)
        self.product = product
        self.label = label


def algebra_from_context(ctx: AlgebraContext) -> BasisAlgebra:
    label = f"{ctx.family} n={ctx.n} over {ctx.ring.name} delta={ctx.delta}"
    return BasisAlgebra(
        ctx.ring, ctx.dim, ctx.identity_index, ctx.eps, ctx.product_scalar, label
    )


def _permutation_product(perms, index, ring):
    one = ring.one

    def product(i, j):
        a, b = perms[i], perms[j]
        composed = tuple(b[a[k] - 1] for k in range(len(a)))
        return index[composed], one

    return product


MAX_GROUP_N = 4

_group_algebras: dict = {}


def symmetric_group_algebra(n: int, ring: Ring) -> BasisAlgebra:
    """k[Sigma_n] on the permutation basis, built from permutations alone.

    This is the oracle side of every comparison: it never touches diagram
    composition.  Guarded at n <= 4.
    """
    if n > MAX_GROUP_N:
        raise ResourceGuardError(
            f"symmetric group algebra guarded at n <= {MAX_GROUP_N}, got n={n}"
        )
    key = (n, ring)
    alg = _group_algebras.get(key)
    if alg is None:
        perms = sorted(itertools.permutations(range(1, n + 1)))
        index = {p: i for i, p in enumerate(perms)}
        identity = index[tuple(range(1, n + 1))]
        alg = BasisAlgebra(
            ring,
            len(perms),
            identity,
            (1,) * len(perms),
            _permutation_product(perms, index, ring),
            f"k[Sigma_{n}] over {ring.name}",
        )
        _group_algebras[key] = alg
    return alg


def symmetric_group_diagram_algebra(n: int, ring: Ring) -> BasisAlgebra:
    """The same group algebra on the permutation-diagram basis, multiplied
    through diagram composition.  Used to cross-check the oracle."""
    diagrams = [d for d in all_diagrams(n) if is_permutation(d)]
    index = {d: i for i, d in enumerate(diagrams)}
    identity = index[Diagram.identity(n)]
    one = ring.one

    def product(i, j):
        result = compose(diagrams[i], diagrams[j])
        if result.alpha != 0:
            raise AssertionError("permutation diagrams closed a middle component")
        return index[result.diagram], one

    return BasisAlgebra(
        ring,
        len(diagrams),
        identity,
        (1,) * len(diagrams),
        product,
        f"permutation diagrams n={n} over {ring.name}",
    )


class BarComplex:
    def __init__(
        self,
        algebra: BasisAlgebra,
        truncation: int,
        max_rank: int = DEFAULT_MAX_RANK,
        materialize_limit: int = MATERIALIZE_LIMIT,
    ):
        if truncation < 1:
            raise ValueError("truncation must be >= 1")
        self.algebra = algebra
        self.ring = algebra.ring
        self.truncation = truncation
        self.m = algebra.dim - 1
        self.ranks = [self.m**q for q in range(truncation + 1)]
        total = sum(self.ranks)
        if total > max_rank:
            raise ResourceGuardError(
                f"bar complex of {algebra.label} at truncation {truncation} "
                f"projects total rank {total} > guard {max_rank}"
            )
        self.total_rank = total
        self._build_face_tables()
        self._degree_data: dict[int, tuple[int, Optional[tuple[int, ...]]]] = {}
        self.complex: Optional[ChainComplex] = None
        if total <= materialize_limit:
            self._materialize()

    # -- construction -----------------------------------------------------

    def _build_face_tables(self):
        alg = self.algebra
        ring = self.ring
        zero = ring.zero
        reduced = [i for i in range(alg.dim) if i != alg.identity]
        self.reduced = reduced
        pos = {full: r for r, full in enumerate(reduced)}
        m = self.m
        face: list[tuple] = [()] * (m * m)
        neg_face: list[tuple] = [()] * (m * m)
        minus_one = ring.neg(ring.one)
        for a in range(m):
            ia = reduced[a]
            eps_a = alg.eps[ia]
            for b in range(m):
                ib = reduced[b]
                eps_b = alg.eps[ib]
                k, coeff = alg.product(ia, ib)
                terms: dict[int, object] = {}
                if k != alg.identity and coeff != zero:
                    terms[pos[k]] = coeff
                if eps_b:
                    terms[a] = ring.add(terms.get(a, zero), minus_one)
                if eps_a:
                    terms[b] = ring.add(terms.get(b, zero), minus_one)
                cleaned = tuple(
                    (r, v) for r, v in terms.items() if v != zero
                )
                face[a * m + b] = cleaned
                neg_face[a * m + b] = tuple((r, ring.neg(v)) for r, v in cleaned)
        self.face_table = face
        self.neg_face_table = neg_face

    def _column(self, q: int, t: int) -> dict[int, object]:
        """Sparse column t of the degree-q differential, canonical values."""
        ring = self.ring
        zero = ring.zero
        m = self.m
        acc: dict[int, object] = {}
        pw = [m**e for e in range(q + 1)]
        for j in range(1, q):
            pj = pw[q - j - 1]
            hi, suffix = divmod(t, pj)
            hi, d_j = divmod(hi, m)
            prefix, d_jm1 = divmod(hi, m)
            table = self.neg_face_table if j & 1 else self.face_table
            terms = table[d_jm1 * m + d_j]
            if not terms:
                continue
            base = prefix * m * pj + suffix
            for k, coeff in terms:
                row = base + k * pj
                s = ring.add(acc.get(row, zero), coeff)
                if s == zero:
                    acc.pop(row, None)
                else:
                    acc[row] = s
        return acc

    def _materialize(self):
        ring = self.ring
        dims = {q: self.ranks[q] for q in range(self.truncation + 1)}
        diffs = {}
        for q in range(1, self.truncation + 1):
            mat = SparseMatrix(ring, self.ranks[q - 1], self.ranks[q])
            for t in range(self.ranks[q]):
                col = self._column(q, t)
                if col:
                    mat.cols[t] = col
            diffs[q] = mat
        self.complex = ChainComplex(ring, 0, self.truncation, dims, diffs, validate=True)

    # -- streaming --------------------------------------------------------

    def _sample_indices(self, total: int) -> set[int]:
        head = min(total, 300)
        sample = set(range(head))
        stride = max(1, total // 300)
        sample.update(range(0, total, stride))
        return sample

    def _check_dd_on(self, q: int, t: int, col: dict):
        """Assert that the degree-(q-1) differential kills this column."""
        if q - 1 < 2:
            return  # d_1 = 0
        ring = self.ring
        zero = ring.zero
        acc: dict[int, object] = {}
        for r, v in col.items():
            for rr, vv in self._column(q - 1, r).items():
                s = ring.add(acc.get(rr, zero), ring.mul(v, vv))
                if s == zero:
                    acc.pop(rr, None)
                else:
                    acc[rr] = s
        if acc:
            raise AssertionError(
                f"d o d != 0 at degree {q}, column {t} of {self.algebra.label}"
            )

    def _stream_degree(self, q: int):
        """Feed every column of d_q into an exact engine; return (rank, factors)."""
        ring = self.ring
        m = self.m
        total = self.ranks[q]
        nrows = self.ranks[q - 1]
        sample = self._sample_indices(total)
        face = self.face_table
        neg_face = self.neg_face_table
        pw = [m**e for e in range(q + 1)]
        spans = [(pw[q - j - 1], neg_face if j & 1 else face) for j in range(1, q)]

        rational = False
        if ring.is_integers:
            engine: object = IntEngine(nrows)
        elif isinstance(ring, ModRing) and ring.modulus == 2:
            engine = GF2Engine()
        elif isinstance(ring, ModRing):
            engine = FieldEngine(nrows, ring.modulus)
        elif ring.is_field:
            # rational rank of a denominator-cleared column set equals its
            # rank over Z, which the integer engine computes without any
            # Fraction arithmetic
            engine = IntEngine(nrows, rank_only=True)
            rational = True
        else:
            check_homology_ring(ring)

        gf2 = isinstance(engine, GF2Engine)
        modulus = ring.modulus if isinstance(ring, ModRing) else None
        add_rows = engine.add_rows if gf2 else None
        add_column = None if gf2 else engine.add_column

        for t in range(total):
            if gf2:
                rows: set[int] = set()
                toggle = rows.symmetric_difference_update
                for pj, table in spans:
                    hi, suffix = divmod(t, pj)
                    hi, d_j = divmod(hi, m)
                    prefix, d_jm1 = divmod(hi, m)
                    terms = table[d_jm1 * m + d_j]
                    if not terms:
                        continue
                    base = prefix * m * pj + suffix
                    for k, _coeff in terms:
                        toggle((base + k * pj,))
                add_rows(rows)
            else:
                acc: dict[int, object] = {}
                get = acc.get
                for pj, table in spans:
                    hi, suffix = divmod(t, pj)
                    hi, d_j = divmod(hi, m)
                    prefix, d_jm1 = divmod(hi, m)
                    terms = table[d_jm1 * m + d_j]
                    if not terms:
                        continue
                    base = prefix * m * pj + suffix
                    for k, coeff in terms:
                        row = base + k * pj
                        acc[row] = get(row, 0) + coeff
                if modulus is not None:
                    items = [(r, v % modulus) for r, v in acc.items() if v % modulus]
                else:
                    items = [(r, v) for r, v in acc.items() if v]
                    if rational and items:
                        scale = 1
                        for _r, v in items:
                            if isinstance(v, Fraction):
                                scale = scale * v.denominator // gcd(scale, v.denominator)
                        if scale != 1:
                            items = [(r, int(v * scale)) for r, v in items]
                        else:
                            items = [(r, int(v)) for r, v in items]
                if items:
                    add_column(items)
            if t in sample:
                self._check_dd_on(q, t, self._column(q, t))

        if ring.is_integers:
            result = engine.finish()
            return result.rank, result.factors
        if rational:
            return engine.finish_rank(), None
        return engine.finish(), None

    def degree_data(self, q: int) -> tuple[int, Optional[tuple[int, ...]]]:
        """(rank, invariant factors or None) of the degree-q differential."""
        if q < 1 or q > self.truncation:
            return 0, ()
        hit = self._degree_data.get(q)
        if hit is not None:
            return hit
        if self.complex is not None:
            mat = self.complex.differential(q)
            rank = rank_of(mat)
            factors = invariant_factors(mat) if self.ring.is_integers else None
        else:
            rank, factors = self._stream_degree(q)
        data = (rank, factors)
        self._degree_data[q] = data
        return data

    # -- reported groups ----------------------------------------------------

    def homology_groups(self) -> list[HomologyGroup]:
        """Tor in degrees 0..Q-1 (degree Q is a truncation artifact)."""
        check_homology_ring(self.ring)
        groups = []
        for q in range(self.truncation):
            rank_out, _ = self.degree_data(q)
            rank_in, factors = self.degree_data(q + 1)
            free = self.ranks[q] - rank_out - rank_in
            torsion = ()
            if self.ring.is_integers and factors:
                torsion = tuple(f for f in factors if f > 1)
            groups.append(HomologyGroup(free, torsion))
        return groups

    def cohomology_groups(self) -> list[HomologyGroup]:
        """Ext in degrees 0..Q-1, from the transposed complex.

        When the complex is materialized this runs through an honest
        dualization; in streaming mode it uses the cached ranks and
        invariant factors, which transposition preserves.
        """
        check_homology_ring(self.ring)
        if self.complex is not None:
            dual = dualize(self.complex)
            return [homology(dual, -q) for q in range(self.truncation)]
        groups = []
        for q in range(self.truncation):
            rank_out, factors_out = self.degree_data(q)
            rank_in, _ = self.degree_data(q + 1)
            free = self.ranks[q] - rank_out - rank_in
            torsion = ()
            if self.ring.is_integers and factors_out:
                torsion = tuple(f for f in factors_out if f > 1)
            groups.append(HomologyGroup(free, torsion))
        return groups


def default_truncation(n: int, ring: Ring) -> int:
    """Desk-scale defaults: deep for n <= 2, shallower as n and Z kick in."""
    if n <= 2:
        return 5
    if n == 3:
        return 4 if ring.is_field else 3
    return 2


def bar_complex(
    ctx: AlgebraContext, truncation: int, max_rank: int = DEFAULT_MAX_RANK
) -> BarComplex:
    key = truncation
    bar = ctx._bar_cache.get(key)
    if bar is None:
        bar = BarComplex(algebra_from_context(ctx), truncation, max_rank)
        ctx._bar_cache[key] = bar
    return bar


def compute_tor(
    ctx: AlgebraContext,
    truncation: Optional[int] = None,
    max_rank: int = DEFAULT_MAX_RANK,
) -> list[HomologyGroup]:
    """Tor of the trivial module against itself, degrees 0..Q-1."""
    q = truncation if truncation is not None else default_truncation(ctx.n, ctx.ring)
    return bar_complex(ctx, q, max_rank).homology_groups()


def compute_ext(
    ctx: AlgebraContext,
    truncation: Optional[int] = None,
    max_rank: int = DEFAULT_MAX_RANK,
) -> list[HomologyGroup]:
    """Ext of the trivial module against itself, degrees 0..Q-1."""
    q = truncation if truncation is not None else default_truncation(ctx.n, ctx.ring)
    return bar_complex(ctx, q, max_rank).cohomology_groups()


_group_bars: dict = {}


def _group_bar(n: int, ring: Ring, truncation: int, max_rank: int) -> BarComplex:
    key = (n, ring, truncation)
    bar = _group_bars.get(key)
    if bar is None:
        bar = BarComplex(symmetric_group_algebra(n, ring), truncation, max_rank)
        _group_bars[key] = bar
    return bar


def group_homology(
    n: int,
    ring: Ring,
    truncation: Optional[int] = None,
    max_rank: int = DEFAULT_MAX_RANK,
) -> list[HomologyGroup]:
    """H_*(Sigma_n; trivial coefficients), degrees 0..Q-1."""
    q = truncation if truncation is not None else default_truncation(n, ring)
    return _group_bar(n, ring, q, max_rank).homology_groups()


def group_cohomology(
    n: int,
    ring: Ring,
    truncation: Optional[int] = None,
    max_rank: int = DEFAULT_MAX_RANK,
) -> list[HomologyGroup]:
    q = truncation if truncation is not None else default_truncation(n, ring)
    return _group_bar(n, ring, q, max_rank).cohomology_groups()


@dataclass
class ComparisonReport:
    matches: bool
    through: int
    mismatches: list[dict]

    def to_json_dict(self):
        return {
            "matches": self.matches,
            "through_degree": self.through,
            "mismatches": self.mismatches,
        }


def compare(
    left: list[HomologyGroup], right: list[HomologyGroup], through: int
) -> ComparisonReport:
    """Per-degree equality of free rank and torsion up to the given degree."""
    if len(left) <= through or len(right) <= through:
        raise ValueError(
            f"need degrees 0..{through}, got {len(left)} and {len(right)} entries"
        )
    mismatches = []
    for q in range(through + 1):
        if left[q] != right[q]:
            mismatches.append(
                {
                    "q": q,
                    "left": left[q].to_json_dict(),
                    "right": right[q].to_json_dict(),
                }
            )
    return ComparisonReport(not mismatches, through, mismatches)
