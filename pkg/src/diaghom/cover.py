"""Left ideal covers of the ideal of non-permutation diagrams.

The two-sided ideal of diagrams with fewer than n propagating components is
covered by basis-aligned left ideals: ``K(i)`` (right vertex i isolated) and
``L(i,j)`` (right vertices i and j in the same block).  :func:`verify_cover`
machine-checks the cover axioms: the union covers the target ideal, and each
small intersection of ideals is either zero or retracted by an explicit
idempotent diagram, so it is a principal left ideal on that idempotent.

All identities are checked at the diagram level with a vanishing contraction
exponent, so they hold over every coefficient ring and every delta at once;
only the spanning check evaluates delta powers in the context ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import AlgebraContext
from .diagrams import Diagram, compose, is_permutation


@dataclass(frozen=True)
class IdealSpec:
    """K(i): right vertex i isolated.  L(i,j): right i and j joined."""

    kind: str
    i: int
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind == "K":
            if self.j is not None:
                raise ValueError("K ideals take a single index")
        elif self.kind == "L":
            if self.j is None or not self.i < self.j:
                raise ValueError("L ideals need indices i < j")
        else:
            raise ValueError(f"unknown ideal kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "K":
            return f"K({self.i})"
        return f"L({self.i},{self.j})"

    def admits(self, d: Diagram) -> bool:
        if self.kind == "K":
            return (-self.i,) in d.blocks
        block = d.block_of(-self.i)
        return -self.j in block


def standard_ideals(n: int, family) -> list[IdealSpec]:
    """The covering family: K's and L's for partitions, L's otherwise."""
    ls = [
        IdealSpec("L", i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]
    if family.kind == "P" or (family.kind == "T" and family.r == 1):
        ks = [IdealSpec("K", i) for i in range(1, n + 1)]
        return ks + ls
    return ls


def ideal_basis(ctx: AlgebraContext, spec: IdealSpec) -> list[Diagram]:
    """Basis diagrams of the left ideal; empty for K in families without
    isolated vertices (not an error)."""
    return [d for d in ctx.basis if spec.admits(d)]


def intersection_basis(
    ctx: AlgebraContext, specs: Sequence[IdealSpec]
) -> list[Diagram]:
    """Diagrams in every ideal of ``specs``; the empty intersection is the
    whole basis."""
    return [d for d in ctx.basis if all(s.admits(d) for s in specs)]


def target_ideal_basis(ctx: AlgebraContext) -> list[Diagram]:
    """Basis of the two-sided ideal: the non-permutation diagrams."""
    return [d for d in ctx.basis if not is_permutation(d)]


def merge_generator(n: int, a: int, b: int) -> Diagram:
    """The idempotent whose right action merges the blocks of right vertices
    a and b: one block {a, b, -a, -b}, identity strands elsewhere."""
    if not 1 <= a < b <= n:
        raise ValueError(f"need 1 <= a < b <= n, got a={a}, b={b}")
    blocks = [(a, b, -a, -b)]
    blocks.extend((i, -i) for i in range(1, n + 1) if i not in (a, b))
    return Diagram(n, blocks)


def detach_generator(n: int, i: int, companion: int) -> Diagram:
    """The idempotent whose right action detaches right vertex i into a
    singleton: blocks {-i} and {i, c, -c}, identity strands elsewhere.

    The companion c keeps the contraction exponent at zero; it must avoid
    every index whose right vertex is supposed to stay isolated.
    """
    if not 1 <= i <= n or not 1 <= companion <= n or companion == i:
        raise ValueError(f"bad detach indices i={i}, companion={companion}")
    blocks = [(-i,), (i, companion, -companion)]
    blocks.extend((k, -k) for k in range(1, n + 1) if k not in (i, companion))
    return Diagram(n, blocks)


def subset_generators(n: int, specs: Sequence[IdealSpec]) -> list[Diagram]:
    """One generator per ideal in the subset, K's first then L's.

    Companions for the K generators are chosen outside the K index set, so
    that each detachment preserves the others.
    """
    k_specs = sorted((s for s in specs if s.kind == "K"), key=lambda s: s.i)
    l_specs = sorted(
        (s for s in specs if s.kind == "L"), key=lambda s: (s.i, s.j)
    )
    k_indices = {s.i for s in k_specs}
    companion = None
    if k_specs:
        free = [c for c in range(1, n + 1) if c not in k_indices]
        if not free:
            raise ValueError("no companion index available for detachments")
        companion = free[0]
    gens = [detach_generator(n, s.i, companion) for s in k_specs]
    gens.extend(merge_generator(n, s.i, s.j) for s in l_specs)
    return gens


def product_of_generators(gens: Sequence[Diagram]):
    """(total alpha, product diagram) of the ordered generator product."""
    total = 0
    acc = gens[0]
    for g in gens[1:]:
        alpha, acc = compose(acc, g)
        total += alpha
    return total, acc


@dataclass(frozen=True)
class CoverSpec:
    context: AlgebraContext
    ideals: tuple[IdealSpec, ...]

    @staticmethod
    def standard(ctx: AlgebraContext) -> "CoverSpec":
        return CoverSpec(ctx, tuple(standard_ideals(ctx.n, ctx.family)))

    @property
    def width(self) -> int:
        return len(self.ideals)


@dataclass(frozen=True)
class IntersectionWitness:
    subset: tuple[str, ...]
    status: str  # "zero" or "idempotent"
    generator: Optional[Diagram]

    def to_json_dict(self):
        return {
            "S": list(self.subset),
            "status": self.status,
            "generator_diagram": str(self.generator) if self.generator else None,
        }


@dataclass
class CoverReport:
    covers: bool
    width: int
    verified_height: int
    intersections: list[IntersectionWitness] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def to_json_dict(self):
        return {
            "covers": self.covers,
            "width": self.width,
            "verified_height": self.verified_height,
            "failures": list(self.failures),
            "intersections": [w.to_json_dict() for w in self.intersections],
        }


def default_height(cover: CoverSpec) -> int:
    """Full width, except height n-1 for the partition-type covers that
    include K ideals."""
    if any(s.kind == "K" for s in cover.ideals):
        return cover.context.n - 1
    return cover.width


def verify_cover(
    cover: CoverSpec, height_limit: Optional[int] = None
) -> CoverReport:
    """Machine-check the cover axioms up to the height limit.

    Failure entries name the offending subset and diagram; they are a
    refutation channel and are expected never to fire.
    """
    ctx = cover.context
    n = ctx.n
    ring = ctx.ring
    limit = default_height(cover) if height_limit is None else height_limit
    report = CoverReport(True, cover.width, limit)
    target = target_ideal_basis(ctx)
    target_set = set(target)

    ideal_bases = [set(ideal_basis(ctx, s)) for s in cover.ideals]
    union = set().union(*ideal_bases) if ideal_bases else set()
    for d in target:
        if d not in union:
            report.failures.append(f"union: {d} lies in no ideal")
    for s, basis in zip(cover.ideals, ideal_bases):
        for d in basis:
            if d not in target_set:
                report.failures.append(
                    f"union: {s.label} contains {d} outside the target ideal"
                )

    for p in range(1, limit + 1):
        for subset in itertools.combinations(range(cover.width), p):
            specs = [cover.ideals[i] for i in subset]
            labels = tuple(s.label for s in specs)
            inter = intersection_basis(ctx, specs)
            if not inter:
                report.intersections.append(
                    IntersectionWitness(labels, "zero", None)
                )
                continue
            try:
                gens = subset_generators(n, specs)
            except ValueError as exc:
                report.failures.append(f"{labels}: {exc}")
                continue
            alpha, e = product_of_generators(gens)
            ok = True
            if alpha != 0:
                report.failures.append(
                    f"{labels}: generator product closed {alpha} middle components"
                )
                ok = False
            if not all(s.admits(e) for s in specs):
                report.failures.append(
                    f"{labels}: generator {e} lies outside the intersection"
                )
                ok = False
            sq = compose(e, e)
            if sq.alpha != 0 or sq.diagram != e:
                report.failures.append(f"{labels}: generator {e} is not idempotent")
                ok = False
            for rho in inter:
                res = compose(rho, e)
                if res.alpha != 0 or res.diagram != rho:
                    report.failures.append(
                        f"{labels}: right multiplication moves {rho}"
                    )
                    ok = False
                    break
            # left multiples must land in, and span, the intersection
            reached = set()
            inter_set = set(inter)
            for i, b in enumerate(ctx.basis):
                res = compose(b, e)
                if res.diagram not in inter_set:
                    report.failures.append(
                        f"{labels}: {b} * generator escapes to {res.diagram}"
                    )
                    ok = False
                    break
                if ring.pow(ctx.delta, res.alpha) != ring.zero:
                    reached.add(res.diagram)
            else:
                if reached != inter_set:
                    missing = sorted(inter_set - reached)[:3]
                    report.failures.append(
                        f"{labels}: left multiples span {len(reached)} of "
                        f"{len(inter_set)} diagrams (missing {missing})"
                    )
                    ok = False
            report.intersections.append(
                IntersectionWitness(labels, "idempotent" if ok else "failed", e)
            )

    report.covers = not report.failures
    return report
