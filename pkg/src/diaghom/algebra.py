"""Diagram algebras as free modules on enumerated diagram bases.

An :class:`AlgebraContext` fixes the strand count n, the diagram family, the
coefficient ring and the loop parameter delta, and enumerates the basis once
(the canonical-order list of all diagrams passing the family predicate).
Products of basis diagrams are scalar multiples of basis diagrams, namely
``delta**alpha`` times the contraction, so multiplication of elements is the
bilinear extension of the composition table.

Contexts are immutable after construction.  The composition and structure
matrix caches are write-once-per-key tables; concurrent fills may duplicate
work but never disagree, so sharing a context between threads is safe.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .diagrams import (
    Diagram,
    Family,
    all_diagrams,
    compose,
    is_permutation,
)
from .linalg import SparseMatrix
from .rings import Ring


class ContextMismatchError(ValueError):
    """Raised when elements from incompatible contexts are combined."""


class AlgebraContext:
    def __init__(self, n: int, family: Family, ring: Ring, delta=0):
        self.n = n
        self.family = family
        self.ring = ring
        # delta is ignored by TPP and U compositions (alpha is always zero
        # there) but stored for a uniform API
        self.delta = ring.coerce(delta)
        self.basis: tuple[Diagram, ...] = tuple(
            d for d in all_diagrams(n) if family.admits(d)
        )
        self.index: dict[Diagram, int] = {d: i for i, d in enumerate(self.basis)}
        self.identity_index = self.index[Diagram.identity(n)]
        self.eps: tuple[int, ...] = tuple(
            1 if is_permutation(d) else 0 for d in self.basis
        )
        self.permutation_indices: tuple[int, ...] = tuple(
            i for i, e in enumerate(self.eps) if e
        )
        self._compose_table: dict[tuple[int, int], tuple[int, int]] = {}
        self._left_matrices: dict[int, SparseMatrix] = {}
        self._right_matrices: dict[int, SparseMatrix] = {}
        self._bar_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def compose_indices(self, i: int, j: int) -> tuple[int, int]:
        """(alpha, k) with basis[i] * basis[j] = delta**alpha * basis[k]."""
        key = (i, j)
        hit = self._compose_table.get(key)
        if hit is None:
            result = compose(self.basis[i], self.basis[j])
            hit = (result.alpha, self.index[result.diagram])
            self._compose_table[key] = hit
        return hit

    def product_scalar(self, i: int, j: int):
        """(k, coefficient) for the product of two basis elements."""
        alpha, k = self.compose_indices(i, j)
        return k, self.ring.pow(self.delta, alpha)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return self.basis_element(Diagram.identity(self.n))

    def basis_element(self, d: Diagram) -> "AlgebraElement":
        if d not in self.index:
            raise ContextMismatchError(f"{d} is not a basis diagram of {self}")
        return AlgebraElement(self, {d: self.ring.one})

    def element(self, coeffs: dict) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def left_matrix(self, i: int) -> SparseMatrix:
        """Matrix of x -> basis[i] * x in the basis (column x, row result)."""
        m = self._left_matrices.get(i)
        if m is None:
            m = SparseMatrix(self.ring, self.dim, self.dim)
            for j in range(self.dim):
                k, coeff = self.product_scalar(i, j)
                m.set_entry(k, j, coeff)
            self._left_matrices[i] = m
        return m

    def right_matrix(self, i: int) -> SparseMatrix:
        """Matrix of x -> x * basis[i] in the basis."""
        m = self._right_matrices.get(i)
        if m is None:
            m = SparseMatrix(self.ring, self.dim, self.dim)
            for j in range(self.dim):
                k, coeff = self.product_scalar(j, i)
                m.set_entry(k, j, coeff)
            self._right_matrices[i] = m
        return m

    def augmentation_matrix(self) -> SparseMatrix:
        """The augmentation as a 1 x dim matrix over the ring."""
        m = SparseMatrix(self.ring, 1, self.dim)
        for i in self.permutation_indices:
            m.set_entry(0, i, self.ring.one)
        return m

    def key(self):
        return (self.n, self.family, self.ring, self.delta)

    def __eq__(self, other):
        return isinstance(other, AlgebraContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (
            f"AlgebraContext(n={self.n}, family={self.family}, "
            f"ring={self.ring.name}, delta={self.delta}, dim={self.dim})"
        )


_context_cache: dict = {}


def get_context(n: int, family: Family, ring: Ring, delta=0) -> AlgebraContext:
    """Shared, cached context (bases and product tables are reused)."""
    key = (n, family, ring, ring.coerce(delta))
    ctx = _context_cache.get(key)
    if ctx is None:
        ctx = AlgebraContext(n, family, ring, delta)
        _context_cache[key] = ctx
    return ctx


def enumerate_basis(ctx: AlgebraContext) -> tuple[Diagram, ...]:
    return ctx.basis


class AlgebraElement:
    """Finitely supported map from basis diagrams to ring scalars."""

    __slots__ = ("context", "coeffs")

    def __init__(self, context: AlgebraContext, coeffs: dict):
        ring = context.ring
        self.context = context
        self.coeffs = {d: v for d, v in coeffs.items() if v != ring.zero}

    def _check(self, other: "AlgebraElement"):
        if self.context != other.context:
            raise ContextMismatchError(
                f"elements live in different contexts: "
                f"{self.context!r} vs {other.context!r}"
            )

    def __add__(self, other):
        self._check(other)
        ring = self.context.ring
        out = dict(self.coeffs)
        for d, v in other.coeffs.items():
            out[d] = ring.add(out.get(d, ring.zero), v)
        return AlgebraElement(self.context, out)

    def __neg__(self):
        ring = self.context.ring
        return AlgebraElement(
            self.context, {d: ring.neg(v) for d, v in self.coeffs.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        ring = self.context.ring
        c = ring.coerce(c)
        return AlgebraElement(
            self.context, {d: ring.mul(c, v) for d, v in self.coeffs.items()}
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._check(other)
        ctx = self.context
        ring = ctx.ring
        out: dict[Diagram, object] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                alpha, d3 = compose(d1, d2)
                coeff = ring.mul(ring.mul(c1, c2), ring.pow(ctx.delta, alpha))
                if coeff == ring.zero:
                    continue
                s = ring.add(out.get(d3, ring.zero), coeff)
                out[d3] = s
        return AlgebraElement(ctx, out)

    def augmentation(self):
        """Sum of the coefficients on permutation diagrams."""
        ring = self.context.ring
        total = ring.zero
        for d, v in self.coeffs.items():
            if is_permutation(d):
                total = ring.add(total, v)
        return total

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.context == other.context
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{v}*[{d}]" for d, v in sorted(self.coeffs.items(), key=lambda t: t[0].sort_key())]
        return " + ".join(parts)


def augmentation(x: AlgebraElement):
    return x.augmentation()

def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y
