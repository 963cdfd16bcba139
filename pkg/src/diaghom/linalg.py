"""Exact sparse linear algebra over Z, Q and Z/p.

Everything runs on arbitrary-precision integers and Fractions; there is no
floating point and no modular reconstruction.  Two layers live here:

* :func:`smith_normal_form` for stored matrices, using minimal-absolute-value
  pivoting with row/column index maps, and

* streaming rank engines (:class:`GF2Engine`, :class:`FieldEngine`,
  :class:`IntEngine`) that consume one sparse column at a time, so that very
  wide matrices (bar differentials) never need to be materialized.  The
  engines peel off columns of support one or two through a weighted
  union-find quotient, which handles the overwhelming majority of bar
  differential columns in near-constant time, and push the rest through a
  sparse echelon.  Over Z the echelon keeps exact invariant factor
  information: unit-pivot eliminations contribute invariant factor 1 and the
  remaining pivot columns span the same column lattice as the input, so the
  Smith form of the small residual matrix completes the answer.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple

from .rings import Ring, ModRing


class SNFResult(NamedTuple):
    """Invariant factors (divisibility chain, each positive) and the rank."""

    factors: tuple[int, ...]
    rank: int


def xgcd(a: int, b: int):
    """(g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


class SparseMatrix:
    """Column-major sparse matrix with entries in a coefficient ring.

    Stored as ``cols[c] = {row: value}`` with no explicit zeros.  Matrices
    are immutable once built; the Smith normal form cache is shared with the
    transpose, whose invariant factors and rank are the same.
    """

    __slots__ = ("ring", "nrows", "ncols", "cols", "_snf_holder")

    def __init__(self, ring: Ring, nrows: int, ncols: int, cols=None, _holder=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.cols: dict[int, dict[int, object]] = cols if cols is not None else {}
        self._snf_holder = _holder if _holder is not None else {}

    @classmethod
    def from_triplets(cls, ring, nrows, ncols, triplets):
        m = cls(ring, nrows, ncols)
        for r, c, v in triplets:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r},{c}) outside {nrows}x{ncols}")
            if v != ring.zero:
                m.cols.setdefault(c, {})[r] = v
        return m

    def to_triplets(self):
        out = []
        for c in sorted(self.cols):
            for r in sorted(self.cols[c]):
                out.append((r, c, self.cols[c][r]))
        return out

    def set_entry(self, r, c, v):
        if v != self.ring.zero:
            self.cols.setdefault(c, {})[r] = v

    def column(self, c):
        return self.cols.get(c, {})

    def entry(self, r, c):
        return self.cols.get(c, {}).get(r, self.ring.zero)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self):
        return sum(len(col) for col in self.cols.values())

    def is_zero(self):
        return not self.cols

    def transpose(self) -> "SparseMatrix":
        cols: dict[int, dict[int, object]] = {}
        for c, col in self.cols.items():
            for r, v in col.items():
                cols.setdefault(r, {})[c] = v
        return SparseMatrix(
            self.ring, self.ncols, self.nrows, cols, _holder=self._snf_holder
        )

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        if self.ring != other.ring:
            raise ValueError("ring mismatch in matmul")
        ring = self.ring
        out = SparseMatrix(ring, self.nrows, other.ncols)
        for c, col in other.cols.items():
            acc: dict[int, object] = {}
            for k, v in col.items():
                left = self.cols.get(k)
                if not left:
                    continue
                for r, vv in left.items():
                    s = ring.add(acc.get(r, ring.zero), ring.mul(vv, v))
                    if s == ring.zero:
                        acc.pop(r, None)
                    else:
                        acc[r] = s
            if acc:
                out.cols[c] = acc
        return out

    def rank(self) -> int:
        return rank_of(self)

    def __repr__(self):
        return f"SparseMatrix({self.ring.name}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _divisibility_chain(values: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of a diagonal integer matrix with the given diagonal."""
    factors = sorted(abs(v) for v in values if v != 0)
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if b % a != 0:
                g = gcd(a, b)
                factors[i], factors[i + 1] = g, a * b // g
                changed = True
        if changed:
            factors.sort()
    return tuple(factors)


def _snf_eliminate(cols: dict[int, dict[int, int]]) -> tuple[int, ...]:
    """Diagonalize an integer dict-of-columns matrix by unimodular operations.

    Returns the diagonal entries (not yet a divisibility chain).  Pivots are
    chosen with minimal absolute value, ties broken by smallest fill
    (Markowitz count), so unit entries are peeled first with bounded growth.
    """
    rows: dict[int, set[int]] = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    diagonal = []
    while cols:
        best = None
        best_key = None
        for c, col in cols.items():
            for r, v in col.items():
                key = (abs(v), (len(rows[r]) - 1) * (len(col) - 1))
                if best_key is None or key < best_key:
                    best_key = key
                    best = (r, c)
                    if key[0] == 1 and key[1] <= 2:
                        break
            if best_key is not None and best_key[0] == 1 and best_key[1] <= 2:
                break
        r0, c0 = best

        def col_axpy(dst: int, src: int, f: int):
            # column_dst += f * column_src
            dcol = cols.setdefault(dst, {})
            for r, v in cols[src].items():
                s = dcol.get(r, 0) + f * v
                if s == 0:
                    if r in dcol:
                        del dcol[r]
                        rows[r].discard(dst)
                else:
                    if r not in dcol:
                        rows.setdefault(r, set()).add(dst)
                    dcol[r] = s
            if not dcol:
                del cols[dst]

        def col_combine(ca: int, cb: int, m00: int, m01: int, m10: int, m11: int):
            # (col_ca, col_cb) <- (m00*ca + m01*cb, m10*ca + m11*cb)
            a = cols.get(ca, {})
            b = cols.get(cb, {})
            new_a: dict[int, int] = {}
            new_b: dict[int, int] = {}
            for r in set(a) | set(b):
                va = a.get(r, 0)
                vb = b.get(r, 0)
                na = m00 * va + m01 * vb
                nb = m10 * va + m11 * vb
                if na:
                    new_a[r] = na
                if nb:
                    new_b[r] = nb
                have_a, have_b = r in a, r in b
                if na and not have_a:
                    rows[r].add(ca)
                if not na and have_a:
                    rows[r].discard(ca)
                if nb and not have_b:
                    rows[r].add(cb)
                if not nb and have_b:
                    rows[r].discard(cb)
            if new_a:
                cols[ca] = new_a
            else:
                cols.pop(ca, None)
            if new_b:
                cols[cb] = new_b
            else:
                cols.pop(cb, None)

        while True:
            # clear the pivot row by column operations
            a = cols[c0][r0]
            for c in list(rows.get(r0, ())):
                if c == c0:
                    continue
                b = cols[c][r0]
                if b % a == 0:
                    col_axpy(c, c0, -(b // a))
                else:
                    g, x, y = xgcd(a, b)
                    col_combine(c0, c, x, y, -(b // g), a // g)
                    a = g
            # clear the pivot column by row operations (same thing on rows)
            a = cols[c0][r0]
            col = cols[c0]
            dirty = False
            for r in list(col):
                if r == r0:
                    continue
                b = col[r]
                if b % a == 0:
                    f = -(b // a)
                    # row_r += f * row_r0, realized columnwise
                    for c in list(rows.get(r0, ())):
                        v0 = cols[c].get(r0, 0)
                        if v0 == 0:
                            continue
                        s = cols[c].get(r, 0) + f * v0
                        if s == 0:
                            if r in cols[c]:
                                del cols[c][r]
                                rows[r].discard(c)
                                if not cols[c]:
                                    del cols[c]
                        else:
                            if r not in cols[c]:
                                rows.setdefault(r, set()).add(c)
                            cols[c][r] = s
                else:
                    g, x, y = xgcd(a, b)
                    # (row_r0, row_r) <- (x*r0 + y*r, -(b/g)*r0 + (a/g)*r)
                    ag, bg = a // g, b // g
                    for c in set(rows.get(r0, set())) | set(rows.get(r, set())):
                        v0 = cols[c].get(r0, 0)
                        v1 = cols[c].get(r, 0)
                        n0 = x * v0 + y * v1
                        n1 = -bg * v0 + ag * v1
                        for rr, nv, old in ((r0, n0, v0), (r, n1, v1)):
                            if nv:
                                if old == 0:
                                    rows.setdefault(rr, set()).add(c)
                                cols[c][rr] = nv
                            elif old != 0:
                                del cols[c][rr]
                                rows[rr].discard(c)
                        if c in cols and not cols[c]:
                            del cols[c]
                    a = cols[c0][r0]
                    dirty = True
            if dirty:
                continue
            row_clear = all(c == c0 for c in rows.get(r0, ()))
            col_clear = all(r == r0 for r in cols.get(c0, ()))
            if row_clear and col_clear:
                break
        # the pivot row and column are singletons now, so no other row
        # index can still reference c0
        diagonal.append(cols[c0][r0])
        del cols[c0]
        rows.pop(r0, None)
    return tuple(diagonal)


def smith_normal_form(matrix) -> SNFResult:
    """Invariant factors of an integer matrix.

    Accepts a :class:`SparseMatrix` over Z, a list of rows, or a
    dict-of-columns.  The result is cached on SparseMatrix inputs (shared
    with the transpose, which has the same invariant factors).
    """
    holder = None
    if isinstance(matrix, SparseMatrix):
        holder = matrix._snf_holder
        if "snf" in holder:
            return holder["snf"]
        cols = {c: dict(col) for c, col in matrix.cols.items()}
    elif isinstance(matrix, dict):
        cols = {c: {r: int(v) for r, v in col.items() if v} for c, col in matrix.items()}
        cols = {c: col for c, col in cols.items() if col}
    else:
        cols = {}
        for r, row in enumerate(matrix):
            for c, v in enumerate(row):
                if v:
                    cols.setdefault(c, {})[r] = int(v)
    diagonal = _snf_eliminate(cols)
    factors = _divisibility_chain(diagonal)
    result = SNFResult(factors, len(factors))
    if holder is not None:
        holder["snf"] = result
    return result


# ---------------------------------------------------------------------------
# streaming engines


_DEAD = -1


class _WeightedQuotient:
    """Union-find over row indices tracking e_row = weight * e_root.

    Supports killing a coordinate outright (maps to zero).  Weights live in
    whatever arithmetic the caller uses (ints, Fractions, residues); the
    caller supplies multiplication when folding.
    """

    __slots__ = ("parent", "weight", "mul")

    def __init__(self, nrows: int, mul):
        self.parent = list(range(nrows))
        self.weight = [None] * nrows
        self.mul = mul

    def find(self, r: int):
        parent = self.parent
        if parent[r] == r:
            return r, None
        path = []
        w = None
        x = r
        while parent[x] != x and parent[x] != _DEAD:
            path.append(x)
            x = parent[x]
        if parent[x] == _DEAD:
            for y in path:
                parent[y] = _DEAD
            return None, None
        # accumulate weights root-ward, then compress
        mul = self.mul
        weight = self.weight
        w = None
        for y in reversed(path):
            wy = weight[y]
            w = wy if w is None else mul(wy, w)
            weight[y] = w
            parent[y] = x
        # weight stored per node is now relative to the root
        return x, self.weight[r] if path else None

    def kill(self, r: int):
        self.parent[r] = _DEAD

    def attach(self, r: int, target: int, w):
        self.parent[r] = target
        self.weight[r] = w


class _MaskEchelon:
    """Bitmask echelon over GF(2), pivoting on the lowest set bit."""

    __slots__ = ("pivots", "rank")

    def __init__(self):
        self.pivots: dict[int, int] = {}
        self.rank = 0

    def add_mask(self, mask: int):
        pivots = self.pivots
        while mask:
            low = mask & -mask
            p = pivots.get(low)
            if p is None:
                pivots[low] = mask
                self.rank += 1
                return
            mask ^= p


class GF2Engine:
    """Streaming rank over GF(2).

    Columns folding to support one or two are absorbed into a union-find
    quotient with path compression; wider columns are buffered, deduplicated,
    re-folded once the quotient stabilizes and pushed sparsest-first into a
    bitmask echelon.
    """

    def __init__(self, nrows: int = 0, buffer_cap: int = 600_000):
        self.parent: dict[int, int] = {}
        self.uf_rank = 0
        self.buffer: list[tuple[int, ...]] = []
        self.buffer_cap = buffer_cap
        self.echelon = _MaskEchelon()
        self.frozen = False
        self._seen: set[int] = set()

    def _find(self, r: int):
        parent = self.parent
        path = []
        while True:
            nxt = parent.get(r)
            if nxt is None:
                root = r
                break
            if nxt == _DEAD:
                root = _DEAD
                break
            path.append(r)
            r = nxt
        if root == _DEAD:
            for y in path:
                parent[y] = _DEAD
            return None
        for y in path:
            parent[y] = root
        return root

    def _fold(self, rows):
        acc: set[int] = set()
        for r in rows:
            root = self._find(r)
            if root is None:
                continue
            acc.symmetric_difference_update((root,))
        return acc

    def _absorb_small(self, folded: set) -> bool:
        if not folded:
            return True
        if self.frozen:
            return False
        if len(folded) == 1:
            (r,) = folded
            self.parent[r] = _DEAD
            self.uf_rank += 1
            return True
        if len(folded) == 2:
            r1, r2 = folded
            self.parent[r1] = r2
            self.uf_rank += 1
            return True
        return False

    def _to_echelon(self, folded: set):
        mask = 0
        for r in folded:
            mask |= 1 << r
        if mask and mask not in self._seen:
            self._seen.add(mask)
            self.echelon.add_mask(mask)

    def _flush_buffer(self):
        buffer = self.buffer
        while True:
            remaining = []
            progress = False
            for rows in buffer:
                folded = self._fold(rows)
                if len(folded) <= 2:
                    if self._absorb_small(folded):
                        progress = True
                        continue
                remaining.append(rows)
            buffer = remaining
            if not progress:
                break
        self.frozen = True
        buffer.sort(key=len)
        for rows in buffer:
            self._to_echelon(self._fold(rows))
        self.buffer = []

    def add_mask(self, mask: int):
        rows = []
        while mask:
            low = mask & -mask
            rows.append(low.bit_length() - 1)
            mask ^= low
        self.add_rows(rows)

    def add_column(self, items):
        acc: set[int] = set()
        for r, v in items:
            if v & 1:
                acc.symmetric_difference_update((r,))
        self.add_rows(acc)

    def add_rows(self, rows):
        folded = self._fold(rows)
        if self._absorb_small(folded):
            return
        if self.frozen:
            self._to_echelon(folded)
            return
        self.buffer.append(tuple(folded))
        if len(self.buffer) > self.buffer_cap:
            self._flush_buffer()

    def finish(self) -> int:
        if not self.frozen:
            self._flush_buffer()
        self._seen = set()
        return self.uf_rank + self.echelon.rank


class FieldEngine:
    """Streaming rank over Q or GF(p).

    Columns of support <= 2 are absorbed into a weighted union-find quotient
    (each one is a unit pivot).  Wider columns are buffered; once the stream
    ends, or the buffer overflows, buffered columns are re-folded through the
    final quotient and pushed into a sparse echelon.
    """

    def __init__(self, nrows: int, p: int | None, buffer_cap: int = 400_000):
        self.nrows = nrows
        self.p = p
        if p is None:
            self.mul = lambda a, b: a * b
        else:
            self.mul = lambda a, b: (a * b) % p
        self.uf = _WeightedQuotient(nrows, self.mul)
        self.uf_rank = 0
        self.buffer: list[tuple] = []
        self.buffer_cap = buffer_cap
        self.pivots: dict[int, dict[int, object]] = {}
        self.frozen = False
        self._seen: set = set()

    def _canon(self, col: dict):
        """Scale-normalized signature, so scalar multiples deduplicate."""
        items = sorted(col.items())
        lead = items[0][1]
        if self.p is None:
            inv = 1 / Fraction(lead)
            return tuple((r, v * inv) for r, v in items)
        inv = pow(lead, -1, self.p)
        return tuple((r, (v * inv) % self.p) for r, v in items)

    def _fold(self, items):
        acc: dict[int, object] = {}
        find = self.uf.find
        p = self.p
        for r, v in items:
            root, w = find(r)
            if root is None:
                continue
            if w is not None:
                v = v * w
            s = acc.get(root, 0) + v
            acc[root] = s
        if p is None:
            return {r: v for r, v in acc.items() if v}
        return {r: v % p for r, v in acc.items() if v % p}

    def _absorb_small(self, col: dict) -> bool:
        """Try to take a folded column of support <= 2 into the quotient."""
        if len(col) == 0:
            return True
        if self.frozen:
            return False
        if len(col) == 1:
            (r, _v), = col.items()
            self.uf.kill(r)
            self.uf_rank += 1
            return True
        if len(col) == 2:
            (r1, v1), (r2, v2) = col.items()
            # e_{r1} = -(v2/v1) e_{r2} modulo this column
            if self.p is None:
                w = -(Fraction(v2) / Fraction(v1))
            else:
                w = (-v2 * pow(v1, -1, self.p)) % self.p
            self.uf.attach(r1, r2, w)
            self.uf_rank += 1
            return True
        return False

    def _echelon_insert(self, col: dict):
        p = self.p
        pivots = self.pivots
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                pivots[r] = col
                return
            if p is None:
                f = Fraction(col[r]) / Fraction(piv[r])
                for rr, vv in piv.items():
                    s = col.get(rr, 0) - f * vv
                    if s:
                        col[rr] = s
                    else:
                        col.pop(rr, None)
            else:
                f = (col[r] * pow(piv[r], -1, p)) % p
                for rr, vv in piv.items():
                    s = (col.get(rr, 0) - f * vv) % p
                    if s:
                        col[rr] = s
                    else:
                        col.pop(rr, None)

    def _insert(self, col: dict):
        if not col:
            return
        sig = self._canon(col)
        if sig in self._seen:
            return
        self._seen.add(sig)
        self._echelon_insert(col)

    def _flush_buffer(self):
        # re-fold buffered columns until the quotient stabilizes, then push
        # the remainder, sparsest first, into the echelon
        buffer = self.buffer
        while True:
            remaining = []
            progress = False
            for items in buffer:
                col = self._fold(items)
                if len(col) <= 2:
                    if self._absorb_small(col):
                        progress = True
                        continue
                remaining.append(items)
            buffer = remaining
            if not progress:
                break
        self.frozen = True
        buffer.sort(key=len)
        for items in buffer:
            self._insert(self._fold(items))
        self.buffer = []

    def add_column(self, items):
        col = self._fold(items)
        if self.frozen:
            self._insert(col)
            return
        if self._absorb_small(col):
            return
        self.buffer.append(tuple(col.items()))
        if len(self.buffer) > self.buffer_cap:
            self._flush_buffer()

    def finish(self) -> int:
        if not self.frozen:
            self._flush_buffer()
        self._seen = set()
        return self.uf_rank + len(self.pivots)


class IntEngine:
    """Streaming rank and invariant factors over Z.

    Columns of support <= 2 with a unit coordinate feed the weighted
    union-find (invariant factor 1 each); everything else goes through a
    Hermite-style echelon whose pivot columns span the same column lattice as
    the input, so their Smith form supplies the remaining invariant factors.

    With ``rank_only`` the union-find also absorbs two-entry columns whose
    smaller entry divides the larger (an exact elimination over Q with an
    integer multiplier); invariant factors are then unavailable, but the
    rank equals the rank over Q, which is how rational ranks of integer
    matrices are computed without any Fraction arithmetic.
    """

    def __init__(self, nrows: int, buffer_cap: int = 400_000, rank_only: bool = False):
        self.nrows = nrows
        self.uf = _WeightedQuotient(nrows, lambda a, b: a * b)
        self.uf_rank = 0
        self.buffer: list[tuple] = []
        self.buffer_cap = buffer_cap
        self.pivots: dict[int, dict[int, int]] = {}
        self.frozen = False
        self.rank_only = rank_only
        self._seen: set = set()

    def _canon(self, col: dict):
        """Sign-normalized signature; only exact +- duplicates deduplicate
        (scaling changes the lattice over Z)."""
        items = sorted(col.items())
        if items[0][1] < 0:
            return tuple((r, -v) for r, v in items)
        return tuple(items)

    def _fold(self, items):
        acc: dict[int, int] = {}
        find = self.uf.find
        for r, v in items:
            root, w = find(r)
            if root is None:
                continue
            if w is not None:
                v = v * w
            acc[root] = acc.get(root, 0) + v
        return {r: v for r, v in acc.items() if v}

    def _absorb_small(self, col: dict) -> bool:
        if len(col) == 0:
            return True
        if self.frozen:
            return False
        if len(col) == 1:
            (r, v), = col.items()
            if v in (1, -1) or self.rank_only:
                self.uf.kill(r)
                self.uf_rank += 1
                return True
            return False
        if len(col) == 2:
            (r1, v1), (r2, v2) = col.items()
            if v1 in (1, -1):
                self.uf.attach(r1, r2, -v2 * v1)
                self.uf_rank += 1
                return True
            if v2 in (1, -1):
                self.uf.attach(r2, r1, -v1 * v2)
                self.uf_rank += 1
                return True
            if self.rank_only:
                if v2 % v1 == 0:
                    self.uf.attach(r1, r2, -(v2 // v1))
                    self.uf_rank += 1
                    return True
                if v1 % v2 == 0:
                    self.uf.attach(r2, r1, -(v1 // v2))
                    self.uf_rank += 1
                    return True
            return False
        return False

    def _echelon_insert(self, col: dict):
        pivots = self.pivots
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                pivots[r] = col
                return
            a, b = piv[r], col[r]
            if b % a == 0:
                f = b // a
                for rr, vv in piv.items():
                    s = col.get(rr, 0) - f * vv
                    if s:
                        col[rr] = s
                    else:
                        col.pop(rr, None)
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                new_piv: dict[int, int] = {}
                new_col: dict[int, int] = {}
                for rr in set(piv) | set(col):
                    va = piv.get(rr, 0)
                    vb = col.get(rr, 0)
                    np_ = x * va + y * vb
                    nc = -bg * va + ag * vb
                    if np_:
                        new_piv[rr] = np_
                    if nc:
                        new_col[rr] = nc
                pivots[r] = new_piv
                col = new_col

    def _insert(self, col: dict):
        if not col:
            return
        sig = self._canon(col)
        if sig in self._seen:
            return
        self._seen.add(sig)
        self._echelon_insert(col)

    def _flush_buffer(self):
        buffer = self.buffer
        while True:
            remaining = []
            progress = False
            for items in buffer:
                col = self._fold(items)
                if self._absorb_small(col):
                    progress = True
                    continue
                remaining.append(items)
            buffer = remaining
            if not progress:
                break
        self.frozen = True
        buffer.sort(key=len)
        for items in buffer:
            self._insert(self._fold(items))
        self.buffer = []

    def add_column(self, items):
        col = self._fold(items)
        if self.frozen:
            self._insert(col)
            return
        if self._absorb_small(col):
            return
        self.buffer.append(tuple(col.items()))
        if len(self.buffer) > self.buffer_cap:
            self._flush_buffer()

    def finish_rank(self) -> int:
        if not self.frozen:
            self._flush_buffer()
        self._seen = set()
        return self.uf_rank + len(self.pivots)

    def finish(self) -> SNFResult:
        if self.rank_only:
            raise ValueError("rank-only engine cannot report invariant factors")
        if not self.frozen:
            self._flush_buffer()
        self._seen = set()
        residual = {
            i: dict(col) for i, col in enumerate(self.pivots.values())
        }
        diagonal = _snf_eliminate(residual)
        core = _divisibility_chain(diagonal)
        factors = (1,) * self.uf_rank + core
        return SNFResult(factors, len(factors))


def make_rank_engine(ring: Ring, nrows: int):
    """Streaming rank engine appropriate for the ring (fields only)."""
    if isinstance(ring, ModRing):
        if not ring.is_field:
            raise ValueError(f"{ring.name} is not a field")
        if ring.modulus == 2:
            return GF2Engine()
        return FieldEngine(nrows, ring.modulus)
    if ring.is_field:
        return FieldEngine(nrows, None)
    raise ValueError(f"no field rank engine for {ring.name}")


def rank_of(matrix: SparseMatrix) -> int:
    """Exact rank of a stored matrix, cached (shared with the transpose)."""
    holder = matrix._snf_holder
    if "rank" in holder:
        return holder["rank"]
    ring = matrix.ring
    if ring.is_integers:
        result = smith_normal_form(matrix).rank
    else:
        engine = make_rank_engine(ring, matrix.nrows)
        for col in matrix.cols.values():
            engine.add_column(col.items())
        result = engine.finish()
        if isinstance(result, SNFResult):
            result = result.rank
    holder["rank"] = result
    return result


def invariant_factors(matrix: SparseMatrix) -> tuple[int, ...]:
    """Invariant factors of an integer SparseMatrix (cached)."""
    return smith_normal_form(matrix).factors
