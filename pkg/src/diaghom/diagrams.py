"""Partition diagrams on two columns of n labelled vertices.

A diagram is a set partition of the 2n vertices.  Vertices are encoded as
signed integers: ``+i`` is the i-th vertex of the left column and ``-i`` the
i-th vertex of the right column (printed ``i`` and ``-i``).  The fixed total
order on vertices is left column first, then right column, each by index::

    1 < 2 < ... < n < -1 < -2 < ... < -n

Diagrams are stored canonically (vertices sorted inside each block, blocks
sorted by their minimal vertex), so structural equality is exactly equality
of the underlying set partitions.  Diagram values are immutable and hashable
and all operations here are pure.

Text grammar, used by the CLI and in fixtures::

    diagram := n ":" block ("|" block)*
    block   := "{" elem (" " elem)* "}"

``"2:{1 -1}|{2 -2}"`` is the identity diagram on two strands.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional


class DiagramError(ValueError):
    """Raised for structurally invalid diagrams or mismatched sizes."""


class DiagramParseError(ValueError):
    """Raised for malformed diagram text; carries the failing position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class ResourceGuardError(RuntimeError):
    """Raised when an enumeration or construction would be too large."""


def vertex_key(v: int):
    """Sort key realizing the fixed vertex order (lefts before rights)."""
    return (v < 0, abs(v))


def bell_number(k: int) -> int:
    """Number of set partitions of a k-element set (Bell triangle)."""
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


class Diagram:
    """A set partition of {1..n, -1..-n}, kept in canonical form."""

    __slots__ = ("n", "blocks", "_hash")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        if n < 1:
            raise DiagramError("n must be positive")
        canon = sorted(
            (tuple(sorted(b, key=vertex_key)) for b in blocks),
            key=lambda b: vertex_key(b[0]) if b else (2, 0),
        )
        seen = set()
        for b in canon:
            if not b:
                raise DiagramError("empty block")
            for v in b:
                if v == 0 or abs(v) > n:
                    raise DiagramError(f"vertex {v} out of range for n={n}")
                if v in seen:
                    raise DiagramError(f"vertex {v} in two blocks")
                seen.add(v)
        if len(seen) != 2 * n:
            raise DiagramError("blocks do not cover all 2n vertices")
        self.n = n
        self.blocks = tuple(canon)
        self._hash = hash((n, self.blocks))

    @staticmethod
    def identity(n: int) -> "Diagram":
        return Diagram(n, [(i, -i) for i in range(1, n + 1)])

    def block_of(self, v: int):
        for b in self.blocks:
            if v in b:
                return b
        raise DiagramError(f"vertex {v} not in diagram")

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.n == other.n
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return tuple(tuple(vertex_key(v) for v in b) for b in self.blocks)

    def __str__(self):
        return format_diagram(self)

    def __repr__(self):
        return f"Diagram({format_diagram(self)!r})"


class BlockStats(NamedTuple):
    """Per-block vertex counts: left, right and their absolute difference."""

    left: int
    right: int
    kappa: int


class CompositionResult(NamedTuple):
    """Outcome of composing two diagrams: closed middle components and d3."""

    alpha: int
    diagram: Diagram


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@lru_cache(maxsize=None)
def compose(d1: Diagram, d2: Diagram) -> CompositionResult:
    """Stack d1 against d2 and contract the shared middle column.

    The right column of ``d1`` is identified with the left column of ``d2``;
    connected components lying entirely inside that middle column are counted
    by ``alpha`` and removed, the partition induced on the outer 2n vertices
    is the resulting diagram.  The scalar multiplying the result in a diagram
    algebra is delta**alpha, which is the caller's business.
    """
    n = d1.n
    if d2.n != n:
        raise DiagramError(f"cannot compose diagrams with n={n} and n={d2.n}")
    # node ids: 0..n-1 outer left, n..2n-1 middle, 2n..3n-1 outer right
    uf = _UnionFind(3 * n)
    for block in d1.blocks:
        first = None
        for v in block:
            node = v - 1 if v > 0 else n + (-v) - 1
            if first is None:
                first = node
            else:
                uf.union(first, node)
    for block in d2.blocks:
        first = None
        for v in block:
            node = n + v - 1 if v > 0 else 2 * n + (-v) - 1
            if first is None:
                first = node
            else:
                uf.union(first, node)
    components: dict[int, list[int]] = {}
    for node in range(3 * n):
        components.setdefault(uf.find(node), []).append(node)
    alpha = 0
    blocks = []
    for members in components.values():
        outer = [m for m in members if m < n or m >= 2 * n]
        if not outer:
            alpha += 1
            continue
        blocks.append(
            [m + 1 if m < n else -(m - 2 * n + 1) for m in outer]
        )
    return CompositionResult(alpha, Diagram(n, blocks))


def component_stats(d: Diagram) -> list[BlockStats]:
    """Left/right vertex counts per block, in canonical block order."""
    stats = []
    for block in d.blocks:
        left = sum(1 for v in block if v > 0)
        right = len(block) - left
        stats.append(BlockStats(left, right, abs(left - right)))
    return stats


def propagating_count(d: Diagram) -> int:
    """Number of blocks meeting both columns."""
    return sum(1 for s in component_stats(d) if s.left >= 1 and s.right >= 1)


def is_permutation(d: Diagram) -> bool:
    """True iff the diagram has exactly n propagating components."""
    return propagating_count(d) == d.n


def as_permutation(d: Diagram) -> tuple[int, ...]:
    """The permutation sigma with blocks {i, -sigma(i)}; 1-indexed images."""
    if not is_permutation(d):
        raise DiagramError(f"{d} is not a permutation diagram")
    sigma = [0] * d.n
    for block in d.blocks:
        sigma[block[0] - 1] = -block[1]
    return tuple(sigma)


def permutation_diagram(n: int, sigma: Iterable[int]) -> Diagram:
    """Inverse of :func:`as_permutation`."""
    images = list(sigma)
    if sorted(images) != list(range(1, n + 1)):
        raise DiagramError(f"{images} is not a permutation of 1..{n}")
    return Diagram(n, [(i + 1, -images[i]) for i in range(n)])


@dataclass(frozen=True)
class Family:
    """One of the four diagram families.

    kind "P" (all diagrams), "T" (every block has kappa divisible by r),
    "TPP" (every block propagating), "U" (every block balanced).
    """

    kind: str
    r: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("P", "T", "TPP", "U"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "T":
            if self.r is None or self.r < 1:
                raise ValueError("family T needs a modulus r >= 1")
        elif self.r is not None:
            raise ValueError(f"family {self.kind} takes no modulus")

    def admits(self, d: Diagram) -> bool:
        if self.kind == "P":
            return True
        stats = component_stats(d)
        if self.kind == "T":
            return all(s.kappa % self.r == 0 for s in stats)
        if self.kind == "TPP":
            return all(s.left >= 1 and s.right >= 1 for s in stats)
        return all(s.left == s.right for s in stats)

    def uses_delta(self) -> bool:
        """TPP and U compositions never close middle components."""
        return self.kind in ("P", "T")

    def __str__(self):
        return f"T:{self.r}" if self.kind == "T" else self.kind


def parse_family(text: str) -> Family:
    """Family from its CLI name: "P", "T:r", "TPP", "U"."""
    text = text.strip()
    if text in ("P", "TPP", "U"):
        return Family(text)
    if text.startswith("T:"):
        try:
            return Family("T", int(text[2:]))
        except ValueError as exc:
            raise ValueError(f"bad family {text!r}") from exc
    raise ValueError(f"unknown family {text!r} (expected P, T:r, TPP or U)")


def family_predicate(d: Diagram, family: Family) -> bool:
    return family.admits(d)


MAX_ENUMERATION_N = 5


def all_diagrams(n: int) -> list[Diagram]:
    """Every set partition of the 2n vertices, via restricted growth strings.

    Guarded at n <= 5; Bell(2n) explodes quickly beyond that.
    """
    if n > MAX_ENUMERATION_N:
        raise ResourceGuardError(
            f"enumerating all diagrams at n={n} would produce "
            f"{bell_number(2 * n)} set partitions (guard: n <= {MAX_ENUMERATION_N})"
        )
    vertices = list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
    k = len(vertices)
    diagrams = []
    rgs = [0] * k
    maxes = [0] * k
    while True:
        nblocks = max(rgs) + 1 if k else 0
        blocks = [[] for _ in range(nblocks)]
        for v, label in zip(vertices, rgs):
            blocks[label].append(v)
        diagrams.append(Diagram(n, blocks))
        # next restricted growth string
        i = k - 1
        while i > 0 and rgs[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            break
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, k):
            rgs[j] = 0
            maxes[j] = maxes[i]
    diagrams.sort(key=Diagram.sort_key)
    return diagrams


def format_diagram(d: Diagram) -> str:
    return f"{d.n}:" + "|".join(
        "{" + " ".join(str(v) for v in block) + "}" for block in d.blocks
    )


def parse_diagram(text: str) -> Diagram:
    """Parse the diagram grammar; canonicalizes non-canonical input."""
    colon = text.find(":")
    if colon < 0:
        raise DiagramParseError("missing ':' after vertex count", 0)
    head = text[:colon]
    try:
        n = int(head)
    except ValueError:
        raise DiagramParseError(f"bad vertex count {head!r}", 0) from None
    if n < 1:
        raise DiagramParseError("vertex count must be positive", 0)
    blocks = []
    pos = colon + 1
    body = text[colon + 1 :]
    if not body:
        raise DiagramParseError("missing blocks", pos)
    for chunk in body.split("|"):
        stripped = chunk.strip()
        if not (stripped.startswith("{") and stripped.endswith("}")):
            raise DiagramParseError("block must be wrapped in { }", pos)
        inner = stripped[1:-1].strip()
        if not inner:
            raise DiagramParseError("empty block", pos)
        members = []
        for token in inner.split():
            try:
                members.append(int(token))
            except ValueError:
                raise DiagramParseError(f"bad vertex {token!r}", pos) from None
        blocks.append(members)
        pos += len(chunk) + 1
    try:
        return Diagram(n, blocks)
    except DiagramError as exc:
        raise DiagramParseError(str(exc), colon + 1) from None
