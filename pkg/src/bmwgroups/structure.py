"""Structure sets: the combinatorial core.

An ``(m, n)``-structure set partitions the pairs ``(a_i, b_k)`` of two label
alphabets into squares ``{a_i, b_k, a_j, b_l}`` (possibly degenerate) so that
every pair lies in exactly one square; equivalently it partitions the edges
of the complete bipartite graph K_{m,n} into closed 4-paths.  Each structure
set presents a group acting simply transitively on the vertices of a product
of two regular trees, and relabeling orbits correspond to those groups up to
conjugacy.

Internally a structure set is stored as the total grid involution
``f(i, k) = (j, l)`` pairing opposite corners of the square through ``(i,
k)``.  Uniqueness and exact cover are then structural, and the square list is
a derived view.  The opposite-corner pairing is forced by the square: the
partner of ``(a_i, b_k)`` inside ``{a_i, b_k, a_j, b_l}`` is (other a-label,
other b-label), including the degenerate cases with repeated labels.

All objects are immutable after construction.  Census-style operations carry
hard guards and raise :class:`ResourceError` beyond them; they never truncate
silently.

File format: ``{"m": M, "n": N, "squares": [[i, k, j, l], ...]}`` with
1-based indices, each square canonically ordered (``i <= j``, ``k <= l``) and
the list sorted lexicographically; see :mod:`bmwgroups.formats`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import (
    ConflictingPairError,
    DegreeError,
    DoublyCoveredPairError,
    IndexOutOfRangeError,
    ResourceError,
    UncoveredPairError,
)
from .perm import Permutation

DEFAULT_CENSUS_GUARD = 16
DEFAULT_CANONICAL_GUARD = 20
_CANONICAL_NODE_BUDGET = 500_000


class Square(NamedTuple):
    """A (possibly degenerate) square ``{a_lo, b_lo, a_hi, b_hi}``.

    Canonical ordering: ``a_lo <= a_hi`` and ``b_lo <= b_hi``.  Degenerate
    squares carry repeated indices; e.g. the diagonal square on ``(a_i,
    b_k)`` is ``Square(i, k, i, k)``.
    """

    a_lo: int
    b_lo: int
    a_hi: int
    b_hi: int

    @classmethod
    def canonical(cls, i: int, k: int, j: int, l: int) -> "Square":
        return cls(min(i, j), min(k, l), max(i, j), max(k, l))

    def cells(self) -> tuple[tuple[int, int], ...]:
        """The distinct pairs covered: 1, 2 or 4 cells."""
        i, k, j, l = self
        return tuple(sorted({(i, k), (i, l), (j, k), (j, l)}))

    def multiplicity(self) -> int:
        return len(self.cells())


class Relabeling(NamedTuple):
    """A simultaneous relabeling of the two sides."""

    mu: Permutation  # acts on a-labels, degree m
    nu: Permutation  # acts on b-labels, degree n


def _square_assignments(square: Square):
    """(cell, partner) assignments forced by the opposite-corner rule."""
    i, k, j, l = square
    raw = (
        ((i, k), (j, l)),
        ((i, l), (j, k)),
        ((j, k), (i, l)),
        ((j, l), (i, k)),
    )
    seen = set()
    out = []
    for cell, partner in raw:
        if cell not in seen:
            seen.add(cell)
            out.append((cell, partner))
    return out


class StructureSet:
    """A validated ``(m, n)``-structure set, stored as its grid involution."""

    __slots__ = ("m", "n", "_pairs")

    def __init__(self, m: int, n: int, pairs: Sequence[tuple[int, int]], _trusted=False):
        self.m = int(m)
        self.n = int(n)
        if self.m < 1 or self.n < 1:
            raise DegreeError("m and n must be positive")
        pairs = tuple((int(j), int(l)) for j, l in pairs)
        if len(pairs) != self.m * self.n:
            raise DegreeError("partner table has the wrong size")
        self._pairs = pairs
        if not _trusted:
            self._check_invariants()

    def _check_invariants(self):
        m, n = self.m, self.n
        for i in range(1, m + 1):
            for k in range(1, n + 1):
                j, l = self.partner(i, k)
                if not (1 <= j <= m and 1 <= l <= n):
                    raise IndexOutOfRangeError(f"partner of ({i},{k}) out of range")
                if self.partner(j, l) != (i, k):
                    raise DegreeError("partner table is not an involution")
                if self.partner(i, l) != (j, k):
                    raise DegreeError("partner table violates the square-swap law")

    # -- queries ---------------------------------------------------------------

    def partner(self, i: int, k: int) -> tuple[int, int]:
        """The opposite corner ``f(i, k)`` of the square through ``(i, k)``."""
        return self._pairs[(i - 1) * self.n + (k - 1)]

    def encoding(self) -> tuple:
        """Flat row-major partner table; injective on structure sets."""
        return self._pairs

    def __eq__(self, other):
        return (
            isinstance(other, StructureSet)
            and (self.m, self.n, self._pairs) == (other.m, other.n, other._pairs)
        )

    def __hash__(self):
        return hash((self.m, self.n, self._pairs))

    def __repr__(self):
        return f"StructureSet(m={self.m}, n={self.n}, squares={len(self.to_squares())})"

    def to_squares(self) -> tuple[Square, ...]:
        """The squares, canonically ordered and sorted lexicographically."""
        out = set()
        for i in range(1, self.m + 1):
            for k in range(1, self.n + 1):
                j, l = self.partner(i, k)
                out.add(Square.canonical(i, k, j, l))
        return tuple(sorted(out))

    def local_involutions(self, side: str) -> tuple[Permutation, ...]:
        """The local involutions read off the grid involution.

        Side "B" returns one permutation of ``{1..n}`` per a-label
        (``alpha_i(k)`` = b-part of the partner of ``(i, k)``); side "A"
        returns one permutation of ``{1..m}`` per b-label.  All returned
        permutations are involutions, possibly with fixed points.
        """
        if side == "B":
            return tuple(
                Permutation([self.partner(i, k)[1] for k in range(1, self.n + 1)])
                for i in range(1, self.m + 1)
            )
        if side == "A":
            return tuple(
                Permutation([self.partner(i, k)[0] for i in range(1, self.m + 1)])
                for k in range(1, self.n + 1)
            )
        raise ValueError("side must be 'A' or 'B'")

    def transpose(self) -> "StructureSet":
        """Swap the roles of the two sides."""
        pairs = [(0, 0)] * (self.m * self.n)
        for i in range(1, self.m + 1):
            for k in range(1, self.n + 1):
                j, l = self.partner(i, k)
                pairs[(k - 1) * self.m + (i - 1)] = (l, j)
        return StructureSet(self.n, self.m, pairs, _trusted=True)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "squares": [list(sq) for sq in self.to_squares()],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StructureSet":
        return validate(doc["m"], doc["n"], [Square(*sq) for sq in doc["squares"]])


# -- construction ------------------------------------------------------------------


def validate(m: int, n: int, squares: Iterable[Sequence[int]]) -> StructureSet:
    """Build a structure set from squares, checking exact cover.

    Raises :class:`IndexOutOfRangeError`, :class:`DoublyCoveredPairError` or
    :class:`UncoveredPairError` as appropriate.
    """
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise DegreeError("m and n must be positive")
    table: dict[tuple[int, int], tuple[int, int]] = {}
    for raw in squares:
        i, k, j, l = (int(v) for v in raw)
        if not (1 <= i <= m and 1 <= j <= m):
            raise IndexOutOfRangeError(f"a-index of {tuple(raw)} outside 1..{m}")
        if not (1 <= k <= n and 1 <= l <= n):
            raise IndexOutOfRangeError(f"b-index of {tuple(raw)} outside 1..{n}")
        for cell, partner in _square_assignments(Square.canonical(i, k, j, l)):
            if cell in table:
                raise DoublyCoveredPairError(cell)
            table[cell] = partner
    pairs = []
    for i in range(1, m + 1):
        for k in range(1, n + 1):
            if (i, k) not in table:
                raise UncoveredPairError((i, k))
            pairs.append(table[(i, k)])
    return StructureSet(m, n, pairs, _trusted=True)


def all_diagonal(m: int, n: int) -> StructureSet:
    """The structure set whose squares are all degenerate diagonals."""
    pairs = [(i, k) for i in range(1, m + 1) for k in range(1, n + 1)]
    return StructureSet(m, n, pairs, _trusted=True)


# -- partial structure sets -----------------------------------------------------------


class PartialStructureSet:
    """A partial grid involution: each pair covered at most once.

    The defined cells are closed under the square symmetry, and the involution
    and swap laws hold on the defined domain.
    """

    __slots__ = ("m", "n", "_cells")

    def __init__(self, m: int, n: int, cells: dict, _trusted=False):
        self.m = int(m)
        self.n = int(n)
        if self.m < 1 or self.n < 1:
            raise DegreeError("m and n must be positive")
        self._cells = dict(cells)
        if not _trusted:
            for (i, k), (j, l) in self._cells.items():
                if not (1 <= i <= self.m and 1 <= j <= self.m):
                    raise IndexOutOfRangeError(f"a-index out of range at ({i},{k})")
                if not (1 <= k <= self.n and 1 <= l <= self.n):
                    raise IndexOutOfRangeError(f"b-index out of range at ({i},{k})")
                if self._cells.get((j, l)) != (i, k):
                    raise DegreeError("partial table is not an involution")
                if self._cells.get((i, l)) != (j, k):
                    raise DegreeError("partial table violates the square-swap law")

    @classmethod
    def empty(cls, m: int, n: int) -> "PartialStructureSet":
        return cls(m, n, {}, _trusted=True)

    @classmethod
    def from_squares(
        cls, m: int, n: int, squares: Iterable[Sequence[int]]
    ) -> "PartialStructureSet":
        m, n = int(m), int(n)
        cells: dict = {}
        for raw in squares:
            i, k, j, l = (int(v) for v in raw)
            if not (1 <= i <= m and 1 <= j <= m and 1 <= k <= n and 1 <= l <= n):
                raise IndexOutOfRangeError(f"square {tuple(raw)} out of range")
            square = Square.canonical(i, k, j, l)
            assignments = _square_assignments(square)
            if all(cells.get(c) == p for c, p in assignments):
                continue  # the same square listed twice is not a conflict
            for cell, partner in assignments:
                if cell in cells:
                    raise DoublyCoveredPairError(cell)
                cells[cell] = partner
        return cls(m, n, cells, _trusted=True)

    def defined_cells(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._cells)

    def partner(self, i: int, k: int) -> Optional[tuple[int, int]]:
        return self._cells.get((i, k))

    def covers(self, i: int, k: int) -> bool:
        return (i, k) in self._cells

    def __len__(self):
        return len(self._cells)

    def to_squares(self) -> tuple[Square, ...]:
        out = {
            Square.canonical(i, k, j, l) for (i, k), (j, l) in self._cells.items()
        }
        return tuple(sorted(out))

    def is_total(self) -> bool:
        return len(self._cells) == self.m * self.n

    def merge(self, other: "PartialStructureSet") -> "PartialStructureSet":
        """Union of defined cells; any doubly covered pair is a conflict."""
        if (self.m, self.n) != (other.m, other.n):
            raise DegreeError("cannot merge partial sets of different degree")
        cells = dict(self._cells)
        for cell, partner in other._cells.items():
            if cell in cells:
                raise ConflictingPairError(cell)
            cells[cell] = partner
        return PartialStructureSet(self.m, self.n, cells, _trusted=True)

    def complete_with_diagonal(self) -> StructureSet:
        """Cover every free pair with its degenerate diagonal square."""
        pairs = []
        for i in range(1, self.m + 1):
            for k in range(1, self.n + 1):
                pairs.append(self._cells.get((i, k), (i, k)))
        return StructureSet(self.m, self.n, pairs, _trusted=True)


def merge(p: PartialStructureSet, q: PartialStructureSet) -> PartialStructureSet:
    return p.merge(q)


def complete_with_diagonal(p: PartialStructureSet) -> StructureSet:
    return p.complete_with_diagonal()


# -- relabeling -------------------------------------------------------------------------


def relabel(s: StructureSet, r: Relabeling) -> StructureSet:
    """Apply ``(mu, nu)`` to both sides: ``f'(mu i, nu k) = (mu x nu) f(i, k)``."""
    mu, nu = r
    if mu.degree != s.m or nu.degree != s.n:
        raise DegreeError("relabeling degree mismatch")
    pairs = [(0, 0)] * (s.m * s.n)
    for i in range(1, s.m + 1):
        for k in range(1, s.n + 1):
            j, l = s.partner(i, k)
            pairs[(mu(i) - 1) * s.n + (nu(k) - 1)] = (mu(j), nu(l))
    return StructureSet(s.m, s.n, pairs, _trusted=True)


def local_involutions(s: StructureSet, side: str) -> tuple[Permutation, ...]:
    return s.local_involutions(side)


# -- canonical forms ----------------------------------------------------------------------


def _swap_col_automorphisms(s: StructureSet) -> list[set[int]]:
    """auto[c] = columns c2 > c whose transposition with c fixes the set."""
    n = s.n
    auto: list[set[int]] = [set() for _ in range(n + 1)]
    for c in range(1, n + 1):
        for c2 in range(c + 1, n + 1):
            tau = Permutation.transposition(n, c, c2)
            if relabel(s, Relabeling(Permutation.identity(s.m), tau)) == s:
                auto[c].add(c2)
                auto[c2].add(c)
    return auto


def _canonical_one_row(s: StructureSet) -> StructureSet:
    """Closed form at m == 1: fixed labels first, then adjacent transpositions."""
    alpha = s.local_involutions("B")[0]
    t = len(alpha.cycles())
    fixed = s.n - 2 * t
    squares = [Square(1, k, 1, k) for k in range(1, fixed + 1)]
    squares += [
        Square(1, fixed + 2 * c + 1, 1, fixed + 2 * c + 2) for c in range(t)
    ]
    return validate(1, s.n, squares)


def _canonical_search(s: StructureSet, node_budget: int) -> StructureSet:
    """Lexicographically minimal row-major partner encoding over relabelings.

    Assumes m! <= n!.  Rows are brute-forced; column labels are assigned by a
    depth-first search over the first row with prefix pruning against the
    best complete encoding found so far.  Column candidates equivalent under
    a column-transposition automorphism are explored once.
    """
    m, n = s.m, s.n
    fa = [[s.partner(i, k)[0] for k in range(1, n + 1)] for i in range(1, m + 1)]
    fb = [[s.partner(i, k)[1] for k in range(1, n + 1)] for i in range(1, m + 1)]
    col_auto = _swap_col_automorphisms(s)
    best: Optional[list[int]] = None
    nodes = 0

    def full_encoding(row_order, new_a, new_b, old_of) -> list[int]:
        enc = []
        for old_r in row_order:
            row_a, row_b = fa[old_r - 1], fb[old_r - 1]
            for c_new in range(1, n + 1):
                old_c = old_of[c_new]
                enc.append(new_a[row_a[old_c - 1]])
                enc.append(new_b[row_b[old_c - 1]])
        return enc

    for row_order in itertools.permutations(range(1, m + 1)):
        new_a = [0] * (m + 1)
        for label, old in enumerate(row_order, 1):
            new_a[old] = label
        r1 = row_order[0]
        row1_a, row1_b = fa[r1 - 1], fb[r1 - 1]
        new_b = [0] * (n + 1)
        old_of = [0] * (n + 1)

        def extend(c_new: int, cmp_state: str):
            # cmp_state: "eq" prefix equals best so far, "lt" strictly below,
            # "ambig" contains an unresolved forward reference.
            nonlocal best, nodes
            nodes += 1
            if nodes > node_budget:
                raise ResourceError(
                    "canonical-form search exceeded its node budget"
                )
            if c_new > n:
                enc = full_encoding(row_order, new_a, new_b, old_of)
                if best is None or enc < best:
                    best = enc
                return
            pos = 2 * (c_new - 1)
            candidates = []
            for old_c in range(1, n + 1):
                if new_b[old_c]:
                    continue
                a_val = new_a[row1_a[old_c - 1]]
                partner_col = row1_b[old_c - 1]
                if partner_col == old_c:
                    b_val = c_new
                else:
                    b_val = new_b[partner_col]  # 0 when still unassigned
                sort_b = b_val if b_val else n + 1
                candidates.append((a_val, sort_b, old_c, b_val))
            candidates.sort()
            tried: list[int] = []
            for a_val, _sort_b, old_c, b_val in candidates:
                if any(old_c in col_auto[t] for t in tried):
                    continue
                tried.append(old_c)
                state = cmp_state
                if state == "eq" and best is not None:
                    if a_val > best[pos]:
                        continue
                    if a_val < best[pos]:
                        state = "lt"
                    elif b_val:
                        if b_val > best[pos + 1]:
                            continue
                        if b_val < best[pos + 1]:
                            state = "lt"
                    else:
                        # unresolved label is at least c_new + 1
                        if best[pos + 1] < c_new + 1:
                            continue
                        state = "ambig"
                new_b[old_c] = c_new
                old_of[c_new] = old_c
                extend(c_new + 1, state)
                new_b[old_c] = 0
                old_of[c_new] = 0

        extend(1, "eq")

    assert best is not None
    pairs = [(best[2 * t], best[2 * t + 1]) for t in range(m * n)]
    return StructureSet(m, n, pairs)


def canonical_form(
    s: StructureSet,
    guard: int = DEFAULT_CANONICAL_GUARD,
    node_budget: int = _CANONICAL_NODE_BUDGET,
) -> StructureSet:
    """A canonical representative of the relabeling orbit of ``s``.

    Two structure sets are relabelings of each other iff their canonical
    forms are equal.  Exact minimization, guarded at ``m * n <= guard``.
    """
    if s.m * s.n > guard:
        raise ResourceError(
            f"canonical form guarded at m*n <= {guard}, got {s.m * s.n}"
        )
    if s.m == 1:
        return _canonical_one_row(s)
    if s.n == 1:
        return _canonical_one_row(s.transpose()).transpose()
    if math.factorial(s.m) <= math.factorial(s.n):
        return _canonical_search(s, node_budget)
    return _canonical_search(s.transpose(), node_budget).transpose()


# -- presentations and summaries -------------------------------------------------------------


def presentation_text(s: StructureSet) -> str:
    """Plain-text presentation: generator line, then one relator per line.

    Generators are ``a1..am b1..bn``; relators are the generator squares
    ``ai^2``/``bk^2`` and one length-4 word per square.
    """
    lines = [
        "generators: "
        + " ".join(f"a{i}" for i in range(1, s.m + 1))
        + " "
        + " ".join(f"b{k}" for k in range(1, s.n + 1))
    ]
    lines += [f"a{i}^2" for i in range(1, s.m + 1)]
    lines += [f"b{k}^2" for k in range(1, s.n + 1)]
    lines += [f"a{sq.a_lo} b{sq.b_lo} a{sq.a_hi} b{sq.b_hi}" for sq in s.to_squares()]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComplexSummary:
    """Statistics of the 4-vertex quotient complex of a structure set."""

    vertices: int
    horizontal_edges: int
    vertical_edges: int
    distinct_squares: int
    pair_cover_total: int
    multiplicities: dict

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "horizontal_edges": self.horizontal_edges,
            "vertical_edges": self.vertical_edges,
            "distinct_squares": self.distinct_squares,
            "pair_cover_total": self.pair_cover_total,
            "multiplicities": dict(self.multiplicities),
        }


def complex_summary(s: StructureSet) -> ComplexSummary:
    """Vertex/edge/square statistics; pair covers always total ``m * n``."""
    squares = s.to_squares()
    hist: dict[int, int] = {}
    total = 0
    for sq in squares:
        mult = sq.multiplicity()
        hist[mult] = hist.get(mult, 0) + 1
        total += mult
    return ComplexSummary(
        vertices=4,
        horizontal_edges=2 * s.m,
        vertical_edges=2 * s.n,
        distinct_squares=len(squares),
        pair_cover_total=total,
        multiplicities=hist,
    )


# -- census ------------------------------------------------------------------------------------


def iter_structure_sets(m: int, n: int, guard: int = DEFAULT_CENSUS_GUARD) -> Iterator[StructureSet]:
    """Exhaustively enumerate all ``(m, n)``-structure sets.

    Backtracking over cells in row-major order: the first free cell picks the
    square covering it, which is determined by the choice of its opposite
    corner.  Each structure set is produced exactly once.
    """
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise DegreeError("m and n must be positive")
    if m * n > guard:
        raise ResourceError(f"census guarded at m*n <= {guard}, got {m * n}")
    table: dict[tuple[int, int], tuple[int, int]] = {}
    order = [(i, k) for i in range(1, m + 1) for k in range(1, n + 1)]

    def rec(start: int) -> Iterator[StructureSet]:
        idx = start
        while idx < len(order) and order[idx] in table:
            idx += 1
        if idx == len(order):
            pairs = [table[cell] for cell in order]
            yield StructureSet(m, n, pairs, _trusted=True)
            return
        i, k = order[idx]
        for j in range(1, m + 1):
            for l in range(1, n + 1):
                assignments = _square_assignments(Square.canonical(i, k, j, l))
                if any(cell in table for cell, _ in assignments):
                    continue
                for cell, partner in assignments:
                    table[cell] = partner
                yield from rec(idx + 1)
                for cell, _ in assignments:
                    del table[cell]

    return rec(0)


def enumerate_structure_sets(m: int, n: int, guard: int = DEFAULT_CENSUS_GUARD) -> int:
    """Number of ``(m, n)``-structure sets (exhaustive count)."""
    return sum(1 for _ in iter_structure_sets(m, n, guard=guard))


def count_up_to_relabeling(m: int, n: int, guard: int = DEFAULT_CENSUS_GUARD) -> int:
    """Number of relabeling classes of ``(m, n)``-structure sets.

    Enumerates the census and partitions it into orbits under adjacent-label
    transpositions on both sides, which generate the full relabeling group.
    """
    all_sets = {s.encoding(): s for s in iter_structure_sets(m, n, guard=guard)}
    gens: list[Relabeling] = []
    for i in range(1, m):
        gens.append(
            Relabeling(Permutation.transposition(m, i, i + 1), Permutation.identity(n))
        )
    for k in range(1, n):
        gens.append(
            Relabeling(Permutation.identity(m), Permutation.transposition(n, k, k + 1))
        )
    unseen = set(all_sets)
    classes = 0
    while unseen:
        classes += 1
        seed = unseen.pop()
        stack = [all_sets[seed]]
        while stack:
            cur = stack.pop()
            for r in gens:
                img = relabel(cur, r)
                key = img.encoding()
                if key in unseen:
                    unseen.remove(key)
                    stack.append(img)
    return classes
