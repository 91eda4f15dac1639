"""Queries on subgroups of Sym(d) given by generators.

This backs every "the local action is Sym/Alt" certificate in the package:
exact orders through a stabilizer chain, transitivity and 2-transitivity,
primitivity through finest-block refinement, recognition of alternating-group
containment, and Schreier graphs of generator actions.

Exact orders come from the deterministic stabilizer chain in
:mod:`bmwgroups.schreier` behind a degree guard.  Results that cannot be
decided within a budget are reported as ``None`` ("unknown"), never coerced
to ``False``.

Group analyses cache write-once on the instance; concurrent readers are safe
once a value is computed, and analyses of distinct groups are independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegreeError, RangeError, ResourceError, UsageError
from .perm import Permutation
from .rng import RngState

DEFAULT_ORDER_GUARD = 2000
DEFAULT_PRIMITIVITY_GUARD = 10_000
DEFAULT_JORDAN_WORDS = 200
DEFAULT_JORDAN_WORD_LEN = 100
_JORDAN_SEED = 0x6A09E667F3BCC908
_CLOSURE_LIMIT = 1_000_000


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class GroupClassification:
    """Aggregated predicates for one generated group.

    ``None`` means "not computed / not decided within budget"; callers must
    treat it as unknown, not as false.
    """

    degree: int
    method: str  # "exact" | "jordan"
    order: Optional[int] = None
    is_transitive: Optional[bool] = None
    is_two_transitive: Optional[bool] = None
    is_primitive: Optional[bool] = None
    contains_alternating: Optional[bool] = None
    equals_symmetric: Optional[bool] = None

    def to_dict(self) -> dict:
        def tri(v):
            return "unknown" if v is None else v

        return {
            "degree": self.degree,
            "method": self.method,
            "order": "unknown" if self.order is None else self.order,
            "is_transitive": tri(self.is_transitive),
            "is_two_transitive": tri(self.is_two_transitive),
            "is_primitive": tri(self.is_primitive),
            "contains_alternating": tri(self.contains_alternating),
            "equals_symmetric": tri(self.equals_symmetric),
        }


class PermutationGroup:
    """A subgroup of Sym(degree) given by a list of generators."""

    def __init__(self, degree: int, generators: Iterable[Permutation]):
        self.degree = int(degree)
        if self.degree < 1:
            raise DegreeError("degree must be positive")
        gens = tuple(generators)
        for g in gens:
            if g.degree != self.degree:
                raise DegreeError("generator degree mismatch")
        self.generators = gens
        uniq, seen = [], set()
        for g in gens:
            if not g.is_identity() and g.images not in seen:
                seen.add(g.images)
                uniq.append(g)
        self._gens = tuple(uniq)
        self._gen_arrays: Optional[list[np.ndarray]] = None
        self._order: Optional[int] = None
        self._transitive: Optional[bool] = None
        self._two_transitive: Optional[bool] = None
        self._primitive: Optional[bool] = None

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, generators={len(self._gens)})"

    # -- internals -------------------------------------------------------------

    def _images0(self) -> list[tuple[int, ...]]:
        return [tuple(v - 1 for v in g.images) for g in self._gens]

    def _arrays0(self) -> list[np.ndarray]:
        if self._gen_arrays is None:
            self._gen_arrays = [
                np.array([v - 1 for v in g.images], dtype=np.int64) for g in self._gens
            ]
        return self._gen_arrays

    # -- order -----------------------------------------------------------------

    def order(self, guard: int = DEFAULT_ORDER_GUARD) -> int:
        """Exact order via a base/strong-generating-set computation."""
        if self._order is None:
            if self.degree > guard:
                raise ResourceError(
                    f"degree {self.degree} exceeds the stabilizer-chain guard {guard};"
                    " use the jordan strategy instead"
                )
            if not self._gens:
                self._order = 1
            else:
                from .schreier import chain_order

                self._order = chain_order(self.degree, self._images0())
        return self._order

    # -- orbit predicates --------------------------------------------------------

    def is_transitive(self) -> bool:
        if self._transitive is None:
            seen = {0}
            stack = [0]
            gens0 = self._images0()
            while stack:
                x = stack.pop()
                for g in gens0:
                    y = g[x]
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            self._transitive = len(seen) == self.degree
        return self._transitive

    def is_two_transitive(self) -> bool:
        """Transitive on ordered pairs of distinct points."""
        if self.degree < 2:
            raise DegreeError("2-transitivity needs degree at least 2")
        if self._two_transitive is None:
            if not self.is_transitive():
                self._two_transitive = False
            else:
                d = self.degree
                gens0 = self._images0()
                start = 0 * d + 1  # the ordered pair (1, 2)
                seen = {start}
                stack = [start]
                while stack:
                    code = stack.pop()
                    x, y = divmod(code, d)
                    for g in gens0:
                        nxt = g[x] * d + g[y]
                        if nxt not in seen:
                            seen.add(nxt)
                            stack.append(nxt)
                self._two_transitive = len(seen) == d * (d - 1)
        return self._two_transitive

    def is_primitive(self, guard: int = DEFAULT_PRIMITIVITY_GUARD) -> bool:
        """No nontrivial invariant partition; ``False`` for intransitive groups.

        Builds, for every point ``w != 1``, the finest block system whose
        block contains both 1 and ``w`` (union-find refinement) and checks it
        is the full point set.  O(d^2 * generators) worst case.
        """
        if self._primitive is None:
            if self.degree > guard:
                raise ResourceError(
                    f"degree {self.degree} exceeds the primitivity guard {guard}"
                )
            if not self.is_transitive():
                self._primitive = False
            elif self.degree <= 2:
                self._primitive = True
            else:
                self._primitive = all(
                    self._block_size_with(w) == self.degree
                    for w in range(1, self.degree)
                )
        return self._primitive

    def _block_size_with(self, w: int) -> int:
        """Size of the block containing 0 in the finest system merging {0, w}."""
        parent = list(range(self.degree))

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        gens0 = self._images0()
        parent[find(w)] = find(0)
        queue = [(0, w)]
        while queue:
            x, y = queue.pop()
            for g in gens0:
                rx, ry = find(g[x]), find(g[y])
                if rx != ry:
                    parent[ry] = rx
                    queue.append((g[x], g[y]))
        root0 = find(0)
        return sum(1 for x in range(self.degree) if find(x) == root0)

    def minimal_block_with(self, w: int) -> frozenset[int]:
        """The block of point 1 in the finest system merging {1, w} (1-based)."""
        if not (2 <= w <= self.degree):
            raise RangeError("w must lie in 2..degree")
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        gens0 = self._images0()
        parent[find(w - 1)] = find(0)
        queue = [(0, w - 1)]
        while queue:
            x, y = queue.pop()
            for g in gens0:
                rx, ry = find(g[x]), find(g[y])
                if rx != ry:
                    parent[ry] = rx
                    queue.append((g[x], g[y]))
        root0 = find(0)
        return frozenset(x + 1 for x in range(self.degree) if find(x) == root0)

    # -- alternating-group recognition --------------------------------------------

    def _closure_images(self) -> set[tuple[int, ...]]:
        identity = tuple(range(self.degree))
        elements = {identity}
        frontier = [identity]
        gens0 = self._images0()
        while frontier:
            cur = frontier.pop()
            for g in gens0:
                nxt = tuple(g[v] for v in cur)
                if nxt not in elements:
                    if len(elements) >= _CLOSURE_LIMIT:
                        raise ResourceError("closure enumeration limit exceeded")
                    elements.add(nxt)
                    frontier.append(nxt)
        return elements

    def _contains_alternating_brute(self) -> bool:
        elements = self._closure_images()
        import itertools

        for img in itertools.permutations(range(self.degree)):
            transpositions = 0
            seen = [False] * self.degree
            for s in range(self.degree):
                if not seen[s]:
                    seen[s] = True
                    length = 1
                    t = img[s]
                    while t != s:
                        seen[t] = True
                        length += 1
                        t = img[t]
                    transpositions += length - 1
            if transpositions % 2 == 0 and img not in elements:
                return False
        return True

    def _word_element(self, rng: RngState, max_word_len: int) -> list[int]:
        gens = self._arrays0()
        length = 1 + rng.randbelow(max_word_len)
        cur = gens[rng.randbelow(len(gens))].copy()
        for _ in range(length - 1):
            cur = gens[rng.randbelow(len(gens))][cur]
        return cur.tolist()

    def _prime_cycle_certificate(self, img0: list[int]):
        """A (p, power-element) pair certifying a p-cycle in the group, or None.

        Scans the cycle type of ``img0`` for a prime-length cycle with
        p <= d-3 such that no other cycle length is divisible by p; raising
        to the lcm of the other lengths then isolates a p-cycle.
        """
        d = self.degree
        seen = [False] * d
        cycles = []
        for s in range(d):
            if not seen[s]:
                seen[s] = True
                cyc = [s]
                t = img0[s]
                while t != s:
                    seen[t] = True
                    cyc.append(t)
                    t = img0[t]
                cycles.append(cyc)
        lengths = [len(c) for c in cycles]
        best = None
        for i, p in enumerate(lengths):
            if p < 2 or p > d - 3 or not _is_prime(p):
                continue
            if any(j != i and lengths[j] % p == 0 for j in range(len(lengths))):
                continue
            if best is None or p > best[1]:
                best = (i, p)
        if best is None:
            return None
        i, p = best
        other_lcm = 1
        for j, length in enumerate(lengths):
            if j != i:
                other_lcm = math.lcm(other_lcm, length)
        power = [0] * d
        for j, cyc in enumerate(cycles):
            r = other_lcm % len(cyc)
            for pos, x in enumerate(cyc):
                power[x] = cyc[(pos + r) % len(cyc)]
        moved = [x for x in range(d) if power[x] != x]
        if len(moved) != p:  # other cycles did not die; certificate void
            return None
        return p, power

    def contains_alternating(
        self,
        strategy: str = "exact",
        *,
        rng: Optional[RngState] = None,
        words: int = DEFAULT_JORDAN_WORDS,
        max_word_len: int = DEFAULT_JORDAN_WORD_LEN,
        order_guard: int = DEFAULT_ORDER_GUARD,
        primitivity_guard: int = DEFAULT_PRIMITIVITY_GUARD,
    ) -> Optional[bool]:
        """Whether Alt(degree) is contained in the group.

        exact
            Computes the exact order and compares against d!/2 (for d >= 5
            the unique index-2 subgroup of Sym(d) is Alt(d); below d = 5 the
            closure is enumerated instead).  Deterministic true/false.

        jordan
            Semi-decision procedure for degrees beyond the stabilizer-chain
            guard.  Certifies containment from transitivity plus a group
            element that powers to a p-cycle, p prime <= d-3 (Jordan).  A
            found p > d/2 additionally certifies primitivity for free: a
            nontrivial block system would need blocks of size >= p > d/2.
            Smaller p fall back to the explicit primitivity check when the
            degree permits.  Returns None when the word budget is exhausted
            without a certificate.
        """
        d = self.degree
        if strategy not in ("exact", "jordan"):
            raise UsageError(f"unknown strategy {strategy!r}")
        if not self._gens:
            return d <= 2  # Alt(d) is trivial only for d <= 2
        if strategy == "exact" or d < 5:
            if d < 5:
                return self._contains_alternating_brute()
            return self.order(guard=order_guard) >= math.factorial(d) // 2
        if not self.is_transitive():
            return False
        if rng is None:
            rng = RngState(_JORDAN_SEED)
        small_p = False
        for _ in range(words):
            cert = self._prime_cycle_certificate(self._word_element(rng, max_word_len))
            if cert is None:
                continue
            p, _power = cert
            if 2 * p > d:
                return True
            small_p = True
        if small_p and d <= primitivity_guard and self.is_primitive(primitivity_guard):
            return True
        return None

    # -- aggregation ----------------------------------------------------------------

    def classify(
        self,
        strategy: str = "auto",
        *,
        rng: Optional[RngState] = None,
        order_guard: int = DEFAULT_ORDER_GUARD,
        exact_max_degree: int = 128,
        words: int = DEFAULT_JORDAN_WORDS,
        max_word_len: int = DEFAULT_JORDAN_WORD_LEN,
    ) -> GroupClassification:
        """Compute the feasible predicates and package them up.

        ``auto`` selects exact analysis up to ``exact_max_degree`` and the
        jordan route beyond it.
        """
        if strategy not in ("auto", "exact", "jordan"):
            raise UsageError(f"unknown strategy {strategy!r}")
        d = self.degree
        if strategy == "auto":
            strategy = "exact" if d <= exact_max_degree else "jordan"
        transitive = self.is_transitive()
        if strategy == "exact":
            order = self.order(guard=order_guard)
            contains_alt = (
                self._contains_alternating_brute()
                if d < 5
                else order >= math.factorial(d) // 2
            )
            return GroupClassification(
                degree=d,
                method="exact",
                order=order,
                is_transitive=transitive,
                is_two_transitive=self.is_two_transitive() if d >= 2 else None,
                is_primitive=self.is_primitive(),
                contains_alternating=contains_alt,
                equals_symmetric=order == math.factorial(d),
            )
        contains_alt = self.contains_alternating(
            "jordan", rng=rng, words=words, max_word_len=max_word_len
        )
        all_even = all(g.parity() == 0 for g in self._gens)
        if all_even:
            equals_sym = False
        elif contains_alt is True:
            equals_sym = True  # an odd generator rules out G <= Alt(d)
        else:
            equals_sym = None
        two_transitive = True if (contains_alt is True and d >= 4) else None
        primitive = True if (contains_alt is True and d >= 3) else None
        return GroupClassification(
            degree=d,
            method="jordan",
            order=None,
            is_transitive=transitive,
            is_two_transitive=two_transitive,
            is_primitive=primitive,
            contains_alternating=contains_alt,
            equals_symmetric=equals_sym,
        )


# -- module-level operation wrappers -------------------------------------------------


def group_order(group: PermutationGroup, guard: int = DEFAULT_ORDER_GUARD) -> int:
    return group.order(guard=guard)


def is_transitive(group: PermutationGroup) -> bool:
    return group.is_transitive()


def is_two_transitive(group: PermutationGroup) -> bool:
    return group.is_two_transitive()


def is_primitive(group: PermutationGroup, guard: int = DEFAULT_PRIMITIVITY_GUARD) -> bool:
    return group.is_primitive(guard=guard)


def contains_alternating(
    group: PermutationGroup, strategy: str = "exact", **kwargs
) -> Optional[bool]:
    return group.contains_alternating(strategy, **kwargs)


def classify(group: PermutationGroup, strategy: str = "auto", **kwargs) -> GroupClassification:
    return group.classify(strategy, **kwargs)


# -- Schreier graphs -------------------------------------------------------------------


@dataclass(frozen=True)
class SchreierAnalysis:
    """Connectivity/bipartiteness data of a generator action on a domain.

    ``edges`` is the simple Schreier graph (loops discarded, no multi-edges);
    ``loops`` records the discarded fixed-point incidences ``(generator
    index, point)`` separately, since a loop is an odd closed walk even
    though it never obstructs a 2-coloring of the simple graph.
    ``odd_cycle`` is a closed walk of odd length witnessing bipartite=False,
    as a vertex sequence with equal endpoints.
    """

    domain: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    connected: bool
    bipartite: bool
    loops: tuple[tuple[int, int], ...]
    odd_cycle: Optional[tuple[int, ...]]


def schreier_analysis(
    generators: Sequence[Permutation], domain: Iterable[int]
) -> SchreierAnalysis:
    """Build the Schreier graph of a generator action and 2-color it.

    Edges are the pairs ``{x, g(x)}`` over all generators and domain points;
    connectivity and bipartiteness come from one breadth-first 2-coloring.
    Every generator must map the domain into itself.
    """
    points = sorted(set(int(x) for x in domain))
    if not points:
        raise RangeError("domain must be non-empty")
    point_set = set(points)
    edges = set()
    loops = []
    adj: dict[int, list[int]] = {p: [] for p in points}
    for gi, g in enumerate(generators):
        for x in points:
            y = g(x)
            if y not in point_set:
                raise RangeError(f"generator {gi} maps {x} outside the domain")
            if y == x:
                loops.append((gi, x))
            elif (min(x, y), max(x, y)) not in edges:
                edges.add((min(x, y), max(x, y)))
                adj[x].append(y)
                adj[y].append(x)
    color: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    bipartite = True
    odd_cycle = None
    components = 0
    for root in points:
        if root in color:
            continue
        components += 1
        color[root] = 0
        parent[root] = None
        queue = [root]
        while queue:
            nxt = []
            for x in queue:
                for y in adj[x]:
                    if y not in color:
                        color[y] = color[x] ^ 1
                        parent[y] = x
                        nxt.append(y)
                    elif color[y] == color[x] and bipartite:
                        bipartite = False

                        def walk_to_root(v):
                            path = [v]
                            while parent[path[-1]] is not None:
                                path.append(parent[path[-1]])
                            return path

                        up_x = walk_to_root(x)
                        up_y = walk_to_root(y)
                        odd_cycle = tuple(reversed(up_x)) + tuple(up_y)
            queue = nxt
    connected = components == 1
    return SchreierAnalysis(
        domain=tuple(points),
        edges=frozenset(edges),
        connected=connected,
        bipartite=bipartite,
        loops=tuple(loops),
        odd_cycle=odd_cycle,
    )
