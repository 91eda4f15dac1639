"""The random model: tuples of fixed-point-free involutions and certificates.

A tuple ``(alpha_1, .., alpha_m)`` of fixed-point-free involutions of degree
``n`` with no triple matchings determines a structure set whose B-side local
involutions are exactly the ``alpha_i``: for each point pair ``k < l`` the
set of coordinates mapping ``k`` to ``l`` (at most two of them) contributes
one square.  This module samples such tuples reproducibly, evaluates every
certificate used to predict properties of the presented group, and runs
exact or Monte-Carlo probability computations against closed-form values.

Certificates (names used in reports):

* no_triple_matchings - no three coordinates agree at a point;
* no_overlapping_matches - no two distinct coordinate pairs agree at one
  point;
* midpoint - every two coordinates are linked through a third sharing an
  orbit with each (the strengthened reading that the middle coordinate is
  distinct from both; with the two conditions above this forces the A-side
  local action to be the full symmetric group);
* white_ball - some vertex of the match graph sees only white edges in its
  closed ball of a given radius (default 6, the radius required by the
  Trofimov-Weiss non-discreteness criterion);
* connected / has_black_edge - properties of the match graph;
* A-side 2-transitivity - evaluated on the derived structure set.

Conclusions are conjunctions of certificates plus externally cited theorems
(Burger-Mozes for hereditary just-infiniteness; m, n >= 6 and alternating
local actions required); the report only certifies hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    ArityError,
    DegreeError,
    RangeError,
    ResourceError,
    TripleMatchingError,
    UsageError,
)
from .perm import (
    FpfInvolution,
    count_fpf,
    double_factorial,
    enumerate_fpf,
    pairing,
    random_fpf,
    random_fpf_images_batch,
)
from .permgroup import GroupClassification, PermutationGroup
from .rng import GAMMA, RngState, mix64, mix64_array
from .structure import StructureSet, Square, validate

DEFAULT_BALL_RADIUS = 6
DEFAULT_ENUMERATION_LIMIT = 1_000_000
MC_KINDS = (
    "orbit_share",
    "expected_M",
    "triple_matching_rate",
    "overlap_rate",
    "certificate_rates",
)


@dataclass(frozen=True)
class InvolutionTuple:
    """An element of (F_n)^m: m fixed-point-free involutions of degree n."""

    m: int
    n: int
    entries: tuple[FpfInvolution, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ArityError("m must be positive")
        if len(self.entries) != self.m:
            raise ArityError("entry count does not match m")
        for e in self.entries:
            if e.degree != self.n:
                raise DegreeError("entry degree mismatch")

    @classmethod
    def from_images(cls, images: Sequence[Sequence[int]]) -> "InvolutionTuple":
        entries = tuple(FpfInvolution(img) for img in images)
        if not entries:
            raise ArityError("at least one involution required")
        return cls(len(entries), entries[0].degree, entries)

    def pairings(self) -> tuple[frozenset, ...]:
        return tuple(pairing(e) for e in self.entries)


def sample_tuple(m: int, n: int, rng: RngState) -> InvolutionTuple:
    """m independent uniform fixed-point-free involutions, one rng stream.

    Coordinate ``c`` consumes the draws ``[c * n/2, (c+1) * n/2)`` of the
    stream, so the whole tuple is a pure function of the rng seed.
    """
    if m < 1:
        raise ArityError("m must be positive")
    entries = tuple(random_fpf(n, rng) for _ in range(m))
    return InvolutionTuple(m, n, entries)


def sample_tuple_images_batch(
    m: int, n: int, rng: RngState, first_trial: int, count: int
) -> np.ndarray:
    """Image arrays of ``sample_tuple(m, n, rng.derive(t))`` for a trial range.

    Returns a ``(count, m, n)`` 1-based array whose row ``t`` equals the
    scalar tuple for trial ``first_trial + t``.  Used by the Monte-Carlo
    drivers; results are identical to the scalar path for every trial.
    """
    if n < 2 or n % 2:
        raise DegreeError("n must be even and at least 2")
    idx = np.arange(first_trial + 1, first_trial + count + 1, dtype=np.uint64)
    seeds = mix64_array(np.uint64(mix64(rng.seed)) + idx * np.uint64(GAMMA))
    steps = n // 2
    out = np.empty((count, m, n), dtype=np.int64)
    for c in range(m):
        out[:, c, :] = random_fpf_images_batch(n, seeds, start_index=c * steps)
    return out


# -- matchings and witnesses ---------------------------------------------------------------


class TripleWitness(NamedTuple):
    point: int
    coords: tuple[int, int, int]


class OverlapWitness(NamedTuple):
    point: int
    first: tuple[int, int]
    second: tuple[int, int]


@dataclass(frozen=True)
class MidpointResult:
    holds: bool
    failing: Optional[tuple[int, int]] = None


def triple_matchings(t: InvolutionTuple) -> Optional[TripleWitness]:
    """First (point, coordinate triple) with three coordinates agreeing.

    Witnesses are lexicographically first in ``(k, i, j, p)``; returns None
    when there is no triple matching (always, for m < 3).
    """
    if t.m < 3:
        return None
    images = [e.images for e in t.entries]
    for k in range(1, t.n + 1):
        hits: dict[int, list[int]] = {}
        for idx, img in enumerate(images, 1):
            hits.setdefault(img[k - 1], []).append(idx)
        best = None
        for coords in hits.values():
            if len(coords) >= 3:
                triple = tuple(coords[:3])
                if best is None or triple < best:
                    best = triple
        if best is not None:
            return TripleWitness(k, best)
    return None


def overlapping_matches(t: InvolutionTuple) -> Optional[OverlapWitness]:
    """First point where two distinct coordinate pairs agree.

    The two pairs may intersect; only inequality of the pairs is required.
    """
    if t.m < 2:
        return None
    images = [e.images for e in t.entries]
    for k in range(1, t.n + 1):
        hits: dict[int, list[int]] = {}
        for idx, img in enumerate(images, 1):
            hits.setdefault(img[k - 1], []).append(idx)
        point_pairs = []
        for coords in hits.values():
            if len(coords) >= 2:
                point_pairs.extend(
                    (coords[i], coords[j])
                    for i in range(len(coords))
                    for j in range(i + 1, len(coords))
                )
        if len(point_pairs) >= 2:
            point_pairs.sort()
            return OverlapWitness(k, point_pairs[0], point_pairs[1])
    return None


def midpoint_property(t: InvolutionTuple) -> MidpointResult:
    """For every i != i', some third coordinate shares an orbit with both.

    The middle coordinate j is required to differ from i and i'; this is the
    reading under which the property, together with no triple matchings and
    no overlapping matches, forces the A-side local action to be the full
    symmetric group.
    """
    if t.m < 3:
        raise ArityError("midpoint property needs at least 3 coordinates")
    ps = t.pairings()
    shared = [
        [bool(ps[i] & ps[j]) if i != j else True for j in range(t.m)]
        for i in range(t.m)
    ]
    for i in range(t.m):
        for i2 in range(i + 1, t.m):
            if not any(
                shared[i][j] and shared[j][i2]
                for j in range(t.m)
                if j != i and j != i2
            ):
                return MidpointResult(False, (i + 1, i2 + 1))
    return MidpointResult(True, None)


def structure_set_from_tuple(t: InvolutionTuple) -> StructureSet:
    """The structure set with B-side local involutions exactly ``t.entries``.

    For each ``k < l``, the coordinates mapping ``k`` to ``l`` (one or two of
    them, by the no-triple-matchings requirement) span one square.
    """
    witness = triple_matchings(t)
    if witness is not None:
        raise TripleMatchingError(witness)
    squares = []
    images = [e.images for e in t.entries]
    for k in range(1, t.n + 1):
        groups: dict[int, list[int]] = {}
        for idx in range(1, t.m + 1):
            l = images[idx - 1][k - 1]
            if l > k:
                groups.setdefault(l, []).append(idx)
        for l, coords in groups.items():
            if len(coords) == 1:
                squares.append(Square(coords[0], k, coords[0], l))
            else:
                squares.append(Square(coords[0], k, coords[1], l))
    return validate(t.m, t.n, squares)


# -- the match graph -----------------------------------------------------------------------


class MatchGraph:
    """Graph on the points 1..n with an edge where some coordinate matches.

    An edge {i, j} exists when some coordinate maps i to j; it is black when
    at least two distinct coordinates do, white otherwise.  Simple graph;
    fixed points cannot occur (all entries are fixed-point-free).
    """

    __slots__ = ("n", "edge_coords", "_adj")

    def __init__(self, n: int, edge_coords: dict):
        self.n = n
        self.edge_coords = edge_coords
        self._adj: Optional[dict] = None

    @classmethod
    def from_tuple(cls, t: InvolutionTuple) -> "MatchGraph":
        edge_coords: dict[tuple[int, int], tuple[int, ...]] = {}
        for idx, entry in enumerate(t.entries, 1):
            img = entry.images
            for k in range(1, t.n + 1):
                l = img[k - 1]
                if k < l:
                    key = (k, l)
                    edge_coords[key] = edge_coords.get(key, ()) + (idx,)
        return cls(t.n, edge_coords)

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edge_coords))

    def black_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(e for e, cs in self.edge_coords.items() if len(cs) >= 2))

    def white_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(e for e, cs in self.edge_coords.items() if len(cs) == 1))

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        if self._adj is None:
            adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
            for (u, v) in self.edge_coords:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = {v: tuple(ns) for v, ns in adj.items()}
        return self._adj

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.adjacency()
        seen = {1}
        stack = [1]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def ball(self, center: int, radius: int) -> dict[int, int]:
        """Distance map of the closed ball around ``center``."""
        adj = self.adjacency()
        dist = {center: 0}
        frontier = [center]
        d = 0
        while frontier and d < radius:
            d += 1
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = d
                        nxt.append(y)
            frontier = nxt
        return dist


def match_graph(t: InvolutionTuple) -> MatchGraph:
    return MatchGraph.from_tuple(t)


def match_statistic(t: InvolutionTuple) -> int:
    """Total number of shared orbits over all coordinate pairs.

    Equals the black-edge count of the match graph exactly when the tuple
    has no triple matchings, and exceeds it otherwise.
    """
    ps = t.pairings()
    return sum(
        len(ps[i] & ps[j]) for i in range(t.m) for j in range(i + 1, t.m)
    )


def white_ball_vertex(graph: MatchGraph, radius: int) -> Optional[int]:
    """Smallest vertex whose closed ball of the given radius is all white.

    An edge lies in the closed ball of b when both endpoints are within
    ``radius`` of b, so a vertex is disqualified exactly when it is within
    ``radius`` of both endpoints of some black edge.
    """
    if radius < 0:
        raise RangeError("radius must be non-negative")
    black = graph.black_edges()
    if not black:
        return 1 if graph.n >= 1 else None
    contaminated: set[int] = set()
    for (u, v) in black:
        bu = graph.ball(u, radius)
        bv = graph.ball(v, radius)
        small, big = (bu, bv) if len(bu) <= len(bv) else (bv, bu)
        contaminated.update(x for x in small if x in big)
        if len(contaminated) == graph.n:
            return None
    for b in range(1, graph.n + 1):
        if b not in contaminated:
            return b
    return None


# -- certificates ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    """Everything the pipeline can certify about one tuple.

    Local-action classifications are None when no structure set exists
    (triple matchings present); tri-state fields inside the classifications
    use None for "unknown".  Conclusions are derived properties, recomputed
    from the certificate fields.
    """

    m: int
    n: int
    radius: int
    no_triple_matchings: bool
    triple_witness: Optional[TripleWitness]
    no_overlapping_matches: bool
    overlap_witness: Optional[OverlapWitness]
    midpoint: Optional[bool]  # None when m < 3 (property inapplicable)
    midpoint_witness: Optional[tuple[int, int]]
    white_ball_vertex: Optional[int]
    connected: bool
    has_black_edge: bool
    match_statistic: int
    a_local: Optional[GroupClassification]
    b_local: Optional[GroupClassification]

    @property
    def a_local_symmetric_predicted(self) -> bool:
        return bool(
            self.no_triple_matchings
            and self.no_overlapping_matches
            and self.midpoint is True
        )

    @property
    def a_local_two_transitive(self) -> bool:
        return self.a_local is not None and self.a_local.is_two_transitive is True

    @property
    def irreducible_certified(self) -> bool:
        return bool(
            self.no_triple_matchings
            and self.white_ball_vertex is not None
            and self.connected
            and self.has_black_edge
            and self.a_local_two_transitive
        )

    @property
    def hji_certified(self) -> bool:
        return bool(
            self.irreducible_certified
            and self.m >= 6
            and self.n >= 6
            and self.a_local is not None
            and self.a_local.contains_alternating is True
            and self.b_local is not None
            and self.b_local.contains_alternating is True
        )

    def to_dict(self) -> dict:
        def tri(v):
            return "unknown" if v is None else v

        return {
            "m": self.m,
            "n": self.n,
            "radius": self.radius,
            "certificates": {
                "no_triple_matchings": self.no_triple_matchings,
                "triple_witness": (
                    None
                    if self.triple_witness is None
                    else {
                        "point": self.triple_witness.point,
                        "coords": list(self.triple_witness.coords),
                    }
                ),
                "no_overlapping_matches": self.no_overlapping_matches,
                "overlap_witness": (
                    None
                    if self.overlap_witness is None
                    else {
                        "point": self.overlap_witness.point,
                        "pairs": [
                            list(self.overlap_witness.first),
                            list(self.overlap_witness.second),
                        ],
                    }
                ),
                "midpoint": tri(self.midpoint),
                "midpoint_witness": (
                    None if self.midpoint_witness is None else list(self.midpoint_witness)
                ),
                "white_ball_vertex": self.white_ball_vertex,
                "connected": self.connected,
                "has_black_edge": self.has_black_edge,
                "match_statistic": self.match_statistic,
                "a_local": None if self.a_local is None else self.a_local.to_dict(),
                "b_local": None if self.b_local is None else self.b_local.to_dict(),
            },
            "conclusions": {
                "a_local_symmetric_predicted": self.a_local_symmetric_predicted,
                "irreducible_certified": self.irreducible_certified,
                "hereditarily_just_infinite_certified": self.hji_certified,
            },
            "thresholds": {
                "n_gt_m5": self.n > self.m**5,
                "n_gt_m8": self.n > self.m**8,
            },
        }


def irr_certificate(
    t: InvolutionTuple,
    radius: int = DEFAULT_BALL_RADIUS,
    *,
    rng: Optional[RngState] = None,
    exact_max_degree: int = 128,
    jordan_words: int = 200,
    jordan_word_len: int = 100,
) -> CertificateReport:
    """Evaluate every certificate for one tuple.

    The ball radius for the white-ball condition is a parameter because the
    default 6 is tied to the stabilizer indices of the Trofimov-Weiss
    criterion.  When triple matchings prevent a structure set, the local
    classifications are omitted and dependent certificates read unknown.
    """
    triple = triple_matchings(t)
    overlap = overlapping_matches(t)
    mid = midpoint_property(t) if t.m >= 3 else None
    graph = match_graph(t)
    black = graph.black_edges()
    a_cls = b_cls = None
    if triple is None:
        derived = structure_set_from_tuple(t)
        a_group = PermutationGroup(t.m, derived.local_involutions("A"))
        b_group = PermutationGroup(t.n, derived.local_involutions("B"))
        a_cls = a_group.classify("auto", exact_max_degree=exact_max_degree)
        b_cls = b_group.classify(
            "auto",
            rng=rng,
            exact_max_degree=exact_max_degree,
            words=jordan_words,
            max_word_len=jordan_word_len,
        )
    return CertificateReport(
        m=t.m,
        n=t.n,
        radius=radius,
        no_triple_matchings=triple is None,
        triple_witness=triple,
        no_overlapping_matches=overlap is None,
        overlap_witness=overlap,
        midpoint=None if mid is None else mid.holds,
        midpoint_witness=None if mid is None else mid.failing,
        white_ball_vertex=white_ball_vertex(graph, radius),
        connected=graph.is_connected(),
        has_black_edge=len(black) > 0,
        match_statistic=match_statistic(t),
        a_local=a_cls,
        b_local=b_cls,
    )


# -- exact probabilities ----------------------------------------------------------------------


class OrbitShareProbability(NamedTuple):
    exact: Fraction
    value: float


def exact_orbit_share_prob(n: int) -> OrbitShareProbability:
    """Probability that two uniform elements of F_n share an orbit.

    Inclusion-exclusion over the orbits of the first involution:
    sum_{k=1}^{n/2} (-1)^(k+1) C(n/2, k) (n-2k-1)!!/(n-1)!!, with the
    convention (-1)!! = 1 covering the last term.  Converges to
    1 - exp(-1/2) as n grows.
    """
    if n < 2 or n % 2:
        raise DegreeError("n must be even and at least 2")
    r = n // 2
    denom = double_factorial(n - 1)
    total = Fraction(0)
    for k in range(1, r + 1):
        term = Fraction(math.comb(r, k) * double_factorial(n - 2 * k - 1), denom)
        total += term if k % 2 else -term
    return OrbitShareProbability(total, float(total))


def expected_match_statistic(m: int, n: int) -> Fraction:
    """Exact mean of the shared-orbit statistic: C(m,2) * n / (2(n-1))."""
    if n < 2 or n % 2:
        raise DegreeError("n must be even and at least 2")
    return Fraction(math.comb(m, 2) * n, 2 * (n - 1))


class CapraceValues(NamedTuple):
    """Integer members of the degree-exclusion list, plus flagged non-integers."""

    values: frozenset[int]
    non_integer: tuple[Fraction, ...]


def caprace_exceptional_set(m: int) -> CapraceValues:
    """The eight degree values excluded by Caprace's boundary-transitivity
    theorem, evaluated exactly at ``m``.

    For small ``m`` some of the eight expressions are not integers; they are
    reported separately rather than rounded.
    """
    if m < 2:
        raise RangeError("m must be at least 2")
    mf = Fraction(math.factorial(m))
    pf = Fraction(math.factorial(m - 1))
    exprs = (
        mf / 2 - 1,
        mf / 2,
        mf - 1,
        mf * pf / 4 - 1,
        mf * pf / 4,
        mf * pf / 2 - 1,
        mf * pf / 2,
        mf * pf - 1,
    )
    ints = frozenset(int(v) for v in exprs if v.denominator == 1)
    flagged = tuple(sorted(v for v in exprs if v.denominator != 1))
    return CapraceValues(ints, flagged)


# -- Monte Carlo / exhaustive estimation --------------------------------------------------------


class McStat(NamedTuple):
    mean: float
    std_error: float


@dataclass
class McResult:
    """Estimate document for one estimation run."""

    kind: str
    m: Optional[int]
    n: int
    trials: int
    seed: Optional[int]
    mode: str  # "sampling" | "enumeration"
    stats: dict = field(default_factory=dict)  # name -> McStat
    exact: dict = field(default_factory=dict)  # name -> float
    exact_repr: dict = field(default_factory=dict)  # name -> exact rational as text
    bounds: dict = field(default_factory=dict)

    def primary(self) -> McStat:
        return self.stats[_PRIMARY_STAT[self.kind]]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
            "estimates": {
                k: {"mean": s.mean, "std_error": s.std_error}
                for k, s in self.stats.items()
            },
            "exact": dict(self.exact),
            "exact_repr": dict(self.exact_repr),
            "bounds": dict(self.bounds),
        }


_PRIMARY_STAT = {
    "orbit_share": "share_probability",
    "expected_M": "mean_shared_orbits",
    "triple_matching_rate": "rate",
    "overlap_rate": "rate",
}


def enumerate_tuples(m: int, n: int) -> Iterator[InvolutionTuple]:
    """All of (F_n)^m, in lexicographic order; desk-scale only."""
    import itertools

    pool = list(enumerate_fpf(n))
    for combo in itertools.product(pool, repeat=m):
        yield InvolutionTuple(m, n, tuple(combo))


def _mean_se(values: np.ndarray) -> McStat:
    values = np.asarray(values, dtype=np.float64)
    mean = float(values.mean())
    if values.size < 2:
        return McStat(mean, 0.0)
    se = float(values.std(ddof=1) / math.sqrt(values.size))
    return McStat(mean, se)


def _batch_values(kind: str, m: int, n: int, trials: int, rng: RngState) -> np.ndarray:
    values = np.empty(trials, dtype=np.float64)
    chunk = max(1, min(4096, trials))
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        imgs = sample_tuple_images_batch(m, n, rng, done, size)
        if kind == "orbit_share":
            values[done : done + size] = (imgs[:, 0, :] == imgs[:, 1, :]).any(axis=1)
        elif kind == "expected_M":
            acc = np.zeros(size, dtype=np.int64)
            for i in range(m):
                for j in range(i + 1, m):
                    acc += (imgs[:, i, :] == imgs[:, j, :]).sum(axis=1)
            values[done : done + size] = acc // 2
        elif kind == "triple_matching_rate":
            flag = np.zeros((size, n), dtype=bool)
            for i in range(m):
                for j in range(i + 1, m):
                    eq_ij = imgs[:, i, :] == imgs[:, j, :]
                    for p in range(j + 1, m):
                        flag |= eq_ij & (imgs[:, j, :] == imgs[:, p, :])
            values[done : done + size] = flag.any(axis=1)
        elif kind == "overlap_rate":
            counts = np.zeros((size, n), dtype=np.int32)
            for i in range(m):
                for j in range(i + 1, m):
                    counts += imgs[:, i, :] == imgs[:, j, :]
            values[done : done + size] = (counts >= 2).any(axis=1)
        else:  # pragma: no cover - guarded by caller
            raise UsageError(f"kind {kind!r} has no batch driver")
        done += size
    return values


def _scalar_values(kind: str, m: int, n: int, trials: int, rng: RngState) -> np.ndarray:
    values = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        tup = sample_tuple(m, n, rng.derive(t))
        if kind == "orbit_share":
            values[t] = float(bool(tup.pairings()[0] & tup.pairings()[1]))
        elif kind == "expected_M":
            values[t] = match_statistic(tup)
        elif kind == "triple_matching_rate":
            values[t] = float(triple_matchings(tup) is not None)
        elif kind == "overlap_rate":
            values[t] = float(overlapping_matches(tup) is not None)
        else:
            raise UsageError(f"kind {kind!r} has no scalar driver")
    return values


_CERT_FLAGS = (
    "no_triple_matchings",
    "no_overlapping_matches",
    "midpoint",
    "white_ball",
    "connected",
    "has_black_edge",
    "a_local_two_transitive",
    "a_local_symmetric",
    "b_local_contains_alternating",
    "b_local_alternating_unknown",
    "irreducible_certified",
    "hji_certified",
)


def _certificate_flags(rep: CertificateReport) -> dict:
    return {
        "no_triple_matchings": rep.no_triple_matchings,
        "no_overlapping_matches": rep.no_overlapping_matches,
        "midpoint": rep.midpoint is True,
        "white_ball": rep.white_ball_vertex is not None,
        "connected": rep.connected,
        "has_black_edge": rep.has_black_edge,
        "a_local_two_transitive": rep.a_local_two_transitive,
        "a_local_symmetric": rep.a_local is not None
        and rep.a_local.equals_symmetric is True,
        "b_local_contains_alternating": rep.b_local is not None
        and rep.b_local.contains_alternating is True,
        "b_local_alternating_unknown": rep.b_local is not None
        and rep.b_local.contains_alternating is None,
        "irreducible_certified": rep.irreducible_certified,
        "hji_certified": rep.hji_certified,
    }


def _attach_closed_forms(result: McResult, kind: str, m: Optional[int], n: int) -> None:
    if kind == "orbit_share":
        exact = exact_orbit_share_prob(n)
        result.exact["share_probability"] = exact.value
        result.exact_repr["share_probability"] = str(exact.exact)
        result.bounds["limit"] = 1.0 - math.exp(-0.5)
    elif kind == "expected_M":
        exact = expected_match_statistic(m, n)
        result.exact["mean_shared_orbits"] = float(exact)
        result.exact_repr["mean_shared_orbits"] = str(exact)
    elif kind == "triple_matching_rate":
        result.bounds["rate_upper"] = 4 * m**3 / n
    elif kind == "overlap_rate":
        result.bounds["rate_upper"] = 4 * m**4 / n
    elif kind == "certificate_rates":
        result.bounds["no_triple_lower"] = max(0.0, 1 - 4 * m**3 / n)
        result.bounds["no_overlap_lower"] = max(0.0, 1 - 4 * m**4 / n)
        result.bounds["midpoint_lower"] = max(0.0, 1 - 2 * m**2 * (8 / 9) ** m)
        result.bounds["no_black_edge_upper"] = (2 / 3) ** (m - 1)
        if n > m**8:
            result.bounds["white_ball_lower"] = 1 - 1 / m


def monte_carlo(
    kind: str,
    m: Optional[int],
    n: int,
    trials: int,
    rng: RngState,
    *,
    radius: int = DEFAULT_BALL_RADIUS,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT,
    force_scalar: bool = False,
) -> McResult:
    """Estimate a model statistic, by sampling or by exhaustive enumeration.

    ``trials = 0`` switches to enumeration mode: the estimand is computed
    exactly over all of ``(F_n)^m`` (refused when that set exceeds
    ``enumeration_limit``).  Sampling mode derives one rng substream per
    trial from ``(seed, trial index)``, so results do not depend on batching
    or scheduling; the passed state itself is never advanced.
    """
    if kind not in MC_KINDS:
        raise UsageError(f"unknown kind {kind!r}; expected one of {MC_KINDS}")
    if n < 2 or n % 2:
        raise DegreeError("n must be even and at least 2")
    if kind == "orbit_share":
        if m not in (None, 2):
            raise UsageError("orbit_share is a two-coordinate statistic")
        m_eff = 2
    else:
        if m is None or m < 1:
            raise UsageError(f"kind {kind!r} requires m >= 1")
        m_eff = m
    if trials < 0:
        raise UsageError("trials must be non-negative")

    if trials == 0:
        space = count_fpf(n) ** m_eff
        if space > enumeration_limit:
            raise ResourceError(
                f"enumeration over |F_{n}|^{m_eff} = {space} exceeds the limit"
                f" {enumeration_limit}"
            )
        result = McResult(kind, m, n, 0, None, "enumeration")
        if kind == "certificate_rates":
            sums = {name: 0 for name in _CERT_FLAGS}
            total = 0
            for tup in enumerate_tuples(m_eff, n):
                total += 1
                for name, val in _certificate_flags(
                    irr_certificate(tup, radius=radius)
                ).items():
                    sums[name] += bool(val)
            for name in _CERT_FLAGS:
                frac = Fraction(sums[name], total)
                result.stats[name] = McStat(float(frac), 0.0)
                result.exact_repr[name] = str(frac)
        else:
            total = 0
            acc = Fraction(0)
            for tup in enumerate_tuples(m_eff, n):
                total += 1
                if kind == "orbit_share":
                    acc += bool(tup.pairings()[0] & tup.pairings()[1])
                elif kind == "expected_M":
                    acc += match_statistic(tup)
                elif kind == "triple_matching_rate":
                    acc += triple_matchings(tup) is not None
                else:
                    acc += overlapping_matches(tup) is not None
            frac = acc / total
            name = _PRIMARY_STAT[kind]
            result.stats[name] = McStat(float(frac), 0.0)
            result.exact_repr[name] = str(frac)
        _attach_closed_forms(result, kind, m_eff, n)
        return result

    result = McResult(kind, m, n, trials, rng.seed, "sampling")
    if kind == "certificate_rates":
        flags = {name: np.empty(trials, dtype=np.float64) for name in _CERT_FLAGS}
        for t in range(trials):
            tup = sample_tuple(m_eff, n, rng.derive(t))
            for name, val in _certificate_flags(
                irr_certificate(tup, radius=radius)
            ).items():
                flags[name][t] = float(val)
        for name in _CERT_FLAGS:
            result.stats[name] = _mean_se(flags[name])
    else:
        driver = _scalar_values if force_scalar else _batch_values
        values = driver(kind, m_eff, n, trials, rng)
        result.stats[_PRIMARY_STAT[kind]] = _mean_se(values)
    _attach_closed_forms(result, kind, m_eff, n)
    return result
