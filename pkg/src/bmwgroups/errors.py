"""Exception types shared across the package."""


class BmwError(Exception):
    """Base class for all package-specific errors."""


class DegreeError(BmwError, ValueError):
    """A permutation degree is invalid (odd where even is required, mismatch, ...)."""


class ArityError(BmwError, ValueError):
    """Too few tuple coordinates for the requested operation."""


class RangeError(BmwError, ValueError):
    """An index or size parameter is outside its documented range."""


class UsageError(BmwError, ValueError):
    """An invalid combination of arguments (bad kind, bad strategy, ...)."""


class ResourceError(BmwError, RuntimeError):
    """A computation was refused because it exceeds a hard guard.

    Guards are hard errors by design, never silent truncation.
    """


class StructureSetError(BmwError, ValueError):
    """Base class for structure-set validation failures."""


class UncoveredPairError(StructureSetError):
    """Some (a_i, b_k) pair is covered by no square."""

    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"pair (a{pair[0]}, b{pair[1]}) is not covered by any square")


class DoublyCoveredPairError(StructureSetError):
    """Some (a_i, b_k) pair is covered by more than one square."""

    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"pair (a{pair[0]}, b{pair[1]}) is covered twice")


class ConflictingPairError(StructureSetError):
    """Merging two partial structure sets would cover a pair twice."""

    def __init__(self, pair, tags=None):
        self.pair = pair
        self.tags = tags
        detail = f" (families: {tags[0]!r} vs {tags[1]!r})" if tags else ""
        super().__init__(
            f"pair (a{pair[0]}, b{pair[1]}) is covered by both operands{detail}"
        )


class IndexOutOfRangeError(StructureSetError):
    """A square references an index outside 1..m or 1..n."""


class TripleMatchingError(BmwError, ValueError):
    """A tuple with triple matchings does not define a structure set."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            f"triple matching at point {witness[0]} for coordinates {witness[1]}"
        )
