"""Exception types raised by the rowcon library.

Every failure mode that callers are expected to branch on gets its own
class; all of them derive from ``RowconError`` so the CLI can catch the
whole family at once.
"""


class RowconError(Exception):
    """Base class for all rowcon errors."""


class DimensionMismatch(RowconError):
    """Matrix shapes are inconsistent with the declared (n, d)."""


class NotContractive(RowconError):
    """The tuple violates sum A_i A_i* <= I beyond tolerance."""


class NotStrictlyContractive(RowconError):
    """An operation requiring a strict contraction got a boundary tuple."""


class NotUnitary(RowconError):
    """A matrix expected to be unitary is not, beyond tolerance."""


class NotUnit(RowconError):
    """A vector expected to have unit norm does not."""


class BadWord(RowconError):
    """A free-semigroup word contains letters outside 1..n."""


class NoConvergence(RowconError):
    """An iterative limit failed to converge within its iteration cap."""


class SearchFailed(RowconError):
    """A randomized subspace search exhausted its restart budget."""


class NotCoinvariant(RowconError):
    """A subspace expected to be invariant under every A_i* is not."""


class IncompleteFamily(RowconError):
    """The greedy family of minimal coinvariant subspaces failed its
    post-hoc completeness certificate."""


class BlockingFailure(RowconError):
    """An intertwiner between equivalent blocks could not be scaled to a
    unitary; indicates tolerance breakdown."""


class Inconsistent(RowconError):
    """Two independent criteria that must agree disagreed (diagnostic)."""


class AmbiguousIntertwinerSpace(RowconError):
    """The intertwiner space is too large to decide unitary equivalence
    with the implemented certificates."""


class Undecided(RowconError):
    """A similarity search found intertwiners but no well-conditioned
    invertible one; the verdict is left open."""


class NotApplicable(RowconError):
    """The requested test does not apply to the given inputs."""


class NotIrreducible(RowconError):
    """An operation requiring an irreducible tuple got a reducible one."""


class MixedNotConvergent(RowconError):
    """The mixed transfer operator has spectral radius >= 1."""


class NoIsometricSolution(RowconError):
    """The intertwiner system admits no isometric normalization."""
