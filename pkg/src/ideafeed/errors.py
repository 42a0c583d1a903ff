"""Exception hierarchy shared across the package.

Degenerate-but-recoverable situations (empty embedding input, identical
iteration pairs) are signalled by flags or empty results, not exceptions.
"""


class IdeafeedError(Exception):
    """Base class for all package errors."""


# -- embedding ---------------------------------------------------------------

class EmbeddingUnavailable(IdeafeedError):
    """External embedding service could not be reached."""


class DimensionMismatch(IdeafeedError):
    """Two vectors of different dimension were combined."""


# -- quality model -----------------------------------------------------------

class InsufficientData(IdeafeedError):
    """Too few training examples."""


class SingleClass(IdeafeedError):
    """Training set contains only one class."""


# -- diversity / corpus ------------------------------------------------------

class EmptyCorpus(IdeafeedError):
    """Diversity scoring needs at least two prior ideations."""


class TooFewPoints(IdeafeedError):
    """Metric needs more points than were given."""


class EmptySet(IdeafeedError):
    """Chamfer distance needs both point sets non-empty."""


class TooFewSeeds(IdeafeedError):
    """Seed file has fewer messages than requested."""


class ConditionMismatch(IdeafeedError):
    """Record appended to a corpus of a different condition."""


class PromptsExhausted(IdeafeedError):
    """Session has drawn every available prompt."""


# -- explanations ------------------------------------------------------------

class NoContentTokens(IdeafeedError):
    """Text contains no non-stop-word tokens to attribute."""


# -- knowledge graph ---------------------------------------------------------

class IoFailure(IdeafeedError):
    """File could not be read or written."""


class AllLinesMalformed(IdeafeedError):
    """Edge file contained data lines but none parsed."""


class NetworkFailure(IdeafeedError):
    """Remote edge lookup failed and no cached snapshot exists."""


class KnowledgeGraphUnavailable(IdeafeedError):
    """No knowledge graph is loaded."""


# -- service -----------------------------------------------------------------

class InvalidCondition(IdeafeedError):
    """Condition name is not one of the six supported combinations."""


class IterationOutOfOrder(IdeafeedError):
    """Iteration index does not extend the existing lineage by one."""


class TextTooLong(IdeafeedError):
    """Submitted text exceeds the service limit."""


class CompareUnavailable(IdeafeedError):
    """Contrastive comparison requested under a condition without it."""
