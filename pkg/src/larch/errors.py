"""Exception types raised across the toolkit."""


class LarchError(Exception):
    """Base class for all errors raised by this package."""


# -- repository scanning ---------------------------------------------------

class RootNotFound(LarchError):
    """The requested repository root does not exist or is not a directory."""


class RepoTooLarge(LarchError):
    """A scan limit was exceeded; ``limit`` names which one tripped."""

    def __init__(self, limit: str, detail: str):
        self.limit = limit
        super().__init__(f"{limit}: {detail}")


# -- static analysis -------------------------------------------------------

class NotPythonFile(LarchError):
    """Fact extraction was asked to process a non-Python file."""


class MissingFacts(LarchError):
    """A Python file in the snapshot has no extracted facts entry."""


class MissingAnalysis(LarchError):
    """Feature extraction was asked about a path without facts/graph entries."""


# -- label model -----------------------------------------------------------

class DegenerateInput(LarchError):
    """Every vote in the supplied matrices abstains; nothing to fit."""


# -- ranking ---------------------------------------------------------------

class NoUsablePairs(LarchError):
    """No repository yields a training pair; posteriors are too flat."""


class NoPythonFiles(LarchError):
    """The snapshot contains no rankable Python candidate."""


class VersionMismatch(LarchError):
    """A model file carries an unsupported version tag."""


class MalformedModel(LarchError):
    """A model file is truncated or structurally invalid."""


# -- prompt / generation ---------------------------------------------------

class BudgetTooSmall(LarchError):
    """The prompt scaffold alone exceeds the token budget."""


class GenerationError(LarchError):
    """Base class for backend failures."""


class BackendUnreachable(GenerationError):
    """The completion endpoint could not be reached after retries."""


class BackendRejected(GenerationError):
    """The completion endpoint returned a non-2xx response."""

    def __init__(self, status: int, body: str):
        self.status = status
        self.body = body
        super().__init__(f"backend returned {status}: {body[:500]}")


class EmptyCompletion(GenerationError):
    """The backend answered but the completion text was empty."""
