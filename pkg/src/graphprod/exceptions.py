"""Exception types shared across the package."""


class GraphProdError(Exception):
    """Base class for errors raised by graphprod."""


class CapExceeded(GraphProdError):
    """An enumeration grew past a configured desk-scale cap."""


class HypothesisError(GraphProdError):
    """Input violates a hypothesis of the construction being requested.

    The message names the violated hypothesis in plain words.
    """


class VerificationError(GraphProdError):
    """A structural verification that should always hold has failed."""
