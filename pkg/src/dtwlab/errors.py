"""Exception types shared across the package."""


class DtwlabError(Exception):
    """Base class for all errors raised by dtwlab."""


class GraphError(DtwlabError, ValueError):
    """Malformed digraph input or an invalid graph operation."""


class ScriptError(DtwlabError, ValueError):
    """A contraction script or minor witness does not replay."""


class DecompositionError(DtwlabError, ValueError):
    """A decomposition is malformed or has the wrong flavor for an operation."""


class StrategyError(DtwlabError, ValueError):
    """A strategy is invalid or makes an illegal move."""


class BudgetExceeded(DtwlabError):
    """A search ran out of its node or position budget before deciding."""


class CapExceeded(DtwlabError, ValueError):
    """An instance is larger than the configured desk-scale cap."""
