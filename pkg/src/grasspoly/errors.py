"""Exception types shared across the package.

The split matters for the command line driver, which maps these onto
distinct exit codes: contract/degeneracy problems are reported as ordinary
failures, while path, pole and budget problems raised by the integration
engine get their own codes so scripted callers can react to each.
"""


class ContractViolation(ValueError):
    """An operation was called outside its documented contract."""


class DegeneracyError(ValueError):
    """Geometric input is degenerate: a zero vector, a vanishing bracket,
    coincident points in a cross-ratio, or a non-generic configuration where
    a generic one is required."""


class PathError(RuntimeError):
    """A path is unusable: discontinuous at a joint, open where a closed
    loop is required, or passing through a singular configuration."""


class PoleError(PathError):
    """A bracket appearing in an integrand vanishes, or comes closer to
    zero than the safety threshold, along the integration path."""


class BudgetError(RuntimeError):
    """An adaptive computation exhausted its refinement or retry budget
    without reaching the requested accuracy."""
