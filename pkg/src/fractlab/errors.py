"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI: 2 for configuration problems, 3 for
domain/precondition violations, 4 for construction-invariant failures.
"""


class FractlabError(Exception):
    exit_code = 3


class ConfigError(FractlabError):
    """Malformed sequence spec, missing parameters, unusable request."""

    exit_code = 2


class RangeError(FractlabError):
    """Index or scale outside the certified range of a sequence model."""


class DegeneracyError(FractlabError):
    """A computed subdivision ratio left the open interval (0, 1/2)."""


class DomainError(FractlabError):
    """A caller-supplied target or parameter violates a precondition."""


class ArrangementError(FractlabError):
    """A placement rule cannot decide where a gap index belongs."""


class RefinementNeeded(FractlabError):
    """A covering query hit a region too coarse to answer reliably."""


class SizeLimitError(FractlabError):
    """A brute-force oracle was asked to exceed its hard size bound."""


class ConstructionError(FractlabError):
    """A staged construction violated one of its structural conditions."""

    exit_code = 4
