"""Exception hierarchy shared by all modules."""


class BrstlabError(Exception):
    pass


class ConfigurationError(BrstlabError, ValueError):
    """Unsupported type label, malformed config file, bad CLI value."""


class DomainError(BrstlabError, ValueError):
    """An input lies outside the domain where an operation is defined."""


class UsageError(BrstlabError, ValueError):
    """Operands that cannot be combined (mismatched rank, datum, cutoffs)."""


class ConstructionError(BrstlabError, ValueError):
    """A constructed structure violates one of its defining invariants."""
