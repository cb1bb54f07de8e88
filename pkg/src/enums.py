from enum import IntEnum, StrEnum


class GroupKind(StrEnum):
    """Enum of supported group families."""

    FREE = 'free'
    TORUS = 'torus'


class InstanceKind(StrEnum):
    """Enum of instance kinds accepted by command line."""

    TORUS = 'torus'
    RANDOM = 'random'
    DECORATED = 'decorated'
    CYCLE = 'cycle'
    PATH = 'path'
    COMPLETE = 'complete'
    PETERSEN = 'petersen'
    FILE = 'file'
    GRAPH = 'graph'


class RuleKind(StrEnum):
    """Enum of rule sources accepted by command line."""

    FILE = 'file'
    HASHMAX = 'hashmax'


class DecorationStrategy(StrEnum):
    """Enum of partial decoration strategies."""

    GREEDY = 'greedy'
    EULERIAN = 'eulerian'


class FailureKind(StrEnum):
    """Enum of defects that verification of k-fold coloring can find."""

    COVERAGE = 'coverage'
    INDEPENDENCE = 'independence'
    OUTSIDE_DOMAIN = 'outside_domain'


class LPStatus(StrEnum):
    """Enum of simplex outcomes."""

    OPTIMAL = 'optimal'
    UNBOUNDED = 'unbounded'


class CertificateKind(StrEnum):
    """Enum of certificates attached to oracle results."""

    PRIMAL_DUAL = 'primal+dual'
    ENUMERATION = 'enumeration'


class OutputFormat(StrEnum):
    """Enum of report formats."""

    JSON = 'json'
    CSV = 'csv'


class Stream(IntEnum):
    """Enum of random streams derived from the run seed.

    Values are spawn keys, so never renumber existing members.
    """

    CONFIGURATION_MODEL = 1
    MONTE_CARLO = 2
    MULTIROUND = 3
