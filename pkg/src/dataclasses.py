from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Self

from src.enums import CertificateKind, FailureKind
from src.group import GroupElement


@dataclass
class IndependenceReport:
    """Result of independence check with witness on failure.

    Witness is point on joint window that belongs both to set and to its
    pullback by sigma.
    """

    independent: bool
    sigma: GroupElement | None = None
    witness: dict[GroupElement, int] | None = None


@dataclass(frozen=True)
class DensityLossReport:
    """Exact densities of pruning loss inequality.

    Inequality is beta(prune(C)) >= beta(J) - (|F| + 1) * beta(J xor C).
    """

    beta_independent: Fraction
    beta_difference: Fraction
    beta_pruned: Fraction
    bound: Fraction
    holds: bool


@dataclass(frozen=True)
class MassBoundReport:
    """Exact masses of certified ball set bound.

    Hypothesis is mu_k(C) >= 1 - eps/|D|, conclusion is
    mu(C_k) >= 1 - eps. Averaging bound mu_k(C) <= mu(C_k)/|D| + 1 - 1/|D|
    must always hold.
    """

    ball_size: int
    mu_k_certified: Fraction
    mu_ball_certified: Fraction
    hypothesis: bool
    conclusion: bool
    averaging_bound: bool

    @property
    def passed(self: Self) -> bool:
        """Check that implication and averaging bound hold.

        :returns: True if report confirms bound.
        """
        implication = not self.hypothesis or self.conclusion
        return self.averaging_bound and implication


@dataclass(frozen=True)
class SynthesisDiagnostics:
    """Numbers reported by k-fold coloring synthesis."""

    window_size: int
    pattern_count: int
    palette_bound: int
    colors_used: int
    palette: int
    domain_size: int
    non_free_vertices: int
    skipped_vertices: int


@dataclass
class VerificationReport:
    """Result of k-fold coloring verification with first counterexample."""

    passed: bool
    failure: FailureKind | None = None
    counterexample: dict[str, Any] | None = None


@dataclass(frozen=True)
class DensityBound:
    """Average weighted density of sets and best set of coloring."""

    average: Fraction
    best_index: int
    best_mass: Fraction


@dataclass(frozen=True)
class LPResult:
    """Exact optimum of fractional coloring LP with certificate.

    support keeps independent sets with positive weight of optimal
    fractional coloring, clique_weights is optimal dual solution.
    """

    value: Fraction
    support: tuple[tuple[tuple[int, ...], Fraction], ...]
    clique_weights: tuple[Fraction, ...]
    certificate_kind: CertificateKind


@dataclass(frozen=True)
class KFoldResult:
    """Minimal count of sets of k-fold coloring with witness family."""

    fold: int
    sets: int
    family: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DensityEstimate:
    """Monte Carlo estimate of density with standard error."""

    mean: float
    std_error: float
    samples: int
    seed: int
