from fractions import Fraction
from typing import NamedTuple, Self

from src.enums import LPStatus


class Edge(NamedTuple):
    """NamedTuple that stores undirected edge with u <= v."""

    u: int
    v: int

    def __repr__(self: Self) -> str:
        """Representation like "Edge 1-2".

        :returns: string like "Edge 1-2".
        """
        return f'Edge {self.u}-{self.v}'


class Arc(NamedTuple):
    """NamedTuple that stores oriented edge."""

    tail: int
    head: int

    def __repr__(self: Self) -> str:
        """Representation like "Arc 1->2".

        :returns: string like "Arc 1->2".
        """
        return f'Arc {self.tail}->{self.head}'


class InstanceSpec(NamedTuple):
    """NamedTuple that stores parsed instance argument like "torus:1:5"."""

    kind: str
    params: tuple[str, ...]

    def __repr__(self: Self) -> str:
        """Representation like "Instance torus:1:5".

        :returns: string like "Instance torus:1:5".
        """
        return f'Instance {':'.join((self.kind, *self.params))}'


class DensityRow(NamedTuple):
    """NamedTuple that stores one row of density report."""

    rule_id: str
    instance_id: str
    d: int
    samples: int
    mean: float
    stderr: float
    rv_reference: float | None
    engine_ratio_inverse: float | None
    exact_density: str | None


class SimplexSolution(NamedTuple):
    """NamedTuple that stores optimum of LP with primal and dual solutions."""

    status: LPStatus
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int
