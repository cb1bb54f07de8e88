import logging
from collections.abc import Sequence
from fractions import Fraction
from typing import Self

from src.enums import LPStatus
from src.types import SimplexSolution

Number = Fraction | int


class RationalSimplex:
    """Dense tableau simplex method over exact rationals.

    Solves max c·y subject to A·y <= b, y >= 0 for b >= 0, so origin is
    feasible basis and no first phase is needed. Bland rule prevents
    cycling.
    """

    def __init__(
        self: Self,
        matrix: Sequence[Sequence[Number]],
        bounds: Sequence[Number],
        objective: Sequence[Number],
    ) -> None:
        """Build tableau with slack variables.

        :param Sequence[Sequence[Number]] matrix: A, one row per constraint.
        :param Sequence[Number] bounds: b, non-negative.
        :param Sequence[Number] objective: c.
        :returns: None
        """
        if any(bound < 0 for bound in bounds):
            msg = 'Right-hand side must be non-negative'
            raise ValueError(msg)
        if len(matrix) != len(bounds):
            msg = 'Count of rows and bounds differ'
            raise ValueError(msg)
        self.rows = len(matrix)
        self.columns = len(objective)
        width = self.columns + self.rows
        self.tableau: list[list[Fraction]] = []
        for index, (row, bound) in enumerate(zip(matrix, bounds, strict=True)):
            if len(row) != self.columns:
                msg = f'Row {index} must have {self.columns} entries'
                raise ValueError(msg)
            slack = [Fraction(int(j == index)) for j in range(self.rows)]
            self.tableau.append(
                [*map(Fraction, row), *slack, Fraction(bound)],
            )
        self.reduced_costs = [
            *map(Fraction, objective),
            *([Fraction(0)] * self.rows),
            Fraction(0),
        ]
        self.basis = list(range(self.columns, width))
        self.pivots = 0

    def _entering(self: Self) -> int | None:
        for column, cost in enumerate(self.reduced_costs[:-1]):
            if cost > 0:
                return column
        return None

    def _leaving(self: Self, column: int) -> int | None:
        best: tuple[Fraction, int, int] | None = None
        for row, values in enumerate(self.tableau):
            if values[column] > 0:
                candidate = (values[-1] / values[column], self.basis[row], row)
                if best is None or candidate < best:
                    best = candidate
        return None if best is None else best[2]

    def _pivot(self: Self, row: int, column: int) -> None:
        pivot_row = self.tableau[row]
        pivot = pivot_row[column]
        pivot_row[:] = [value / pivot for value in pivot_row]
        for other, values in enumerate(self.tableau):
            factor = values[column]
            if other != row and factor:
                values[:] = [
                    value - factor * base
                    for value, base in zip(values, pivot_row, strict=True)
                ]
        factor = self.reduced_costs[column]
        self.reduced_costs = [
            value - factor * base
            for value, base in zip(self.reduced_costs, pivot_row, strict=True)
        ]
        self.basis[row] = column
        self.pivots += 1

    def solve(self: Self) -> SimplexSolution:
        """Run simplex method until optimality or unboundedness.

        Dual value of constraint i is minus reduced cost of its slack.
        :returns: SimplexSolution.
        """
        while (column := self._entering()) is not None:
            row = self._leaving(column)
            if row is None:
                logging.debug('LP is unbounded at column %d', column)
                return SimplexSolution(
                    status=LPStatus.UNBOUNDED,
                    value=Fraction(0),
                    primal=(),
                    dual=(),
                    pivots=self.pivots,
                )
            self._pivot(row, column)
        primal = [Fraction(0)] * self.columns
        for row, column in enumerate(self.basis):
            if column < self.columns:
                primal[column] = self.tableau[row][-1]
        slack = slice(self.columns, self.columns + self.rows)
        dual = tuple(-cost for cost in self.reduced_costs[slack])
        logging.debug('LP solved in %d pivots', self.pivots)
        return SimplexSolution(
            status=LPStatus.OPTIMAL,
            value=-self.reduced_costs[-1],
            primal=tuple(primal),
            dual=dual,
            pivots=self.pivots,
        )
