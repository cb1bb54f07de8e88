from fractions import Fraction
from typing import Self

import pytest

from src.dataclasses import MassBoundReport


class TestMassBoundReport:
    """Testing verdict of certified ball set bound."""

    @pytest.mark.parametrize(
        ('hypothesis', 'conclusion', 'averaging_bound', 'expected'),
        [
            (True, True, True, True),
            (False, False, True, True),
            (False, True, True, True),
            (True, False, True, False),
            (True, True, False, False),
        ],
        ids=(
            'Implication holds',
            'No hypothesis',
            'Conclusion without hypothesis',
            'Broken implication',
            'Broken averaging bound',
        ),
    )
    def test_passed(
        self: Self,
        *,
        hypothesis: bool,
        conclusion: bool,
        averaging_bound: bool,
        expected: bool,
    ) -> None:
        """Testing that report passes only when both checks hold.

        :param bool hypothesis: hypothesis of bound.
        :param bool conclusion: conclusion of bound.
        :param bool averaging_bound: averaging inequality.
        :param bool expected: expected verdict.
        :returns: None
        """
        report = MassBoundReport(
            ball_size=3,
            mu_k_certified=Fraction(1),
            mu_ball_certified=Fraction(1),
            hypothesis=hypothesis,
            conclusion=conclusion,
            averaging_bound=averaging_bound,
        )

        assert report.passed is expected
