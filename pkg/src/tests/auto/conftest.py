import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
from _pytest.fixtures import SubRequest

from src.constants import UNDEFINED
from src.decoration import Decoration
from src.engine import KFoldColoring
from src.group import GroupCtx, GroupElement, Window
from src.instances import (
    GraphInstance,
    SchreierInstance,
    cycle_graph,
    petersen_graph,
    torus_instance,
)
from src.local_rule import ClopenSet
from src.schemas import Settings


@pytest.fixture
def free1() -> GroupCtx:
    """Fixture with free group of rank 1.

    :returns: GroupCtx.
    """
    return GroupCtx.free(1)


@pytest.fixture
def free2() -> GroupCtx:
    """Fixture with free group of rank 2.

    :returns: GroupCtx.
    """
    return GroupCtx.free(2)


@pytest.fixture
def torus15() -> GroupCtx:
    """Fixture with cyclic group Z/5Z.

    :returns: GroupCtx.
    """
    return GroupCtx.torus(1, 5)


@pytest.fixture
def torus15_instance() -> SchreierInstance:
    """Fixture with Z/5Z acting on itself.

    :returns: SchreierInstance with 5 vertices.
    """
    return torus_instance(1, 5)


@pytest.fixture
def shift_one(torus15: GroupCtx) -> list[GroupElement]:
    """Fixture with set F = {1} of Z/5Z.

    :param GroupCtx torus15: fixture with Z/5Z.
    :returns: list with one shift.
    """
    return [torus15.element(1)]


@pytest.fixture
def c5_rule(torus15: GroupCtx) -> ClopenSet:
    """Fixture with rule {x(0) = 1, x(1) = 0} on Z/5Z.

    :param GroupCtx torus15: fixture with Z/5Z.
    :returns: independent ClopenSet of density 1/4.
    """
    window = Window.of(torus15, [torus15.element(0), torus15.element(1)])
    return ClopenSet.from_strings(window, ['10'])


@pytest.fixture
def c5() -> GraphInstance:
    """Fixture with cycle C_5.

    :returns: GraphInstance.
    """
    return cycle_graph(5)


@pytest.fixture
def petersen() -> GraphInstance:
    """Fixture with Petersen graph.

    :returns: GraphInstance.
    """
    return petersen_graph()


@pytest.fixture
def c9_decoration() -> Decoration:
    """Fixture with rotation of C_9 that misses arc 8 -> 0.

    :returns: Decoration with certified vertices 1..7.
    """
    mapping = [*range(1, 9), UNDEFINED]
    return Decoration.build(cycle_graph(9), [mapping])


@pytest.fixture
def c5_two_fold() -> KFoldColoring:
    """Fixture with optimal 2-fold coloring of C_5 by 5 sets.

    :returns: KFoldColoring.
    """
    sets = [{i, (i + 2) % 5} for i in range(5)]
    return KFoldColoring.from_sets(sets, vertices=5, fold=2)


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], Path]:
    """Fixture with function that writes JSON file into temporary directory.

    :param Path tmp_path: pytest temporary directory.
    :returns: function of name and data that returns path.
    """

    def write(name: str, data: Any) -> Path:  # noqa: ANN401
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding='utf-8')
        return path

    return write


@pytest.fixture(
    params=(
        {},
        {'run': {'seed': 7}},
        {'caps': {'n_cap': 10, 'window_cap': 12}, 'run': {'threads': 4}},
    ),
    ids=('Defaults', 'Only seed', 'Caps and threads'),
)
def settings_data(request: SubRequest) -> dict[str, Any]:
    """Fixture with valid raw settings.

    :param SubRequest request: pytest request with fixture param.
    :returns: dict like parsed toml.
    """
    return request.param  # type: ignore [no-any-return]


@pytest.fixture
def default_settings() -> Settings:
    """Fixture with default settings.

    :returns: Settings pydantic model.
    """
    return Settings()
