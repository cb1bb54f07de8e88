from typing import Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    field_validator,
    model_validator,
)

from src.constants import DEFAULT_SEED, MAX_SEED, PATTERN_ALPHABET

RawElement = int | list[int]


class CapsSettings(BaseModel):
    """Scheme of enumeration caps from toml file."""

    model_config = ConfigDict(extra='forbid')

    n_cap: PositiveInt = 22
    window_cap: PositiveInt = 24
    lp_vertex_cap: PositiveInt = 30
    transitivity_vertex_cap: PositiveInt = 12
    rejection_budget: PositiveInt = 100_000
    set_output_threshold: NonNegativeInt = 4096


class RunSettings(BaseModel):
    """Scheme of run defaults from toml file."""

    model_config = ConfigDict(extra='forbid')

    seed: int = Field(default=DEFAULT_SEED, ge=0, le=MAX_SEED)
    threads: PositiveInt = 1
    samples: PositiveInt = 100_000


class Settings(BaseModel):
    """Scheme of settings from toml file."""

    model_config = ConfigDict(extra='forbid')

    caps: CapsSettings = CapsSettings()
    run: RunSettings = RunSettings()


class ClopenSetFile(BaseModel):
    """Scheme of clopen rule file.

    Pattern string has one character per window element, character i is
    value at i-th element in canonical order of window.
    """

    model_config = ConfigDict(extra='forbid')

    ctx: str | None = None
    window: list[RawElement]
    patterns: list[str]

    @field_validator('patterns')
    @classmethod
    def check_alphabet(cls: type[Self], patterns: list[str]) -> list[str]:
        """Check that patterns contain only "0" and "1".

        :param list[str] patterns: raw patterns.
        :returns: patterns.
        """
        for pattern in patterns:
            if not set(pattern) <= PATTERN_ALPHABET:
                msg = f'Pattern {pattern!r} must contain only "0" and "1"'
                raise ValueError(msg)
        return patterns

    @model_validator(mode='after')
    def check_lengths(self: Self) -> Self:
        """Check that every pattern has one character per window element.

        :returns: validated pydantic model.
        """
        for pattern in self.patterns:
            if len(pattern) != len(self.window):
                msg = (
                    f'Pattern {pattern!r} must have length '
                    f'{len(self.window)}'
                )
                raise ValueError(msg)
        return self


class InstanceFile(BaseModel):
    """Scheme of Schreier instance or decoration file.

    Null in generator map means undefined image. Decoration files also
    store graph edges and certified vertices.
    """

    model_config = ConfigDict(extra='forbid')

    ctx: str
    vertices: PositiveInt
    gen_maps: list[list[NonNegativeInt | None]]
    seed: int | None = None
    edges: list[tuple[NonNegativeInt, NonNegativeInt]] | None = None
    certified: list[NonNegativeInt] | None = None

    @model_validator(mode='after')
    def check_maps(self: Self) -> Self:
        """Check sizes of maps and range of images.

        :returns: validated pydantic model.
        """
        for mapping in self.gen_maps:
            if len(mapping) != self.vertices:
                msg = f'Every generator map must have {self.vertices} entries'
                raise ValueError(msg)
            if any(
                image is not None and image >= self.vertices
                for image in mapping
            ):
                msg = f'Images must be below {self.vertices}'
                raise ValueError(msg)
        if (self.edges is None) != (self.certified is None):
            msg = 'Decoration needs both "edges" and "certified"'
            raise ValueError(msg)
        return self


class SynthesisReport(BaseModel):
    """Scheme of synth command report."""

    instance: str
    rule: str
    ctx: str
    forbidden: list[list[int]]
    seed: int
    window_size: int
    pattern_count: int
    rule_density: str
    palette_bound: int
    colors_used: int
    palette: int
    ell: int
    k: int
    ratio: str | None
    ratio_decimal: float | None
    vertices: int
    domain_size: int
    domain_fraction: str
    non_free_vertices: int
    wraparound_risk: bool
    verified: bool
    failure: str | None
    counterexample: dict[str, object] | None
    average_density: str
    best_set: int
    best_set_mass: str
    set_members: list[list[int]] | None = None
    timestamp: str | None = None


class OracleReport(BaseModel):
    """Scheme of oracle command report."""

    instance: str
    vertices: int
    edges: int
    fractional_chromatic: str
    fractional_chromatic_decimal: float
    support: list[tuple[list[int], str]]
    clique_weights: list[str]
    certificate: str
    independence_number: int
    maximum_independent_set: list[int]
    kfold_chromatic: dict[str, int]
    vertex_transitive: bool | None
    timestamp: str | None = None


class DecorationReport(BaseModel):
    """Scheme of decorate command report."""

    instance: str
    generators: int
    strategy: str
    vertices: int
    certified_fraction: str
    certified_fraction_decimal: float
    decoration: dict[str, object]
    timestamp: str | None = None
