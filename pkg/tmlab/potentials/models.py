"""Potential specifications.

Potentials are immutable pydantic models tagged by ``type`` so they can be
read from and written to JSON documents such as
``{"type": "distance_power", "a": 0.5}``.
"""

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class PowerPerturbation(_Spec):
    """Correction ``coefficient * m**-exponent`` added at level m."""

    type: Literal["power"] = "power"
    coefficient: float = Field(description="Multiplier of the correction")
    exponent: float = Field(gt=0, description="Decay exponent, must exceed the base exponent")

    def __call__(self, level: float) -> float:
        return self.coefficient * level ** (-self.exponent)


class DistancePower(_Spec):
    """``level**-a`` (plus an optional faster-decaying correction); zero on the subshift."""

    type: Literal["distance_power"] = "distance_power"
    a: float = Field(gt=0, description="Decay exponent in the level")
    perturbation: PowerPerturbation | None = Field(
        default=None, description="Optional o(level**-a) correction"
    )

    @model_validator(mode="after")
    def _perturbation_decays(self) -> "DistancePower":
        if self.perturbation is not None and self.perturbation.exponent <= self.a:
            raise ValueError("perturbation exponent must exceed a")
        return self


class CylinderUc(_Spec):
    """``c`` on [01], ``-c`` on [10], zero elsewhere."""

    type: Literal["cylinder_uc"] = "cylinder_uc"
    c: float = Field(description="Value on the cylinder [01]")


class UnboundedVu(_Spec):
    """``alpha (k - 1)`` on the points of depth exactly k.

    ``reading`` picks the depth: ``aligned`` is membership of the shifted
    point in H^k(Sigma), ``block`` is agreement of digits 1..2**k with a
    fixed point of H.
    """

    type: Literal["unbounded_vu"] = "unbounded_vu"
    alpha: float = Field(description="Slope in the depth")
    sign: Literal["k_minus_one", "one_minus_k"] = Field(
        default="k_minus_one", description="alpha (k - 1) or alpha (1 - k)"
    )
    reading: Literal["aligned", "block"] = Field(default="aligned", description="Depth reading")

    def at_depth(self, k: int) -> float:
        return self.alpha * (k - 1) if self.sign == "k_minus_one" else self.alpha * (1 - k)


class CylinderTable(_Spec):
    """Values on depth-N cylinders; missing cylinders are zero."""

    type: Literal["cylinder_table"] = "cylinder_table"
    depth: int = Field(ge=1, le=20, description="Cylinder depth N")
    values: dict[str, float] = Field(default_factory=dict, description="Word of length N to value")

    @field_validator("values")
    @classmethod
    def _binary_keys(cls, values: dict[str, float]) -> dict[str, float]:
        for word in values:
            if set(word) - {"0", "1"}:
                raise ValueError(f"cylinder key {word!r} is not binary")
        return values

    @model_validator(mode="after")
    def _keys_match_depth(self) -> "CylinderTable":
        for word in self.values:
            if len(word) != self.depth:
                raise ValueError(f"cylinder key {word!r} does not have length {self.depth}")
        return self

    def value(self, word: str) -> float:
        return self.values.get(word[: self.depth], 0.0)


Potential = Annotated[
    DistancePower | CylinderUc | UnboundedVu | CylinderTable,
    Field(discriminator="type"),
]

PotentialAdapter: TypeAdapter[Potential] = TypeAdapter(Potential)

ZERO = CylinderTable(depth=1)
V0 = DistancePower(a=1.0)


def parse_potential(data: dict[str, Any] | str | bytes) -> Potential:
    """Validate a potential from a dict or a JSON document."""
    if isinstance(data, (str, bytes)):
        return PotentialAdapter.validate_json(data)
    return PotentialAdapter.validate_python(data)


def dump_potential(potential: Potential) -> dict[str, Any]:
    return PotentialAdapter.dump_python(potential, mode="json", exclude_none=True)
