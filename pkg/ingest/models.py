"""
File and report models for the staircase toolkit using Pydantic.

Capacity tables travel as JSON with every number written as an exact
"p/q" string, so a file read back gives the same Fractions that were
written. Reports produced by the validators are plain models as well, so
the command line can print them with model_dump_json(indent=2).
"""

from decimal import Decimal, InvalidOperation
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from core.echcap import CapacityTable
from core.exactnum import format_rational, parse_rational


def _exact(text: str) -> str:
    try:
        parse_rational(text)
    except ValueError as exc:
        raise ValueError(str(exc)) from None
    return text


class CapacityFile(BaseModel):
    """
    The first count+1 capacities of scale * X_b.

    All values are exact rational strings such as "24" or "19/2".
    """

    b: str = Field(..., description="Parameter b as 'p/q'")
    scale: str = Field("1", description="Scale factor as 'p/q'")
    count: int = Field(..., ge=0, description="Largest capacity index K")
    caps: List[str] = Field(..., description="c_0 .. c_K as exact rational strings")

    @field_validator("b", "scale")
    @classmethod
    def _rational_string(cls, value: str) -> str:
        return _exact(value)

    @field_validator("caps")
    @classmethod
    def _rational_entries(cls, values: List[str]) -> List[str]:
        return [_exact(value) for value in values]

    @model_validator(mode="after")
    def _length_matches(self) -> "CapacityFile":
        if len(self.caps) != self.count + 1:
            raise ValueError(f"caps holds {len(self.caps)} entries, count + 1 = {self.count + 1}")
        return self

    @classmethod
    def from_table(cls, table: CapacityTable) -> "CapacityFile":
        return cls(
            b=format_rational(table.b),
            scale=format_rational(table.scale),
            count=table.count,
            caps=[format_rational(value) for value in table.caps],
        )

    def to_table(self) -> CapacityTable:
        return CapacityTable(
            parse_rational(self.b),
            parse_rational(self.scale),
            tuple(parse_rational(value) for value in self.caps),
        )


class CurvePoint(BaseModel):
    """One sample; value is None where the series has no entry at z."""

    z: str = Field(..., description="Sample point, decimal string")
    value: Optional[str] = Field(None, description="Series value, decimal string")

    @field_validator("z")
    @classmethod
    def _decimal(cls, value: str) -> str:
        try:
            Decimal(value)
        except InvalidOperation:
            raise ValueError(f"not a decimal: {value!r}") from None
        return value


class CurveSeries(BaseModel):
    """A labelled curve sampled at strictly increasing z."""

    label: str = Field(..., min_length=1, description="Column label in the CSV header")
    points: List[CurvePoint] = Field(default_factory=list, description="Samples in increasing z")

    @model_validator(mode="after")
    def _increasing(self) -> "CurveSeries":
        values = [Decimal(point.z) for point in self.points]
        if any(left >= right for left, right in zip(values, values[1:])):
            raise ValueError(f"z values of series {self.label!r} are not strictly increasing")
        return self

    def defined_points(self) -> List[CurvePoint]:
        return [point for point in self.points if point.value not in (None, "")]


class DMinSummary(BaseModel):
    passed: bool
    difference: int
    lhs: str
    rhs: str
    monotonicity: str
    case: str
    ratio: str = Field(..., description="The r/s used for the inequality")


class FamilyVerificationReport(BaseModel):
    """Outcome of verifying one generated family."""

    spec: str = Field(..., description="Family spec, e.g. 'U:u:0:short'")
    k_max: int = Field(..., ge=0)
    is_valid: bool = Field(False, description="True when no check failed")
    classes: List[str] = Field(default_factory=list, description="Generated classes, k = 0..k_max")
    errors: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    b_inf: Optional[str] = Field(None, description="M/D as a surd string")
    a_inf: Optional[str] = Field(None, description="P/Q as a surd string")
    dmin1: Optional[DMinSummary] = None
    cremona: Dict[str, str] = Field(default_factory=dict, description="Class -> Cremona verdict")
    stats: Dict[str, int] = Field(default_factory=dict)


class B15Report(BaseModel):
    """Finite-range checks of the counting identities for X = 5 H_{1/5}."""

    t_max: int = Field(..., ge=43)
    z_samples: List[str] = Field(default_factory=list)
    convention: str = Field("uncalibrated", description="Index origin of cap_count that matches t = 48")
    calibration_count: Optional[int] = Field(None, description="Direct cap count at t = 48")
    passed: bool = False
    cap_mismatches: List[int] = Field(default_factory=list)
    ehrhart_mismatches: List[int] = Field(default_factory=list)
    claim_ud_failures: List[str] = Field(default_factory=list)
    dtilde_failures: List[str] = Field(default_factory=list)
    small_t_failures: List[str] = Field(default_factory=list)
    subtraction_mismatches: List[int] = Field(default_factory=list)
    stats: Dict[str, int] = Field(default_factory=dict)


class BlockingReport(BaseModel):
    """Blocked b-interval J and z-interval I of one class."""

    klass: str = Field(..., description="The blocking class")
    b_low: str
    b_high: str
    z_low: str
    z_high: str
    exact: bool
    decimals: Dict[str, str] = Field(default_factory=dict, description="15-digit renderings of the endpoints")
