"""
Storage capacity of a filament whose units each hold one bit per ring.
"""

import math

from pydantic import BaseModel, ConfigDict, Field

from actin_automaton.rings.perception import RingCensus

NM_PER_UM = 1000.0
NM2_PER_IN2 = 6.4516e14


class CapacityParameters(BaseModel):
    model_config = ConfigDict(frozen=True)

    persistence_length_um: float = Field(17.0, gt=0)
    unit_size_nm: float = Field(4.0, gt=0)
    strands: int = Field(2, ge=1)
    filament_area_nm2: float = Field(3200.0, gt=0)
    # None: derive from persistence length / unit size
    units_per_filament: int | None = Field(None, gt=0)
    round_units: bool = True


class CapacityReport(BaseModel):
    bits_per_unit: int
    units_per_strand: int
    units_per_filament: int
    bits_per_filament: int
    filament_area_nm2: float
    bits_per_nm2: float
    bits_per_in2: float
    units: dict[str, str] = {
        "bits_per_unit": "bit/unit",
        "units_per_strand": "unit",
        "units_per_filament": "unit",
        "bits_per_filament": "bit",
        "filament_area_nm2": "nm^2",
        "bits_per_nm2": "bit/nm^2",
        "bits_per_in2": "bit/in^2",
    }


def one_significant_figure(x: float) -> int:
    if x <= 0:
        return 0
    scale = 10 ** math.floor(math.log10(x))
    return int(round(x / scale) * scale)


def memory_capacity(census: RingCensus | int, params: CapacityParameters | None = None) -> CapacityReport:
    params = params or CapacityParameters()
    bits_per_unit = census if isinstance(census, int) else census.total
    if bits_per_unit < 0:
        raise ValueError("ring count must be >= 0")

    if params.units_per_filament is not None:
        units_per_filament = params.units_per_filament
        units_per_strand = units_per_filament // params.strands
    else:
        raw = params.persistence_length_um * NM_PER_UM / params.unit_size_nm
        units_per_strand = one_significant_figure(raw) if params.round_units else int(raw)
        units_per_filament = units_per_strand * params.strands

    bits = bits_per_unit * units_per_filament
    per_nm2 = bits / params.filament_area_nm2
    return CapacityReport(
        bits_per_unit=bits_per_unit,
        units_per_strand=units_per_strand,
        units_per_filament=units_per_filament,
        bits_per_filament=bits,
        filament_area_nm2=params.filament_area_nm2,
        bits_per_nm2=per_nm2,
        bits_per_in2=per_nm2 * NM2_PER_IN2,
    )
