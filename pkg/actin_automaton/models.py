import enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from actin_automaton.errors import UsageError


# =========================
# ENUMS
# =========================

class NodeState(enum.IntEnum):
    resting = 0
    excited = 1
    refractory = 2


STATE_CHARS = {
    NodeState.resting:    "o",
    NodeState.excited:    "+",
    NodeState.refractory: "-",
}


class Termination(str, enum.Enum):
    absorbing = "absorbing"
    limit_cycle = "limit-cycle"
    budget_exhausted = "budget-exhausted"


class ScenarioKind(str, enum.Enum):
    single = "single"
    plus = "plus"
    plus_minus = "plus-minus"


class BondMode(str, enum.Enum):
    records_only = "records-only"
    infer = "infer"
    records_then_infer = "records-then-infer"


class EraseMode(str, enum.Enum):
    excite_all_resting = "excite-all-resting"
    inhibit_all_resting = "inhibit-all-resting"


class CountMode(str, enum.Enum):
    rings = "rings"
    residues = "residues"

    @classmethod
    def _missing_(cls, value):
        # --count-mode paper is an alias of per-residue counting
        if isinstance(value, str) and value.lower() == "paper":
            return cls.residues
        return None


# =========================
# EXCITATION RULE
# =========================

class ExcitationRule(BaseModel):
    """A resting node fires when lo <= sigma <= hi (hi=None: unbounded)."""

    model_config = ConfigDict(frozen=True)

    lo: int = Field(1, ge=1)
    hi: int | None = None

    @model_validator(mode="after")
    def _check_interval(self):
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"hi ({self.hi}) must be >= lo ({self.lo})")
        return self

    @classmethod
    def a0(cls) -> "ExcitationRule":
        return cls(lo=1, hi=None)

    @classmethod
    def a1(cls) -> "ExcitationRule":
        return cls(lo=1, hi=1)

    @classmethod
    def parse(cls, text: str) -> "ExcitationRule":
        token = text.strip().lower()
        if token == "a0":
            return cls.a0()
        if token == "a1":
            return cls.a1()
        lo, sep, hi = token.partition(":")
        if not sep:
            raise UsageError(f"Invalid rule: '{text}'. Use a0, a1, lo:hi or lo:")
        try:
            return cls(lo=int(lo), hi=int(hi) if hi else None)
        except ValueError as e:
            raise UsageError(f"Invalid rule: '{text}'. Use a0, a1, lo:hi or lo:") from e

    @property
    def label(self) -> str:
        if self == ExcitationRule.a0():
            return "a0"
        if self == ExcitationRule.a1():
            return "a1"
        return f"{self.lo}:{'' if self.hi is None else self.hi}"


# =========================
# STIMULATION
# =========================

class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ScenarioKind
    node: int | None = Field(None, ge=0)
    rho: float | None = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.kind == ScenarioKind.single:
            if self.node is None:
                raise ValueError("single scenario needs a node id")
        elif self.rho is None or not (0.0 < self.rho <= 1.0):
            raise ValueError(f"{self.kind.value} scenario needs 0 < rho <= 1, got {self.rho}")
        return self

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        kind, _, value = text.strip().lower().partition(":")
        kind = {"plusminus": "plus-minus", "pm": "plus-minus"}.get(kind, kind)
        try:
            if kind == ScenarioKind.single.value:
                return cls(kind=ScenarioKind.single, node=int(value))
            return cls(kind=ScenarioKind(kind), rho=float(value))
        except ValueError as e:
            raise UsageError(
                f"Invalid stimulation: '{text}'. Use single:<id>, plus:<rho> or plusminus:<rho>"
            ) from e

    @property
    def label(self) -> str:
        if self.kind == ScenarioKind.single:
            return f"single:{self.node}"
        return f"{self.kind.value}:{self.rho:g}"


class Restimulation(BaseModel):
    model_config = ConfigDict(frozen=True)

    trigger: int | Literal["cycle"]
    scenario: Scenario

    @field_validator("trigger")
    @classmethod
    def _non_negative(cls, v):
        if isinstance(v, int) and v < 0:
            raise ValueError("trigger step must be >= 0")
        return v

    @classmethod
    def parse(cls, text: str) -> "Restimulation":
        trigger, sep, scenario = text.strip().partition(":")
        if not sep:
            raise UsageError(f"Invalid re-stimulation: '{text}'. Use <step|cycle>:<stimulation>")
        if trigger.lower() == "cycle":
            return cls(trigger="cycle", scenario=Scenario.parse(scenario))
        try:
            step = int(trigger)
        except ValueError as e:
            raise UsageError(f"Invalid re-stimulation trigger: '{trigger}'") from e
        if step < 0:
            raise UsageError(f"Invalid re-stimulation trigger: '{trigger}'")
        return cls(trigger=step, scenario=Scenario.parse(scenario))


class StimulationSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: Scenario | None = None
    seed: int = Field(0, ge=0, lt=2**64)
    restimulation: list[Restimulation] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_schedule(self):
        steps = [r.trigger for r in self.restimulation if r.trigger != "cycle"]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("re-stimulation step triggers must be strictly increasing")
        return self


# =========================
# TRAJECTORY RESULTS
# =========================

class TrajectoryResult(BaseModel):
    transient_p: int | None
    cycle_c: int | None
    excitation_e: int | None
    series: list[int]
    termination: Termination
    steps_run: int

    @model_validator(mode="after")
    def _check_absorbing(self):
        if self.termination == Termination.absorbing:
            if self.cycle_c != 1 or self.excitation_e != 0:
                raise ValueError("absorbing state must have c=1 and e=0")
        return self


class StimulationEvent(BaseModel):
    step: int
    scenario: str
    stimulated: int
    excited_before: int
    excited_after: int


class RestimulationResult(BaseModel):
    result: TrajectoryResult
    stimulations: list[StimulationEvent]
    last_stimulation_step: int


# =========================
# RUN MANIFEST
# =========================

class RunManifest(BaseModel):
    tool_version: str
    command: str
    argv: list[str]
    cwd: str | None = None
    graph_checksum: str | None = None
    parameters: dict
    timestamp: str
    outputs: dict[str, str] = Field(default_factory=dict)
