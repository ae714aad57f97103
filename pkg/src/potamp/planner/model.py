"""Symbolic planning model: grounded actions, state literals, run traces."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ContractViolation


@dataclass(frozen=True)
class ActionInstance:
    """One grounded action. Detect instances carry the full binding set:
    object ?o, surface ?s, room ?r, sampled pose ?pb, base config ?bq,
    head config ?hq, and head trajectory ?ht."""

    kind: str  # move | pick | place | detect
    bindings: tuple[tuple[str, object], ...]
    cost: float

    def __post_init__(self):
        if self.kind not in ("move", "pick", "place", "detect"):
            raise ContractViolation(f"unknown action kind {self.kind}")
        if self.cost <= 0:
            raise ContractViolation("actions must have strictly positive cost")
        if self.kind == "detect":
            needed = {"o", "s", "r", "pb", "bq", "hq", "ht"}
            missing = needed - {k for k, _ in self.bindings}
            if missing:
                raise ContractViolation(f"detect missing bindings {sorted(missing)}")

    def get(self, key: str):
        for k, v in self.bindings:
            if k == key:
                return v
        raise KeyError(key)

    def describe(self) -> str:
        parts = " ".join(f"{k}={v}" for k, v in self.bindings)
        return f"{self.kind}({parts}) cost={self.cost:.3f}"

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if hasattr(v, "item"):
                return v.item()
            return v

        return {
            "kind": self.kind,
            "bindings": {k: clean(v) for k, v in self.bindings},
            "cost": self.cost,
        }


@dataclass(frozen=True)
class SymbolicState:
    """Compact dynamic literal set. HandEmpty holds iff holding is None; the
    single AtBConf literal is the node id."""

    node: int
    holding: int | None = None
    confirmed_pose: tuple[float, float] | None = None  # AtPoseB for the target
    confirmed_surface: int | None = None  # Supported(o, pb, s)
    placed_on: int | None = None  # At(target, surface) once placed

    def literals(self, target: int) -> frozenset:
        lits = {("AtBConf", self.node)}
        if self.holding is None:
            lits.add(("HandEmpty",))
        else:
            lits.add(("Holding", self.holding))
        if self.confirmed_pose is not None:
            lits.add(("AtPoseB", target, self.confirmed_pose))
            lits.add(("Supported", target, self.confirmed_pose, self.confirmed_surface))
        if self.placed_on is not None:
            lits.add(("At", target, self.placed_on))
        return frozenset(lits)


@dataclass
class IterationRecord:
    plan: list[ActionInstance]
    executed: int = 0
    failure: str | None = None
    plan_seconds: float = 0.0
    exec_seconds: float = 0.0
    belief_snapshot: dict | None = None

    def to_json(self) -> dict:
        return {
            "plan": [a.to_json() for a in self.plan],
            "executed": self.executed,
            "failure": self.failure,
            "plan_seconds": self.plan_seconds,
            "exec_seconds": self.exec_seconds,
            "belief_snapshot": self.belief_snapshot,
        }


@dataclass
class PlanTrace:
    """Everything one planning-and-execution episode produced."""

    iterations: list[IterationRecord] = field(default_factory=list)
    solved: bool = False
    detect_history: list[tuple[str, str, str]] = field(default_factory=list)
    seed: int | None = None
    notes: str = ""

    @property
    def replan_count(self) -> int:
        return max(len(self.iterations) - 1, 0)

    @property
    def planning_seconds(self) -> float:
        return sum(it.plan_seconds for it in self.iterations)

    @property
    def execution_seconds(self) -> float:
        return sum(it.exec_seconds for it in self.iterations)

    @property
    def cumulative_seconds(self) -> float:
        return self.planning_seconds + self.execution_seconds

    def to_json(self) -> dict:
        return {
            "solved": self.solved,
            "replan_count": self.replan_count,
            "planning_seconds": self.planning_seconds,
            "execution_seconds": self.execution_seconds,
            "cumulative_seconds": self.cumulative_seconds,
            "detect_history": [list(d) for d in self.detect_history],
            "iterations": [it.to_json() for it in self.iterations],
            "seed": self.seed,
            "notes": self.notes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)
