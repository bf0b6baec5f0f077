"""Problem configuration and certificate documents (JSON)."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .design import AgentModel, CaseBCoefficient, CaseTag, CostSpec, DesignCertificate, DesignRequest, DEFAULT_EPSILON
from .errors import ConfigError, SublqtError
from .graph import NetworkSpec

WORKED_EXAMPLE = "worked_example.json"

Matrix = list[list[float]]


def _shape(m: Matrix) -> tuple[int, int]:
    rows = len(m)
    cols = {len(r) for r in m}
    if rows == 0 or len(cols) != 1 or 0 in cols:
        raise ValueError("must be a non-empty rectangular nested array")
    return rows, cols.pop()


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AgentBlock(_Strict):
    A: Matrix
    B: Matrix

    @model_validator(mode="after")
    def _dims(self):
        n, n2 = _shape(self.A)
        if n != n2:
            raise ValueError(f"agent.A must be square, got {n}x{n2}")
        nb, _ = _shape(self.B)
        if nb != n:
            raise ValueError(f"agent.B must have {n} rows to match agent.A, got {nb}")
        return self


class NetworkBlock(_Strict):
    n_followers: int = Field(gt=0)
    edges: list[tuple[int, int]]
    pinning_gains: list[float]

    @model_validator(mode="after")
    def _dims(self):
        if len(self.pinning_gains) != self.n_followers:
            raise ValueError(
                f"network.pinning_gains must have length n_followers = {self.n_followers}, "
                f"got {len(self.pinning_gains)}"
            )
        return self


class CostBlock(_Strict):
    Q: Matrix
    R: Matrix
    gamma: float = Field(gt=0)
    radius: float = Field(gt=0)


class DesignBlock(_Strict):
    c: Optional[float] = None
    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0)
    case_b_coefficient: CaseBCoefficient = CaseBCoefficient.LEMMA3


class SimulationBlock(_Strict):
    t_final: float = Field(default=30.0, gt=0)
    dt: float = Field(default=1e-3, gt=0)
    leader_initial: Optional[list[float]] = None
    follower_initial: Optional[list[list[float]]] = None


class ProblemConfig(_Strict):
    agent: AgentBlock
    network: NetworkBlock
    cost: CostBlock
    design: DesignBlock = DesignBlock()
    simulation: SimulationBlock = SimulationBlock()

    @model_validator(mode="after")
    def _cross_dims(self):
        n, _ = _shape(self.agent.A)
        _, m = _shape(self.agent.B)
        if _shape(self.cost.Q) != (n, n):
            raise ValueError(f"cost.Q must be {n}x{n}, got {'x'.join(map(str, _shape(self.cost.Q)))}")
        if _shape(self.cost.R) != (m, m):
            raise ValueError(f"cost.R must be {m}x{m}, got {'x'.join(map(str, _shape(self.cost.R)))}")
        sim = self.simulation
        if sim.leader_initial is not None and len(sim.leader_initial) != n:
            raise ValueError(f"simulation.leader_initial must have length {n}")
        if sim.follower_initial is not None:
            if len(sim.follower_initial) != self.network.n_followers or any(len(x) != n for x in sim.follower_initial):
                raise ValueError(
                    f"simulation.follower_initial must be {self.network.n_followers} states of length {n}"
                )
        return self

    def agent_model(self) -> AgentModel:
        return AgentModel(np.array(self.agent.A), np.array(self.agent.B))

    def network_spec(self) -> NetworkSpec:
        return NetworkSpec.from_edges(self.network.n_followers, self.network.edges, self.network.pinning_gains)

    def cost_spec(self) -> CostSpec:
        return CostSpec(np.array(self.cost.Q), np.array(self.cost.R), self.cost.gamma, self.cost.radius)

    def design_request(self) -> DesignRequest:
        """Build the library request; library validation errors become :class:`ConfigError`."""
        try:
            return DesignRequest(
                agent=self.agent_model(),
                network=self.network_spec(),
                cost=self.cost_spec(),
                c_override=self.design.c,
                epsilon=self.design.epsilon,
                case_b_coefficient=self.design.case_b_coefficient,
            )
        except (SublqtError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid problem: {exc}") from exc

    def initial_states(self) -> tuple[np.ndarray, np.ndarray]:
        sim = self.simulation
        if sim.leader_initial is None or sim.follower_initial is None:
            raise ConfigError("simulation.leader_initial and simulation.follower_initial are required")
        return np.array(sim.follower_initial, dtype=float).reshape(-1), np.array(sim.leader_initial, dtype=float)


def parse_config(data: dict[str, Any]) -> ProblemConfig:
    try:
        return ProblemConfig.model_validate(data)
    except ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            lines.append(f"{loc}: {err['msg']}")
        raise ConfigError("invalid config:\n  " + "\n  ".join(lines)) from exc


def load_config(path) -> ProblemConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return parse_config(data)


def worked_example_config() -> ProblemConfig:
    text = resources.files("sublqt.data").joinpath(WORKED_EXAMPLE).read_text(encoding="utf-8")
    return parse_config(json.loads(text))


# Certificate documents. json writes floats with repr(), which round-trips exactly.

def certificate_to_dict(cert: DesignCertificate, report=None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "c": cert.c,
        "epsilon": cert.epsilon,
        "case": cert.case_tag.value,
        "case_b_coefficient": cert.case_b_coefficient.value,
        "P": cert.p.tolist(),
        "K": cert.k.tolist(),
        "lambda_min": cert.lambda_min,
        "lambda_max": cert.lambda_max,
        "p_max_eigenvalue": cert.p_max_eigenvalue,
        "gamma": cert.gamma,
        "requested_radius": cert.requested_radius,
        "admissible_radius": cert.admissible_radius,
        "requested_radius_ok": cert.requested_radius_ok,
    }
    if report is not None:
        doc["verification"] = {
            "passed": report.passed,
            "radius_condition": report.radius_ok,
            "modes": [
                {"index": m.index, "eigenvalue": m.eigenvalue, "hurwitz": m.hurwitz, "inequality": m.inequality_ok}
                for m in report.modes
            ],
        }
    return doc


def certificate_from_dict(doc: dict[str, Any]) -> DesignCertificate:
    try:
        return DesignCertificate(
            c=float(doc["c"]),
            epsilon=float(doc["epsilon"]),
            case_tag=CaseTag(doc["case"]),
            p=np.array(doc["P"], dtype=float),
            k=np.array(doc["K"], dtype=float),
            lambda_min=float(doc["lambda_min"]),
            lambda_max=float(doc["lambda_max"]),
            p_max_eigenvalue=float(doc["p_max_eigenvalue"]),
            gamma=float(doc["gamma"]),
            requested_radius=float(doc["requested_radius"]),
            admissible_radius=float(doc["admissible_radius"]),
            requested_radius_ok=bool(doc["requested_radius_ok"]),
            case_b_coefficient=CaseBCoefficient(doc.get("case_b_coefficient", "lemma3")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed certificate document: {exc!r}") from exc


def dump_certificate(cert: DesignCertificate, report=None) -> str:
    return json.dumps(certificate_to_dict(cert, report), indent=2) + "\n"


def load_certificate(path) -> DesignCertificate:
    try:
        return certificate_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read certificate {path}: {exc}") from exc
