"""
Tabular model documents.

JSON layout of FiniteMDP and SC-MDP files. Declared sizes are checked against
the nested arrays here; probability and reward ranges are checked by the
domain entities in to_domain().
"""
from typing import Any, List, Literal, Mapping, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.domain.entities import FiniteMDP, SCMDPSpec


def _shape_of(values: Any, name: str) -> tuple:
    try:
        array = np.asarray(values, dtype=np.float64)
    except ValueError as error:
        raise ValueError(f"{name} is ragged or not numeric") from error
    return array.shape


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")

    num_states: int = Field(..., ge=1)
    num_actions: int = Field(..., ge=1)
    horizon: int = Field(..., ge=1)
    rewards: List[List[List[float]]]
    state_labels: Optional[List[List[int]]] = None

    def _expect(self, name: str, values: Any, expected: tuple) -> None:
        actual = _shape_of(values, name)
        if actual != expected:
            raise ValueError(f"{name} has shape {actual}, expected {expected}")

    def _check_common(self) -> None:
        self._expect("rewards", self.rewards, (self.horizon, self.num_states, self.num_actions))
        if self.state_labels is not None and len(self.state_labels) != self.num_states:
            raise ValueError(f"state_labels has {len(self.state_labels)} entries, expected {self.num_states}")


class FiniteMDPDocument(_Document):
    """transitions[t][s][a][s'] and rewards[t][s][a], t counted from the first step."""
    kind: Literal["mdp"] = "mdp"
    transitions: List[List[List[List[float]]]]

    @model_validator(mode="after")
    def _check_shapes(self) -> "FiniteMDPDocument":
        S, A, T = self.num_states, self.num_actions, self.horizon
        self._expect("transitions", self.transitions, (T, S, A, S))
        self._check_common()
        return self

    def to_domain(self) -> FiniteMDP:
        return FiniteMDP(self.transitions, self.rewards, self.state_labels)

    @classmethod
    def from_domain(cls, mdp: FiniteMDP) -> "FiniteMDPDocument":
        labels = mdp.state_labels
        return cls(
            num_states=mdp.num_states,
            num_actions=mdp.num_actions,
            horizon=mdp.horizon,
            transitions=mdp.transitions.tolist(),
            rewards=mdp.rewards.tolist(),
            state_labels=labels.tolist() if labels is not None else None,
        )


class SCMDPDocument(_Document):
    """kernels[t][s][a][c][s'] and nominal_confounder[t][c]."""
    kind: Literal["scmdp"] = "scmdp"
    confounder_size: int = Field(..., ge=1)
    kernels: List[List[List[List[List[float]]]]]
    nominal_confounder: List[List[float]]

    @model_validator(mode="after")
    def _check_shapes(self) -> "SCMDPDocument":
        S, A, T, C = self.num_states, self.num_actions, self.horizon, self.confounder_size
        self._expect("kernels", self.kernels, (T, S, A, C, S))
        self._expect("nominal_confounder", self.nominal_confounder, (T, C))
        self._check_common()
        return self

    def to_domain(self) -> SCMDPSpec:
        return SCMDPSpec(self.kernels, self.nominal_confounder, self.rewards, self.state_labels)

    @classmethod
    def from_domain(cls, spec: SCMDPSpec) -> "SCMDPDocument":
        labels = spec.state_labels
        return cls(
            num_states=spec.num_states,
            num_actions=spec.num_actions,
            horizon=spec.horizon,
            confounder_size=spec.confounder_size,
            kernels=spec.kernels.tolist(),
            nominal_confounder=spec.nominal_confounder.tolist(),
            rewards=spec.rewards.tolist(),
            state_labels=labels.tolist() if labels is not None else None,
        )


ModelDocument = Union[FiniteMDPDocument, SCMDPDocument]


def parse_model_document(data: Mapping[str, Any]) -> ModelDocument:
    """
    Validate a decoded model file.

    "kind" is optional; without it a document carrying "kernels" is read as an
    SC-MDP.

    Raises:
        pydantic.ValidationError: If the document does not match either layout
    """
    if not isinstance(data, Mapping):
        raise TypeError("model document must be a JSON object")
    kind = data.get("kind") or ("scmdp" if "kernels" in data else "mdp")
    if kind == "scmdp":
        return SCMDPDocument.model_validate(dict(data, kind="scmdp"))
    return FiniteMDPDocument.model_validate(dict(data, kind=kind))


def document_for(model: Union[FiniteMDP, SCMDPSpec]) -> ModelDocument:
    if isinstance(model, SCMDPSpec):
        return SCMDPDocument.from_domain(model)
    return FiniteMDPDocument.from_domain(model)
