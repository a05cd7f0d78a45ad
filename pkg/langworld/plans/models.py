import enum
from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class PlanStep:
    condition: str
    skill: str

    def __post_init__(self):
        if not self.condition.strip() or not self.skill.strip():
            raise ValueError("plan steps need a condition and a skill: %r" % (self,))


@dataclass(frozen=True)
class ConditionalPlan:
    """Ordered (condition, skill) steps; order carries if/elif meaning."""

    task: str
    description: str
    steps: Tuple[PlanStep, ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a conditional plan needs at least one step")

    @property
    def pairs(self):
        return [(step.condition, step.skill) for step in self.steps]


class PlanFormat(enum.Enum):
    PLAIN_LIST = "plain_list"
    BASIC_PY_MD = "basic_py_md"
    CHAIN_PY = "chain_py"


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    temperature: float = 0.7
    max_tokens: int = 1024
    sample_index: int = 0


@dataclass(frozen=True)
class CompletionResult:
    text: str
    backend: str
    key: str


@dataclass(frozen=True)
class HttpBackendConfig:
    endpoint: str
    credential_env: str
    timeout: float = 60.0
    response_field: str = "completion"
    log_fixtures: bool = True
