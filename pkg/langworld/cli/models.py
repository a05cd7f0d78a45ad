from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from langworld.plans.models import HttpBackendConfig, PlanFormat
from langworld.training.models import DataConfig, TrainConfig


@dataclass(frozen=True)
class RunConfig:
    """Everything in a ``--config`` file; all of it can change results."""

    train: TrainConfig
    data: DataConfig = DataConfig.FEW_SHOT
    plan_source: str = "corpus"
    plan_format: PlanFormat = PlanFormat.CHAIN_PY
    eval_episodes: int = 50
    eval_seeds: int = 4
    eval_seed0: int = 100000
    completion: Optional[HttpBackendConfig] = None
    completion_samples: int = 4


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    # volatile outputs (wall-clock logs) are listed without a digest
    digest: Optional[str]
    volatile: bool = False


@dataclass
class RunManifest:
    command: str
    config_hash: str
    version: str
    seeds: Tuple[int, ...]
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[ManifestEntry] = field(default_factory=list)
