import enum
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

ENCODER = "encoder"
DECODER_BLOCKS = ("w1", "b1", "w2", "b2", "w3", "b3")


class Architecture(enum.Enum):
    PCBC = "pcbc"
    DC = "dc"


@dataclass(eq=False)
class PolicyParams:
    """Encoder matrix (d x V) and a two-hidden-layer tanh action decoder."""

    arrays: Dict[str, np.ndarray]

    def __post_init__(self):
        missing = {ENCODER, *DECODER_BLOCKS} - set(self.arrays)
        if missing:
            raise ValueError("policy parameters are missing %s" % ", ".join(sorted(missing)))
        for name, values in self.arrays.items():
            if not np.all(np.isfinite(values)):
                raise ValueError("parameter block %r has non-finite entries" % name)

    def __getitem__(self, name):
        return self.arrays[name]

    def __eq__(self, other):
        if not isinstance(other, PolicyParams):
            return NotImplemented
        return self.arrays.keys() == other.arrays.keys() and all(
            np.array_equal(values, other.arrays[name]) for name, values in self.arrays.items()
        )

    @property
    def names(self):
        return (ENCODER,) + DECODER_BLOCKS

    @property
    def latent_dim(self):
        return self.arrays[ENCODER].shape[0]

    @property
    def vocab_size(self):
        return self.arrays[ENCODER].shape[1]

    @property
    def count(self):
        return sum(values.size for values in self.arrays.values())

    @property
    def decoder_count(self):
        return sum(self.arrays[name].size for name in DECODER_BLOCKS)

    def copy(self):
        return PolicyParams({name: values.copy() for name, values in self.arrays.items()})


@dataclass(frozen=True)
class BlockError:
    name: str
    index: Tuple[int, ...]
    analytic: float
    numeric: float
    relative_error: float


@dataclass(frozen=True)
class GradCheckReport:
    tolerance: float
    blocks: Tuple[BlockError, ...] = field(default_factory=tuple)

    @property
    def max_relative_error(self):
        return max((block.relative_error for block in self.blocks), default=0.0)

    @property
    def passed(self):
        return self.max_relative_error <= self.tolerance
