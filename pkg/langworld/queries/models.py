import enum
from dataclasses import dataclass
from typing import Tuple, Union

FIXED_OBJECTS = ("table", "wall")


class RelationKind(enum.Enum):
    NEAR = "near"
    FAR_FROM = "far_from"
    LEFT_OF = "left_of"
    RIGHT_OF = "right_of"
    IN_FRONT_OF = "in_front_of"
    BEHIND = "behind"
    ABOVE = "above"
    BELOW = "below"
    AROUND = "around"
    TOUCHING = "touching"
    ALIGNED_X = "aligned_x"
    ALIGNED_Y = "aligned_y"
    ALIGNED_Z = "aligned_z"

    @property
    def phrase(self):
        return PHRASES[self]


PHRASES = {
    RelationKind.NEAR: "near",
    RelationKind.FAR_FROM: "far from",
    RelationKind.LEFT_OF: "left of",
    RelationKind.RIGHT_OF: "right of",
    RelationKind.IN_FRONT_OF: "in front of",
    RelationKind.BEHIND: "behind",
    RelationKind.ABOVE: "above",
    RelationKind.BELOW: "below",
    RelationKind.AROUND: "around",
    RelationKind.TOUCHING: "touching",
    RelationKind.ALIGNED_X: "aligned along x with",
    RelationKind.ALIGNED_Y: "aligned along y with",
    RelationKind.ALIGNED_Z: "aligned along z with",
}


class UnaryKind(enum.Enum):
    GRIPPER_OPEN = "gripper_open"
    GRIPPER_CLOSED = "gripper_closed"

    @property
    def phrase(self):
        return "open" if self is UnaryKind.GRIPPER_OPEN else "closed"


@dataclass(frozen=True)
class BinaryAtom:
    relation: RelationKind
    subject: str
    object: str

    def __post_init__(self):
        if self.subject == self.object:
            raise ValueError("relation needs two different objects, got %r twice" % self.subject)


@dataclass(frozen=True)
class UnaryAtom:
    kind: UnaryKind
    subject: str = "gripper"


Atom = Union[BinaryAtom, UnaryAtom]


@dataclass(frozen=True)
class Literal:
    negated: bool
    atom: Atom

    @property
    def subject(self):
        return self.atom.subject


@dataclass(frozen=True)
class Query:
    """A conjunction of possibly negated atoms."""

    literals: Tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("a query needs at least one literal")

    @property
    def names(self):
        names = []
        for literal in self.literals:
            for name in (literal.atom.subject, getattr(literal.atom, "object", None)):
                if name is not None and name not in names:
                    names.append(name)
        return tuple(names)
