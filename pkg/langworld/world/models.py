import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Tuple


class Vec3(NamedTuple):
    x: float
    y: float
    z: float

    def __add__(self, other):
        return Vec3(self.x + other[0], self.y + other[1], self.z + other[2])

    def __sub__(self, other):
        return Vec3(self.x - other[0], self.y - other[1], self.z - other[2])

    def scale(self, factor):
        return Vec3(self.x * factor, self.y * factor, self.z * factor)

    def dot(self, other):
        return self.x * other[0] + self.y * other[1] + self.z * other[2]

    def norm(self):
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def horizontal_distance(self, other):
        return math.hypot(self.x - other[0], self.y - other[1])

    def distance(self, other):
        return (self - other).norm()

    def clamp(self, low, high):
        return Vec3(
            min(max(self.x, low[0]), high[0]),
            min(max(self.y, low[1]), high[1]),
            min(max(self.z, low[2]), high[2]),
        )


ZERO = Vec3(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class JointState:
    """Prismatic joint: the handle sits at ``base + axis * value``."""

    base: Vec3
    axis: Vec3
    value: float
    low: float
    high: float

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError("joint range is empty: [%r, %r]" % (self.low, self.high))
        if abs(self.axis.norm() - 1.0) > 1e-9:
            raise ValueError("joint axis must be a unit vector, got %r" % (self.axis,))

    def with_value(self, value):
        return replace(self, value=min(max(value, self.low), self.high))

    @property
    def position(self):
        return self.base + self.axis.scale(self.value)

    @property
    def fraction(self):
        span = self.high - self.low
        return 0.0 if span == 0 else (self.value - self.low) / span


@dataclass(frozen=True)
class ObjectState:
    name: str
    position: Vec3
    joint: Optional[JointState] = None
    graspable: bool = False
    pushable: bool = False
    follows: Optional[str] = None

    def moved_to(self, position):
        return replace(self, position=Vec3(*position))

    def with_joint_value(self, value):
        joint = self.joint.with_value(value)
        return replace(self, joint=joint, position=joint.position)


@dataclass(frozen=True)
class WorldState:
    task: str
    gripper_pos: Vec3
    gripper_closure: float
    objects: Tuple[ObjectState, ...]
    goal_pos: Vec3
    step_index: int = 0
    attached: Optional[str] = None

    def get(self, name):
        for obj in self.objects:
            if obj.name == name:
                return obj
        return None

    @property
    def object_names(self):
        return tuple(obj.name for obj in self.objects)


@dataclass(frozen=True)
class Action:
    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    grip: float = 0.0

    def clamped(self):
        return Action(*(min(max(float(v), -1.0), 1.0) for v in self.as_tuple()))

    def as_tuple(self):
        return (self.dx, self.dy, self.dz, self.grip)

    @property
    def xyz(self):
        return Vec3(self.dx, self.dy, self.dz)


class TaskSet(enum.Enum):
    BASE10 = "base"
    FULL20 = "full"


class SuccessPredicate(enum.Enum):
    GRIPPER_AT_GOAL = "gripper_at_goal"
    OBJECT_AT_GOAL = "object_at_goal"
    JOINT_OPEN = "joint_open"
    JOINT_CLOSED = "joint_closed"


Range = Tuple[float, float]


@dataclass(frozen=True)
class ObjectTemplate:
    """How ``reset`` draws one object.

    ``anchor="goal"`` places the object at the drawn goal plus ``offset``
    (holes and shelves). Anchoring to another object's name makes this one
    follow it for the whole episode (a drawer front follows its handle).
    Otherwise ``x``/``y``/``z`` are uniform ranges for the object (or joint
    base) position.
    """

    name: str
    x: Range = (0.0, 0.0)
    y: Range = (0.0, 0.0)
    z: Range = (0.0, 0.0)
    graspable: bool = False
    pushable: bool = False
    axis: Optional[Vec3] = None
    joint_range: Range = (0.0, 0.0)
    initial_value: Range = (0.0, 0.0)
    anchor: Optional[str] = None
    offset: Vec3 = ZERO

    @property
    def jointed(self):
        return self.axis is not None


@dataclass(frozen=True)
class TaskSpec:
    name: str
    description: str
    objects: Tuple[ObjectTemplate, ...]
    goal: Tuple[Range, Range, Range]
    success: SuccessPredicate
    target: str = "gripper"
    uses_goal: bool = False
    member_of: frozenset = field(default_factory=lambda: frozenset({TaskSet.FULL20}))
    gripper: Tuple[Range, Range, Range] = ((-0.05, 0.05), (0.45, 0.55), (0.15, 0.25))
    horizon: int = 500

    @property
    def object_names(self):
        return tuple(template.name for template in self.objects)

    @property
    def entities(self):
        """Named things a query may mention, except the fixed table and wall."""
        names = ("gripper",) + self.object_names
        if self.uses_goal:
            names += ("goal",)
        return names

    @property
    def is_base(self):
        return TaskSet.BASE10 in self.member_of
