from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate
from marshmallow.decorators import post_load

from langworld.world.models import Action, JointState, ObjectState, Vec3, WorldState


class Vec3Field(fields.Field):
    """``[x, y, z]`` on disk, :class:`Vec3` in memory."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return [float(v) for v in value]

    def _deserialize(self, value, attr, data, **kwargs):
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise self.make_error("invalid")
        try:
            return Vec3(*(float(v) for v in value))
        except (TypeError, ValueError):
            raise self.make_error("invalid")

    default_error_messages = {"invalid": "Expected a list of three numbers."}


class RangeField(fields.List):
    def __init__(self, **kwargs):
        super().__init__(fields.Float(), validate=validate.Length(equal=2), **kwargs)


class JointStateSchema(Schema):
    class Meta(object):
        model = JointState

    base = Vec3Field(required=True)
    axis = Vec3Field(required=True)
    value = fields.Float(required=True)
    low = fields.Float(required=True)
    high = fields.Float(required=True)

    @post_load
    def make_joint(self, data, *args, **kwargs):
        return JointState(**data)


class ObjectStateSchema(Schema):
    class Meta(object):
        model = ObjectState

    name = fields.String(required=True, validate=validate.Length(min=1))
    position = Vec3Field(required=True)
    joint = fields.Nested(JointStateSchema, allow_none=True, load_default=None)
    graspable = fields.Boolean(load_default=False)
    pushable = fields.Boolean(load_default=False)
    follows = fields.String(allow_none=True, load_default=None)

    @post_load
    def make_object(self, data, *args, **kwargs):
        return ObjectState(**data)


class WorldStateSchema(Schema):
    class Meta(object):
        model = WorldState

    task = fields.String(required=True)
    gripper_pos = Vec3Field(required=True)
    gripper_closure = fields.Float(required=True, validate=validate.Range(min=0, max=1))
    objects = fields.List(fields.Nested(ObjectStateSchema), required=True)
    goal_pos = Vec3Field(required=True)
    step_index = fields.Integer(load_default=0, validate=validate.Range(min=0, max=500))
    attached = fields.String(allow_none=True, load_default=None)

    @post_load
    def make_state(self, data, *args, **kwargs):
        data["objects"] = tuple(data["objects"])
        return WorldState(**data)


class ActionSchema(Schema):
    class Meta(object):
        model = Action

    dx = fields.Float(required=True)
    dy = fields.Float(required=True)
    dz = fields.Float(required=True)
    grip = fields.Float(required=True)

    @post_load
    def make_action(self, data, *args, **kwargs):
        return Action(**data)


class ObjectTemplateSchema(Schema):
    name = fields.String()
    x = RangeField()
    y = RangeField()
    z = RangeField()
    graspable = fields.Boolean()
    pushable = fields.Boolean()
    axis = Vec3Field(allow_none=True)
    joint_range = RangeField()
    initial_value = RangeField()
    anchor = fields.String(allow_none=True)
    offset = Vec3Field()


class TaskSpecSchema(Schema):
    """Registry export; the registry itself is code, so this is dump-only."""

    name = fields.String()
    description = fields.String()
    objects = fields.List(fields.Nested(ObjectTemplateSchema))
    goal = fields.List(RangeField())
    gripper = fields.List(RangeField())
    success = fields.Function(lambda task: task.success.value)
    target = fields.String()
    uses_goal = fields.Boolean()
    horizon = fields.Integer()
    member_of = fields.Function(
        lambda task: sorted(member.value for member in task.member_of)
    )


class TrajectoryRecordSchema(Schema):
    """One JSON-lines record per step of a dumped episode."""

    task = fields.String(required=True)
    seed = fields.Integer(required=True)
    t = fields.Integer(required=True)
    state = fields.Nested(WorldStateSchema, required=True)
    observation = fields.List(fields.Float(), required=True)
    action = fields.Nested(ActionSchema, allow_none=True, load_default=None)
