from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate

OBSERVATION_WIDTH = 14
ACTION_WIDTH = 4


class DemoStepSchema(Schema):
    """One line of ``demos/<task>.jsonl``."""

    seed = fields.Integer(required=True, validate=validate.Range(min=0))
    t = fields.Integer(required=True, validate=validate.Range(min=0, max=499))
    observation = fields.List(
        fields.Float(), required=True, validate=validate.Length(equal=OBSERVATION_WIDTH)
    )
    action = fields.List(
        fields.Float(validate=validate.Range(min=-1, max=1)),
        required=True,
        validate=validate.Length(equal=ACTION_WIDTH),
    )


class AttemptSchema(Schema):
    seed = fields.Integer(required=True)
    success = fields.Boolean(required=True)


class TaskDemosSchema(Schema):
    seeds = fields.List(fields.Integer(), required=True)
    attempts = fields.List(fields.Nested(AttemptSchema), required=True)
    steps = fields.Integer(required=True)
    file = fields.String(required=True)


class DemoManifestSchema(Schema):
    version = fields.String(required=True)
    seed = fields.Integer(required=True)
    n_per_task = fields.Integer(required=True, validate=validate.Range(min=1))
    tasks = fields.Dict(keys=fields.String(), values=fields.Nested(TaskDemosSchema))
