import numpy as np
from marshmallow import fields
from marshmallow import Schema
from marshmallow import ValidationError
from marshmallow import validate
from marshmallow.decorators import post_load, validates_schema

from langworld.pcbc.models import Architecture, PolicyParams
from langworld.plans.schemas import ConditionalPlanSchema
from langworld.rng import restore_rng, rng_state

CHECKPOINT_VERSION = 1


class ArraySchema(Schema):
    """A parameter block: shape plus row-major values."""

    shape = fields.List(fields.Integer(validate=validate.Range(min=0)), required=True)
    values = fields.List(fields.Float(allow_nan=False), required=True)

    @validates_schema
    def validate_size(self, data, **kwargs):
        if int(np.prod(data["shape"], dtype=np.int64)) != len(data["values"]):
            raise ValidationError("value count does not match shape %r" % (data["shape"],))

    @post_load
    def make_array(self, data, *args, **kwargs):
        return np.array(data["values"], dtype=np.float64).reshape(data["shape"])


class RngField(fields.Field):
    """A Philox generator on disk as its state snapshot."""

    default_error_messages = {"invalid": "Not a Philox generator state."}

    def _serialize(self, value, attr, obj, **kwargs):
        if isinstance(value, np.random.Generator):
            return rng_state(value)
        return value

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return restore_rng(value)
        except (KeyError, TypeError, ValueError):
            raise self.make_error("invalid")


class CheckpointSchema(Schema):
    version = fields.Integer(required=True, validate=validate.Equal(CHECKPOINT_VERSION))
    architecture = fields.Method("get_architecture", deserialize="load_architecture", required=True)
    step = fields.Integer(required=True, validate=validate.Range(min=0))
    seed = fields.Integer(required=True)
    params = fields.Method("get_params", deserialize="load_params", required=True)
    rng = RngField(required=True)
    plans = fields.List(fields.Nested(ConditionalPlanSchema), load_default=list)
    descriptions = fields.Dict(keys=fields.String(), values=fields.String(), load_default=dict)

    def get_architecture(self, checkpoint):
        return Architecture(checkpoint["architecture"]).value

    def load_architecture(self, value):
        try:
            return Architecture(value)
        except ValueError:
            raise ValidationError("unknown architecture %r" % (value,))

    def get_params(self, checkpoint):
        params = checkpoint["params"]
        return {
            name: {"shape": list(params[name].shape), "values": params[name].ravel().tolist()}
            for name in params.names
        }

    def load_params(self, blocks):
        arrays = {name: ArraySchema().load(block) for name, block in blocks.items()}
        try:
            return PolicyParams(arrays)
        except ValueError as error:
            raise ValidationError(str(error))
