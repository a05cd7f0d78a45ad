from django.conf import settings
from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate
from marshmallow.decorators import post_load

from langworld.training.models import DataConfig, TrainConfig


def _train_default(key):
    return lambda: settings.LANGWORLD["TRAIN"][key]


class TrainConfigSchema(Schema):
    class Meta(object):
        model = TrainConfig

    # minibatches stay under 200 timesteps
    batch_size = fields.Integer(
        load_default=_train_default("BATCH_SIZE"),
        validate=validate.Range(min=1, max=199),
    )
    learning_rate = fields.Float(
        load_default=_train_default("LEARNING_RATE"),
        validate=validate.Range(min=0, min_inclusive=False),
    )
    steps = fields.Integer(load_default=_train_default("STEPS"), validate=validate.Range(min=0))
    seed = fields.Integer(load_default=0, validate=validate.Range(min=0))
    betas = fields.Tuple(
        (fields.Float(validate=validate.Range(min=0, max=1)),
         fields.Float(validate=validate.Range(min=0, max=1))),
        load_default=lambda: tuple(settings.LANGWORLD["TRAIN"]["BETAS"]),
    )
    eps = fields.Float(load_default=_train_default("EPS"), validate=validate.Range(min=0))
    log_every = fields.Integer(load_default=_train_default("LOG_EVERY"), validate=validate.Range(min=1))

    @post_load
    def make_config(self, data, *args, **kwargs):
        return TrainConfig(**data)


class DataConfigField(fields.String):
    default_error_messages = {
        "invalid_choice": "Must be one of: %s." % ", ".join(config.value for config in DataConfig)
    }

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else DataConfig(value).value

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return DataConfig(super()._deserialize(value, attr, data, **kwargs))
        except ValueError:
            raise self.make_error("invalid_choice")


class TrainLogRowSchema(Schema):
    step = fields.Integer(required=True)
    loss = fields.Float(required=True)
    wall_ms = fields.Float(required=True)
