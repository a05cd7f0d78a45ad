from django.conf import settings
from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate
from marshmallow.decorators import post_load

from langworld.cli.models import ManifestEntry, RunConfig, RunManifest
from langworld.plans.models import PlanFormat
from langworld.plans.schemas import HttpBackendSchema
from langworld.training.models import DataConfig
from langworld.training.schemas import DataConfigField, TrainConfigSchema


class PlanFormatField(fields.String):
    default_error_messages = {
        "invalid_choice": "Must be one of: %s." % ", ".join(fmt.value for fmt in PlanFormat)
    }

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else PlanFormat(value).value

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return PlanFormat(super()._deserialize(value, attr, data, **kwargs))
        except ValueError:
            raise self.make_error("invalid_choice")


class RunConfigSchema(Schema):
    class Meta(object):
        model = RunConfig

    train = fields.Nested(TrainConfigSchema, load_default=lambda: TrainConfigSchema().load({}))
    data = DataConfigField(load_default=DataConfig.FEW_SHOT)
    plan_source = fields.String(load_default="corpus", validate=validate.OneOf(["manual", "corpus"]))
    plan_format = PlanFormatField(load_default=PlanFormat.CHAIN_PY)
    eval_episodes = fields.Integer(
        load_default=lambda: settings.LANGWORLD["EVAL_EPISODES"], validate=validate.Range(min=1)
    )
    eval_seeds = fields.Integer(
        load_default=lambda: settings.LANGWORLD["EVAL_SEEDS"], validate=validate.Range(min=1)
    )
    eval_seed0 = fields.Integer(
        load_default=lambda: settings.LANGWORLD["EVAL_SEED0"], validate=validate.Range(min=0)
    )
    completion = fields.Nested(HttpBackendSchema, allow_none=True, load_default=None)
    completion_samples = fields.Integer(
        load_default=lambda: settings.LANGWORLD["COMPLETION"]["SAMPLES"], validate=validate.Range(min=1)
    )

    @post_load
    def make_config(self, data, *args, **kwargs):
        return RunConfig(**data)


class ManifestEntrySchema(Schema):
    class Meta(object):
        model = ManifestEntry

    path = fields.String(required=True)
    digest = fields.String(allow_none=True, required=True, validate=validate.Length(equal=64))
    volatile = fields.Boolean(load_default=False)

    @post_load
    def make_entry(self, data, *args, **kwargs):
        return ManifestEntry(**data)


class RunManifestSchema(Schema):
    class Meta(object):
        model = RunManifest

    command = fields.String(required=True)
    config_hash = fields.String(required=True, validate=validate.Length(equal=12))
    version = fields.String(required=True)
    seeds = fields.List(fields.Integer(), required=True)
    inputs = fields.Dict(keys=fields.String(), values=fields.String(), load_default=dict)
    outputs = fields.List(fields.Nested(ManifestEntrySchema), load_default=list)

    @post_load
    def make_manifest(self, data, *args, **kwargs):
        data["seeds"] = tuple(data["seeds"])
        return RunManifest(**data)
