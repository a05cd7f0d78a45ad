from django.conf import settings
from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate
from marshmallow.decorators import post_load

from langworld.plans.models import ConditionalPlan, HttpBackendConfig, PlanStep


class PlanStepSchema(Schema):
    class Meta(object):
        model = PlanStep

    condition = fields.String(required=True, validate=validate.Length(min=1))
    skill = fields.String(required=True, validate=validate.Length(min=1))

    @post_load
    def make_step(self, data, *args, **kwargs):
        return PlanStep(**data)


class ConditionalPlanSchema(Schema):
    class Meta(object):
        model = ConditionalPlan

    task = fields.String(required=True)
    description = fields.String(required=True)
    steps = fields.List(
        fields.Nested(PlanStepSchema), required=True, validate=validate.Length(min=1)
    )

    @post_load
    def make_plan(self, data, *args, **kwargs):
        return ConditionalPlan(data["task"], data["description"], tuple(data["steps"]))


class FixtureRecordSchema(Schema):
    """One stored completion."""

    prompt_hash = fields.String(required=True, validate=validate.Length(equal=64))
    sample_index = fields.Integer(required=True, validate=validate.Range(min=0))
    prompt = fields.String(required=True)
    completion = fields.String(required=True)
    backend = fields.String(required=True, validate=validate.OneOf(["replay", "http", "corpus"]))
    temperature = fields.Float(validate=validate.Range(min=0))
    max_tokens = fields.Integer(validate=validate.Range(min=1))


class HttpBackendSchema(Schema):
    """The ``completion`` block of a run config."""

    class Meta(object):
        model = HttpBackendConfig

    endpoint = fields.Url(required=True, require_tld=False)
    credential_env = fields.String(
        load_default=lambda: settings.LANGWORLD["COMPLETION"]["CREDENTIAL_ENV"]
    )
    timeout = fields.Float(
        load_default=lambda: settings.LANGWORLD["COMPLETION"]["HTTP_TIMEOUT"],
        validate=validate.Range(min=0, min_inclusive=False),
    )
    response_field = fields.String(load_default="completion")
    log_fixtures = fields.Boolean(load_default=True)

    @post_load
    def make_config(self, data, *args, **kwargs):
        return HttpBackendConfig(**data)
