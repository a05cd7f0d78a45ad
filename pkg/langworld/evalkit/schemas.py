from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate
from marshmallow import validates_schema
from marshmallow import ValidationError
from marshmallow.decorators import post_load
from marshmallow.decorators import pre_load

from langworld.evalkit.models import CdfBand, CdfPoint, EvalResult, ReportRow

RATE = validate.Range(min=0, max=1)


class EvalResultSchema(Schema):
    class Meta(object):
        model = EvalResult

    policy = fields.String(required=True)
    task = fields.String(required=True)
    seeds = fields.List(fields.Integer(), required=True, validate=validate.Length(min=1))
    flags = fields.List(fields.Boolean(), required=True)
    success_rate = fields.Float(dump_only=True)

    @pre_load
    def drop_derived(self, data, **kwargs):
        # success_rate is recomputed from the flags
        if isinstance(data, dict):
            data = {key: value for key, value in data.items() if key != "success_rate"}
        return data

    @validates_schema
    def validate_lengths(self, data, **kwargs):
        if len(data.get("seeds", ())) != len(data.get("flags", ())):
            raise ValidationError("seeds and flags must have the same length", "flags")

    @post_load
    def make_result(self, data, *args, **kwargs):
        return EvalResult(
            policy=data["policy"],
            task=data["task"],
            seeds=tuple(data["seeds"]),
            flags=tuple(data["flags"]),
        )


class CdfPointSchema(Schema):
    class Meta(object):
        model = CdfPoint

    rank = fields.Integer(required=True, validate=validate.Range(min=1))
    level = fields.Float(required=True, validate=RATE)

    @post_load
    def make_point(self, data, *args, **kwargs):
        return CdfPoint(**data)


class ReportRowSchema(Schema):
    class Meta(object):
        model = ReportRow
        ordered = True

    policy = fields.String(required=True)
    task = fields.String(required=True)
    n = fields.Integer(required=True, validate=validate.Range(min=1))
    success_rate = fields.Float(required=True, validate=RATE)
    min = fields.Float(required=True, validate=RATE)
    max = fields.Float(required=True, validate=RATE)

    @post_load
    def make_row(self, data, *args, **kwargs):
        return ReportRow(**data)


class CdfBandSchema(Schema):
    class Meta(object):
        model = CdfBand

    policy = fields.String(required=True)
    points = fields.List(fields.Nested(CdfPointSchema), required=True)
    low = fields.List(fields.Float(validate=RATE), required=True)
    high = fields.List(fields.Float(validate=RATE), required=True)

    @validates_schema
    def validate_widths(self, data, **kwargs):
        width = len(data.get("points", ()))
        if len(data.get("low", ())) != width or len(data.get("high", ())) != width:
            raise ValidationError("band edges must have one value per rank", "points")

    @post_load
    def make_band(self, data, *args, **kwargs):
        return CdfBand(
            policy=data["policy"],
            points=tuple(data["points"]),
            low=tuple(data["low"]),
            high=tuple(data["high"]),
        )


class ReportSchema(Schema):
    """The JSON mirror of a report."""

    rows = fields.List(fields.Nested(ReportRowSchema), required=True)
    cdf = fields.List(fields.Nested(CdfBandSchema), required=True)
    results = fields.List(fields.List(fields.Nested(EvalResultSchema)), load_default=list)
