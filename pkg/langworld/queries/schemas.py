from marshmallow import fields
from marshmallow import Schema
from marshmallow import validate
from marshmallow import ValidationError
from marshmallow import validates_schema
from marshmallow.decorators import post_load

from langworld.queries.grammar import render_query
from langworld.queries.models import (
    BinaryAtom,
    Literal,
    Query,
    RelationKind,
    UnaryAtom,
    UnaryKind,
)

PREDICATES = [relation.value for relation in RelationKind] + [kind.value for kind in UnaryKind]


class LiteralSchema(Schema):
    class Meta(object):
        model = Literal

    negated = fields.Boolean(load_default=False)
    predicate = fields.Method(
        serialize="get_predicate",
        deserialize="load_predicate",
        required=True,
    )
    subject = fields.String(required=True)
    object = fields.Method(
        serialize="get_object", deserialize="load_object", allow_none=True
    )

    def get_predicate(self, literal):
        atom = literal.atom
        return atom.kind.value if isinstance(atom, UnaryAtom) else atom.relation.value

    def load_predicate(self, value):
        validate.OneOf(PREDICATES)(value)
        return value

    def get_object(self, literal):
        return getattr(literal.atom, "object", None)

    def load_object(self, value):
        return value

    @validates_schema
    def check_arity(self, data, **kwargs):
        unary = data.get("predicate") in (kind.value for kind in UnaryKind)
        if unary and data.get("subject") != "gripper":
            raise ValidationError("only the gripper is open or closed", "subject")
        if not unary and not data.get("object"):
            raise ValidationError("binary relations need an object", "object")
        if not unary and data.get("object") == data.get("subject"):
            raise ValidationError("subject and object must differ", "object")

    @post_load
    def make_literal(self, data, *args, **kwargs):
        predicate = data["predicate"]
        if predicate in (kind.value for kind in UnaryKind):
            atom = UnaryAtom(UnaryKind(predicate))
        else:
            atom = BinaryAtom(RelationKind(predicate), data["subject"], data["object"])
        return Literal(data["negated"], atom)


class QuerySchema(Schema):
    class Meta(object):
        model = Query

    text = fields.Function(render_query, dump_only=True)
    literals = fields.List(
        fields.Nested(LiteralSchema), required=True, validate=validate.Length(min=1)
    )

    @post_load
    def make_query(self, data, *args, **kwargs):
        return Query(tuple(data["literals"]))


class QueryAnswerSchema(Schema):
    """What ``lw query eval`` prints."""

    task = fields.String()
    query = fields.Nested(QuerySchema)
    holds = fields.Boolean()
    literals = fields.List(fields.Boolean())
