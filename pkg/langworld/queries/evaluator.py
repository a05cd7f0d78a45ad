from django.conf import settings

from langworld.exceptions import UnknownObjectError
from langworld.queries.models import FIXED_OBJECTS, RelationKind, UnaryAtom, UnaryKind
from langworld.world.models import Vec3


def _tolerances():
    return settings.LANGWORLD["QUERY_TOLERANCES"]


def entity_position(state, name):
    if name == "gripper":
        return state.gripper_pos
    if name == "goal":
        return state.goal_pos
    obj = state.get(name)
    if obj is None:
        raise UnknownObjectError(
            name, ("gripper", "goal") + state.object_names + FIXED_OBJECTS
        )
    return obj.position


def fixed_position(name, other=None):
    """Project ``other`` onto the table or wall plane; anchors when both are fixed."""
    conf = settings.LANGWORLD
    if name == "table":
        if other is None:
            return Vec3(*conf["TABLE_ANCHOR"])
        return Vec3(other.x, other.y, conf["TABLE_HEIGHT"])
    if other is None:
        return Vec3(*conf["WALL_ANCHOR"])
    return Vec3(other.x, conf["WALL_Y"], other.z)


def atom_positions(state, subject, obj):
    if subject in FIXED_OBJECTS and obj in FIXED_OBJECTS:
        return fixed_position(subject), fixed_position(obj)
    if subject in FIXED_OBJECTS:
        b = entity_position(state, obj)
        return fixed_position(subject, b), b
    a = entity_position(state, subject)
    if obj in FIXED_OBJECTS:
        return a, fixed_position(obj, a)
    return a, entity_position(state, obj)


def _touching(atom, a, b, tol):
    fixed = {atom.subject, atom.object} & set(FIXED_OBJECTS)
    if fixed == {"table"}:
        other = b if atom.subject == "table" else a
        return other.z < settings.LANGWORLD["TABLE_HEIGHT"] + tol["TOUCHING"]
    return a.distance(b) < tol["TOUCHING"]


RELATIONS = {
    RelationKind.NEAR: lambda a, b, t: a.distance(b) < t["NEAR"],
    RelationKind.FAR_FROM: lambda a, b, t: a.distance(b) >= t["NEAR"],
    RelationKind.LEFT_OF: lambda a, b, t: a.x < b.x - t["SIDE"],
    RelationKind.RIGHT_OF: lambda a, b, t: a.x > b.x + t["SIDE"],
    RelationKind.IN_FRONT_OF: lambda a, b, t: a.y < b.y - t["SIDE"],
    RelationKind.BEHIND: lambda a, b, t: a.y > b.y + t["SIDE"],
    RelationKind.ABOVE: lambda a, b, t: (
        a.z > b.z + t["VERTICAL"] and a.horizontal_distance(b) < t["ABOVE_HORIZONTAL"]
    ),
    RelationKind.BELOW: lambda a, b, t: (
        a.z < b.z - t["VERTICAL"] and a.horizontal_distance(b) < t["ABOVE_HORIZONTAL"]
    ),
    RelationKind.AROUND: lambda a, b, t: (
        a.horizontal_distance(b) < t["AROUND_HORIZONTAL"]
        and abs(a.z - b.z) < t["AROUND_VERTICAL"]
    ),
    RelationKind.ALIGNED_X: lambda a, b, t: abs(a.x - b.x) < t["ALIGNED"],
    RelationKind.ALIGNED_Y: lambda a, b, t: abs(a.y - b.y) < t["ALIGNED"],
    RelationKind.ALIGNED_Z: lambda a, b, t: abs(a.z - b.z) < t["ALIGNED"],
}


def eval_atom(atom, state):
    tol = _tolerances()
    if isinstance(atom, UnaryAtom):
        closed = state.gripper_closure >= tol["GRIPPER_CLOSED"]
        return closed if atom.kind is UnaryKind.GRIPPER_CLOSED else not closed
    a, b = atom_positions(state, atom.subject, atom.object)
    if atom.relation is RelationKind.TOUCHING:
        return _touching(atom, a, b, tol)
    return RELATIONS[atom.relation](a, b, tol)


def eval_literal(literal, state):
    return eval_atom(literal.atom, state) != literal.negated


def eval_query(query, state):
    return all(eval_literal(literal, state) for literal in query.literals)
