import math
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from langworld.exceptions import QueryParseError, UnknownObjectError
from langworld.queries.catalog import supported_queries
from langworld.queries.distance import edit_distance, nearest
from langworld.queries.evaluator import eval_literal, eval_query
from langworld.queries.grammar import known_names, parse_query, render_query
from langworld.queries.matching import nearest_query
from langworld.queries.models import (
    BinaryAtom,
    Literal,
    Query,
    RelationKind,
    UnaryAtom,
    UnaryKind,
)
from langworld.queries.schemas import QuerySchema
from langworld.world.dynamics import reset
from langworld.world.models import Vec3, WorldState
from langworld.world.tasks import TASKS, get_task

TABLE_HEIGHT, WALL_Y = 0.0, 0.9
TABLE_ANCHOR, WALL_ANCHOR = (0.0, 0.6, 0.0), (0.0, 0.9, 0.15)


def dp_distance(a, b):
    a, b = a.lower(), b.lower()
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[len(a)][len(b)]


def oracle_position(state, name, other_name):
    """Positions spelled out from the relation definitions, without the engine."""
    def raw(entity):
        if entity == "gripper":
            return tuple(state.gripper_pos)
        if entity == "goal":
            return tuple(state.goal_pos)
        return tuple(state.get(entity).position)

    fixed = ("table", "wall")
    if name == "table":
        if other_name in fixed:
            return TABLE_ANCHOR
        other = raw(other_name)
        return (other[0], other[1], TABLE_HEIGHT)
    if name == "wall":
        if other_name in fixed:
            return WALL_ANCHOR
        other = raw(other_name)
        return (other[0], WALL_Y, other[2])
    return raw(name)


def oracle(state, literal):
    atom = literal.atom
    if isinstance(atom, UnaryAtom):
        value = state.gripper_closure < 0.5
        if atom.kind is UnaryKind.GRIPPER_CLOSED:
            value = state.gripper_closure >= 0.5
        return value != literal.negated
    ax, ay, az = oracle_position(state, atom.subject, atom.object)
    bx, by, bz = oracle_position(state, atom.object, atom.subject)
    dx, dy, dz = ax - bx, ay - by, az - bz
    dist = math.sqrt(dx * dx + dy * dy + dz * dz)
    flat = math.hypot(dx, dy)
    relation = atom.relation
    if relation is RelationKind.NEAR:
        value = dist < 0.08
    elif relation is RelationKind.FAR_FROM:
        value = dist >= 0.08
    elif relation is RelationKind.LEFT_OF:
        value = ax < bx - 0.02
    elif relation is RelationKind.RIGHT_OF:
        value = ax > bx + 0.02
    elif relation is RelationKind.IN_FRONT_OF:
        value = ay < by - 0.02
    elif relation is RelationKind.BEHIND:
        value = ay > by + 0.02
    elif relation is RelationKind.ABOVE:
        value = az > bz + 0.02 and flat < 0.06
    elif relation is RelationKind.BELOW:
        value = az < bz - 0.02 and flat < 0.06
    elif relation is RelationKind.AROUND:
        value = flat < 0.03 and abs(az - bz) < 0.03
    elif relation is RelationKind.TOUCHING:
        pair = {atom.subject, atom.object}
        if "table" in pair and "wall" not in pair:
            value = (bz if atom.subject == "table" else az) < TABLE_HEIGHT + 0.01
        else:
            value = dist < 0.01
    elif relation is RelationKind.ALIGNED_X:
        value = abs(ax - bx) < 0.01
    elif relation is RelationKind.ALIGNED_Y:
        value = abs(ay - by) < 0.01
    else:
        value = abs(az - bz) < 0.01
    return value != literal.negated


def random_state(task, rng):
    """A reset state with positions scattered around the gripper."""
    state = reset(task, int(rng.integers(0, 2 ** 32)))
    gripper = Vec3(*rng.uniform((-0.5, 0.3, 0.0), (0.5, 0.9, 0.4)))
    spread = rng.choice([0.01, 0.05, 0.2])
    objects = []
    for obj in state.objects:
        if obj.joint is not None:
            obj = obj.with_joint_value(rng.uniform(obj.joint.low, obj.joint.high))
        else:
            obj = obj.moved_to(gripper + rng.uniform(-spread, spread, size=3))
        objects.append(obj)
    return WorldState(
        task=state.task,
        gripper_pos=gripper,
        gripper_closure=float(rng.uniform(0, 1)),
        objects=tuple(objects),
        goal_pos=gripper + rng.uniform(-spread, spread, size=3),
    )


class ParseQueryTestCase(SimpleTestCase):
    def test_negation_and_shared_subject(self):
        query = parse_query("the gripper is open and not above the puck", "pick-place")
        self.assertEqual(
            query.literals,
            (
                Literal(False, UnaryAtom(UnaryKind.GRIPPER_OPEN)),
                Literal(True, BinaryAtom(RelationKind.ABOVE, "gripper", "puck")),
            ),
        )

    def test_question_and_repeated_subject_forms(self):
        expected = parse_query("the gripper is open and not above the puck", "pick-place")
        for text in (
            "Is the gripper open and not above the puck?",
            "the gripper is open and the gripper is not above the puck",
            "gripper is open and not above puck",
        ):
            self.assertEqual(parse_query(text, "pick-place"), expected)

    def test_parse_is_deterministic(self):
        self.assertEqual(
            parse_query("the gripper is near the puck", "push"),
            parse_query("the gripper is near the puck", "push"),
        )

    def test_touching_the_table(self):
        query = parse_query("the puck is touching the table", "push")
        self.assertEqual(
            query.literals, (Literal(False, BinaryAtom(RelationKind.TOUCHING, "puck", "table")),)
        )

    def test_aliases_render_canonically(self):
        query = parse_query("the gripper is to the left of the puck and on top of the table", "push")
        self.assertEqual(
            render_query(query), "the gripper is left of the puck and above the table"
        )
        below = parse_query("the puck is beneath the gripper", "push")
        self.assertEqual(below.literals[0].atom.relation, RelationKind.BELOW)

    def test_subject_switch(self):
        query = parse_query("the gripper is closed and the puck is touching the table", "push")
        self.assertEqual([literal.subject for literal in query.literals], ["gripper", "puck"])
        self.assertEqual(
            render_query(query), "the gripper is closed and the puck is touching the table"
        )

    def test_unknown_object_lists_known_names(self):
        with self.assertRaises(UnknownObjectError) as caught:
            parse_query("the gripper is near the mug", "push")
        self.assertEqual(caught.exception.name, "mug")
        self.assertIn("puck", caught.exception.known)
        self.assertIn("mug", str(caught.exception))

    def test_bad_relation_gets_hint(self):
        with self.assertRaises(QueryParseError) as caught:
            parse_query("the gripper is nearr the puck", "push")
        self.assertEqual(caught.exception.hint, "near")
        with self.assertRaises(QueryParseError) as caught:
            parse_query("the gripper is abovee the puck", "push")
        self.assertEqual(caught.exception.hint, "above")

    def test_rejects_malformed_queries(self):
        for text in ("", "the gripper is", "the gripper is near", "the puck is open",
                     "the gripper is near the gripper", "the gripper is open and"):
            with self.assertRaises(QueryParseError, msg=text):
                parse_query(text, "push")

    def test_goal_only_for_goal_tasks(self):
        self.assertIn("goal", known_names("push"))
        self.assertNotIn("goal", known_names("drawer-open"))
        with self.assertRaises(UnknownObjectError):
            parse_query("the gripper is near the goal", "drawer-open")

    def test_schema_loads_query(self):
        query = QuerySchema().load(
            {"literals": [{"predicate": "near", "subject": "gripper", "object": "puck",
                           "negated": True}]}
        )
        self.assertEqual(render_query(query), "the gripper is not near the puck")
        self.assertEqual(QuerySchema().dump(query)["text"], "the gripper is not near the puck")


class EvalQueryTestCase(SimpleTestCase):
    def test_near_at_zero_distance(self):
        state = reset("push", 0)
        state = replace(state, gripper_pos=state.get("puck").position)
        self.assertTrue(eval_query(parse_query("the gripper is near the puck", "push"), state))
        self.assertTrue(eval_query(parse_query("the gripper is around the puck", "push"), state))

    def test_gripper_states(self):
        state = reset("reach", 0)
        opened = parse_query("the gripper is open", "reach")
        closed = parse_query("the gripper is closed", "reach")
        self.assertTrue(eval_query(opened, state))
        half = replace(state, gripper_closure=0.5)
        self.assertTrue(eval_query(closed, half))
        self.assertFalse(eval_query(opened, half))

    def test_table_touching_uses_height(self):
        state = reset("push", 3)
        self.assertTrue(eval_query(parse_query("the puck is touching the table", "push"), state))
        self.assertFalse(eval_query(parse_query("the gripper is touching the table", "push"), state))
        self.assertTrue(eval_query(parse_query("the table is below the gripper", "push"), state))

    def test_missing_object(self):
        query = Query((Literal(False, BinaryAtom(RelationKind.NEAR, "gripper", "puck")),))
        with self.assertRaises(UnknownObjectError):
            eval_query(query, reset("reach", 0))

    def test_matches_geometric_oracle_on_every_task(self):
        rng = np.random.Generator(np.random.Philox(20240))
        for task in TASKS:
            catalog = [parse_query(text, task) for text in supported_queries(task)]
            for _ in range(1000):
                state = random_state(task, rng)
                literal = catalog[int(rng.integers(len(catalog)))].literals[0]
                self.assertEqual(
                    eval_literal(literal, state), oracle(state, literal),
                    msg="%s: %s" % (task.name, render_query(Query((literal,)))),
                )

    @hsettings(max_examples=50, deadline=None)
    @given(st.integers(0, 2 ** 32), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
    def test_negation_and_conjunction_soundness(self, seed, first, second):
        rng = np.random.Generator(np.random.Philox(seed))
        task = get_task("pick-place")
        state = random_state(task, rng)
        catalog = supported_queries(task)
        a = parse_query(catalog[first % len(catalog)], task)
        b = parse_query(catalog[second % len(catalog)], task)
        literal = a.literals[0]
        flipped = Literal(not literal.negated, literal.atom)
        self.assertEqual(eval_literal(flipped, state), not eval_literal(literal, state))
        both = Query(a.literals + b.literals)
        self.assertEqual(eval_query(both, state), eval_query(a, state) and eval_query(b, state))
        far = parse_query("the gripper is far from the puck", task)
        near = parse_query("the gripper is near the puck", task)
        self.assertEqual(eval_query(far, state), not eval_query(near, state))


class SupportedQueriesTestCase(SimpleTestCase):
    def test_contains_positive_and_negated_forms(self):
        catalog = supported_queries("push")
        self.assertIn("the gripper is near the puck", catalog)
        self.assertIn("the gripper is not near the puck", catalog)
        self.assertEqual(catalog[:4], [
            "the gripper is open", "the gripper is not open",
            "the gripper is closed", "the gripper is not closed",
        ])

    def test_count_matches_enumeration(self):
        for task in TASKS:
            names = known_names(task)
            expected = 0
            for subject in names:
                for obj in names:
                    if subject != obj:
                        expected += 13 * 2
            expected += 2 * 2
            self.assertEqual(len(supported_queries(task)), expected)
            self.assertEqual(len(set(supported_queries(task))), expected)
        # gripper, drawer handle, drawer, table, wall
        self.assertEqual(len(supported_queries("drawer-open")), (13 * 5 * 4 + 2) * 2)

    def test_every_sentence_round_trips(self):
        for task in TASKS:
            for text in supported_queries(task):
                self.assertEqual(render_query(parse_query(text, task)), text)


class EditDistanceTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(edit_distance("abc", "abc"), 0)
        self.assertEqual(edit_distance("", "abc"), 3)
        self.assertEqual(edit_distance("kitten", "sitting"), 3)
        self.assertEqual(edit_distance("Gripper", "gripper"), 0)

    def test_matches_dynamic_programming(self):
        rng = np.random.Generator(np.random.Philox(7))
        alphabet = np.array(list("abcAB "))
        for _ in range(1000):
            a = "".join(rng.choice(alphabet, size=int(rng.integers(0, 12))))
            b = "".join(rng.choice(alphabet, size=int(rng.integers(0, 12))))
            self.assertEqual(edit_distance(a, b), dp_distance(a, b))

    @hsettings(max_examples=200, deadline=None)
    @given(st.text("abcd", max_size=8), st.text("abcd", max_size=8), st.text("abcd", max_size=8))
    def test_metric_properties(self, a, b, c):
        self.assertEqual(edit_distance(a, b), edit_distance(b, a))
        self.assertEqual(edit_distance(a, b) == 0, a == b)
        self.assertLessEqual(edit_distance(a, c), edit_distance(a, b) + edit_distance(b, c))

    def test_nearest_prefers_first_on_ties(self):
        self.assertEqual(nearest("ab", ["aa", "bb", "ab"]), (2, 0))
        self.assertEqual(nearest("ab", ["ax", "xb"]), (0, 1))


class NearestQueryTestCase(SimpleTestCase):
    def test_exact_sentence_is_fixed_point(self):
        for text in supported_queries("push")[:60]:
            self.assertEqual(nearest_query(text, "push"), text)

    def test_missing_articles(self):
        self.assertEqual(nearest_query("gripper near puck", "push"), "the gripper is near the puck")

    def test_matches_exhaustive_argmin(self):
        catalog = supported_queries("push")
        text = "the gripper is nere the puk"
        distances = [dp_distance(text, candidate) for candidate in catalog]
        self.assertEqual(nearest_query(text, "push"), catalog[distances.index(min(distances))])

    def test_conjunctions_keep_their_subject(self):
        self.assertEqual(
            nearest_query("The gripper is closed and not near the drawer handle.", "drawer-open"),
            "the gripper is closed and not near the drawer handle",
        )
        self.assertEqual(
            nearest_query("the gripper is open and around the drawer", "drawer-open"),
            "the gripper is open and around the drawer",
        )
        self.assertEqual(
            nearest_query("the gripper above the drawer handle", "drawer-open"),
            "the gripper is above the drawer handle",
        )
        self.assertEqual(
            nearest_query("is the gripper open and not above the puck", "push"),
            "the gripper is open and not above the puck",
        )

    def test_conjunction_is_supported_literal_by_literal(self):
        catalog = set(supported_queries("drawer-open"))
        grounded = nearest_query("the gripper is open and around the drawer", "drawer-open")
        self.assertNotIn(grounded, catalog)
        literals = parse_query(grounded, "drawer-open").literals
        self.assertEqual(len(literals), 2)
        for literal in literals:
            self.assertIn(render_query(Query((literal,))), catalog)

    @hsettings(max_examples=40, deadline=None)
    @given(st.text("abcdefghiklmnoprstuwz ", min_size=1, max_size=40))
    def test_output_parses_and_is_idempotent(self, text):
        once = nearest_query(text, "push")
        parse_query(once, "push")
        self.assertEqual(nearest_query(once, "push"), once)
