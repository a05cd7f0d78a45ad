import math
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st
from marshmallow import ValidationError

from langworld.exceptions import InvalidPlanError, MissingPlanError, UnknownTaskError
from langworld.pcbc.attention import attention_weights
from langworld.pcbc.checkpoints import load_checkpoint, load_policy, save_checkpoint
from langworld.pcbc.encoder import bag_of_words, encode_text, resolve_vocab_size
from langworld.pcbc.gradcheck import grad_check, random_instance, relative_error
from langworld.pcbc.models import Architecture
from langworld.pcbc.network import init_params
from langworld.pcbc.policies import DcPolicy, PcbcPolicy, act, act_dc
from langworld.pcbc.tensor import Tensor, concat
from langworld.plans.models import ConditionalPlan, PlanStep
from langworld.plans.prompts import manual_plan
from langworld.rng import counter_rng, rng_state
from langworld.skills.library import DESCRIPTIONS
from langworld.world.dynamics import observe, reset
from langworld.world.tasks import TASKS


def finite_difference(function, values, step=1e-6):
    grad = np.zeros_like(values)
    for index in np.ndindex(values.shape):
        saved = values[index]
        values[index] = saved + step
        upper = function()
        values[index] = saved - step
        lower = function()
        values[index] = saved
        grad[index] = (upper - lower) / (2 * step)
    return grad


class TensorTestCase(SimpleTestCase):
    def test_matmul_tanh_gradients(self):
        rng = counter_rng(0, "tensor-test")
        a_values, b_values = rng.normal(size=(3, 4)), rng.normal(size=(4, 2))
        bias = rng.normal(size=(2,))

        def loss_value():
            return (np.tanh(a_values @ b_values + bias) ** 2).mean()

        a, b, c = Tensor(a_values), Tensor(b_values), Tensor(bias)
        loss = ((a @ b + c).tanh() ** 2).mean()
        loss.backward()
        self.assertAlmostEqual(loss.data.item(), loss_value(), places=12)
        np.testing.assert_allclose(a.grad, finite_difference(loss_value, a_values), atol=1e-8)
        np.testing.assert_allclose(b.grad, finite_difference(loss_value, b_values), atol=1e-8)
        np.testing.assert_allclose(c.grad, finite_difference(loss_value, bias), atol=1e-8)

    def test_concat_splits_gradient(self):
        left, right = Tensor(np.ones((2, 1))), Tensor(np.ones((2, 3)))
        (concat([left, right]) * np.arange(8.0).reshape(2, 4)).sum().backward()
        np.testing.assert_array_equal(left.grad, [[0.0], [4.0]])
        np.testing.assert_array_equal(right.grad, [[1.0, 2.0, 3.0], [5.0, 6.0, 7.0]])

    def test_shared_node_accumulates(self):
        x = Tensor(3.0)
        y = x * x + x
        y.backward()
        self.assertEqual(x.grad, 7.0)


class EncodeTextTestCase(SimpleTestCase):
    def setUp(self):
        self.params = init_params(3)

    def test_identical_texts(self):
        encoder = self.params["encoder"]
        np.testing.assert_array_equal(
            encode_text(encoder, "open the gripper").data,
            encode_text(encoder, "Open  the GRIPPER").data,
        )

    def test_zero_encoder(self):
        zero = np.zeros_like(self.params["encoder"])
        for text in DESCRIPTIONS:
            np.testing.assert_array_equal(encode_text(zero, text).data, np.zeros(32))

    def test_encoder_gradient(self):
        encoder_values = self.params["encoder"].copy()
        direction = counter_rng(1, "direction").normal(size=32)
        text = "pull the drawer open"

        def loss_value():
            return float(np.tanh(encoder_values @ bag_of_words(text, encoder_values.shape[1])) @ direction)

        encoder = Tensor(encoder_values)
        (encode_text(encoder, text).tanh() * direction).sum().backward()
        columns = np.flatnonzero(bag_of_words(text, encoder_values.shape[1]))
        numeric = finite_difference(loss_value, encoder_values, step=1e-5)
        for column in columns:
            for row in range(32):
                self.assertLess(
                    relative_error(encoder.grad[row, column], numeric[row, column]), 1e-4
                )
        self.assertFalse(np.any(np.delete(encoder.grad, columns, axis=1)))

    def test_library_descriptions_are_distinct(self):
        size = resolve_vocab_size(256)
        vectors = {bag_of_words(text, size).tobytes() for text in DESCRIPTIONS}
        self.assertEqual(len(vectors), len(DESCRIPTIONS))
        self.assertEqual(self.params.vocab_size, size)

    def test_collisions_double_the_vocabulary(self):
        texts = ("alpha", "beta", "gamma")
        size = resolve_vocab_size(1, texts)
        self.assertGreater(size, 1)
        self.assertEqual(size & (size - 1), 0)
        self.assertEqual(len({bag_of_words(t, size).tobytes() for t in texts}), 3)


class AttentionTestCase(SimpleTestCase):
    def test_all_false_is_uniform(self):
        for n in range(1, 11):
            np.testing.assert_allclose(attention_weights([False] * n), np.full(n, 1.0 / n), atol=1e-12)

    def test_one_true_closed_form(self):
        for n in range(2, 11):
            weights = attention_weights([True] + [False] * (n - 1))
            expected = math.exp(8) / (math.exp(8) + n - 1)
            self.assertAlmostEqual(weights[0], expected, delta=1e-12)
            self.assertGreater(weights[0], 0.99)
        self.assertAlmostEqual(attention_weights([True] + [False] * 9)[0], 0.99699, places=5)

    def test_two_true(self):
        weights = attention_weights([True, True] + [False] * 8)
        self.assertEqual(weights[0], weights[1])
        self.assertAlmostEqual(weights[0], math.exp(8) / (2 * math.exp(8) + 8), delta=1e-12)
        self.assertAlmostEqual(weights[0], 0.4993299738, places=9)
        self.assertAlmostEqual(sum(weights[2:]), 1 - 2 * weights[0], delta=1e-12)

    def test_empty_truths(self):
        with self.assertRaises(ValueError):
            attention_weights([])

    @hsettings(max_examples=100, deadline=None)
    @given(st.lists(st.booleans(), min_size=1, max_size=12), st.randoms(use_true_random=False))
    def test_sums_to_one_and_permutes(self, truths, random):
        weights = attention_weights(truths)
        self.assertAlmostEqual(weights.sum(), 1.0, places=12)
        order = list(range(len(truths)))
        random.shuffle(order)
        np.testing.assert_allclose(
            attention_weights([truths[i] for i in order]), weights[order], atol=1e-15
        )


class PolicyTestCase(SimpleTestCase):
    def setUp(self):
        self.params = init_params(11)
        self.plans = {name: manual_plan(name) for name in ("drawer-open", "pick-place", "reach")}
        self.policy = PcbcPolicy(self.params, self.plans)

    def test_same_observation_and_truths_give_same_action(self):
        state = reset("pick-place", 4)
        twin = replace(state, attached="puck")
        np.testing.assert_array_equal(observe(state), observe(twin))
        self.assertEqual(act(self.policy, "pick-place", state), act(self.policy, "pick-place", twin))

    def test_actions_are_inside_the_box(self):
        for name in self.plans:
            for seed in range(5):
                values = np.array(act(self.policy, name, reset(name, seed)).as_tuple())
                self.assertTrue(np.all(np.isfinite(values)))
                self.assertTrue(np.all(np.abs(values) < 1.0))

    def test_step_order_does_not_change_the_mix(self):
        plan = self.plans["drawer-open"]
        reversed_plan = replace(plan, steps=tuple(reversed(plan.steps)))
        other = PcbcPolicy(self.params, dict(self.plans, **{"drawer-open": reversed_plan}))
        for seed in range(3):
            state = reset("drawer-open", seed)
            np.testing.assert_allclose(
                act(self.policy, "drawer-open", state).as_tuple(),
                act(other, "drawer-open", state).as_tuple(),
                atol=1e-12,
            )

    def test_missing_plan(self):
        with self.assertRaises(MissingPlanError):
            act(self.policy, "door-open", reset("door-open", 0))

    def test_unseen_task_with_an_added_plan(self):
        extended = self.policy.with_plans({"door-open": manual_plan("door-open"), "reach": None})
        self.assertIs(extended.params, self.params)
        self.assertEqual(extended.plans["reach"], self.plans["reach"])
        action = act(extended, "door-open", reset("door-open", 0))
        self.assertTrue(all(-1 <= value <= 1 for value in action.as_tuple()))

    def test_ungrounded_plan_is_rejected(self):
        loose = ConditionalPlan("reach", "reach", (PlanStep("gripper near goal", "go to goal"),))
        with self.assertRaises(InvalidPlanError):
            PcbcPolicy(self.params, {"reach": loose})

    def test_dc_identical_descriptions_share_a_latent(self):
        policy = DcPolicy(self.params, {"drawer-open": "open the drawer", "reach": "open the drawer"})
        state = reset("drawer-open", 0)
        self.assertEqual(act_dc(policy, "drawer-open", state), act_dc(policy, "reach", state))
        with self.assertRaises(UnknownTaskError):
            act_dc(policy, "push", state)

    def test_dc_and_pcbc_decoders_match(self):
        dc = DcPolicy(self.params)
        self.assertEqual(dc.params.decoder_count, self.policy.params.decoder_count)
        self.assertLess(self.params.count, 50000)
        self.assertEqual(len(dc.texts), len({task.description for task in TASKS}))


class GradCheckTestCase(SimpleTestCase):
    def test_pcbc_and_dc_gradients(self):
        for architecture in Architecture:
            for seed in range(10):
                report = grad_check(random_instance(architecture, seed), entries_per_block=48, seed=seed)
                self.assertTrue(report.passed, report)
                self.assertLess(report.max_relative_error, 1e-4)

    def test_report_lists_every_block(self):
        report = grad_check(random_instance("pcbc", 0), entries_per_block=16)
        self.assertEqual(
            [block.name for block in report.blocks],
            ["encoder", "w1", "b1", "w2", "b2", "w3", "b3"],
        )

    def test_zero_direction(self):
        self.assertEqual(relative_error(0.0, 0.0), 0.0)
        instance = random_instance("dc", 2)
        instance.mixing = np.zeros_like(instance.mixing)
        report = grad_check(instance, entries_per_block=32)
        self.assertEqual(report.blocks[0].relative_error, 0.0)
        self.assertEqual(report.blocks[0].analytic, 0.0)


class CheckpointTestCase(SimpleTestCase):
    def test_reload_is_exact(self):
        params = init_params(5)
        plans = {"drawer-open": manual_plan("drawer-open")}
        rng = counter_rng(5, "sampler")
        rng.random(3)
        with tempfile.TemporaryDirectory() as directory:
            path = save_checkpoint(
                Path(directory) / "pcbc.json", "pcbc", params, 10, 5, rng_state(rng), plans=plans
            )
            checkpoint = load_checkpoint(path)
            self.assertEqual(checkpoint["params"], params)
            self.assertEqual(rng_state(checkpoint["rng"]), rng_state(rng))
            self.assertEqual(checkpoint["architecture"], Architecture.PCBC)
            policy = load_policy(path)
            state = reset("drawer-open", 1)
            self.assertEqual(
                policy.act("drawer-open", state), PcbcPolicy(params, plans).act("drawer-open", state)
            )
            again = save_checkpoint(
                Path(directory) / "again.json", "pcbc", checkpoint["params"], 10, 5,
                checkpoint["rng"], plans={p.task: p for p in checkpoint["plans"]},
            )
            self.assertEqual(path.read_bytes(), again.read_bytes())
            self.assertEqual(checkpoint["rng"].random(4).tolist(), rng.random(4).tolist())

    def test_bad_checkpoint(self):
        with tempfile.TemporaryDirectory() as directory:
            path = save_checkpoint(
                Path(directory) / "dc.json", "dc", init_params(1), 0, 1, counter_rng(1, "sampler")
            )
            text = path.read_text().replace('"version":1', '"version":99')
            path.write_text(text)
            with self.assertRaises(ValidationError):
                load_checkpoint(path)

    def test_bad_rng_state(self):
        with tempfile.TemporaryDirectory() as directory:
            path = save_checkpoint(Path(directory) / "dc.json", "dc", init_params(1), 0, 1, {})
            with self.assertRaises(ValidationError) as caught:
                load_checkpoint(path)
        self.assertIn("rng", caught.exception.messages)
