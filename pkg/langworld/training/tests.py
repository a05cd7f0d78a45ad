import tempfile
from pathlib import Path
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st
from marshmallow import ValidationError

from langworld.exceptions import DemoGenerationError, MissingPlanError
from langworld.pcbc.network import init_params, leaves
from langworld.pcbc.policies import PcbcPolicy
from langworld.pcbc.tensor import Tensor
from langworld.plans.prompts import manual_plan
from langworld.rng import counter_rng
from langworld.skills.demos import generate_demos
from langworld.training.datasets import build_dataset, demo_states
from langworld.training.loss import bc_loss
from langworld.training.models import DataConfig, Minibatch, TaskData, TrainConfig
from langworld.training.optim import Adam
from langworld.training.samplers import sample_colearning, sample_uniform
from langworld.training.schemas import TrainConfigSchema
from langworld.training.trainer import train, train_models
from langworld.utils import read_csv
from langworld.world.dynamics import observe
from langworld.world.models import TaskSet
from langworld.world.tasks import TASKS, list_tasks

SMALL_TASKS = ["reach", "push"]


def fake_task(name, size, seed=0):
    rng = counter_rng(seed, "fake", name)
    return TaskData(
        task=name,
        observations=rng.normal(size=(size, 14)),
        actions=rng.uniform(-1, 1, size=(size, 4)),
        mixing=np.full((size, 3), 1.0 / 3),
    )


class ConstantPolicy:
    def __init__(self, value):
        self.value = value

    def forward(self, observations, mixing, weights=None):
        return Tensor(np.full((len(observations), 4), self.value))


class EchoPolicy:
    """Returns the demo actions it was built with."""

    def __init__(self, actions):
        self.actions = actions

    def forward(self, observations, mixing, weights=None):
        return Tensor(self.actions)


class SampleUniformTestCase(SimpleTestCase):
    def setUp(self):
        self.dataset = {task.name: fake_task(task.name, 50) for task in TASKS}

    def test_equal_share_per_task(self):
        rng = counter_rng(0, "uniform")
        for _ in range(100):
            batch = sample_uniform(self.dataset, 120, rng)
            self.assertEqual(len(batch), 120)
            self.assertEqual(set(batch.counts().values()), {6})
            self.assertEqual(len(batch.counts()), 20)

    def test_same_rng_state_same_batch(self):
        first = sample_uniform(self.dataset, 120, counter_rng(4, "uniform"))
        second = sample_uniform(self.dataset, 120, counter_rng(4, "uniform"))
        np.testing.assert_array_equal(first.observations, second.observations)
        np.testing.assert_array_equal(first.actions, second.actions)
        self.assertEqual(first.tasks, second.tasks)

    def test_rows_come_from_their_task(self):
        batch = sample_uniform(self.dataset, 40, counter_rng(1, "uniform"))
        for sample in batch.samples():
            rows = self.dataset[sample.task].actions
            self.assertTrue(np.any(np.all(rows == sample.action, axis=1)))

    def test_indivisible_batch(self):
        with self.assertRaises(ValueError):
            sample_uniform(self.dataset, 110, counter_rng(0, "uniform"))


class SampleColearningTestCase(SimpleTestCase):
    def setUp(self):
        self.base = {task.name: fake_task(task.name, 50) for task in list_tasks(TaskSet.BASE10)}
        self.target = fake_task("door-close", 500)

    def test_one_to_one_mixing(self):
        rng = counter_rng(0, "colearning")
        for _ in range(100):
            counts = sample_colearning(self.base, self.target, 120, rng).counts()
            self.assertEqual(counts.pop("door-close"), 60)
            self.assertEqual(set(counts.values()), {6})
            self.assertEqual(len(counts), 10)

    def test_small_batch(self):
        counts = sample_colearning(self.base, self.target, 20, counter_rng(0, "c")).counts()
        self.assertEqual(counts.pop("door-close"), 10)
        self.assertEqual(set(counts.values()), {1})

    @hsettings(max_examples=30, deadline=None)
    @given(st.integers(1, 9))
    def test_target_matches_base_total(self, multiple):
        batch_size = 20 * multiple
        counts = sample_colearning(self.base, self.target, batch_size, counter_rng(multiple, "c")).counts()
        self.assertEqual(counts.pop("door-close"), sum(counts.values()))

    def test_divisibility(self):
        for batch_size in (30, 110, 121):
            with self.assertRaises(ValueError):
                sample_colearning(self.base, self.target, batch_size, counter_rng(0, "c"))


class BcLossTestCase(SimpleTestCase):
    def batch(self, actions):
        return Minibatch(
            tasks=("reach",) * len(actions),
            observations=np.zeros((len(actions), 14)),
            actions=np.asarray(actions, dtype=np.float64),
            mixing=np.zeros((len(actions), 1)),
        )

    def test_exact_policy(self):
        actions = counter_rng(2, "loss").uniform(-1, 1, size=(12, 4))
        self.assertEqual(bc_loss(EchoPolicy(actions), self.batch(actions)).data.item(), 0.0)

    def test_zero_policy_against_ones(self):
        self.assertEqual(bc_loss(ConstantPolicy(0.0), self.batch(np.ones((8, 4)))).data.item(), 1.0)

    @hsettings(max_examples=50, deadline=None)
    @given(st.floats(-1, 1), st.integers(0, 2 ** 32 - 1))
    def test_non_negative(self, value, seed):
        actions = counter_rng(seed, "loss").uniform(-1, 1, size=(6, 4))
        self.assertGreaterEqual(bc_loss(ConstantPolicy(value), self.batch(actions)).data.item(), 0.0)

    def test_empty_batch(self):
        with self.assertRaises(ValueError):
            bc_loss(ConstantPolicy(0.0), self.batch(np.zeros((0, 4))))


class OptimizerTestCase(SimpleTestCase):
    def test_step_decreases_loss_on_a_fixed_batch(self):
        params = init_params(7)
        policy = PcbcPolicy(params, {"reach": manual_plan("reach")})
        rng = counter_rng(7, "fixed")
        batch = Minibatch(
            tasks=("reach",) * 20,
            observations=rng.normal(size=(20, 14)),
            actions=rng.uniform(-1, 1, size=(20, 4)),
            mixing=np.full((20, len(policy.texts)), 1.0 / len(policy.texts)),
        )
        optimizer = Adam(params, learning_rate=1e-4)
        losses = []
        for _ in range(5):
            weights = leaves(params)
            loss = bc_loss(policy, batch, weights)
            loss.backward()
            losses.append(loss.data.item())
            optimizer.step({name: weights[name].grad for name in params.names})
        self.assertLess(losses[-1], losses[0])


class ConfigTestCase(SimpleTestCase):
    def test_defaults(self):
        config = TrainConfigSchema().load({})
        self.assertEqual(config, TrainConfig(batch_size=120, learning_rate=1e-3, steps=5000))

    def test_batch_cap(self):
        with self.assertRaises(ValidationError) as caught:
            TrainConfigSchema().load({"batch_size": 200})
        self.assertIn("batch_size", caught.exception.messages)
        self.assertEqual(TrainConfigSchema().load({"batch_size": 199}).batch_size, 199)
        with self.assertRaises(ValueError):
            TrainConfig(batch_size=200)

    def test_data_configurations(self):
        self.assertEqual(DataConfig.ZERO_SHOT.demos_per_task, 100)
        self.assertEqual(len(DataConfig.ZERO_SHOT.demo_tasks), 10)
        self.assertEqual(DataConfig.FEW_SHOT.demos_per_task, 10)
        self.assertEqual(len(DataConfig.FEW_SHOT.demo_tasks), 20)
        self.assertEqual(DataConfig.ONE_SHOT.demos_per_task, 100)
        self.assertEqual(len(DataConfig.ONE_SHOT.targets), 20)
        self.assertEqual(DataConfig.FEW_SHOT.targets, [None])


class TrainTestCase(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.demos = generate_demos(SMALL_TASKS, 1, 3)
        cls.plans = {name: manual_plan(name) for name in SMALL_TASKS}
        cls.config = TrainConfig(batch_size=20, steps=150, seed=1, log_every=50)

    def run_small(self, architecture, out=None, **overrides):
        config = TrainConfig(**dict(vars(self.config), **overrides))
        return train(config, "few_shot", architecture, self.demos, self.plans, out=out, tasks=SMALL_TASKS)

    def test_demos_replay(self):
        demo = self.demos.demos["push"][0]
        states = demo_states(demo)
        self.assertEqual(len(states), len(demo))
        np.testing.assert_array_equal(observe(states[10]), demo.observations[10])

    def test_dataset_rows_follow_plan_truths(self):
        policy = PcbcPolicy(init_params(0), self.plans)
        dataset = build_dataset(policy, self.demos, SMALL_TASKS)
        mixing = dataset["push"].mixing
        self.assertEqual(mixing.shape, (len(self.demos.demos["push"][0]), len(policy.texts)))
        np.testing.assert_allclose(mixing.sum(axis=1), 1.0)

    def test_loss_goes_down(self):
        for architecture in ("pcbc", "dc"):
            losses = [row["loss"] for row in self.run_small(architecture).log]
            self.assertEqual(len(losses), 150)
            self.assertLess(np.median(losses[-20:]), np.median(losses[:20]))

    def test_same_seed_same_checkpoint(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            a = self.run_small("pcbc", out=first, steps=20)
            b = self.run_small("pcbc", out=second, steps=20)
            self.assertEqual(a.params, b.params)
            self.assertEqual(Path(a.checkpoint).read_bytes(), Path(b.checkpoint).read_bytes())
            rows = read_csv(a.log_file)
            self.assertEqual(list(rows[0]), ["step", "loss", "wall_ms"])
            self.assertEqual([row["loss"] for row in rows], [row["loss"] for row in read_csv(b.log_file)])

    def test_missing_inputs_fail_before_training(self):
        with self.assertRaises(MissingPlanError):
            train(self.config, "few_shot", "pcbc", self.demos, {"reach": self.plans["reach"]},
                  tasks=SMALL_TASKS)
        with self.assertRaises(DemoGenerationError):
            train(self.config, "few_shot", "dc", self.demos, tasks=SMALL_TASKS + ["drawer-open"])

    def test_one_shot_co_learns_the_target(self):
        targets = generate_demos(["drawer-open"], 1, 9)
        plans = dict(self.plans, **{"drawer-open": manual_plan("drawer-open")})
        result = train(
            TrainConfig(batch_size=20, steps=3, seed=0), "one_shot", "pcbc", self.demos, plans,
            target="drawer-open", target_demos=targets.demos["drawer-open"], tasks=SMALL_TASKS,
        )
        self.assertEqual(result.target, "drawer-open")
        self.assertEqual(len(result.log), 3)

    def test_one_shot_trains_a_model_per_task(self):
        with mock.patch("langworld.training.trainer.train", side_effect=lambda *job: job[5]) as fake:
            targets = train_models(self.config, "one_shot", "dc", self.demos)
        self.assertEqual(fake.call_count, 20)
        self.assertEqual(targets, [task.name for task in TASKS])
