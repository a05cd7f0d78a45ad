"""Plan-conditioned and description-conditioned policies.

Both share the decoder; they differ only in which texts are encoded and how
those latents are mixed into the conditioning latent for a state.
"""

from typing import Dict, Optional

import numpy as np

from langworld.exceptions import MissingPlanError, UnknownTaskError
from langworld.pcbc.attention import attention_weights
from langworld.pcbc.encoder import count_matrix, encode_texts
from langworld.pcbc.models import ENCODER, Architecture, PolicyParams
from langworld.pcbc.network import decoder, forward, leaves
from langworld.plans.models import ConditionalPlan
from langworld.skills.executor import compile_plan
from langworld.world.dynamics import observe
from langworld.world.models import Action
from langworld.world.tasks import TASKS, get_task


class ConditionedPolicy:
    architecture = None
    # whether conditioning depends on the world state, not only the task
    needs_states = False

    def __init__(self, params, texts):
        self.params = params
        self.texts = tuple(texts)
        self.index = {text: i for i, text in enumerate(self.texts)}
        self.counts = count_matrix(self.texts, params.vocab_size)
        self._latents = None

    @property
    def latents(self):
        """Encoded texts, computed once per policy."""
        if self._latents is None:
            self._latents = encode_texts(self.params[ENCODER], self.counts).data
        return self._latents

    def mixing(self, task, states):
        raise NotImplementedError

    def forward(self, observations, mixing, weights=None):
        """Differentiable actions for a batch; ``weights`` defaults to fresh leaves."""
        return forward(weights or leaves(self.params), observations, mixing, self.counts)

    def act(self, task, state):
        row = self.mixing(task, [state])
        weights = leaves(self.params)
        out = decoder(weights, observe(state)[None, :], row @ self.latents)
        return Action(*(float(value) for value in out.data[0]))

    @property
    def id(self):
        return self.architecture.value


class PcbcPolicy(ConditionedPolicy):
    """Mixes skill latents with softmax attention over plan condition truths."""

    architecture = Architecture.PCBC
    needs_states = True

    def __init__(self, params: PolicyParams, plans: Dict[str, ConditionalPlan]):
        self.plans = dict(plans)
        # compiling rejects plans that are not grounded
        self.compiled = {task: compile_plan(task, plan.pairs) for task, plan in self.plans.items()}
        texts = sorted({step.skill for plan in self.plans.values() for step in plan.steps})
        super().__init__(params, texts)

    def plan_for(self, task):
        name = get_task(task).name
        try:
            return self.plans[name], self.compiled[name]
        except KeyError:
            raise MissingPlanError("the policy has no plan for %r" % name) from None

    def with_plans(self, plans):
        """Same parameters, extra plans for tasks it was not trained on."""
        return PcbcPolicy(self.params, dict(plans, **self.plans))

    def truths(self, task, states):
        _, compiled = self.plan_for(task)
        return np.stack([compiled.truths(state) for state in states])

    def mixing_from_truths(self, task, truths):
        plan, _ = self.plan_for(task)
        columns = [self.index[step.skill] for step in plan.steps]
        rows = np.zeros((len(truths), len(self.texts)))
        for row, truth in zip(rows, truths):
            np.add.at(row, columns, attention_weights(truth))
        return rows

    def mixing(self, task, states):
        return self.mixing_from_truths(task, self.truths(task, states))


class DcPolicy(ConditionedPolicy):
    """Conditions on the encoded task description instead of a plan."""

    architecture = Architecture.DC

    def __init__(self, params: PolicyParams, descriptions: Optional[Dict[str, str]] = None):
        if descriptions is None:
            descriptions = {task.name: task.description for task in TASKS}
        self.descriptions = dict(descriptions)
        super().__init__(params, sorted(set(self.descriptions.values())))

    def description_for(self, task):
        name = task.name if hasattr(task, "name") else task
        try:
            return self.descriptions[name]
        except KeyError:
            raise UnknownTaskError("the policy has no description for %r" % name) from None

    def mixing(self, task, states):
        rows = np.zeros((len(states), len(self.texts)))
        rows[:, self.index[self.description_for(task)]] = 1.0
        return rows


def act(policy, task, state):
    return policy.act(task, state)


def act_dc(policy, task, state):
    if not isinstance(policy, DcPolicy):
        raise TypeError("act_dc needs a DcPolicy, got %s" % type(policy).__name__)
    return policy.act(task, state)


def build_policy(architecture, params, plans=None, descriptions=None):
    architecture = Architecture(architecture)
    if architecture is Architecture.PCBC:
        return PcbcPolicy(params, plans or {})
    return DcPolicy(params, descriptions)
