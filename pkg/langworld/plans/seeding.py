"""The checked-in plan corpus and the replay fixtures made from it."""

import logging
import re
from pathlib import Path

from django.conf import settings

from langworld.plans.completion import FixtureStore, make_request
from langworld.plans.grounding import decode_completion, ground_plan
from langworld.plans.models import PlanFormat
from langworld.plans.prompts import build_prompt, manual_library, manual_plan
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)

_NAME = re.compile(r"^(\d+)\.(\w+)\.txt$")


def corpus_dir():
    return Path(settings.LANGWORLD["PLAN_CORPUS_DIR"])


def load_corpus(directory=None, plan_format=PlanFormat.CHAIN_PY):
    """``{task: [completion text, ...]}`` ordered by sample index."""
    directory = Path(directory) if directory else corpus_dir()
    plan_format = PlanFormat(plan_format)
    corpus = {}
    for task_dir in sorted(path for path in directory.iterdir() if path.is_dir()):
        get_task(task_dir.name)
        samples = []
        for path in task_dir.iterdir():
            match = _NAME.match(path.name)
            if match and match.group(2) == plan_format.value:
                samples.append((int(match.group(1)), path.read_text(encoding="utf-8")))
        if samples:
            corpus[task_dir.name] = [text for _, text in sorted(samples)]
    return corpus


def grounded_corpus(directory=None, plan_format=PlanFormat.CHAIN_PY):
    """Decoded and grounded corpus plans, ``{task: [ConditionalPlan, ...]}``."""
    return {
        task: [ground_plan(decode_completion(task, text, plan_format), task) for text in texts]
        for task, texts in load_corpus(directory, plan_format).items()
    }


def seed_fixtures(store=None, directory=None, plan_format=PlanFormat.CHAIN_PY, library=None):
    """Store every corpus completion under the prompt ``build_prompt`` makes for its task."""
    store = store or FixtureStore()
    library = library or manual_library()
    written = []
    for task, texts in load_corpus(directory, plan_format).items():
        prompt = build_prompt(task, plan_format, library)
        for index, text in enumerate(texts):
            written.append(store.save(make_request(prompt, sample_index=index), text, "corpus"))
    logger.info("seeded %d fixtures into %s", len(written), store.directory)
    return written


def task_plans(tasks, source="manual", directory=None):
    """Grounded plans keyed by task.

    ``manual`` writes out the hand-made plan of every task; ``corpus`` uses
    it for base tasks and the first grounded corpus sample for held-out ones.
    """
    if source not in ("manual", "corpus"):
        raise ValueError("unknown plan source %r" % (source,))
    corpus = grounded_corpus(directory) if source == "corpus" else {}
    plans = {}
    for task in tasks:
        task = get_task(task)
        if not task.is_base and corpus.get(task.name):
            plans[task.name] = corpus[task.name][0]
        else:
            plans[task.name] = manual_plan(task)
    return plans
