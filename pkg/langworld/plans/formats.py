"""Text encodings of conditional plans.

``encode_plan`` is total; ``decode_plan`` is tolerant: it skips prose,
markdown fences and comments, keeps every (condition, skill) pair it can
recover and only fails when none is left.
"""

import logging
import re
from functools import partial

from langworld.exceptions import PlanDecodeError
from langworld.plans.calls import description_to_skill_call, skill_call_to_description
from langworld.plans.models import ConditionalPlan, PlanFormat, PlanStep

logger = logging.getLogger(__name__)

FENCE = "```"
INDENT = "    "

_PLAIN_TASK = re.compile(r"^task:\s*(\S+)\s*$", re.IGNORECASE)
_PLAIN_DESCRIPTION = re.compile(r"^description:\s*(.+?)\s*$", re.IGNORECASE)
_PLAIN_STEP = re.compile(r"^(?:[-*]\s*|\d+[.)]\s*)?if\s+(.+?)\s*:\s*(.+?)\s*\.?$", re.IGNORECASE)

_MD_TASK = re.compile(r"^#{1,6}\s*(\S+)\s*$")
_MD_DESCRIPTION = re.compile(r"^task:\s*(.+?)\s*$", re.IGNORECASE)
_CHECK = re.compile(r"^(?:el)?if\s+check\(\s*([\"'])(.*?)\1\s*\)\s*:\s*(.*)$")
_SKILL = re.compile(r"^skill\(\s*([\"'])(.*?)\1\s*\)\s*;?\s*$")

_CHAIN_HEADER = re.compile(r"^#\s*([\w-]+):\s*(.+?)\s*$")
_DEF = re.compile(r"^def\s+(\w+)\(\s*robot\s*\)\s*:\s*$")
_ROBOT = re.compile(r"^robot\.\w+\(")


def function_name(task):
    return task.replace("-", "_")


def encode_header(task, description, plan_format):
    """Plan text up to where the steps begin; prompts end with this."""
    plan_format = PlanFormat(plan_format)
    if plan_format is PlanFormat.PLAIN_LIST:
        return "task: %s\ndescription: %s\n" % (task, description)
    if plan_format is PlanFormat.BASIC_PY_MD:
        return "### %s\nTask: %s\n" % (task, description)
    return "# %s: %s\ndef %s(robot):\n" % (task, description, function_name(task))


def _plain_body(plan):
    return "".join("if %s: %s\n" % (step.condition, step.skill) for step in plan.steps)


def _basic_py_md_body(plan):
    lines = [FENCE + "python"]
    for step in plan.steps:
        lines.append('if check("%s"):' % step.condition)
        lines.append(INDENT + 'skill("%s")' % step.skill)
    lines.append(FENCE)
    return "\n".join(lines) + "\n"


def _chain_py_body(plan):
    lines = [INDENT + "# Steps:"]
    for number, step in enumerate(plan.steps, 1):
        lines.append(INDENT + "#  %d. %s" % (number, step.skill[:1].upper() + step.skill[1:]))
    lines.append(INDENT + "# Act on the first step whose check passes.")
    for index, step in enumerate(plan.steps):
        keyword = "if" if index == 0 else "elif"
        lines.append(INDENT + '%s check("%s"):' % (keyword, step.condition))
        lines.append(INDENT * 2 + description_to_skill_call(step.skill))
    return "\n".join(lines) + "\n"


_BODIES = {
    PlanFormat.PLAIN_LIST: _plain_body,
    PlanFormat.BASIC_PY_MD: _basic_py_md_body,
    PlanFormat.CHAIN_PY: _chain_py_body,
}


def encode_plan(plan, plan_format):
    plan_format = PlanFormat(plan_format)
    return encode_header(plan.task, plan.description, plan_format) + _BODIES[plan_format](plan)


def _skipped(line):
    if line and line != FENCE and not line.startswith(FENCE):
        logger.debug("skipping plan line %r", line)


def _decode_plain(lines):
    task = description = None
    steps = []
    for line in lines:
        for pattern, found in ((_PLAIN_TASK, "task"), (_PLAIN_DESCRIPTION, "description")):
            match = pattern.match(line)
            if match:
                if found == "task":
                    task = task or match.group(1)
                else:
                    description = description or match.group(1)
                break
        else:
            match = _PLAIN_STEP.match(line)
            if match:
                steps.append(PlanStep(match.group(1), match.group(2)))
            else:
                _skipped(line)
    return task, description, steps


def _decode_pairs(lines, header, read_skill):
    """Shared walk for the python-like formats: a check line, then its call."""
    task = description = None
    steps = []
    pending = None
    for line in lines:
        found = header(line)
        if found:
            task = task or found[0]
            description = description or found[1]
            continue
        match = _CHECK.match(line)
        if match:
            pending = match.group(2)
            inline = match.group(3).strip()
            if inline:
                line = inline
            else:
                continue
        skill = read_skill(line)
        if skill is not None and pending is not None:
            steps.append(PlanStep(pending, skill))
            pending = None
        else:
            _skipped(line)
    return task, description, steps


def _basic_py_md_header(line):
    match = _MD_TASK.match(line)
    if match:
        return match.group(1), None
    match = _MD_DESCRIPTION.match(line)
    if match:
        return None, match.group(1)
    return None


def _basic_py_md_skill(line):
    match = _SKILL.match(line)
    return match.group(2) if match else None


def _chain_py_header(line, functions=frozenset()):
    # only the comment naming a function defined in the text is the header
    match = _CHAIN_HEADER.match(line)
    if match and function_name(match.group(1)) in functions:
        return match.group(1), match.group(2)
    if _DEF.match(line):
        return (None, None)
    return None


def _chain_py_skill(line):
    if not _ROBOT.match(line):
        return None
    try:
        return skill_call_to_description(line)
    except PlanDecodeError:
        return None


def decode_plan(text, plan_format, task=None, description=None):
    """Recover a plan from ``text``.

    ``task`` and ``description``, when given, win over any header found in
    the text (a completion usually continues after the prompt's header).
    """
    plan_format = PlanFormat(plan_format)
    lines = [line.strip() for line in text.splitlines()]
    if plan_format is PlanFormat.PLAIN_LIST:
        found_task, found_description, steps = _decode_plain(lines)
    elif plan_format is PlanFormat.BASIC_PY_MD:
        found_task, found_description, steps = _decode_pairs(
            lines, _basic_py_md_header, _basic_py_md_skill
        )
    else:
        functions = frozenset(match.group(1) for match in map(_DEF.match, lines) if match)
        found_task, found_description, steps = _decode_pairs(
            lines, partial(_chain_py_header, functions=functions), _chain_py_skill
        )
    if not steps:
        raise PlanDecodeError("no (condition, skill) steps found in %s text" % plan_format.value, text)
    return ConditionalPlan(
        task=task or found_task or "",
        description=description or found_description or "",
        steps=tuple(steps),
    )
