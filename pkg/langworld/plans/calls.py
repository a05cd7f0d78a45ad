"""Code-like skill calls (``robot.place("gripper above puck")``) and back."""

import re

from langworld.exceptions import PlanDecodeError

ARTICLES = ("the", "a", "an")

# Nouns that take "the" when a call is read back as English, longest first
# so "drawer handle" wins over "drawer" and "handle".
NOUNS = sorted(
    (
        "drawer handle", "door handle", "window handle", "faucet handle",
        "gripper", "puck", "peg", "hole", "goal", "button", "drawer", "door",
        "window", "faucet", "handle", "table", "wall", "shelf",
    ),
    key=len,
    reverse=True,
)

_CALL = re.compile(r"^\s*robot\.(\w+)\(\s*(?:([\"'])(.*?)\2)?\s*\)\s*;?\s*$")
_NOUN = re.compile(
    r"\b(?:(?:the|a|an)\s+)?(%s|(?:left|right)(?=\s+of\b))\b" % "|".join(map(re.escape, NOUNS))
)


def skill_call_to_description(call):
    """``robot.place("gripper above puck")`` -> "place the gripper above the puck"."""
    match = _CALL.match(call)
    if not match:
        raise PlanDecodeError("not a robot skill call: %r" % call.strip(), call)
    verb, _, args = match.groups()
    words = " ".join([verb.replace("_", " "), args or ""]).split()
    return _NOUN.sub(r"the \1", " ".join(words).lower())


def description_to_skill_call(description):
    """Inverse of ``skill_call_to_description`` for article-normal descriptions."""
    words = [word for word in description.split() if word.lower() not in ARTICLES]
    if not words:
        raise ValueError("empty skill description")
    verb, args = words[0], " ".join(words[1:])
    if not args:
        return "robot.%s()" % verb
    return 'robot.%s("%s")' % (verb, args)
