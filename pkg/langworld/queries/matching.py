import logging
import re

from langworld.queries.catalog import supported_queries
from langworld.queries.distance import nearest
from langworld.queries.grammar import known_names, parse_query, render_query
from langworld.queries.models import Query
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)

_AND = re.compile(r"\s+and\s+", re.IGNORECASE)
_IS = re.compile(r"\sis\s", re.IGNORECASE)
_QUESTION = re.compile(r"^is\s+(?:the\s+)?", re.IGNORECASE)


def _declarative(text, names):
    """Turn "is the gripper open" into "the gripper is open"."""
    match = _QUESTION.match(text)
    if not match:
        return text
    rest = text[match.end():]
    for name in sorted(names, key=len, reverse=True):
        if rest.lower().startswith(name + " "):
            return "the %s is %s" % (name, rest[len(name) + 1:])
    return text


def _subject_prefix(text):
    match = _IS.search(" %s " % text)
    return (" %s " % text)[1:match.end()] if match else ""


def nearest_query(text, task):
    """Closest supported sentence, matched conjunct by conjunct.

    A conjunct without its own ``is`` borrows the last stated subject,
    so "the gripper is closed and not near the puck" matches two catalog
    entries and comes back as a single canonical conjunction.
    """
    task = get_task(task)
    catalog = supported_queries(task)
    names = known_names(task)
    conjuncts = [
        _declarative(part.strip(), names)
        for part in _AND.split(text.strip())
        if part.strip()
    ] or [text]
    prefix = ""
    literals = []
    for part in conjuncts:
        own = _subject_prefix(part)
        if own:
            prefix = own
        else:
            part = prefix + part
        best, distance = nearest(part, catalog)
        logger.debug("%r -> %r (distance %d)", part, catalog[best], distance)
        for literal in parse_query(catalog[best], task).literals:
            if literal not in literals:
                literals.append(literal)
    return render_query(Query(tuple(literals)))
