"""Parser and renderer for the condition language.

    query   := ["is"] clause ("and" clause)*
    clause  := ["is"] [SUBJECT ["is"]] predicate
    predicate := ["not"] (RELATION OBJECT | "open" | "closed")

Articles are optional, case and punctuation are ignored, and a subject
stated once carries over to the clauses that follow it.
"""

import re

from langworld.exceptions import QueryParseError, UnknownObjectError
from langworld.queries.distance import nearest
from langworld.queries.models import (
    FIXED_OBJECTS,
    PHRASES,
    BinaryAtom,
    Literal,
    Query,
    RelationKind,
    UnaryAtom,
    UnaryKind,
)
from langworld.world.tasks import get_task

ARTICLES = frozenset({"the", "a", "an"})

ALIASES = {
    "to left of": RelationKind.LEFT_OF,
    "to right of": RelationKind.RIGHT_OF,
    "on top of": RelationKind.ABOVE,
    "under": RelationKind.BELOW,
    "beneath": RelationKind.BELOW,
}

_WORD = re.compile(r"[a-z0-9]+")

_RELATION_TOKENS = sorted(
    [(tuple(phrase.split()), relation) for relation, phrase in PHRASES.items()]
    + [(tuple(phrase.split()), relation) for phrase, relation in ALIASES.items()],
    key=lambda item: -len(item[0]),
)

_HINTS = list(PHRASES.values()) + [kind.phrase for kind in UnaryKind]


def known_names(task):
    return get_task(task).entities + FIXED_OBJECTS


def tokenize(text):
    return [word for word in _WORD.findall(text.lower()) if word not in ARTICLES]


def _clauses(tokens):
    clause = []
    for token in tokens:
        if token == "and":
            yield clause
            clause = []
        else:
            clause.append(token)
    yield clause


def _check_name(name, names):
    if name not in names:
        raise UnknownObjectError(name, names)
    return name


def _leading_name(tokens, names):
    for name in sorted(names, key=lambda name: -len(name.split())):
        words = name.split()
        if tokens[:len(words)] == words:
            return name, tokens[len(words):]
    raise UnknownObjectError(tokens[0] if tokens else "", names)


def _hint(tokens, names):
    words = list(tokens)
    for name in sorted(names, key=lambda name: -len(name.split())):
        size = len(name.split())
        if len(words) > size and words[-size:] == name.split():
            words = words[:-size]
            break
    index, _ = nearest(" ".join(words), _HINTS)
    return _HINTS[index]


def _predicate(subject, tokens, names):
    negated = bool(tokens) and tokens[0] == "not"
    if negated:
        tokens = tokens[1:]
    if not tokens:
        raise QueryParseError("nothing is said about the %s" % subject)
    for kind in UnaryKind:
        if tokens == [kind.phrase]:
            if subject != "gripper":
                raise QueryParseError("only the gripper can be %s, not the %s" % (kind.phrase, subject))
            return Literal(negated, UnaryAtom(kind))
    for words, relation in _RELATION_TOKENS:
        if tuple(tokens[:len(words)]) == words:
            obj = " ".join(tokens[len(words):])
            if not obj:
                raise QueryParseError("%r needs an object" % " ".join(words))
            _check_name(obj, names)
            if obj == subject:
                raise QueryParseError("the %s cannot be %s itself" % (subject, relation.phrase))
            return Literal(negated, BinaryAtom(relation, subject, obj))
    raise QueryParseError(
        "unrecognized relation in %r" % " ".join(tokens), hint=_hint(tokens, names)
    )


def parse_query(text, task):
    names = known_names(task)
    tokens = tokenize(text)
    if not tokens:
        raise QueryParseError("empty query")
    subject = None
    literals = []
    for clause in _clauses(tokens):
        if not clause:
            raise QueryParseError("dangling 'and' in %r" % text)
        asked = clause[0] == "is"
        if asked:
            clause = clause[1:]
        if "is" in clause:
            at = clause.index("is")
            subject = _check_name(" ".join(clause[:at]), names)
            predicate = clause[at + 1:]
        elif asked or subject is None:
            subject, predicate = _leading_name(clause, names)
        else:
            predicate = clause
        literals.append(_predicate(subject, predicate, names))
    return Query(tuple(literals))


def render_predicate(literal):
    atom = literal.atom
    if isinstance(atom, UnaryAtom):
        body = atom.kind.phrase
    else:
        body = "%s the %s" % (atom.relation.phrase, atom.object)
    return "not " + body if literal.negated else body


def render_query(query):
    """Canonical sentence; the subject is repeated only when it changes."""
    parts = []
    subject = None
    for literal in query.literals:
        if literal.subject == subject:
            parts.append(render_predicate(literal))
        else:
            subject = literal.subject
            parts.append("the %s is %s" % (subject, render_predicate(literal)))
    return " and ".join(parts)
