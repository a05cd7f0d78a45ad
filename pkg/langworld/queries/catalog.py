import functools

from langworld.queries.grammar import known_names, render_query
from langworld.queries.models import (
    BinaryAtom,
    Literal,
    Query,
    RelationKind,
    UnaryAtom,
    UnaryKind,
)
from langworld.world.tasks import get_task


def _sentences(task):
    for kind in UnaryKind:
        for negated in (False, True):
            yield render_query(Query((Literal(negated, UnaryAtom(kind)),)))
    names = known_names(task)
    for subject in names:
        for relation in RelationKind:
            for obj in names:
                if obj == subject:
                    continue
                for negated in (False, True):
                    atom = BinaryAtom(relation, subject, obj)
                    yield render_query(Query((Literal(negated, atom),)))


@functools.lru_cache(maxsize=None)
def _catalog(task):
    return tuple(_sentences(task))


def supported_queries(task):
    """Every single-atom sentence and its negation, in a fixed order."""
    return list(_catalog(get_task(task)))
