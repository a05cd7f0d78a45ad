"""Case-insensitive edit distance and nearest-string lookup."""

import Levenshtein


def edit_distance(a, b):
    """Levenshtein distance with unit costs, ignoring case."""
    return Levenshtein.distance(a.lower(), b.lower())


def nearest(text, candidates):
    """Return ``(index, distance)`` of the closest candidate; first wins on ties."""
    best_index, best_distance = None, None
    for index, candidate in enumerate(candidates):
        distance = edit_distance(text, candidate)
        if best_distance is None or distance < best_distance:
            best_index, best_distance = index, distance
            if distance == 0:
                break
    if best_index is None:
        raise ValueError("no candidates to match %r against" % (text,))
    return best_index, best_distance
