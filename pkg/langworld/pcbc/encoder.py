"""Hashed bag-of-words text encoder.

Texts become token-count vectors over ``V`` hash buckets; a learned
``d x V`` matrix projects them to latents.
"""

import functools
import zlib

import numpy as np

from langworld.pcbc.tensor import Tensor
from langworld.skills.library import DESCRIPTIONS

MAX_VOCAB_SIZE = 1 << 16


def tokenize(text):
    return text.lower().split()


def bucket(token, size):
    return zlib.crc32(token.encode("utf-8")) % size


def bag_of_words(text, size):
    counts = np.zeros(size, dtype=np.float64)
    for token in tokenize(text):
        counts[bucket(token, size)] += 1.0
    return counts


def count_matrix(texts, size):
    return np.stack([bag_of_words(text, size) for text in texts]) if texts else np.zeros((0, size))


@functools.lru_cache(maxsize=None)
def resolve_vocab_size(size, texts=tuple(DESCRIPTIONS)):
    """Smallest ``size * 2**k`` under which ``texts`` get distinct count vectors."""
    while size <= MAX_VOCAB_SIZE:
        vectors = {bag_of_words(text, size).tobytes() for text in texts}
        if len(vectors) == len(set(texts)):
            return size
        size *= 2
    raise ValueError("texts collide under every vocabulary size up to %d" % MAX_VOCAB_SIZE)


def encode_text(encoder, text):
    """Latent for one text; differentiable in ``encoder`` (a d x V Tensor)."""
    if not text.strip():
        raise ValueError("cannot encode empty text")
    encoder = Tensor.wrap(encoder)
    return encoder @ Tensor(bag_of_words(text, encoder.shape[1]))


def encode_texts(encoder, counts):
    """Latents for stacked count vectors, one row per text."""
    return Tensor(counts) @ Tensor.wrap(encoder).T
