import numpy as np
from django.conf import settings


def attention_weights(truths, scale=None):
    """Softmax of ``scale * truths``; true conditions dominate the mix."""
    if scale is None:
        scale = settings.LANGWORLD["ATTENTION_SCALE"]
    logits = scale * np.asarray(truths, dtype=np.float64)
    if logits.ndim != 1 or logits.size == 0:
        raise ValueError("attention needs a non-empty vector of condition truths")
    logits = logits - logits.max()
    weights = np.exp(logits)
    return weights / weights.sum()
