"""Counter-based random streams.

Every randomized draw in the project comes from a Philox generator keyed by
``(seed, stream)``. Philox is counter-based, so a given key produces the
same numbers on every platform and independent streams never share state.
"""

import zlib

import numpy as np

_SEED_LIMIT = 1 << 64


def stream_id(*labels):
    """Stable 32-bit identifier for a tuple of labels."""
    return zlib.crc32("/".join(str(label) for label in labels).encode("utf-8"))


def counter_rng(seed, *labels):
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError("seed must be in [0, 2**64), got %r" % (seed,))
    key = (stream_id(*labels) << 64) | int(seed)
    return np.random.Generator(np.random.Philox(key=key))


def rng_state(generator):
    """JSON-friendly snapshot of a Philox generator."""
    state = generator.bit_generator.state
    return {
        "bit_generator": state["bit_generator"],
        "counter": [int(v) for v in state["state"]["counter"]],
        "key": [int(v) for v in state["state"]["key"]],
        "buffer": [int(v) for v in state["buffer"]],
        "buffer_pos": int(state["buffer_pos"]),
        "has_uint32": int(state["has_uint32"]),
        "uinteger": int(state["uinteger"]),
    }


def restore_rng(snapshot):
    bit_generator = np.random.Philox()
    bit_generator.state = {
        "bit_generator": snapshot["bit_generator"],
        "state": {
            "counter": np.array(snapshot["counter"], dtype=np.uint64),
            "key": np.array(snapshot["key"], dtype=np.uint64),
        },
        "buffer": np.array(snapshot["buffer"], dtype=np.uint64),
        "buffer_pos": snapshot["buffer_pos"],
        "has_uint32": snapshot["has_uint32"],
        "uinteger": snapshot["uinteger"],
    }
    return np.random.Generator(bit_generator)
