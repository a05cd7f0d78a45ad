import math

from django.conf import settings

from langworld.pcbc.encoder import encode_texts, resolve_vocab_size
from langworld.pcbc.models import ENCODER, PolicyParams
from langworld.pcbc.tensor import Tensor, concat
from langworld.rng import counter_rng
from langworld.world.dynamics import OBSERVATION_SIZE

ACTION_SIZE = 4


def _uniform(rng, fan_in, shape):
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_params(seed, latent_dim=None, vocab_size=None, hidden=None):
    """Uniform +-1/sqrt(fan_in) initialization from a seeded stream."""
    conf = settings.LANGWORLD
    latent_dim = latent_dim or conf["LATENT_DIM"]
    vocab_size = vocab_size or resolve_vocab_size(conf["VOCAB_SIZE"])
    hidden = hidden or conf["HIDDEN_WIDTH"]
    rng = counter_rng(seed, "init")
    inputs = OBSERVATION_SIZE + latent_dim
    return PolicyParams({
        ENCODER: _uniform(rng, vocab_size, (latent_dim, vocab_size)),
        "w1": _uniform(rng, inputs, (inputs, hidden)),
        "b1": _uniform(rng, inputs, (hidden,)),
        "w2": _uniform(rng, hidden, (hidden, hidden)),
        "b2": _uniform(rng, hidden, (hidden,)),
        "w3": _uniform(rng, hidden, (hidden, ACTION_SIZE)),
        "b3": _uniform(rng, hidden, (ACTION_SIZE,)),
    })


def leaves(params):
    return {name: Tensor(params[name]) for name in params.names}


def decoder(weights, observations, latents):
    inputs = concat([Tensor(observations), latents], axis=-1)
    hidden = (inputs @ weights["w1"] + weights["b1"]).tanh()
    hidden = (hidden @ weights["w2"] + weights["b2"]).tanh()
    return (hidden @ weights["w3"] + weights["b3"]).tanh() * settings.LANGWORLD["ACTION_SQUASH"]


def mse(predicted, target):
    return ((predicted - Tensor(target)) ** 2).mean()


def forward(weights, observations, mixing, counts):
    """Actions for a batch.

    ``counts`` stacks the bag-of-words vectors of every text the batch can
    condition on; row ``i`` of ``mixing`` says how much of each text's
    latent goes into sample ``i``'s conditioning latent.
    """
    latents = Tensor(mixing) @ encode_texts(weights[ENCODER], counts)
    return decoder(weights, observations, latents)
