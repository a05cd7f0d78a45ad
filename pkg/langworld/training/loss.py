from langworld.pcbc.network import mse


def bc_loss(policy, minibatch, weights=None):
    """Mean squared error between policy and demonstration actions."""
    if not len(minibatch):
        raise ValueError("cannot take the loss of an empty minibatch")
    predicted = policy.forward(minibatch.observations, minibatch.mixing, weights)
    return mse(predicted, minibatch.actions)
