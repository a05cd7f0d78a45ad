import numpy as np


class Adam:
    """Adaptive-moment updates applied in place to ``PolicyParams`` arrays."""

    def __init__(self, params, learning_rate=1e-3, betas=(0.9, 0.999), eps=1e-8):
        self.params = params
        self.learning_rate = learning_rate
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self.first = {name: np.zeros_like(params[name]) for name in params.names}
        self.second = {name: np.zeros_like(params[name]) for name in params.names}

    def step(self, grads):
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for name in self.params.names:
            grad = grads[name]
            self.first[name] = self.beta1 * self.first[name] + (1.0 - self.beta1) * grad
            self.second[name] = self.beta2 * self.second[name] + (1.0 - self.beta2) * grad * grad
            update = (self.first[name] / correction1) / (np.sqrt(self.second[name] / correction2) + self.eps)
            self.params.arrays[name] -= self.learning_rate * update
