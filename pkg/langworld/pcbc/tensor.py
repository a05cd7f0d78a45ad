"""A small reverse-mode differentiation kernel over float64 numpy arrays.

Each ``Tensor`` remembers the tensors it was computed from and a closure
that pushes its gradient back to them; ``backward`` walks the graph in
reverse topological order.
"""

import numpy as np


def _unbroadcast(grad, shape):
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    __array_priority__ = 100

    def __init__(self, data, children=(), op=""):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self._backward = lambda: None
        self._children = children
        self._op = op

    def __repr__(self):
        return "Tensor(shape=%s, op=%r)" % (self.shape, self._op)

    @property
    def shape(self):
        return self.data.shape

    def _accumulate(self, grad):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += grad

    @staticmethod
    def wrap(value):
        return value if isinstance(value, Tensor) else Tensor(value)

    def __add__(self, other):
        other = Tensor.wrap(other)
        out = Tensor(self.data + other.data, (self, other), "+")

        def _backward():
            self._accumulate(_unbroadcast(out.grad, self.shape))
            other._accumulate(_unbroadcast(out.grad, other.shape))
        out._backward = _backward
        return out

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-Tensor.wrap(other))

    def __rsub__(self, other):
        return Tensor.wrap(other) + (-self)

    def __mul__(self, other):
        other = Tensor.wrap(other)
        out = Tensor(self.data * other.data, (self, other), "*")

        def _backward():
            self._accumulate(_unbroadcast(out.grad * other.data, self.shape))
            other._accumulate(_unbroadcast(out.grad * self.data, other.shape))
        out._backward = _backward
        return out

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, float)):
            raise TypeError("only constant powers are supported")
        out = Tensor(self.data ** exponent, (self,), "**%r" % exponent)

        def _backward():
            self._accumulate(exponent * self.data ** (exponent - 1) * out.grad)
        out._backward = _backward
        return out

    def __matmul__(self, other):
        other = Tensor.wrap(other)
        out = Tensor(self.data @ other.data, (self, other), "@")

        def _backward():
            grad = out.grad
            left, right = self.data, other.data
            if left.ndim == 1 and right.ndim == 1:
                self._accumulate(grad * right)
                other._accumulate(grad * left)
            elif left.ndim == 1:
                self._accumulate(right @ grad)
                other._accumulate(np.outer(left, grad))
            elif right.ndim == 1:
                self._accumulate(np.outer(grad, right))
                other._accumulate(left.T @ grad)
            else:
                self._accumulate(grad @ right.T)
                other._accumulate(left.T @ grad)
        out._backward = _backward
        return out

    @property
    def T(self):
        out = Tensor(self.data.T, (self,), "T")

        def _backward():
            self._accumulate(out.grad.T)
        out._backward = _backward
        return out

    def tanh(self):
        value = np.tanh(self.data)
        out = Tensor(value, (self,), "tanh")

        def _backward():
            self._accumulate((1.0 - value * value) * out.grad)
        out._backward = _backward
        return out

    def sum(self):
        out = Tensor(self.data.sum(), (self,), "sum")

        def _backward():
            self._accumulate(np.broadcast_to(out.grad, self.shape))
        out._backward = _backward
        return out

    def mean(self):
        return self.sum() * (1.0 / self.data.size)

    def backward(self):
        """Fill ``grad`` on every tensor this one depends on."""
        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            stack.extend((child, False) for child in node._children if id(child) not in seen)
        for node in order:
            node.grad = None
        self.grad = np.ones_like(self.data)
        for node in reversed(order):
            node._backward()


def concat(tensors, axis=-1):
    tensors = [Tensor.wrap(tensor) for tensor in tensors]
    out = Tensor(np.concatenate([t.data for t in tensors], axis=axis), tuple(tensors), "concat")
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def _backward():
        for tensor, grad in zip(tensors, np.split(out.grad, bounds, axis=axis)):
            tensor._accumulate(grad)
    out._backward = _backward
    return out
