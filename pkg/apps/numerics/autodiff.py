"""Reverse-mode automatic differentiation over an explicit tape.

Operations record themselves on the :class:`Tape` of their inputs in creation
order, so replaying the records backwards is a reverse topological order. No
state is global: independent tapes can be driven from separate threads, but a
single tape must not be mutated concurrently.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from apps.corecode.exceptions import ReconError, ShapeError

from .tensors import as_tensor

logger = logging.getLogger(__name__)


class Node:
    """A value on a tape. Leaves are parameters; constants never get gradients."""

    __slots__ = ("tape", "id", "value", "requires_grad", "name")

    def __init__(self, tape, node_id, value, requires_grad, name=None):
        self.tape = tape
        self.id = node_id
        self.value = value
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self):
        return self.value.shape

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Node {self.id}{label} shape={self.shape}>"

    def __add__(self, other):
        from . import ops

        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops

        return ops.mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        from . import ops

        return ops.scale(self, -1.0)


@dataclass
class Record:
    op: str
    output: Node
    inputs: Tuple[Node, ...]
    backward: Callable


class Tape:
    """Ordered log of differentiable operations.

    With ``enabled=False`` operations still compute values but nothing is
    recorded; that mode serves validation and inference.
    """

    def __init__(self, enabled=True):
        self.enabled = enabled
        self.records = []
        self.leaves = []
        self._next_id = 0

    def _new_node(self, value, requires_grad, name=None):
        node = Node(self, self._next_id, value, requires_grad, name)
        self._next_id += 1
        return node

    def leaf(self, value, name=None):
        node = self._new_node(as_tensor(value), self.enabled, name)
        self.leaves.append(node)
        return node

    def constant(self, value):
        return self._new_node(as_tensor(value), False)

    def lift(self, value):
        if isinstance(value, Node):
            if value.tape is not self:
                raise ReconError("cannot mix nodes from different tapes")
            return value
        return self.constant(value)

    def record(self, op, value, inputs, backward):
        requires_grad = self.enabled and any(n.requires_grad for n in inputs)
        node = self._new_node(value, requires_grad)
        if requires_grad:
            self.records.append(Record(op, node, tuple(inputs), backward))
        return node


def backward(tape, loss):
    """Gradients of a scalar ``loss`` for every leaf of ``tape``.

    Returns a dict keyed by leaf node; leaves the loss does not depend on get
    exact zeros.
    """
    if loss.tape is not tape:
        raise ReconError("loss node belongs to a different tape")
    if loss.value.size != 1:
        raise ShapeError(f"loss must be scalar, got shape {loss.shape}")
    if not tape.enabled:
        raise ReconError("cannot differentiate through a disabled tape")

    grads = {loss.id: np.ones_like(loss.value)}
    last_id = loss.id + 1
    for record in reversed(tape.records):
        out_id = record.output.id
        if out_id > loss.id:
            continue
        if out_id >= last_id:
            raise ReconError("tape records are not in topological order")
        last_id = out_id
        grad_out = grads.pop(out_id, None)
        if grad_out is None:
            continue
        input_grads = record.backward(grad_out)
        for node, grad in zip(record.inputs, input_grads):
            if not node.requires_grad or grad is None:
                continue
            if node.id in grads:
                grads[node.id] = grads[node.id] + grad
            else:
                grads[node.id] = grad

    return {
        leaf: grads.get(leaf.id, np.zeros_like(leaf.value)) for leaf in tape.leaves
    }


def numerical_gradient(func, value, eps=1e-5, indices=None):
    """Central finite-difference gradient of scalar ``func`` at ``value``.

    ``indices`` restricts the differences to a subset of flat positions; the other
    entries of the result stay zero.
    """
    value = np.array(value, dtype=np.float64)
    grad = np.zeros_like(value)
    flat = value.reshape(-1)
    positions = range(flat.size) if indices is None else indices
    for pos in positions:
        saved = flat[pos]
        flat[pos] = saved + eps
        plus = float(func(value))
        flat[pos] = saved - eps
        minus = float(func(value))
        flat[pos] = saved
        grad.reshape(-1)[pos] = (plus - minus) / (2.0 * eps)
    return grad


def relative_error(actual, expected):
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    scale = max(np.linalg.norm(actual), np.linalg.norm(expected), 1e-300)
    return float(np.linalg.norm(actual - expected) / scale)
