"""Black-box functionals declared in JSON as arithmetic expressions in ``phi``.

Example file: ``{"size": 3, "expression": "max(phi) + min(phi)"}``.
Only arithmetic, ``phi[i]`` indexing, numeric literals and a fixed set of
functions are accepted; anything else is rejected before evaluation.
"""
from __future__ import annotations

import ast
import math
import operator

import numpy as np

from .errors import TropcapError
from .functionals import Functional
from .space import FiniteSpace

_FUNCS = {
    "max": lambda *a: float(np.max(a[0])) if len(a) == 1 else float(max(a)),
    "min": lambda *a: float(np.min(a[0])) if len(a) == 1 else float(min(a)),
    "sum": lambda a: float(np.sum(a)),
    "mean": lambda a: float(np.mean(a)),
    "abs": abs,
    "exp": math.exp,
    "log": math.log,
}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _check(node, size):
    if isinstance(node, ast.Expression):
        return _check(node.body, size)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return
    if isinstance(node, ast.Name) and node.id == "phi":
        return
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _check(node.left, size)
        _check(node.right, size)
        return
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        _check(node.operand, size)
        return
    if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name) \
            and node.value.id == "phi":
        idx = node.slice
        if isinstance(idx, ast.Constant) and isinstance(idx.value, int) and 0 <= idx.value < size:
            return
        raise TropcapError(f"phi may only be indexed by a literal in 0..{size - 1}")
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in _FUNCS and not node.keywords:
        for a in node.args:
            _check(a, size)
        return
    raise TropcapError(f"unsupported syntax in expression: {ast.dump(node)[:60]}")


def _eval(node, phi):
    if isinstance(node, ast.Expression):
        return _eval(node.body, phi)
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return phi
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, phi), _eval(node.right, phi))
    if isinstance(node, ast.UnaryOp):
        return _UNOPS[type(node.op)](_eval(node.operand, phi))
    if isinstance(node, ast.Subscript):
        return float(phi[node.slice.value])
    return _FUNCS[node.func.id](*[_eval(a, phi) for a in node.args])


def expression_functional(space: FiniteSpace, expression: str) -> Functional:
    try:
        tree = ast.parse(expression, mode="eval")
    except SyntaxError as exc:
        raise TropcapError(f"cannot parse expression {expression!r}: {exc.msg}") from exc
    _check(tree, space.size)

    def evaluate(phi):
        value = _eval(tree, phi.values)
        if isinstance(value, np.ndarray):
            raise TropcapError("expression must reduce phi to a number")
        return float(value)

    return Functional(space, evaluate, kind="black-box", description=expression)
