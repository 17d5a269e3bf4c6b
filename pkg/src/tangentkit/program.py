"""Smooth maps between Cartesian charts as evaluable computation DAGs.

A program is anything with ``arity``, ``codim`` and a pure ``eval`` taking a
list of scalars (floats or JetScalars) and returning a list of the same
kind.  ``GraphProgram`` is the closed-DAG form built either node by node or
by tracing a Python function over symbolic inputs; wrapper programs
(tangents, partial tangents, compositions) evaluate by delegating with
reseeded jet slots, so functoriality identities hold bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .jet import (
    K_MAX,
    JetScalar,
    compose_primitive,
    jet_atan2,
)

UNARY_PRIMITIVES = ("neg", "exp", "log", "sin", "cos", "sqrt", "atan")
BINARY_PRIMITIVES = ("add", "sub", "mul", "div", "atan2")


# -- generic scalar operations ----------------------------------------------

def _unary(name, x):
    if isinstance(x, TraceVar):
        return x._builder.emit((name, x._id))
    if isinstance(x, JetScalar):
        if name == "neg":
            return -x
        return compose_primitive(name, x)
    x = float(x)
    if name == "neg":
        return -x
    if name == "exp":
        return math.exp(x)
    if name == "log":
        if x <= 0.0:
            raise DomainError(f"log of nonpositive value {x}")
        return math.log(x)
    if name == "sin":
        return math.sin(x)
    if name == "cos":
        return math.cos(x)
    if name == "sqrt":
        if x <= 0.0:
            raise DomainError(f"sqrt of nonpositive value {x}")
        return math.sqrt(x)
    if name == "atan":
        return math.atan(x)
    raise ValueError(f"unknown primitive {name}")


def exp(x):
    return _unary("exp", x)


def log(x):
    return _unary("log", x)


def sin(x):
    return _unary("sin", x)


def cos(x):
    return _unary("cos", x)


def sqrt(x):
    return _unary("sqrt", x)


def atan(x):
    return _unary("atan", x)


def atan2(y, x):
    if isinstance(y, TraceVar) or isinstance(x, TraceVar):
        b = y._builder if isinstance(y, TraceVar) else x._builder
        return b.emit(("atan2", b.as_id(y), b.as_id(x)))
    if isinstance(y, JetScalar) or isinstance(x, JetScalar):
        return jet_atan2(y, x)
    if x == 0.0 and y == 0.0:
        raise DomainError("atan2 undefined at the origin")
    return math.atan2(y, x)


def pow_int(x, n: int):
    if not isinstance(n, int):
        raise TypeError("pow_int exponent must be an integer")
    if isinstance(x, TraceVar):
        return x._builder.emit(("pow", x._id, n))
    if isinstance(x, JetScalar):
        return x**n
    if x == 0.0 and n < 0:
        raise DomainError("zero base with negative exponent")
    return float(x) ** n


def _div(a, b):
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b
    return a / b


# -- tracing ------------------------------------------------------------------

class TraceVar:
    """Symbolic scalar used to record a GraphProgram from plain Python code."""

    __slots__ = ("_builder", "_id")

    def __init__(self, builder, node_id):
        self._builder = builder
        self._id = node_id

    def _bin(self, op, other, swap=False):
        b = self._builder
        a_id, b_id = self._id, b.as_id(other)
        if swap:
            a_id, b_id = b_id, a_id
        return b.emit((op, a_id, b_id))

    def __add__(self, other):
        return self._bin("add", other)

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin("sub", other)

    def __rsub__(self, other):
        return self._bin("sub", other, swap=True)

    def __mul__(self, other):
        return self._bin("mul", other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._bin("div", other)

    def __rtruediv__(self, other):
        return self._bin("div", other, swap=True)

    def __neg__(self):
        return self._builder.emit(("neg", self._id))

    def __pow__(self, n):
        return pow_int(self, n)


class _Builder:
    def __init__(self, arity):
        self.nodes = [("input", i) for i in range(arity)]
        self._const_cache = {}

    def emit(self, node):
        self.nodes.append(node)
        return TraceVar(self, len(self.nodes) - 1)

    def as_id(self, value):
        if isinstance(value, TraceVar):
            if value._builder is not self:
                raise ValueError("mixing trace variables from different builders")
            return value._id
        c = float(value)
        if c not in self._const_cache:
            self.nodes.append(("const", c))
            self._const_cache[c] = len(self.nodes) - 1
        return self._const_cache[c]


# -- program classes -----------------------------------------------------------

class SmoothProgram:
    """Interface: arity, codim, and a pure eval over floats or jets."""

    arity: int
    codim: int

    def eval(self, xs):
        raise NotImplementedError

    def __call__(self, xs):
        xs = list(xs)
        if len(xs) != self.arity:
            raise ValueError(f"expected {self.arity} inputs, got {len(xs)}")
        return self.eval(xs)

    def eval_array(self, x) -> np.ndarray:
        """Evaluate on a real vector, returning a numpy vector."""
        out = self([float(v) for v in np.asarray(x, dtype=float)])
        return np.array([float(v) for v in out])


@dataclass(frozen=True)
class GraphProgram(SmoothProgram):
    arity: int
    codim: int
    nodes: tuple
    outputs: tuple

    def eval(self, xs):
        vals = [None] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            kind = node[0]
            if kind == "input":
                vals[i] = xs[node[1]]
            elif kind == "const":
                vals[i] = node[1]
            elif kind == "add":
                vals[i] = vals[node[1]] + vals[node[2]]
            elif kind == "sub":
                vals[i] = vals[node[1]] - vals[node[2]]
            elif kind == "mul":
                vals[i] = vals[node[1]] * vals[node[2]]
            elif kind == "div":
                vals[i] = _div(vals[node[1]], vals[node[2]])
            elif kind == "pow":
                vals[i] = pow_int(vals[node[1]], node[2])
            elif kind == "atan2":
                vals[i] = atan2(vals[node[1]], vals[node[2]])
            else:
                vals[i] = _unary(kind, vals[node[1]])
        return [vals[o] for o in self.outputs]


def trace(fn, arity: int) -> GraphProgram:
    """Record fn, called on symbolic scalars, as a closed DAG."""
    b = _Builder(arity)
    result = fn([TraceVar(b, i) for i in range(arity)])
    if isinstance(result, (TraceVar, int, float)):
        result = [result]
    outputs = tuple(b.as_id(r) for r in result)
    return GraphProgram(arity, len(outputs), tuple(b.nodes), outputs)


class CallableProgram(SmoothProgram):
    """A program backed by a ring-generic Python function.

    Used where the computation is not a fixed primitive DAG (quadrature
    sums with pivot-free linear solves, twisted multiplications calling
    other programs).  The function must be pure and evaluate identically
    over floats and jets.
    """

    def __init__(self, fn, arity: int, codim: int, name: str = ""):
        self._fn = fn
        self.arity = arity
        self.codim = codim
        self.name = name

    def eval(self, xs):
        return self._fn(xs)


class CompositeProgram(SmoothProgram):
    def __init__(self, after: SmoothProgram, before: SmoothProgram):
        if before.codim != after.arity:
            raise ValueError("composition dimension mismatch")
        self.after = after
        self.before = before
        self.arity = before.arity
        self.codim = after.codim

    def eval(self, xs):
        return self.after.eval(self.before.eval(xs))


def compose(after: SmoothProgram, before: SmoothProgram) -> SmoothProgram:
    return CompositeProgram(after, before)


# -- tangent operators ----------------------------------------------------------

def _common_order(xs) -> int:
    order = 0
    for x in xs:
        if isinstance(x, JetScalar):
            order = max(order, x.order)
    for x in xs:
        if isinstance(x, JetScalar) and x.order != order:
            raise ValueError("jet inputs must share one order")
    return order


def _coeff_row(x, order) -> np.ndarray:
    if isinstance(x, JetScalar):
        return x.pad(order).coeffs
    row = np.zeros(1 << order)
    row[0] = float(x)
    return row


def _interleave(base_row, dir_row, order):
    new = np.empty(1 << (order + 1))
    new[0::2] = base_row
    new[1::2] = dir_row
    return JetScalar(order + 1, new)


def _split(y, order):
    if not isinstance(y, JetScalar):
        y = JetScalar.constant(float(y), order + 1)
    c = y.pad(order + 1).coeffs
    if order == 0:
        return float(c[0]), float(c[1])
    return JetScalar(order, c[0::2].copy()), JetScalar(order, c[1::2].copy())


class TangentProgram(SmoothProgram):
    """(f(u), Df(u) v) on doubled inputs, realized by jet evaluation.

    The fresh differentiation slot is inserted innermost, so nesting k
    wrappers evaluates the k-fold iterated tangent with the first-applied
    tangent in slot 1.
    """

    def __init__(self, inner: SmoothProgram):
        self.inner = inner
        self.arity = 2 * inner.arity
        self.codim = 2 * inner.codim

    def eval(self, xs):
        n = self.inner.arity
        order = _common_order(xs)
        if order + 1 > K_MAX:
            raise ValueError("tangent nesting exceeds the supported jet order")
        jets = [
            _interleave(_coeff_row(xs[i], order), _coeff_row(xs[n + i], order), order)
            for i in range(n)
        ]
        ys = self.inner.eval(jets)
        pairs = [_split(y, order) for y in ys]
        return [p[0] for p in pairs] + [p[1] for p in pairs]


class PartialTangentProgram(SmoothProgram):
    """Tangent in one factor of a product domain, the other factor frozen.

    which=1 gives input layout [x, dx, y]; which=2 gives [x, y, dy].
    Outputs are doubled: [f, df].
    """

    def __init__(self, inner: SmoothProgram, split: tuple[int, int], which: int):
        n1, n2 = split
        if n1 + n2 != inner.arity:
            raise ValueError("split does not match program arity")
        if which not in (1, 2):
            raise ValueError("which must be 1 or 2")
        self.inner = inner
        self.split = split
        self.which = which
        self.arity = inner.arity + (n1 if which == 1 else n2)
        self.codim = 2 * inner.codim

    def eval(self, xs):
        n1, n2 = self.split
        order = _common_order(xs)
        if order + 1 > K_MAX:
            raise ValueError("tangent nesting exceeds the supported jet order")
        zero = np.zeros(1 << order)
        if self.which == 1:
            x, dx, y = xs[:n1], xs[n1 : 2 * n1], xs[2 * n1 :]
            jets = [
                _interleave(_coeff_row(x[i], order), _coeff_row(dx[i], order), order)
                for i in range(n1)
            ]
            jets += [
                _interleave(_coeff_row(y[i], order), zero, order) for i in range(n2)
            ]
        else:
            x, y, dy = xs[:n1], xs[n1 : n1 + n2], xs[n1 + n2 :]
            jets = [
                _interleave(_coeff_row(x[i], order), zero, order) for i in range(n1)
            ]
            jets += [
                _interleave(_coeff_row(y[i], order), _coeff_row(dy[i], order), order)
                for i in range(n2)
            ]
        ys = self.inner.eval(jets)
        pairs = [_split(y, order) for y in ys]
        return [p[0] for p in pairs] + [p[1] for p in pairs]


def tangent(p: SmoothProgram) -> TangentProgram:
    return TangentProgram(p)


def partial_tangent(p: SmoothProgram, split: tuple[int, int], which: int):
    return PartialTangentProgram(p, split, which)


def fd_jacobian(p: SmoothProgram, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian, the derivative oracle independent of jets."""
    x = np.asarray(x, dtype=float)
    if h <= 0:
        raise ValueError("step must be positive")
    cols = []
    for j in range(p.arity):
        step = np.zeros_like(x)
        step[j] = h
        cols.append((p.eval_array(x + step) - p.eval_array(x - step)) / (2 * h))
    return np.stack(cols, axis=1)


# -- textual serialization -------------------------------------------------------

_SEXPR_BINOPS = {"+": "add", "-": "sub", "*": "mul", "/": "div"}
_SEXPR_NAMES = {v: k for k, v in _SEXPR_BINOPS.items()}


def _tokenize(text):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read(tokens, pos):
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while tokens[pos] != ")":
            item, pos = _read(tokens, pos)
            items.append(item)
        return items, pos + 1
    if tok == ")":
        raise ValueError("unexpected ')'")
    return tok, pos + 1


def parse_program(text: str) -> GraphProgram:
    """Parse '(lambda (x0 x1) expr...)' with +, -, *, /, pow and the
    analytic primitives; each trailing expr is one output component."""
    form, pos = _read(_tokenize(text), 0)
    if not isinstance(form, list) or len(form) < 3 or form[0] != "lambda":
        raise ValueError("expected (lambda (params...) expr...)")
    params = form[1]
    if not isinstance(params, list):
        raise ValueError("expected a parameter list")
    env = {name: i for i, name in enumerate(params)}
    if len(env) != len(params):
        raise ValueError("duplicate parameter names")

    def build(expr, vars_):
        if isinstance(expr, str):
            if expr in env:
                return vars_[env[expr]]
            return float(expr)
        head, args = expr[0], expr[1:]
        if head in _SEXPR_BINOPS:
            if head == "-" and len(args) == 1:
                return -build(args[0], vars_)
            if len(args) != 2:
                raise ValueError(f"'{head}' takes two arguments")
            a, b = (build(e, vars_) for e in args)
            return {"+": lambda: a + b, "-": lambda: a - b,
                    "*": lambda: a * b, "/": lambda: _div(a, b)}[head]()
        if head == "pow":
            return pow_int(build(args[0], vars_), int(args[1]))
        if head == "atan2":
            return atan2(build(args[0], vars_), build(args[1], vars_))
        if head in UNARY_PRIMITIVES:
            return _unary(head, build(args[0], vars_))
        raise ValueError(f"unknown operator {head!r}")

    return trace(lambda vs: [build(e, vs) for e in form[2:]], len(params))


def format_program(p: GraphProgram) -> str:
    """Inverse of parse_program (shared subexpressions are expanded)."""
    names = [f"x{i}" for i in range(p.arity)]

    def emit(i):
        node = p.nodes[i]
        kind = node[0]
        if kind == "input":
            return names[node[1]]
        if kind == "const":
            return repr(node[1])
        if kind in _SEXPR_NAMES:
            return f"({_SEXPR_NAMES[kind]} {emit(node[1])} {emit(node[2])})"
        if kind == "pow":
            return f"(pow {emit(node[1])} {node[2]})"
        if kind == "atan2":
            return f"(atan2 {emit(node[1])} {emit(node[2])})"
        return f"({kind} {emit(node[1])})"

    body = " ".join(emit(o) for o in p.outputs)
    return f"(lambda ({' '.join(names)}) {body})"
