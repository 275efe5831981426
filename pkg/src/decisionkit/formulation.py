"""Problem formulations: alternative spaces, attributes and statements.

A formulation bundles three things: the alternative space (a product of
variable domains, optionally constrained or enumerated explicitly), the
attributes evaluating alternatives, and the requested partitioning
statement (ranking / rating / clustering / assignment).

Attribute evaluators are either Python callables or strings in a small
arithmetic expression grammar over variable names: numbers, + - * / // %,
unary minus, parentheses, comparisons (yielding 0/1) and the functions
min / max / abs / sum_vars (sum of all variable values).
"""

from __future__ import annotations

import ast
import itertools
import operator
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from .errors import (EvaluationFailure, MissingNorms, NoDecisionProblem,
                     NoDecomposition, NotAggregable, NotEnumerable)

#: product-space size up to which enumerate_alternatives reports an exact
#: total for constrained spaces; streaming continues beyond it.
ENUMERATION_CAP = 2 ** 21

UNCOUNTED = "uncounted"

NOMINAL = "nominal"
ORDINAL = "ordinal"
INTERVAL = "interval"
RATIO = "ratio"

RANKING = "ranking"
RATING = "rating"
CLUSTERING = "clustering"
ASSIGNMENT = "assignment"


@dataclass(frozen=True)
class Variable:
    """A decision variable with a finite or interval domain.

    ``domain`` is one of:
      ("binary",), ("int", lo, hi), ("real", lo, hi), ("enum", (labels...)).
    """

    name: str
    domain: tuple

    def __post_init__(self):
        kind = self.domain[0]
        if kind == "int":
            _, lo, hi = self.domain
            if lo > hi:
                raise ValueError(f"empty integer range for {self.name}")
        elif kind == "real":
            _, lo, hi = self.domain
            if lo > hi:
                raise ValueError(f"empty interval for {self.name}")
        elif kind == "enum":
            labels = self.domain[1]
            if not labels or len(set(labels)) != len(labels):
                raise ValueError(f"bad enumerated domain for {self.name}")
        elif kind != "binary":
            raise ValueError(f"unknown domain kind {kind!r}")

    @property
    def finite(self) -> bool:
        return self.domain[0] != "real"

    def values(self) -> tuple:
        kind = self.domain[0]
        if kind == "binary":
            return (0, 1)
        if kind == "int":
            return tuple(range(self.domain[1], self.domain[2] + 1))
        if kind == "enum":
            return tuple(self.domain[1])
        raise NotEnumerable(f"variable {self.name} has a real domain")

    def contains(self, value) -> bool:
        kind = self.domain[0]
        if kind == "binary":
            return value in (0, 1)
        if kind == "int":
            return isinstance(value, int) and self.domain[1] <= value <= self.domain[2]
        if kind == "real":
            return self.domain[1] <= value <= self.domain[2]
        return value in self.domain[1]


@dataclass(frozen=True)
class Alternative:
    """One point of the variables space; hashable and order-stable."""

    names: tuple[str, ...]
    values: tuple

    def __getitem__(self, name: str):
        return self.values[self.names.index(name)]

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values))

    @property
    def key(self) -> str:
        return ",".join(f"{n}={v}" for n, v in zip(self.names, self.values))


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coeff[v] * value[v]) OP rhs with OP in <=, >=, ==."""

    coeffs: tuple[tuple[str, float], ...]
    op: str
    rhs: float

    def holds(self, alt: Alternative) -> bool:
        total = sum(c * alt[name] for name, c in self.coeffs)
        if self.op == "<=":
            return total <= self.rhs
        if self.op == ">=":
            return total >= self.rhs
        if self.op == "==":
            return total == self.rhs
        raise ValueError(f"unknown operator {self.op!r}")


@dataclass(frozen=True)
class NamedPredicate:
    """Extension hook: feasibility beyond linear constraints."""

    name: str
    test: Callable[[Alternative], bool]

    def holds(self, alt: Alternative) -> bool:
        return self.test(alt)


@dataclass(frozen=True)
class AlternativeSet:
    variables: tuple[Variable, ...]
    feasibility: tuple = ()
    explicit_members: tuple[Alternative, ...] | None = None

    def feasible(self, alt: Alternative) -> bool:
        return all(p.holds(alt) for p in self.feasibility)

    def product_size(self) -> int | None:
        size = 1
        for v in self.variables:
            if not v.finite:
                return None
            size *= len(v.values())
        return size


@dataclass(frozen=True)
class Decomposition:
    """Per-variable sub-evaluation folded by an aggregation tag."""

    per_variable: tuple[tuple[str, tuple[tuple[object, object], ...]], ...]
    combine: str  # sum | min | max | custom name

    def sub_value(self, var: str, value):
        for name, table in self.per_variable:
            if name == var:
                for v, out in table:
                    if v == value:
                        return out
                raise EvaluationFailure(
                    f"no sub-evaluation for {var}={value!r}")
        raise EvaluationFailure(f"no sub-evaluator for variable {var}")


@dataclass(frozen=True)
class Attribute:
    name: str
    scale: str = ORDINAL
    codomain: tuple = ()
    origin: str = "value"  # value | opinion | scenario
    separable: bool = True
    evaluator: object = None  # str expression | callable | None
    decomposition: Decomposition | None = None
    higher_is_better: bool = True


@dataclass(frozen=True)
class ProblemStatement:
    kind: str
    class_count: int | None = None
    class_cardinalities: tuple[int, ...] | None = None
    norms: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.class_count is not None and self.class_count < 2:
            raise ValueError("class_count must be at least 2")


@dataclass(frozen=True)
class ProblemFormulation:
    alternatives: AlternativeSet
    attributes: tuple[Attribute, ...]
    statement: ProblemStatement

    def attribute(self, name: str) -> Attribute:
        for a in self.attributes:
            if a.name == name:
                return a
        raise KeyError(name)


@dataclass(frozen=True)
class Diagnostics:
    ok: bool
    flags: tuple[str, ...] = ()
    problems: tuple[str, ...] = ()


def classify_problem_statement(ordered_classes: bool, comparison: str) -> str:
    if comparison not in ("relative", "absolute"):
        raise ValueError(f"unknown comparison {comparison!r}")
    if ordered_classes:
        return RANKING if comparison == "relative" else RATING
    return CLUSTERING if comparison == "relative" else ASSIGNMENT


def validate_formulation(g: ProblemFormulation) -> Diagnostics:
    """A formulation is workable iff it has a separable attribute and the
    statement kind has what it needs (norms for absolute comparisons)."""
    if not any(a.separable for a in g.attributes):
        raise NoDecisionProblem(
            "no separable attribute: nothing discriminates alternatives")
    if g.statement.kind in (RATING, ASSIGNMENT) and not g.statement.norms:
        raise MissingNorms(f"{g.statement.kind} requires a norm set")
    flags = []
    if g.statement.kind == RANKING and g.statement.class_count == 2:
        flags.append("choice")
    problems = []
    names = [a.name for a in g.attributes]
    if len(set(names)) != len(names):
        problems.append("duplicate attribute names")
    return Diagnostics(ok=not problems, flags=tuple(flags),
                       problems=tuple(problems))


def enumerate_alternatives(a: AlternativeSet, limit: int | None = None,
                           cap: int = ENUMERATION_CAP):
    """Feasible alternatives in lexicographic variable order.

    Returns (iterator, total) where total is the exact feasible count when
    the product space fits under the cap, or "uncounted" beyond it.
    """
    if a.explicit_members is not None:
        members = [m for m in a.explicit_members if a.feasible(m)]
        it = iter(members if limit is None else members[:limit])
        return it, len(members)
    size = a.product_size()
    if size is None:
        raise NotEnumerable("real-valued variable without explicit members")
    names = tuple(v.name for v in a.variables)

    def stream():
        count = 0
        for combo in itertools.product(*(v.values() for v in a.variables)):
            alt = Alternative(names, combo)
            if a.feasible(alt):
                yield alt
                count += 1
                if limit is not None and count >= limit:
                    return

    if size > cap:
        return stream(), UNCOUNTED
    if not a.feasibility:
        total = size
    else:
        total = sum(1 for combo in
                    itertools.product(*(v.values() for v in a.variables))
                    if a.feasible(Alternative(names, combo)))
    return stream(), total


_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod, ast.Pow: operator.pow,
}
_CMPOPS = {
    ast.Lt: operator.lt, ast.LtE: operator.le, ast.Gt: operator.gt,
    ast.GtE: operator.ge, ast.Eq: operator.eq, ast.NotEq: operator.ne,
}


def eval_expression(expr: str, env: Mapping[str, object]):
    """Evaluate the restricted arithmetic grammar against variable values."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, (int, float)):
                return node.value
            raise EvaluationFailure(f"bad literal {node.value!r}")
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            raise EvaluationFailure(f"unknown name {node.id!r}")
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Compare) and len(node.ops) == 1:
            op = _CMPOPS.get(type(node.ops[0]))
            if op is None:
                raise EvaluationFailure("unsupported comparison")
            return int(op(ev(node.left), ev(node.comparators[0])))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            args = [ev(a) for a in node.args]
            if node.func.id == "min":
                return min(*args)
            if node.func.id == "max":
                return max(*args)
            if node.func.id == "abs":
                return abs(args[0])
            if node.func.id == "sum_vars" and not args:
                return sum(v for v in env.values()
                           if isinstance(v, (int, float)))
            raise EvaluationFailure(f"unknown function {node.func.id!r}")
        raise EvaluationFailure(f"unsupported expression node {node!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise EvaluationFailure(f"bad expression {expr!r}: {exc}") from exc
    return ev(tree)


def evaluate_one(alt: Alternative, attr: Attribute):
    if attr.decomposition is not None and attr.evaluator is None:
        return evaluate_decomposed(alt, attr)
    ev = attr.evaluator
    if ev is None:
        raise EvaluationFailure(f"attribute {attr.name} has no evaluator")
    if callable(ev):
        try:
            return ev(alt)
        except Exception as exc:
            raise EvaluationFailure(
                f"evaluator of {attr.name} failed on {alt.key}: {exc}") from exc
    return eval_expression(str(ev), alt.as_dict())


def evaluate(alt: Alternative, attributes: Iterable[Attribute]) -> tuple:
    """Performance vector of alt in attribute order."""
    return tuple(evaluate_one(alt, a) for a in attributes)


def evaluate_decomposed(alt: Alternative, attr: Attribute):
    """Fold per-variable sub-evaluations with the declared aggregation."""
    dec = attr.decomposition
    if dec is None:
        raise NoDecomposition(f"attribute {attr.name} is not decomposed")
    if attr.scale == NOMINAL and dec.combine in ("sum", "min", "max"):
        raise NotAggregable(
            f"nominal attribute {attr.name} admits no {dec.combine} fold")
    parts = [dec.sub_value(name, alt[name])
             for name, _ in dec.per_variable]
    if dec.combine == "sum":
        return sum(parts)
    if dec.combine == "min":
        return min(parts) if parts else 0
    if dec.combine == "max":
        return max(parts) if parts else 0
    raise NotAggregable(f"aggregation {dec.combine!r} is not built in")
