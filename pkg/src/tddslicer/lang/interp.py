"""Deterministic interpreter with state-trajectory tracing.

A run produces the final state plus the trajectory: one (stmt_id, var,
value) entry per executed assignment, in execution order. Every statement
execution event costs one step against the budget; a While costs one step
per condition evaluation, so even an empty loop body exhausts the budget.

Integers are Python ints (arbitrary precision), so overflow cannot occur;
division/modulo by zero and negative exponents are runtime faults carried
in the result, not exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ..errors import EvaluationFault, UnboundVariableError
from . import ast

DEFAULT_STEP_BUDGET = 10000

#: pass for `stmt_ids`/`vars` in project() to keep everything
ALL = None

OK = "ok"
FAULT = "fault"
BUDGET_EXCEEDED = "budget_exceeded"


class TrajectoryEntry(NamedTuple):
    stmt_id: int
    var: str
    value: int


Trajectory = tuple[TrajectoryEntry, ...]


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run: final state and trajectory are partial when the
    status is not "ok" (they cover everything executed up to the fault or
    budget exhaustion)."""

    status: str
    final: dict[str, int]
    trajectory: Trajectory
    steps: int
    fault_stmt_id: int | None = None
    fault_reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == OK


def trunc_div(a: int, b: int) -> int:
    """Integer division truncating toward zero (C++ semantics)."""
    if b == 0:
        raise EvaluationFault("division by zero")
    q = a // b
    if q < 0 and q * b != a:
        q += 1
    return q


def trunc_mod(a: int, b: int) -> int:
    """Remainder satisfying a == trunc_div(a, b) * b + trunc_mod(a, b)."""
    if b == 0:
        raise EvaluationFault("modulo by zero")
    return a - trunc_div(a, b) * b


def eval_expr(expr: ast.Expr, state: dict[str, int]) -> int:
    if isinstance(expr, ast.IntLit):
        return expr.value
    if isinstance(expr, ast.Var):
        try:
            return state[expr.name]
        except KeyError:
            raise UnboundVariableError(expr.name) from None
    if isinstance(expr, ast.Neg):
        return -eval_expr(expr.operand, state)
    if isinstance(expr, ast.Arith):
        left = eval_expr(expr.left, state)
        right = eval_expr(expr.right, state)
        op = expr.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return trunc_div(left, right)
        if op == "%":
            return trunc_mod(left, right)
        if op == "^":
            if right < 0:
                raise EvaluationFault("negative exponent")
            return left**right
    raise TypeError(f"not an arithmetic expression: {expr!r}")


def eval_bool(pred: ast.BoolExpr, state: dict[str, int]) -> bool:
    """Short-circuit boolean evaluation; handles predicate-only nodes too.

    Bounded existentials enumerate their range in ascending order, with the
    bound variable shadowing any same-named variable in state.
    """
    if isinstance(pred, ast.BoolLit):
        return pred.value
    if isinstance(pred, ast.Cmp):
        left = eval_expr(pred.left, state)
        right = eval_expr(pred.right, state)
        op = pred.op
        if op == "==":
            return left == right
        if op == "!=":
            return left != right
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        if op == ">=":
            return left >= right
    if isinstance(pred, ast.Not):
        return not eval_bool(pred.operand, state)
    if isinstance(pred, ast.And):
        return eval_bool(pred.left, state) and eval_bool(pred.right, state)
    if isinstance(pred, ast.Or):
        return eval_bool(pred.left, state) or eval_bool(pred.right, state)
    if isinstance(pred, ast.Exists):
        shadowed = pred.var in state
        saved = state.get(pred.var)
        try:
            for value in range(pred.lo, pred.hi + 1):
                state[pred.var] = value
                if eval_bool(pred.body, state):
                    return True
            return False
        finally:
            if shadowed:
                state[pred.var] = saved
            else:
                del state[pred.var]
    raise TypeError(f"not a boolean expression: {pred!r}")


class _Stop(Exception):
    def __init__(self, status: str, stmt_id: int | None = None, reason: str | None = None):
        self.status = status
        self.stmt_id = stmt_id
        self.reason = reason


@dataclass
class _Execution:
    state: dict[str, int]
    budget: int
    steps: int = 0
    trajectory: list[TrajectoryEntry] = field(default_factory=list)

    def tick(self, stmt_id: int):
        self.steps += 1
        if self.steps > self.budget:
            raise _Stop(BUDGET_EXCEEDED, stmt_id, "step budget exceeded")

    def run_block(self, block: ast.Block):
        for stmt in block.stmts:
            self.run_stmt(stmt)

    def run_stmt(self, stmt: ast.Stmt):
        self.tick(stmt.stmt_id)
        if isinstance(stmt, ast.Assign):
            value = self.eval_guarded(stmt.expr, stmt.stmt_id, arith=True)
            self.state[stmt.target] = value
            self.trajectory.append(TrajectoryEntry(stmt.stmt_id, stmt.target, value))
        elif isinstance(stmt, ast.Skip):
            pass
        elif isinstance(stmt, ast.If):
            if self.eval_guarded(stmt.cond, stmt.stmt_id):
                self.run_block(stmt.then)
            else:
                self.run_block(stmt.orelse)
        elif isinstance(stmt, ast.While):
            while self.eval_guarded(stmt.cond, stmt.stmt_id):
                self.run_block(stmt.body)
                self.tick(stmt.stmt_id)  # each re-test of the condition is a step
        else:
            raise TypeError(f"not a statement: {stmt!r}")

    def eval_guarded(self, node, stmt_id: int, arith: bool = False):
        try:
            return eval_expr(node, self.state) if arith else eval_bool(node, self.state)
        except EvaluationFault as fault:
            raise _Stop(FAULT, stmt_id, fault.reason) from None


def run(
    program: ast.Program,
    inputs: dict[str, int],
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> RunResult:
    """Execute program with the given in-parameter binding.

    inputs must bind exactly the in-parameters; out-parameters and locals
    start at 0. The result is deterministic and, on success, identical for
    any budget at least as large.
    """
    expected = set(program.in_params)
    if set(inputs) != expected:
        missing = sorted(expected - set(inputs))
        extra = sorted(set(inputs) - expected)
        parts = []
        if missing:
            parts.append(f"missing {missing}")
        if extra:
            parts.append(f"unexpected {extra}")
        raise ValueError(f"inputs must bind exactly the in-parameters: {', '.join(parts)}")
    if step_budget < 1:
        raise ValueError("step_budget must be positive")

    state = dict(inputs)
    for name in program.out_params:
        state[name] = 0
    for name in program.locals:
        state[name] = 0

    execution = _Execution(state=state, budget=step_budget)
    try:
        execution.run_block(program.body)
    except _Stop as stop:
        return RunResult(
            status=stop.status,
            final=dict(execution.state),
            trajectory=tuple(execution.trajectory),
            steps=execution.steps,
            fault_stmt_id=stop.stmt_id,
            fault_reason=stop.reason,
        )
    return RunResult(
        status=OK,
        final=dict(execution.state),
        trajectory=tuple(execution.trajectory),
        steps=execution.steps,
    )


def project(
    trajectory: Trajectory,
    vars: set[str] | None = ALL,
    stmt_ids: set[int] | None = ALL,
) -> Trajectory:
    """Keep the entries whose variable and statement id are selected.

    Passing ALL (None) for either filter keeps that dimension unrestricted;
    order is preserved, so the result is a subsequence of the input.
    """
    return tuple(
        entry
        for entry in trajectory
        if (vars is ALL or entry.var in vars)
        and (stmt_ids is ALL or entry.stmt_id in stmt_ids)
    )


def replay_trajectory(
    program: ast.Program, inputs: dict[str, int], trajectory: Trajectory
) -> dict[str, int]:
    """Fold a trajectory's assignments over the initial state.

    For an "ok" run this reproduces the final state exactly; used as the
    soundness oracle for trajectories.
    """
    state = dict(inputs)
    for name in program.out_params:
        state[name] = 0
    for name in program.locals:
        state[name] = 0
    for entry in trajectory:
        state[entry.var] = entry.value
    return state
