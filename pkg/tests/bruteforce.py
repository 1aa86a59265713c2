"""Independent brute-force re-implementations used as test oracles.

Nothing here shares execution logic with the package: expression
evaluation, statement execution, and triple checking are written from
scratch against the documented semantics (truncating division, zero
initialization, lexicographic domain enumeration). The package's AST
dataclasses are reused as plain data.
"""

from __future__ import annotations

import itertools

from tddslicer.lang import ast


def bf_eval(node, env: dict[str, int]) -> int:
    if isinstance(node, ast.IntLit):
        return node.value
    if isinstance(node, ast.Var):
        return env[node.name]
    if isinstance(node, ast.Neg):
        return -bf_eval(node.operand, env)
    if isinstance(node, ast.Arith):
        a, b = bf_eval(node.left, env), bf_eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "^":
            if b < 0:
                raise ZeroDivisionError("negative exponent")
            return a**b
        if node.op in ("/", "%"):
            if b == 0:
                raise ZeroDivisionError(node.op)
            quotient = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                quotient = -quotient
            return quotient if node.op == "/" else a - quotient * b
    raise AssertionError(f"unexpected expr {node!r}")


def bf_holds(pred, env: dict[str, int]) -> bool:
    if isinstance(pred, ast.BoolLit):
        return pred.value
    if isinstance(pred, ast.Cmp):
        a, b = bf_eval(pred.left, env), bf_eval(pred.right, env)
        return {
            "==": a == b,
            "!=": a != b,
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[pred.op]
    if isinstance(pred, ast.Not):
        return not bf_holds(pred.operand, env)
    if isinstance(pred, ast.And):
        return bf_holds(pred.left, env) and bf_holds(pred.right, env)
    if isinstance(pred, ast.Or):
        return bf_holds(pred.left, env) or bf_holds(pred.right, env)
    if isinstance(pred, ast.Exists):
        for value in range(pred.lo, pred.hi + 1):
            inner = dict(env)
            inner[pred.var] = value
            if bf_holds(pred.body, inner):
                return True
        return False
    raise AssertionError(f"unexpected predicate {pred!r}")


def bf_exec(block: ast.Block, env: dict[str, int]) -> None:
    """Execute a loop-free block in place (the criterion-4 programs)."""
    for stmt in block.stmts:
        if isinstance(stmt, ast.Assign):
            env[stmt.target] = bf_eval(stmt.expr, env)
        elif isinstance(stmt, ast.Skip):
            pass
        elif isinstance(stmt, ast.If):
            if bf_holds(stmt.cond, env):
                bf_exec(stmt.then, env)
            else:
                bf_exec(stmt.orelse, env)
        elif isinstance(stmt, ast.While):
            guard = 0
            while bf_holds(stmt.cond, env):
                bf_exec(stmt.body, env)
                guard += 1
                if guard > 100000:
                    raise AssertionError("brute-force oracle only handles terminating loops")
        else:
            raise AssertionError(f"unexpected statement {stmt!r}")


def bf_check(program: ast.Program, pre, post, ranges: dict[str, tuple[int, int]]):
    """Decide {pre} program {post} by exhaustive execution.

    Returns (verdict, witness_inputs) with verdicts "verified",
    "counterexample", "vacuous"; enumeration is lexicographic by variable
    name with values ascending, matching the documented order.
    """
    names = sorted(ranges)
    spans = [range(ranges[n][0], ranges[n][1] + 1) for n in names]
    satisfied = 0
    for values in itertools.product(*spans):
        inputs = dict(zip(names, values))
        if not bf_holds(pre, dict(inputs)):
            continue
        satisfied += 1
        env = dict(inputs)
        for out in program.out_params:
            env[out] = 0
        for local in program.locals:
            env[local] = 0
        bf_exec(program.body, env)
        if not bf_holds(post, env):
            return "counterexample", inputs
    if satisfied == 0:
        return "vacuous", None
    return "verified", None
