"""Canonical text rendering for programs and predicates.

parse(pretty_print(p)) is structurally equal to p: parenthesization is
minimal except that it always preserves the AST shape (right-nested chains
of a left-associative operator keep their parens) and that `&&` groups under
`||` stay parenthesized for readability.
"""

from __future__ import annotations

from . import ast

INDENT = "    "

# arithmetic precedence, smaller binds looser
_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5

_ARITH_PREC = {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "%": _MUL, "^": _POW}


def format_expr(expr: ast.Expr) -> str:
    return _expr(expr)


def _expr(expr: ast.Expr) -> str:
    if isinstance(expr, ast.IntLit):
        return str(expr.value)
    if isinstance(expr, ast.Var):
        return expr.name
    if isinstance(expr, ast.Neg):
        inner = _expr(expr.operand)
        # -(5) keeps Neg of a literal distinct from the literal -5
        if _expr_prec(expr.operand) < _UNARY or (
            isinstance(expr.operand, ast.IntLit) and expr.operand.value >= 0
        ):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(expr, ast.Arith):
        prec = _ARITH_PREC[expr.op]
        left, right = _expr(expr.left), _expr(expr.right)
        if expr.op == "^":
            # right-associative: parenthesize a same-level left child
            if _expr_prec(expr.left) <= prec:
                left = f"({left})"
            if _expr_prec(expr.right) < prec:
                right = f"({right})"
        else:
            if _expr_prec(expr.left) < prec:
                left = f"({left})"
            if _expr_prec(expr.right) <= prec:
                right = f"({right})"
        return f"{left} {expr.op} {right}"
    raise TypeError(f"not an arithmetic expression: {expr!r}")


def _expr_prec(expr: ast.Expr) -> int:
    if isinstance(expr, ast.IntLit):
        # negative literals render with a leading minus, so they bind like
        # a unary minus for parenthesization purposes
        return _UNARY if expr.value < 0 else _ATOM
    if isinstance(expr, ast.Var):
        return _ATOM
    if isinstance(expr, ast.Neg):
        return _UNARY
    return _ARITH_PREC[expr.op]


def format_predicate(pred: ast.BoolExpr) -> str:
    return _pred(pred)


def _pred(pred: ast.BoolExpr) -> str:
    if isinstance(pred, ast.BoolLit):
        return "TRUE" if pred.value else "FALSE"
    if isinstance(pred, ast.Cmp):
        return f"{_expr(pred.left)} {pred.op} {_expr(pred.right)}"
    if isinstance(pred, ast.Not):
        inner = pred.operand
        if isinstance(inner, ast.BoolLit):
            return f"!{_pred(inner)}"
        return f"!({_pred(inner)})"
    if isinstance(pred, ast.Or):
        return f"{_child(pred.left, 'or', right=False)} || {_child(pred.right, 'or', right=True)}"
    if isinstance(pred, ast.And):
        return f"{_child(pred.left, 'and', right=False)} && {_child(pred.right, 'and', right=True)}"
    if isinstance(pred, ast.Exists):
        return f"exists {pred.var} in {pred.lo}..{pred.hi} : {_pred(pred.body)}"
    raise TypeError(f"not a predicate node: {pred!r}")


def _child(child: ast.BoolExpr, parent: str, right: bool) -> str:
    """Render a child of && or ||, parenthesizing where the reparse would
    otherwise change shape (plus the readability parens on && under ||)."""
    text = _pred(child)
    if isinstance(child, ast.Exists):
        return f"({text})"  # quantifier scope is maximal; delimit it
    if parent == "or":
        wrap = isinstance(child, ast.And) or (right and isinstance(child, ast.Or))
    else:
        wrap = isinstance(child, ast.Or) or (right and isinstance(child, ast.And))
    return f"({text})" if wrap else text


def pretty_print(program: ast.Program) -> str:
    """Canonical program text: locals in one sorted vardecl, one statement
    per line, empty blocks rendered as `{ }`."""
    params = ", ".join(f"{p.mode} {p.name}" for p in program.params)
    header = f"proc {program.name}({params})"
    lines = [f"{header} {{"]
    if program.locals:
        lines.append(f"{INDENT}var {', '.join(sorted(program.locals))};")
    if not program.locals and not program.body.stmts:
        return f"{header} {{ }}\n"
    lines.extend(_stmt_lines(program.body, 1))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _stmt_lines(block: ast.Block, depth: int) -> list[str]:
    pad = INDENT * depth
    lines: list[str] = []
    for stmt in block.stmts:
        if isinstance(stmt, ast.Assign):
            lines.append(f"{pad}{stmt.target} := {_expr(stmt.expr)};")
        elif isinstance(stmt, ast.Skip):
            lines.append(f"{pad}skip;")
        elif isinstance(stmt, ast.If):
            lines.append(f"{pad}if ({_pred(stmt.cond)}) {{")
            lines.extend(_stmt_lines(stmt.then, depth + 1))
            if stmt.orelse.stmts:
                lines.append(f"{pad}}} else {{")
                lines.extend(_stmt_lines(stmt.orelse, depth + 1))
            lines.append(f"{pad}}}")
        elif isinstance(stmt, ast.While):
            lines.append(f"{pad}while ({_pred(stmt.cond)}) {{")
            lines.extend(_stmt_lines(stmt.body, depth + 1))
            lines.append(f"{pad}}}")
        else:
            raise TypeError(f"not a statement: {stmt!r}")
    return lines
