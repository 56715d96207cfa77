"""Exact jet-space calculus for inverse problems on conservation laws."""

from .context import JetContext, MultiIndex
from .expr import ContextMismatch, Expression, arith, compose, const, func, is_zero, jet, kernel, order, substitute, var
from .syntax import ParseError, UndeclaredSymbol, format_expression, parse, parse_context

__all__ = [
    "JetContext", "MultiIndex", "Expression", "ContextMismatch", "ParseError", "UndeclaredSymbol",
    "arith", "compose", "const", "func", "is_zero", "jet", "kernel", "order", "substitute", "var",
    "format_expression", "parse", "parse_context",
]
