"""Expression DSL for field data.

A small arithmetic language over chart coordinates: literals, the symbols
``x1..x4, t, rho, y1..y3``, the binary operators ``+ - * / ^``, unary minus,
and the functions ``sin cos exp log sqrt atan2``.  The grammar (EBNF, also in
docs/grammar.md):

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , { "^" , signed } ;          (* left-associative *)
    signed  = [ "-" ] , atom ;
    atom    = NUMBER | SYMBOL | FUNC , "(" , expr , { "," , expr } , ")"
            | "(" , expr , ")" ;

Exponents must be constant (integer, or real with positive base); this keeps
evaluation single-valued.  Expressions are immutable trees and support the
Python arithmetic operators so metric builders can assemble entries directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SYMBOLS = ("x1", "x2", "x3", "x4", "t", "rho", "y1", "y2", "y3")
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "atan2")
_ARITY = {"sin": 1, "cos": 1, "exp": 1, "log": 1, "sqrt": 1, "atan2": 2}


class ExprError(ValueError):
    pass


class SyntaxErrorAt(ExprError):
    """Malformed expression text; `offset` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(SyntaxErrorAt):
    pass


class DomainError(ExprError):
    """Evaluation hit an analytic singularity (log of nonpositive, zero division, ...)."""


class Expr:
    """Base class; all nodes are frozen dataclasses below."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return pow_(self, as_expr(other))

    def __neg__(self):
        return neg(self)

    def __str__(self):
        return to_str(self)


@dataclass(frozen=True, slots=True)
class Num(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: Expr  # constant subtree, enforced by pow_()


@dataclass(frozen=True, slots=True)
class Call(Expr):
    func: str
    args: tuple[Expr, ...]


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return Num(float(v))
    raise TypeError(f"cannot coerce {type(v).__name__} to Expr")


def const_value(e: Expr) -> float | None:
    """Value of a constant subtree, or None if it mentions a symbol."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Neg):
        v = const_value(e.arg)
        return None if v is None else -v
    if isinstance(e, (Add, Sub, Mul, Div, Pow)):
        a = const_value(e.left if not isinstance(e, Pow) else e.base)
        b = const_value(e.right if not isinstance(e, Pow) else e.exponent)
        if a is None or b is None:
            return None
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return a - b
        if isinstance(e, Mul):
            return a * b
        if isinstance(e, Div):
            return a / b if b != 0 else None
        return _pow_value(a, b)
    if isinstance(e, Call):
        vals = [const_value(a) for a in e.args]
        if any(v is None for v in vals):
            return None
        return _call_value(e.func, vals)
    return None


# Smart constructors.  They fold literal zeros and ones so that machine-built
# trees (symbolic derivatives, metric entries) stay small; they do not reorder
# or otherwise rewrite user input.

def _is_num(e: Expr, v: float) -> bool:
    return isinstance(e, Num) and e.value == v


def add(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_num(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    if _is_num(a, 0.0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0) and not _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(b, 1.0):
        return a
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def pow_(base: Expr, exponent: Expr) -> Expr:
    if const_value(exponent) is None:
        raise ExprError("exponent must be a constant expression")
    c = const_value(exponent)
    if c == 1.0:
        return base
    if c == 0.0:
        return Num(1.0)
    return Pow(base, exponent)


def call(func: str, *args: Expr) -> Expr:
    if func not in FUNCTIONS:
        raise ExprError(f"unknown function {func!r}")
    if len(args) != _ARITY[func]:
        raise ExprError(f"{func} takes {_ARITY[func]} argument(s), got {len(args)}")
    return Call(func, tuple(args))


def sin(a) -> Expr:
    return call("sin", as_expr(a))


def cos(a) -> Expr:
    return call("cos", as_expr(a))


def exp(a) -> Expr:
    return call("exp", as_expr(a))


def log(a) -> Expr:
    return call("log", as_expr(a))


def sqrt(a) -> Expr:
    return call("sqrt", as_expr(a))


def atan2(a, b) -> Expr:
    return call("atan2", as_expr(a), as_expr(b))


def sym(name: str) -> Expr:
    if name not in SYMBOLS:
        raise ExprError(f"unknown symbol {name!r}")
    return Sym(name)


# ----------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# ----------------------------------------------------------------------------

_OPS = set("+-*/^(),")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            toks.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lit = text[i:j]
            try:
                float(lit)
            except ValueError:
                raise SyntaxErrorAt(f"bad number literal {lit!r}", i)
            toks.append(("num", lit, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], i))
            i = j
            continue
        raise SyntaxErrorAt(f"unexpected character {c!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, off = self.peek()
        if kind != "op" or val != op:
            raise SyntaxErrorAt(f"expected {op!r}", off)
        return self.take()

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise SyntaxErrorAt(f"unexpected trailing input {val!r}", off)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = add(e, rhs) if val == "+" else sub(e, rhs)
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                e = mul(e, rhs) if val == "*" else div(e, rhs)
            else:
                return e

    def unary(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        while True:
            kind, val, off = self.peek()
            if kind == "op" and val == "^":
                self.take()
                rhs = self.signed_atom()
                if const_value(rhs) is None:
                    raise SyntaxErrorAt("exponent must be constant", off)
                e = pow_(e, rhs)
            else:
                return e

    def signed_atom(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return neg(self.signed_atom())
        return self.atom()

    def atom(self) -> Expr:
        kind, val, off = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "ident":
            if val in FUNCTIONS:
                self.expect_op("(")
                args = [self.expr()]
                while True:
                    k, v, o = self.peek()
                    if k == "op" and v == ",":
                        self.take()
                        args.append(self.expr())
                    else:
                        break
                self.expect_op(")")
                if len(args) != _ARITY[val]:
                    raise SyntaxErrorAt(
                        f"{val} takes {_ARITY[val]} argument(s), got {len(args)}", off
                    )
                return Call(val, tuple(args))
            if val in SYMBOLS:
                return Sym(val)
            raise UnknownIdentifier(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise SyntaxErrorAt("expected a value", off)


def parse_expr(text: str) -> Expr:
    """Parse `text` into an Expr; raises SyntaxErrorAt / UnknownIdentifier."""
    if not text or not text.strip():
        raise SyntaxErrorAt("empty expression", 0)
    return _Parser(text).parse()


# ----------------------------------------------------------------------------
# Canonical printer (parse(to_str(e)) reproduces e node for node)
# ----------------------------------------------------------------------------

_PREC = {"add": 1, "mul": 2, "neg": 3, "pow": 4, "atom": 5}


def _num_str(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _print(e: Expr) -> tuple[str, int]:
    if isinstance(e, Num):
        if e.value < 0:
            return f"-{_num_str(-e.value)}", _PREC["neg"]
        return _num_str(e.value), _PREC["atom"]
    if isinstance(e, Sym):
        return e.name, _PREC["atom"]
    if isinstance(e, Call):
        inner = ", ".join(_print(a)[0] for a in e.args)
        return f"{e.func}({inner})", _PREC["atom"]
    if isinstance(e, Neg):
        s, p = _print(e.arg)
        if p < _PREC["neg"]:
            s = f"({s})"
        return f"-{s}", _PREC["neg"]
    if isinstance(e, (Add, Sub)):
        ls, lp = _print(e.left)
        rs, rp = _print(e.right)
        if lp < _PREC["add"]:
            ls = f"({ls})"
        # left-assoc: a right operand at the same level needs parentheses
        if rp <= _PREC["add"]:
            rs = f"({rs})"
        op = "+" if isinstance(e, Add) else "-"
        return f"{ls} {op} {rs}", _PREC["add"]
    if isinstance(e, (Mul, Div)):
        ls, lp = _print(e.left)
        rs, rp = _print(e.right)
        if lp < _PREC["mul"]:
            ls = f"({ls})"
        if rp <= _PREC["mul"]:
            rs = f"({rs})"
        op = "*" if isinstance(e, Mul) else "/"
        return f"{ls}{op}{rs}", _PREC["mul"]
    if isinstance(e, Pow):
        bs, bp = _print(e.base)
        es, ep = _print(e.exponent)
        if bp < _PREC["atom"]:  # power is left-assoc, base must be atomic or parenthesized
            bs = f"({bs})"
        if ep < _PREC["neg"]:
            es = f"({es})"
        return f"{bs}^{es}", _PREC["pow"]
    raise TypeError(f"not an Expr node: {e!r}")


def to_str(e: Expr) -> str:
    return _print(e)[0]


# ----------------------------------------------------------------------------
# Plain evaluation, substitution, symbolic derivative
# ----------------------------------------------------------------------------

def _pow_value(base: float, expo: float) -> float:
    if expo == int(expo):
        k = int(expo)
        if base == 0.0 and k < 0:
            raise DomainError("0 raised to a negative power")
        return base ** k
    if base <= 0.0:
        raise DomainError("real exponent needs a positive base")
    return base ** expo


def _call_value(func: str, vals) -> float:
    if func == "sin":
        return math.sin(vals[0])
    if func == "cos":
        return math.cos(vals[0])
    if func == "exp":
        return math.exp(vals[0])
    if func == "log":
        if vals[0] <= 0.0:
            raise DomainError("log of a nonpositive value")
        return math.log(vals[0])
    if func == "sqrt":
        if vals[0] < 0.0:
            raise DomainError("sqrt of a negative value")
        if vals[0] == 0.0:
            raise DomainError("sqrt at zero is not differentiable")
        return math.sqrt(vals[0])
    if func == "atan2":
        if vals[0] == 0.0 and vals[1] == 0.0:
            raise DomainError("atan2(0, 0)")
        return math.atan2(vals[0], vals[1])
    raise ExprError(f"unknown function {func!r}")


def eval_value(e: Expr, env: dict[str, float]) -> float:
    """Evaluate the expression at a symbol assignment (no derivatives)."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Sym):
        try:
            return env[e.name]
        except KeyError:
            raise ExprError(f"chart does not supply symbol {e.name!r}") from None
    if isinstance(e, Neg):
        return -eval_value(e.arg, env)
    if isinstance(e, Add):
        return eval_value(e.left, env) + eval_value(e.right, env)
    if isinstance(e, Sub):
        return eval_value(e.left, env) - eval_value(e.right, env)
    if isinstance(e, Mul):
        return eval_value(e.left, env) * eval_value(e.right, env)
    if isinstance(e, Div):
        d = eval_value(e.right, env)
        if d == 0.0:
            raise DomainError("division by zero")
        return eval_value(e.left, env) / d
    if isinstance(e, Pow):
        return _pow_value(eval_value(e.base, env), const_value(e.exponent))
    if isinstance(e, Call):
        return _call_value(e.func, [eval_value(a, env) for a in e.args])
    raise TypeError(f"not an Expr node: {e!r}")


def subs(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Substitute expressions for symbols (builds composite fields, e.g. x -> x/|x|)."""
    if isinstance(e, Num):
        return e
    if isinstance(e, Sym):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return neg(subs(e.arg, mapping))
    if isinstance(e, Add):
        return add(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Sub):
        return sub(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Mul):
        return mul(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Div):
        return div(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Pow):
        return pow_(subs(e.base, mapping), e.exponent)
    if isinstance(e, Call):
        return Call(e.func, tuple(subs(a, mapping) for a in e.args))
    raise TypeError(f"not an Expr node: {e!r}")


def diff(e: Expr, name: str) -> Expr:
    """Symbolic partial derivative; used by metric builders to assemble entries."""
    if isinstance(e, Num):
        return Num(0.0)
    if isinstance(e, Sym):
        return Num(1.0 if e.name == name else 0.0)
    if isinstance(e, Neg):
        return neg(diff(e.arg, name))
    if isinstance(e, Add):
        return add(diff(e.left, name), diff(e.right, name))
    if isinstance(e, Sub):
        return sub(diff(e.left, name), diff(e.right, name))
    if isinstance(e, Mul):
        return add(mul(diff(e.left, name), e.right), mul(e.left, diff(e.right, name)))
    if isinstance(e, Div):
        num = sub(mul(diff(e.left, name), e.right), mul(e.left, diff(e.right, name)))
        return div(num, mul(e.right, e.right))
    if isinstance(e, Pow):
        c = const_value(e.exponent)
        return mul(mul(Num(c), pow_(e.base, Num(c - 1.0))), diff(e.base, name))
    if isinstance(e, Call):
        if e.func == "sin":
            return mul(cos(e.args[0]), diff(e.args[0], name))
        if e.func == "cos":
            return neg(mul(sin(e.args[0]), diff(e.args[0], name)))
        if e.func == "exp":
            return mul(e, diff(e.args[0], name))
        if e.func == "log":
            return div(diff(e.args[0], name), e.args[0])
        if e.func == "sqrt":
            return div(diff(e.args[0], name), mul(Num(2.0), e))
        if e.func == "atan2":
            y, x = e.args
            r2 = add(mul(x, x), mul(y, y))
            return div(sub(mul(x, diff(y, name)), mul(y, diff(x, name))), r2)
    raise TypeError(f"not an Expr node: {e!r}")
