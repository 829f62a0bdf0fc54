"""Construction expressions: parser, printer and evaluator.

Grammar::

    expr     := ctor "(" args? ")"
    args     := arg ("," arg)*
    arg      := integer | expr | selector | option
    selector := ("facet" | "vertex") "(" integer ")"
              | "edge" "(" integer "," integer ")"
              | "face" "(" integer (","? integer)* ")"
    option   := "map" "=" "[" integer ("," integer)* "]"
              | "merge" "=" "[" pair ("," pair)* "]"
    pair     := "(" integer "," integer ")"

Whitespace is ignored.  ``m`` and ``j`` are accepted for ``M`` and ``J``.
The printed form (no spaces) is the canonical provenance string.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple, Union

from . import constructions as C
from .errors import InputError, PolytopeError
from .lattice import IncidencePolytope, dual

MAX_DEPTH = 200


# -- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Selector:
    kind: str
    values: Tuple[int, ...]

    def to_face_selector(self) -> C.FaceSelector:
        if self.kind == "face":
            return C.FaceSelector(C.SelectorKind.BY_VERTEX_SET, self.values)
        return C.FaceSelector(C.SelectorKind(self.kind), self.values)


@dataclass(frozen=True)
class MapOption:
    values: Tuple[int, ...]


@dataclass(frozen=True)
class MergeOption:
    pairs: Tuple[Tuple[int, int], ...]


Arg = Union[int, "Call", Selector, MapOption, MergeOption]


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Arg, ...]


ConstructionExpr = Call


def to_text(node: Arg) -> str:
    if isinstance(node, bool):
        raise TypeError("booleans are not expression arguments")
    if isinstance(node, int):
        return str(node)
    if isinstance(node, Call):
        return f"{node.name}({','.join(to_text(a) for a in node.args)})"
    if isinstance(node, Selector):
        return f"{node.kind}({','.join(map(str, node.values))})"
    if isinstance(node, MapOption):
        return f"map=[{','.join(map(str, node.values))}]"
    if isinstance(node, MergeOption):
        return "merge=[" + ",".join(f"({i},{j})" for i, j in node.pairs) + "]"
    raise TypeError(f"not an expression node: {node!r}")


# -- errors ---------------------------------------------------------------------


class DslError(InputError):
    """Problem in an expression, with a 1-based position."""

    def __init__(self, message: str, line: int, column: int,
                 expected: FrozenSet[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        text = f"line {line}, column {column}: {message}"
        if self.expected:
            text += " (expected " + " or ".join(sorted(self.expected)) + ")"
        super().__init__(text)


class DslSyntaxError(DslError):
    pass


class UnknownConstructorError(DslError):
    pass


class ArityError(DslError):
    pass


class EvaluationError(InputError):
    def __init__(self, message: str, subexpression: str):
        self.subexpression = subexpression
        super().__init__(message)


# -- lexer ----------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'int', a punctuation character, or 'eof'
    text: str
    line: int
    column: int


_PUNCT = set("(),=[]")


def tokenize(text: str) -> List[Token]:
    out = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        start = i
        if ch in _PUNCT:
            out.append(Token(ch, ch, line, col))
            i += 1
        elif ch.isascii() and ch.isdigit():
            while i < n and text[i].isascii() and text[i].isdigit():
                i += 1
            out.append(Token("int", text[start:i], line, col))
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            while i < n and text[i].isascii() and (text[i].isalnum() or text[i] == "_"):
                i += 1
            out.append(Token("ident", text[start:i], line, col))
        else:
            raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
        col += i - start
    out.append(Token("eof", "", line, col))
    return out


# -- signatures -----------------------------------------------------------------

# I integer, E expression, S selector; a trailing '?' marks an optional slot.
SIGNATURES: Dict[str, Tuple[str, ...]] = {
    "simplex": ("I",),
    "polygon": ("I",),
    "cyclic": ("I", "I"),
    "delta": ("I", "I"),
    "M": ("I", "I"),
    "J": ("I",),
    "pyramid": ("E", "I?"),
    "prism": ("E",),
    "product": ("E", "E"),
    "free_join": ("E", "E"),
    "wedge": ("E", "S"),
    "truncate": ("E", "S"),
    "glue": ("E", "S", "E", "S"),
    "stack": ("E", "S"),
    "dual": ("E",),
}
ALIASES = {"m": "M", "j": "J"}
SELECTORS = ("facet", "vertex", "edge", "face")
OPTIONS = ("map", "merge")
_KIND_NAMES = {"I": "integer", "E": "expression", "S": "selector"}


def _kind_of(arg: Arg) -> str:
    if isinstance(arg, int):
        return "I"
    if isinstance(arg, Call):
        return "E"
    if isinstance(arg, Selector):
        return "S"
    return "O"


def check_signature(name: str, args: Tuple[Arg, ...]) -> Optional[str]:
    """Why ``args`` do not fit ``name``'s signature, or None."""
    sig = SIGNATURES[name]
    positional = [a for a in args if not isinstance(a, (MapOption, MergeOption))]
    options = [a for a in args if isinstance(a, (MapOption, MergeOption))]
    required = [s for s in sig if not s.endswith("?")]
    if not len(required) <= len(positional) <= len(sig):
        want = str(len(required)) if len(required) == len(sig) else f"{len(required)}-{len(sig)}"
        noun = "argument" if want == "1" else "arguments"
        return f"{name} takes {want} {noun}, got {len(positional)}"
    for i, (slot, arg) in enumerate(zip(sig, positional)):
        if _kind_of(arg) != slot[0]:
            return f"argument {i + 1} of {name} must be an {_KIND_NAMES[slot[0]]}"
    if options:
        if name != "glue":
            return f"{name} takes no options"
        if len({type(o) for o in options}) != len(options):
            return "glue option given twice"
        if any(isinstance(a, (MapOption, MergeOption)) for a in args[:len(positional)]):
            return "options must follow the positional arguments"
    return None


# -- parser ---------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def fail(self, expected, message: Optional[str] = None, tok: Optional[Token] = None):
        tok = tok or self.tok
        shown = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise DslSyntaxError(message or f"unexpected {shown}", tok.line, tok.column,
                             frozenset(expected))

    def expect(self, kind: str, label: Optional[str] = None) -> Token:
        if self.tok.kind != kind:
            self.fail({label or f"'{kind}'"})
        tok = self.tok
        self.pos += 1
        return tok

    def integer(self) -> int:
        return int(self.expect("int", "integer").text)

    def expr(self) -> Call:
        start = self.tok
        if start.kind != "ident":
            self.fail({"constructor"})
        name = ALIASES.get(start.text, start.text)
        if name not in SIGNATURES:
            if start.text in SELECTORS or start.text in OPTIONS:
                self.fail({"constructor"}, f"{start.text!r} is not a constructor", start)
            raise UnknownConstructorError(f"unknown constructor {start.text!r}",
                                          start.line, start.column,
                                          frozenset(SIGNATURES))
        self.pos += 1
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise DslSyntaxError(f"nesting deeper than {MAX_DEPTH}", start.line, start.column)
        self.expect("(")
        args: List[Arg] = []
        if self.tok.kind != ")":
            args.append(self.arg())
            while self.tok.kind == ",":
                self.pos += 1
                args.append(self.arg())
        if self.tok.kind != ")":
            self.fail({"','", "')'"})
        self.pos += 1
        self.depth -= 1
        problem = check_signature(name, tuple(args))
        if problem:
            raise ArityError(problem, start.line, start.column)
        return Call(name, tuple(args))

    def arg(self) -> Arg:
        tok = self.tok
        if tok.kind == "int":
            return self.integer()
        if tok.kind != "ident":
            self.fail({"integer", "constructor", "selector", "option"})
        if tok.text in SELECTORS:
            return self.selector()
        if tok.text in OPTIONS and self.toks[self.pos + 1].kind == "=":
            return self.option()
        return self.expr()

    def selector(self) -> Selector:
        kind = self.tok.text
        self.pos += 1
        self.expect("(")
        values = [self.integer()]
        if kind == "edge":
            self.expect(",")
            values.append(self.integer())
        elif kind == "face":
            while self.tok.kind in (",", "int"):
                if self.tok.kind == ",":
                    self.pos += 1
                values.append(self.integer())
        if self.tok.kind != ")":
            self.fail({"')'"} if kind != "face" else {"','", "integer", "')'"})
        self.pos += 1
        return Selector(kind, tuple(values))

    def option(self) -> Union[MapOption, MergeOption]:
        kind = self.tok.text
        self.pos += 2
        self.expect("[")
        if kind == "map":
            values = [self.integer()]
            while self.tok.kind == ",":
                self.pos += 1
                values.append(self.integer())
            if self.tok.kind != "]":
                self.fail({"','", "']'"})
            self.pos += 1
            return MapOption(tuple(values))
        pairs = [self.pair()]
        while self.tok.kind == ",":
            self.pos += 1
            pairs.append(self.pair())
        if self.tok.kind != "]":
            self.fail({"','", "']'"})
        self.pos += 1
        return MergeOption(tuple(pairs))

    def pair(self) -> Tuple[int, int]:
        self.expect("(")
        a = self.integer()
        self.expect(",")
        b = self.integer()
        self.expect(")")
        return (a, b)


def parse(text: Union[str, bytes]) -> Call:
    """Parse one construction expression; raises :class:`DslError` subclasses."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            before = bytes(text[:exc.start]).decode("utf-8", errors="replace")
            line = before.count("\n") + 1
            col = len(before) - (before.rfind("\n") + 1) + 1
            raise DslSyntaxError("input is not valid UTF-8", line, col) from None
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return e


# -- evaluation -----------------------------------------------------------------


def _glue(args) -> IncidencePolytope:
    P1, s1, P2, s2 = args[:4]
    mapping = merges = None
    for opt in args[4:]:
        if isinstance(opt, MapOption):
            mapping = list(opt.values)
        else:
            merges = list(opt.pairs)
    return C.glue(P1, s1, P2, s2, mapping=mapping, merges=merges or ())


_EVAL: Dict[str, Callable[[list], IncidencePolytope]] = {
    "simplex": lambda a: C.simplex(*a),
    "polygon": lambda a: C.polygon(*a),
    "cyclic": lambda a: C.cyclic(*a),
    "delta": lambda a: C.delta(*a),
    "M": lambda a: C.m_poly(*a),
    "J": lambda a: C.j_poly(*a),
    "pyramid": lambda a: C.pyramid(*a),
    "prism": lambda a: C.prism(*a),
    "product": lambda a: C.product(*a),
    "free_join": lambda a: C.free_join(*a),
    "wedge": lambda a: C.wedge(*a),
    "truncate": lambda a: C.truncate(*a),
    "glue": _glue,
    "stack": lambda a: C.stack(*a),
    "dual": lambda a: dual(*a),
}


def evaluate(expr: Union[Call, str]) -> IncidencePolytope:
    """Build the polytope an expression describes; provenance is its printed form."""
    if isinstance(expr, str):
        expr = parse(expr)
    problem = check_signature(expr.name, expr.args)
    if problem:
        raise EvaluationError(problem, to_text(expr))
    values = []
    for a in expr.args:
        if isinstance(a, Call):
            values.append(evaluate(a))
        elif isinstance(a, Selector):
            values.append(a.to_face_selector())
        else:
            values.append(a)
    text = to_text(expr)
    try:
        P = _EVAL[expr.name](values)
    except EvaluationError:
        raise
    except PolytopeError as exc:
        if isinstance(exc, InputError):
            raise EvaluationError(f"{text}: {exc}", text) from exc
        raise type(exc)(f"{text}: {exc}") from exc
    return P.with_provenance(text)


eval_expr = evaluate
