"""Recursive-descent parser producing the syntax tree."""

from __future__ import annotations

from ..ir import BinOp, Neg, Num, Ref
from .ast import (
    Barrier,
    ClassicalDecl,
    GateCall,
    Include,
    KernelDef,
    KernelInvoke,
    Measure,
    Operand,
    ParamDecl,
    Program,
    QubitArg,
    QubitDecl,
    Reset,
    Span,
)
from .diagnostics import CompileError
from .lexer import Token, tokenize

_DESCRIBE = {
    "semi": "';'",
    "comma": "','",
    "lparen": "'('",
    "rparen": "')'",
    "lbracket": "'['",
    "rbracket": "']'",
    "lbrace": "'{'",
    "rbrace": "'}'",
    "colon": "':'",
    "equals": "'='",
    "arrow": "'->'",
}


def _describe(kind: str) -> str:
    return _DESCRIBE.get(kind, kind)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.kernels: set[str] = set()

    # -- token helpers -------------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, kind: str, text: str | None = None, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == kind and (text is None or tok.text == text)

    def error(self, expected: str) -> CompileError:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line, col = (last.end_line, last.end_column) if last else (1, 1)
            return CompileError.at(f"syntax error: expected {expected}, found end of input", line, col)
        return CompileError.at(f"syntax error: expected {expected}, found '{tok.text}'", tok.line, tok.column)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            raise self.error(f"'{text}'" if text else _describe(kind))
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.expect(kind, text)
        return None

    def span(self, first: Token) -> Span:
        last = self.tokens[self.pos - 1]
        return Span(first.line, first.column, last.end_line, last.end_column)

    # -- grammar -------------------------------------------------------------

    def program(self) -> Program:
        first = self.peek()
        version = None
        if self.accept("keyword", "OPENQASM"):
            tok = self.peek()
            if tok is None or tok.kind not in ("int", "float"):
                raise self.error("version number")
            self.pos += 1
            version = tok.text
            if version.split(".")[0] != "3":
                raise CompileError.at(f"unsupported OpenQASM version {version}; only 3 is accepted", tok.line, tok.column)
            self.expect("semi")
        statements = []
        while self.peek() is not None:
            statements.append(self.statement(top_level=True))
        span = self.span(first) if first is not None else Span(1, 1, 1, 1)
        return Program(version, tuple(statements), span)

    def statement(self, top_level: bool):
        tok = self.peek()
        if tok.kind == "keyword":
            if tok.text == "include":
                if not top_level:
                    raise CompileError.at("include is only allowed at top level", tok.line, tok.column)
                self.pos += 1
                path = self.expect("string").text[1:-1]
                self.expect("semi")
                return Include(path, self.span(tok))
            if tok.text == "def":
                if not top_level:
                    raise CompileError.at("nested kernel definitions are not supported", tok.line, tok.column)
                return self.kernel_def()
            if tok.text in ("qubit", "bit"):
                return self.declaration()
            if tok.text == "measure":
                self.pos += 1
                qubit = self.operand()
                target = self.operand() if self.accept("arrow") else None
                self.expect("semi")
                return Measure(qubit, target, self.span(tok))
            if tok.text == "barrier":
                self.pos += 1
                operands = self.operands() if not self.at("semi") else ()
                self.expect("semi")
                return Barrier(operands, self.span(tok))
            if tok.text == "reset":
                self.pos += 1
                operand = self.operand()
                self.expect("semi")
                return Reset(operand, self.span(tok))
            raise CompileError.at(f"syntax error: unexpected keyword '{tok.text}'", tok.line, tok.column)
        if tok.kind == "ident":
            if self.at("equals", offset=1) or (self.at("lbracket", offset=1) and self.at("equals", offset=4)):
                target = self.operand()
                self.expect("equals")
                self.expect("keyword", "measure")
                qubit = self.operand()
                self.expect("semi")
                return Measure(qubit, target, self.span(tok))
            return self.call()
        raise self.error("statement")

    def declaration(self):
        kw = self.expect("keyword")
        size = None
        if self.accept("lbracket"):
            size = self.integer()
            self.expect("rbracket")
        name = self.expect("ident").text
        if size is None:
            if self.accept("lbracket"):
                size = self.integer()
                self.expect("rbracket")
            else:
                size = 1
        self.expect("semi")
        cls = QubitDecl if kw.text == "qubit" else ClassicalDecl
        if size < 1:
            raise CompileError.at(f"register '{name}' must have positive size", kw.line, kw.column)
        return cls(name, size, self.span(kw))

    def integer(self) -> int:
        return int(self.expect("int").text)

    def kernel_def(self) -> KernelDef:
        start = self.expect("keyword", "def")
        name = self.expect("ident").text
        self.expect("lparen")
        params = []
        while not self.at("rparen"):
            params.append(self.param_decl())
            if not self.accept("comma"):
                break
        self.expect("rparen")
        qubit_args = []
        while self.at("keyword", "qubit"):
            qubit_args.append(self.qubit_arg())
            if not self.accept("comma"):
                break
        self.expect("lbrace")
        self.kernels.add(name)  # allow self-reference so recursion is reported later
        body = []
        while not self.at("rbrace"):
            if self.peek() is None:
                raise self.error("'}'")
            body.append(self.statement(top_level=False))
        self.expect("rbrace")
        return KernelDef(name, tuple(params), tuple(qubit_args), tuple(body), self.span(start))

    def param_decl(self) -> ParamDecl:
        tok = self.expect("keyword", "float")
        width = None
        if self.accept("lbracket"):
            width = self.integer()
            self.expect("rbracket")
        self.accept("colon")
        name = self.expect("ident").text
        return ParamDecl(name, "float", width, self.span(tok))

    def qubit_arg(self) -> QubitArg:
        tok = self.expect("keyword", "qubit")
        size = 1
        if self.accept("lbracket"):
            size = self.integer()
            self.expect("rbracket")
        self.accept("colon")
        name = self.expect("ident").text
        return QubitArg(name, size, self.span(tok))

    def call(self):
        tok = self.expect("ident")
        args = []
        if self.accept("lparen"):
            while not self.at("rparen"):
                args.append(self.expr())
                if not self.accept("comma"):
                    break
            self.expect("rparen")
        operands = self.operands()
        self.expect("semi")
        cls = KernelInvoke if tok.text in self.kernels else GateCall
        return cls(tok.text, tuple(args), operands, self.span(tok))

    def operands(self) -> tuple[Operand, ...]:
        ops = [self.operand()]
        while self.accept("comma"):
            ops.append(self.operand())
        return tuple(ops)

    def operand(self) -> Operand:
        tok = self.expect("ident")
        index = None
        if self.accept("lbracket"):
            index = self.integer()
            self.expect("rbracket")
        return Operand(tok.text, index, self.span(tok))

    # expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
    def expr(self):
        left = self.term()
        while self.at("plus") or self.at("minus"):
            op = self.expect(self.peek().kind).text
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.at("star") or self.at("slash"):
            op = self.expect(self.peek().kind).text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        if self.accept("minus"):
            return Neg(self.unary())
        if self.accept("plus"):
            return self.unary()
        tok = self.peek()
        if tok is not None and tok.kind in ("int", "float"):
            self.pos += 1
            return Num(float(tok.text))
        if tok is not None and tok.kind == "ident":
            self.pos += 1
            return Ref("pi" if tok.text in ("pi", "π") else tok.text)
        if self.accept("lparen"):
            e = self.expr()
            self.expect("rparen")
            return e
        raise self.error("expression")


def parse(tokens: list[Token]) -> Program:
    return Parser(tokens).program()


def parse_source(text: str) -> Program:
    return parse(tokenize(text))
