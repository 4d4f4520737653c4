"""Parser for `.mfl` source files.

Source files are a sequence of `val` / `type` declarations followed by a
single `main` term. The grammar (see docs/grammar.md) distinguishes
terms from expressions syntactically; the parser also classifies every
identifier occurrence as a variable or a resource from the construct
that bound it: `let !` and `mfun` self-names bind variables, while
`mfun` parameters, `let*`, `mcase`, `case` and `split` bind resources.
Unbound names parse as variables so the typechecker can report them.

`if` and `mif` are sugar: `if t then t1 else t2` becomes a term-level
case over `int2sum t`, and `mif` the memoized-case analogue.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateDeclError, ParseError
from .syntax import (
    Apply, Bang, Box, IntLit, Inl, Inr, KeyOf, LetBang, LetPair, MCase, MFun,
    Pair, PrimOp, Program, Res, Return, Roll, TArrow, TBang, TBox, TInt,
    TProd, TRec, TSum, TUnit, TVar, Term, TermCase, TermSplit, Type, UnitLit,
    Unbox, Unroll, Var,
)

KEYWORDS = frozenset(
    "val type main mfun is end let in return mcase mif case split if then else "
    "of as inl inr box unbox keyof roll unroll rec unit int div int2sum".split()
)

# longest-match order matters
_SYMBOLS = ("=>", "==", "<=", "->", "=", "<", "(", ")", "[", "]", ",", "|",
            "+", "-", "*", "!", ":", ".")


@dataclass(slots=True)
class Token:
    kind: str  # "int", "ident", "eof", a keyword, or a symbol
    text: str
    line: int
    col: int


def tokenize(src: str) -> "list[Token]":
    toks: "list[Token]" = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "(" and i + 1 < n and src[i + 1] == "*":
            depth = 1
            start_line, start_col = line, col
            i += 2
            col += 2
            while i < n and depth:
                if src[i] == "(" and i + 1 < n and src[i + 1] == "*":
                    depth += 1
                    i += 2
                    col += 2
                elif src[i] == "*" and i + 1 < n and src[i + 1] == ")":
                    depth -= 1
                    i += 2
                    col += 2
                elif src[i] == "\n":
                    i += 1
                    line += 1
                    col = 1
                else:
                    i += 1
                    col += 1
            if depth:
                raise ParseError(start_line, start_col, "unterminated comment")
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("number", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            word = src[i:j]
            toks.append(Token(word if word in KEYWORDS else "ident", word, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(line, col, f"unexpected character {c!r}")
    toks.append(Token("eof", "", line, col))
    return toks


# Tokens that may begin an atom, and therefore continue an application
# chain. '-' is deliberately absent: after an operand it is always the
# binary operator, so a negative-literal argument needs parentheses.
_ATOM_START = frozenset(("number", "ident", "(", "mfun"))

_CMP_OPS = ("<", "<=", "==")
_UNARY_KEYWORDS = frozenset(("box", "unbox", "keyof", "unroll", "int2sum"))
_ANNOTATED_UNARY = frozenset(("roll", "inl", "inr"))


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0
        self.scopes: "list[dict[str, str]]" = [{}]  # name -> "var" | "res"
        self.aliases: "dict[str, Type]" = {}
        self.tyvars: "list[str]" = []

    # ---- token plumbing

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, kind: str) -> bool:
        return self.toks[self.pos].kind == kind

    def eat(self, kind: str) -> "Token | None":
        if self.toks[self.pos].kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str = "") -> Token:
        t = self.toks[self.pos]
        if t.kind != kind:
            wanted = what or f"'{kind}'"
            found = t.text if t.kind != "eof" else "end of input"
            raise ParseError(t.line, t.col, f"expected {wanted}, found '{found}'")
        self.pos += 1
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(t.line, t.col, msg)

    # ---- scopes

    def lookup_kind(self, name: str) -> str:
        for scope in reversed(self.scopes):
            kind = scope.get(name)
            if kind is not None:
                return kind
        return "var"  # unbound: surfaces as UnboundVar in the checker

    def scoped(self, term_parser, **binds: str):
        self.scopes.append(dict(binds))
        try:
            return term_parser()
        finally:
            self.scopes.pop()

    # ---- program

    def parse_program(self) -> Program:
        decls: "list[tuple[str, Term]]" = []
        seen: "set[str]" = set()
        while True:
            if self.at("val"):
                self.next()
                name_tok = self.expect("ident", "a declaration name")
                self.expect("=")
                term = self.parse_term()
                if name_tok.text in seen:
                    raise DuplicateDeclError(name_tok.line, name_tok.col, name_tok.text)
                seen.add(name_tok.text)
                decls.append((name_tok.text, term))
                self.scopes[0][name_tok.text] = "var"
            elif self.at("type"):
                self.next()
                name_tok = self.expect("ident", "a type alias name")
                self.expect("=")
                ty = self.parse_type()
                if name_tok.text in self.aliases:
                    raise DuplicateDeclError(name_tok.line, name_tok.col, name_tok.text)
                self.aliases[name_tok.text] = ty
            else:
                break
        self.expect("main", "'val', 'type' or 'main'")
        main = self.parse_term()
        self.expect("eof", "end of input")
        return Program(decls, main)

    # ---- types

    def parse_type(self) -> Type:
        if self.eat("rec"):
            name = self.expect("ident", "a type variable").text
            self.expect(".")
            self.tyvars.append(name)
            try:
                body = self.parse_type()
            finally:
                self.tyvars.pop()
            return TRec(name, body)
        left = self._parse_sum_type()
        if self.eat("->"):
            return TArrow(left, self.parse_type())
        return left

    def _parse_sum_type(self) -> Type:
        left = self._parse_prod_type()
        if self.eat("+"):
            return TSum(left, self._parse_sum_type())
        return left

    def _parse_prod_type(self) -> Type:
        left = self._parse_bang_type()
        if self.eat("*"):
            return TProd(left, self._parse_prod_type())
        return left

    def _parse_bang_type(self) -> Type:
        if self.eat("!"):
            return TBang(self._parse_postfix_type())
        return self._parse_postfix_type()

    def _parse_postfix_type(self) -> Type:
        ty = self._parse_atom_type()
        while self.eat("box"):
            ty = TBox(ty)
        return ty

    def _parse_atom_type(self) -> Type:
        tok = self.peek()
        if tok.kind == "unit":
            self.next()
            return TUnit()
        if tok.kind == "int":
            self.next()
            return TInt()
        if tok.kind == "(":
            self.next()
            ty = self.parse_type()
            self.expect(")")
            return ty
        if tok.kind == "ident":
            self.next()
            if tok.text in self.tyvars:
                return TVar(tok.text)
            alias = self.aliases.get(tok.text)
            if alias is None:
                raise ParseError(tok.line, tok.col, f"unknown type name '{tok.text}'")
            return alias
        self.fail("expected a type")

    # ---- terms

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "if":
            self.next()
            scrut = self.parse_term()
            self.expect("then")
            then_arm = self.parse_term()
            self.expect("else")
            else_arm = self.parse_term()
            test = PrimOp("int2sum", (scrut,), pos=(tok.line, tok.col))
            return TermCase(test, "_", else_arm, "_", then_arm, pos=(tok.line, tok.col))
        if tok.kind == "case":
            self.next()
            scrut = self.parse_term()
            self.expect("of")
            self.expect("inl")
            lname = self.expect("ident", "a binder").text
            self.expect("=>")
            left = self.scoped(self.parse_term, **{lname: "res"})
            self.expect("|")
            self.expect("inr")
            rname = self.expect("ident", "a binder").text
            self.expect("=>")
            right = self.scoped(self.parse_term, **{rname: "res"})
            self.expect("end")
            return TermCase(scrut, lname, left, rname, right, pos=(tok.line, tok.col))
        if tok.kind == "split":
            self.next()
            scrut = self.parse_term()
            self.expect("as")
            self.expect("(")
            lname = self.expect("ident", "a binder").text
            self.expect(",")
            rname = self.expect("ident", "a binder").text
            self.expect(")")
            self.expect("in")
            body = self.scoped(self.parse_term, **{lname: "res", rname: "res"})
            self.expect("end")
            return TermSplit(scrut, lname, rname, body, pos=(tok.line, tok.col))
        if tok.kind in ("return", "let", "mcase", "mif"):
            self.fail(f"'{tok.text}' starts an expression, but a term is expected here")
        return self._parse_cmp()

    def _parse_cmp(self) -> Term:
        left = self._parse_add()
        tok = self.peek()
        if tok.kind in _CMP_OPS:
            self.next()
            right = self._parse_add()
            return PrimOp(tok.kind, (left, right), pos=(tok.line, tok.col))
        return left

    def _parse_add(self) -> Term:
        left = self._parse_mul()
        while True:
            tok = self.peek()
            if tok.kind in ("+", "-"):
                self.next()
                right = self._parse_mul()
                left = PrimOp(tok.kind, (left, right), pos=(tok.line, tok.col))
            else:
                return left

    def _parse_mul(self) -> Term:
        left = self._parse_unary()
        while True:
            tok = self.peek()
            if tok.kind in ("*", "div"):
                self.next()
                right = self._parse_unary()
                left = PrimOp(tok.kind, (left, right), pos=(tok.line, tok.col))
            else:
                return left

    def _parse_unary(self) -> Term:
        tok = self.peek()
        pos = (tok.line, tok.col)
        if tok.kind == "!":
            self.next()
            return Bang(self._parse_unary(), pos=pos)
        if tok.kind in _UNARY_KEYWORDS:
            self.next()
            if tok.kind == "int2sum":
                return PrimOp("int2sum", (self._parse_unary(),), pos=pos)
            body = self._parse_unary()
            cls = {"box": Box, "unbox": Unbox, "keyof": KeyOf, "unroll": Unroll}[tok.kind]
            return cls(body, pos=pos)
        if tok.kind in _ANNOTATED_UNARY:
            self.next()
            self.expect("[")
            ty = self.parse_type()
            self.expect("]")
            body = self._parse_unary()
            if tok.kind == "roll":
                if not isinstance(ty, TRec):
                    raise ParseError(tok.line, tok.col, "roll needs a 'rec' type annotation")
                return Roll(body, ty, pos=pos)
            if not isinstance(ty, TSum):
                raise ParseError(tok.line, tok.col, f"{tok.kind} needs a sum type annotation")
            cls = Inl if tok.kind == "inl" else Inr
            return cls(body, ty.left, ty.right, pos=pos)
        return self._parse_app()

    def _parse_app(self) -> Term:
        term = self._parse_atom()
        while self.peek().kind in _ATOM_START:
            arg = self._parse_atom()
            term = Apply(term, arg, pos=arg.pos)
        return term

    def _parse_atom(self) -> Term:
        tok = self.peek()
        pos = (tok.line, tok.col)
        if tok.kind == "number":
            self.next()
            return IntLit(int(tok.text), pos=pos)
        if tok.kind == "-":
            self.next()
            lit = self.expect("number", "an integer literal after unary '-'")
            return IntLit(-int(lit.text), pos=pos)
        if tok.kind == "ident":
            self.next()
            if self.lookup_kind(tok.text) == "res":
                return Res(tok.text, pos=pos)
            return Var(tok.text, pos=pos)
        if tok.kind == "(":
            self.next()
            if self.eat(")"):
                return UnitLit(pos=pos)
            first = self.parse_term()
            if self.eat(","):
                second = self.parse_term()
                self.expect(")")
                return Pair(first, second, pos=pos)
            self.expect(")")
            return first
        if tok.kind == "mfun":
            self.next()
            fname = self.expect("ident", "a function name").text
            self.expect("(")
            arg = self.expect("ident", "a parameter name").text
            self.expect(":")
            arg_ty = self.parse_type()
            self.expect(")")
            self.expect(":")
            res_ty = self.parse_type()
            self.expect("is")
            body = self.scoped(self.parse_expr, **{fname: "var", arg: "res"})
            self.expect("end")
            return MFun(fname, arg, arg_ty, res_ty, body, pos=pos)
        self.fail(f"expected a term, found '{tok.text if tok.kind != 'eof' else 'end of input'}'")

    # ---- expressions

    def parse_expr(self):
        tok = self.peek()
        pos = (tok.line, tok.col)
        if tok.kind == "return":
            self.next()
            return Return(self.parse_term(), pos=pos)
        if tok.kind == "let":
            self.next()
            if self.eat("!"):
                name = self.expect("ident", "a binder").text
                ann = self.parse_type() if self.eat(":") else None
                self.expect("=")
                scrut = self.parse_term()
                self.expect("in")
                body = self.scoped(self.parse_expr, **{name: "var"})
                self.expect("end")
                return LetBang(name, ann, scrut, body, pos=pos)
            if self.eat("*"):
                self.expect("(")
                lname = self.expect("ident", "a binder").text
                lann = self.parse_type() if self.eat(":") else None
                self.expect(",")
                rname = self.expect("ident", "a binder").text
                rann = self.parse_type() if self.eat(":") else None
                self.expect(")")
                self.expect("=")
                scrut = self.parse_term()
                self.expect("in")
                body = self.scoped(self.parse_expr, **{lname: "res", rname: "res"})
                self.expect("end")
                return LetPair(lname, lann, rname, rann, scrut, body, pos=pos)
            self.fail("expected '!' or '*' after 'let'")
        if tok.kind == "mcase":
            self.next()
            scrut = self.parse_term()
            self.expect("of")
            self.expect("inl")
            lname = self.expect("ident", "a binder").text
            lann = self.parse_type() if self.eat(":") else None
            self.expect("=>")
            left = self.scoped(self.parse_expr, **{lname: "res"})
            self.expect("|")
            self.expect("inr")
            rname = self.expect("ident", "a binder").text
            rann = self.parse_type() if self.eat(":") else None
            self.expect("=>")
            right = self.scoped(self.parse_expr, **{rname: "res"})
            self.expect("end")
            return MCase(scrut, lname, lann, left, rname, rann, right, pos=pos)
        if tok.kind == "mif":
            self.next()
            scrut = self.parse_term()
            self.expect("then")
            then_arm = self.parse_expr()
            self.expect("else")
            else_arm = self.parse_expr()
            self.expect("end")
            test = PrimOp("int2sum", (scrut,), pos=pos)
            return MCase(test, "_", None, else_arm, "_", None, then_arm, pos=pos)
        self.fail("expected an expression (return, let, mcase or mif)")


def parse(src: str) -> Program:
    """Parse a whole program. Raises ParseError with a position inside
    the input on the first syntax error."""
    return Parser(src).parse_program()


def parse_term(src: str, resources: "tuple[str, ...]" = (),
               variables: "tuple[str, ...]" = ()) -> Term:
    """Parse a bare term; handy in tests. Names listed in `resources` /
    `variables` classify accordingly instead of defaulting to variables."""
    p = Parser(src)
    p.scopes[0].update({n: "res" for n in resources})
    p.scopes[0].update({n: "var" for n in variables})
    term = p.parse_term()
    p.expect("eof", "end of input")
    return term


def parse_expr(src: str, resources: "tuple[str, ...]" = (),
               variables: "tuple[str, ...]" = ()):
    """Parse a bare expression; handy in tests."""
    p = Parser(src)
    p.scopes[0].update({n: "res" for n in resources})
    p.scopes[0].update({n: "var" for n in variables})
    expr = p.parse_expr()
    p.expect("eof", "end of input")
    return expr
