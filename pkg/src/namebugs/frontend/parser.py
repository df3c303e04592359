"""Recursive-descent parser for the analysis subset.

Statement grammar: blocks, var/let/const declarations, function
declarations, if/for/while/return, and expression statements. Expressions
cover the call/member/binary/logical/unary/update/conditional/assignment
forms listed in ast.py. Constructs recognized by the lexer but outside the
subset (switch, try, new, sequence expressions, for-in, ...) are rejected
with a ParseError rather than skipped.

Semicolons are required between statements; the only leniency is that the
final statement of the input may omit the trailing semicolon.
"""

from ..errors import ParseError
from .ast import AstNode, LOGICAL_OPS
from .lexer import number_value, string_value, tokenize

PRECEDENCE = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6, "===": 6, "!==": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7, "instanceof": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}

ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
})

UNARY_OPS = frozenset({"!", "~", "+", "-"})
UNARY_KEYWORDS = frozenset({"typeof", "void", "delete"})

UNSUPPORTED_STATEMENTS = frozenset({
    "do", "switch", "throw", "try", "break", "continue", "case",
    "default", "catch", "finally",
})


class _Parser:
    def __init__(self, tokens, fileId):
        self.tokens = tokens
        self.fileId = fileId
        self.pos = 0

    # -- token plumbing -------------------------------------------------
    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def at(self, kind, text=None):
        tok = self.peek()
        return (
            tok is not None
            and tok.kind == kind
            and (text is None or tok.text == text)
        )

    def at_text(self, *texts):
        tok = self.peek()
        return tok is not None and tok.text in texts

    def advance(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, expected):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            col = last.column + len(last.text) if last else 0
            raise ParseError(
                f"{self.fileId}: expected {expected}, found end of input",
                line, col,
            )
        raise ParseError(
            f"{self.fileId}: expected {expected}, found {tok.text!r}",
            tok.line, tok.column,
        )

    def expect(self, kind, text=None):
        if not self.at(kind, text):
            self.error(text if text is not None else kind)
        return self.advance()

    def expect_semicolon(self):
        # required except at end of input
        if self.at("Punctuation", ";"):
            self.advance()
        elif self.peek() is not None:
            self.error("';'")

    # -- statements ------------------------------------------------------
    def parse_program(self):
        body = []
        while self.peek() is not None:
            body.append(self.parse_statement())
        first = self.tokens[0] if self.tokens else None
        return AstNode(
            "Program", {}, tuple(body),
            first.line if first else 1, first.column if first else 0,
        )

    def parse_statement(self):
        tok = self.peek()
        if tok.kind == "Keyword":
            if tok.text in ("var", "let", "const"):
                return self.parse_var_decl()
            if tok.text == "function":
                return self.parse_function(declaration=True)
            if tok.text == "if":
                return self.parse_if()
            if tok.text == "for":
                return self.parse_for()
            if tok.text == "while":
                return self.parse_while()
            if tok.text == "return":
                return self.parse_return()
            if tok.text in UNSUPPORTED_STATEMENTS:
                self.error(f"a supported statement (got '{tok.text}')")
        if tok.kind == "Punctuation" and tok.text == "{":
            return self.parse_block()
        expr = self.parse_expression()
        self.expect_semicolon()
        return AstNode("ExprStmt", {}, (expr,), expr.line, expr.column)

    def parse_block(self):
        start = self.expect("Punctuation", "{")
        body = []
        while not self.at("Punctuation", "}"):
            if self.peek() is None:
                self.error("'}'")
            body.append(self.parse_statement())
        self.expect("Punctuation", "}")
        return AstNode("Block", {}, tuple(body), start.line, start.column)

    def parse_var_decl(self, eat_semicolon=True):
        start = self.advance()
        names = []
        has_init = []
        inits = []
        while True:
            name = self.expect("Identifier")
            names.append(name.text)
            if self.at("Operator", "="):
                self.advance()
                inits.append(self.parse_assignment())
                has_init.append(True)
            else:
                has_init.append(False)
            if self.at("Punctuation", ","):
                self.advance()
                continue
            break
        if eat_semicolon:
            self.expect_semicolon()
        return AstNode(
            "VarDecl",
            {"declKind": start.text, "names": tuple(names),
             "hasInit": tuple(has_init)},
            tuple(inits), start.line, start.column,
        )

    def parse_function(self, declaration):
        start = self.advance()  # 'function'
        name = None
        if self.at("Identifier"):
            name = self.advance().text
        elif declaration:
            self.error("function name")
        self.expect("Punctuation", "(")
        params = []
        while not self.at("Punctuation", ")"):
            if params:
                self.expect("Punctuation", ",")
            params.append(self.expect("Identifier").text)
        self.expect("Punctuation", ")")
        body = self.parse_block()
        kind = "FunctionDecl" if declaration else "FunctionExpr"
        return AstNode(
            kind, {"name": name, "params": tuple(params)},
            (body,), start.line, start.column,
        )

    def parse_if(self):
        start = self.advance()
        self.expect("Punctuation", "(")
        test = self.parse_expression()
        self.expect("Punctuation", ")")
        consequent = self.parse_statement()
        if self.at("Keyword", "else"):
            self.advance()
            alternate = self.parse_statement()
            return AstNode(
                "If", {"hasElse": True}, (test, consequent, alternate),
                start.line, start.column,
            )
        return AstNode(
            "If", {"hasElse": False}, (test, consequent),
            start.line, start.column,
        )

    def parse_for(self):
        start = self.advance()
        self.expect("Punctuation", "(")
        children = []
        has_init = has_test = has_update = False
        if self.at_text("var", "let", "const"):
            children.append(self.parse_var_decl(eat_semicolon=False))
            has_init = True
            if self.at("Keyword", "in"):
                self.error("a classic for header (for-in is unsupported)")
            self.expect("Punctuation", ";")
        elif not self.at("Punctuation", ";"):
            children.append(self.parse_expression())
            has_init = True
            self.expect("Punctuation", ";")
        else:
            self.advance()
        if not self.at("Punctuation", ";"):
            children.append(self.parse_expression())
            has_test = True
        self.expect("Punctuation", ";")
        if not self.at("Punctuation", ")"):
            children.append(self.parse_expression())
            has_update = True
        self.expect("Punctuation", ")")
        children.append(self.parse_statement())
        return AstNode(
            "For",
            {"hasInit": has_init, "hasTest": has_test,
             "hasUpdate": has_update},
            tuple(children), start.line, start.column,
        )

    def parse_while(self):
        start = self.advance()
        self.expect("Punctuation", "(")
        test = self.parse_expression()
        self.expect("Punctuation", ")")
        body = self.parse_statement()
        return AstNode("While", {}, (test, body), start.line, start.column)

    def parse_return(self):
        start = self.advance()
        if self.at("Punctuation", ";") or self.peek() is None:
            self.expect_semicolon()
            return AstNode(
                "Return", {"hasValue": False}, (), start.line, start.column
            )
        value = self.parse_expression()
        self.expect_semicolon()
        return AstNode(
            "Return", {"hasValue": True}, (value,), start.line, start.column
        )

    # -- expressions -----------------------------------------------------
    def parse_expression(self):
        expr = self.parse_assignment()
        if self.at("Punctuation", ","):
            self.error("';' (sequence expressions are unsupported)")
        return expr

    def parse_assignment(self):
        target = self.parse_conditional()
        tok = self.peek()
        if tok is not None and tok.kind == "Operator" and tok.text in ASSIGN_OPS:
            if target.kind not in ("Identifier", "Member"):
                raise ParseError(
                    f"{self.fileId}: invalid assignment target",
                    tok.line, tok.column,
                )
            self.advance()
            value = self.parse_assignment()
            return AstNode(
                "Assign", {"operator": tok.text}, (target, value),
                target.line, target.column,
            )
        return target

    def parse_conditional(self):
        test = self.parse_binary(1)
        if self.at("Punctuation", "?"):
            self.advance()
            consequent = self.parse_assignment()
            self.expect("Punctuation", ":")
            alternate = self.parse_assignment()
            return AstNode(
                "Conditional", {}, (test, consequent, alternate),
                test.line, test.column,
            )
        return test

    def parse_binary(self, min_prec):
        left = self.parse_unary()
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in ("Operator", "Keyword"):
                break
            prec = PRECEDENCE.get(tok.text)
            if prec is None or prec < min_prec:
                break
            self.advance()
            right = self.parse_binary(prec + 1)
            kind = "Logical" if tok.text in LOGICAL_OPS else "Binary"
            left = AstNode(
                kind, {"operator": tok.text}, (left, right),
                left.line, left.column,
            )
        return left

    def parse_unary(self):
        tok = self.peek()
        if tok is None:
            self.error("an expression")
        if tok.kind == "Operator" and tok.text in UNARY_OPS:
            self.advance()
            operand = self.parse_unary()
            return AstNode(
                "Unary", {"operator": tok.text}, (operand,),
                tok.line, tok.column,
            )
        if tok.kind == "Keyword" and tok.text in UNARY_KEYWORDS:
            self.advance()
            operand = self.parse_unary()
            return AstNode(
                "Unary", {"operator": tok.text}, (operand,),
                tok.line, tok.column,
            )
        if tok.kind == "Operator" and tok.text in ("++", "--"):
            self.advance()
            operand = self.parse_unary()
            return AstNode(
                "Update", {"operator": tok.text, "prefix": True},
                (operand,), tok.line, tok.column,
            )
        if tok.kind == "Keyword" and tok.text == "new":
            self.error("an expression ('new' is unsupported)")
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_call_member()
        tok = self.peek()
        if tok is not None and tok.kind == "Operator" and tok.text in ("++", "--"):
            self.advance()
            return AstNode(
                "Update", {"operator": tok.text, "prefix": False},
                (expr,), expr.line, expr.column,
            )
        return expr

    def parse_call_member(self):
        expr = self.parse_primary()
        while True:
            if self.at("Punctuation", "."):
                self.advance()
                tok = self.peek()
                if tok is None or tok.kind not in ("Identifier", "Keyword"):
                    self.error("a property name")
                self.advance()
                expr = AstNode(
                    "Member", {"computed": False, "property": tok.text},
                    (expr,), expr.line, expr.column,
                )
            elif self.at("Punctuation", "["):
                self.advance()
                index = self.parse_assignment()
                self.expect("Punctuation", "]")
                expr = AstNode(
                    "Member", {"computed": True, "property": None},
                    (expr, index), expr.line, expr.column,
                )
            elif self.at("Punctuation", "("):
                self.advance()
                args = []
                while not self.at("Punctuation", ")"):
                    if args:
                        self.expect("Punctuation", ",")
                    args.append(self.parse_assignment())
                self.expect("Punctuation", ")")
                expr = AstNode(
                    "Call", {}, (expr, *args), expr.line, expr.column
                )
            else:
                return expr

    def parse_primary(self):
        tok = self.peek()
        if tok is None:
            self.error("an expression")
        if tok.kind == "Identifier":
            self.advance()
            return AstNode(
                "Identifier", {"name": tok.text}, (), tok.line, tok.column
            )
        if tok.kind == "NumberLiteral":
            self.advance()
            return AstNode(
                "Literal", {"litKind": "number", "value": number_value(tok.text)},
                (), tok.line, tok.column,
            )
        if tok.kind == "StringLiteral":
            self.advance()
            return AstNode(
                "Literal", {"litKind": "string", "value": string_value(tok.text)},
                (), tok.line, tok.column,
            )
        if tok.kind == "BooleanLiteral":
            self.advance()
            return AstNode(
                "Literal", {"litKind": "boolean", "value": tok.text == "true"},
                (), tok.line, tok.column,
            )
        if tok.kind == "NullLiteral":
            self.advance()
            return AstNode(
                "Literal", {"litKind": "null", "value": None},
                (), tok.line, tok.column,
            )
        if tok.kind == "Keyword" and tok.text == "this":
            self.advance()
            return AstNode("This", {}, (), tok.line, tok.column)
        if tok.kind == "Keyword" and tok.text == "function":
            return self.parse_function(declaration=False)
        if tok.kind == "Punctuation" and tok.text == "(":
            self.advance()
            expr = self.parse_assignment()
            if self.at("Punctuation", ","):
                self.error("')' (sequence expressions are unsupported)")
            self.expect("Punctuation", ")")
            return expr
        if tok.kind == "Punctuation" and tok.text == "[":
            self.advance()
            elements = []
            while not self.at("Punctuation", "]"):
                if elements:
                    self.expect("Punctuation", ",")
                elements.append(self.parse_assignment())
            self.expect("Punctuation", "]")
            return AstNode("Array", {}, tuple(elements), tok.line, tok.column)
        if tok.kind == "Punctuation" and tok.text == "{":
            return self.parse_object(tok)
        self.error("an expression")

    def parse_object(self, start):
        self.advance()
        keys = []
        values = []
        while not self.at("Punctuation", "}"):
            if keys:
                self.expect("Punctuation", ",")
            tok = self.peek()
            if tok is None:
                self.error("a property key")
            if tok.kind in ("Identifier", "Keyword", "BooleanLiteral",
                            "NullLiteral"):
                keys.append(tok.text)
            elif tok.kind == "StringLiteral":
                keys.append(string_value(tok.text))
            elif tok.kind == "NumberLiteral":
                keys.append(tok.text)
            else:
                self.error("a property key")
            self.advance()
            self.expect("Punctuation", ":")
            values.append(self.parse_assignment())
        self.expect("Punctuation", "}")
        return AstNode(
            "Object", {"keys": tuple(keys)}, tuple(values),
            start.line, start.column,
        )


def parse(source, fileId="<memory>"):
    """Parse subset source text into a Program AstNode."""
    tokens = tokenize(source, fileId)
    return _Parser(tokens, fileId).parse_program()
