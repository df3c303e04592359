"""Uniform AST node structure plus the fixed binary-operator alphabet.

Node layout conventions (children are always AstNode tuples):

  Program      attrs {}                                children = statements
  FunctionDecl attrs {name, params: tuple}             children = (body,)
  FunctionExpr attrs {name: str|None, params: tuple}   children = (body,)
  Block        attrs {}                                children = statements
  VarDecl      attrs {declKind, names: tuple,
                      hasInit: tuple of bool}          children = initializers present, in order
  ExprStmt     attrs {}                                children = (expression,)
  If           attrs {hasElse}                         children = (test, consequent[, alternate])
  For          attrs {hasInit, hasTest, hasUpdate}     children = present headers then body
  While        attrs {}                                children = (test, body)
  Return       attrs {hasValue}                        children = (value,) or ()
  Assign       attrs {operator}                        children = (target, value)
  Call         attrs {}                                children = (callee, *arguments)
  Member       attrs {computed, property: str|None}    children = (object[, indexExpr])
  Binary       attrs {operator}                        children = (left, right)
  Logical      attrs {operator}                        children = (left, right)
  Unary        attrs {operator}                        children = (operand,)
  Update       attrs {operator, prefix}                children = (operand,)
  Conditional  attrs {}                                children = (test, consequent, alternate)
  Identifier   attrs {name}                            children = ()
  Literal      attrs {litKind, value}                  children = ()
  This         attrs {}                                children = ()
  Array        attrs {}                                children = elements
  Object       attrs {keys: tuple}                     children = value expressions
  Opaque       attrs {type}                            children = nested nodes, traversal only
"""

from dataclasses import dataclass, field

NODE_KINDS = (
    "Program", "FunctionDecl", "FunctionExpr", "Block", "VarDecl",
    "ExprStmt", "If", "For", "While", "Return", "Assign", "Call",
    "Member", "Binary", "Logical", "Unary", "Update", "Conditional",
    "Identifier", "Literal", "This", "Array", "Object", "Opaque",
)

LITERAL_KINDS = ("number", "string", "boolean", "null")

# `in` stays out of the alphabet: mutating an operator into `in` would take
# expressions outside the subset grammar, and the mutation domain is defined
# as the 21 alternatives to any given operator.
BINARY_OPS = (
    "+", "-", "*", "/", "%", "==", "===", "!=", "!==",
    "<", "<=", ">", ">=", "&&", "||", "&", "|", "^",
    "<<", ">>", ">>>", "instanceof",
)

LOGICAL_OPS = ("&&", "||")


@dataclass
class AstNode:
    kind: str
    attrs: dict
    children: tuple
    line: int = 0
    column: int = 0


@dataclass
class SourceFile:
    """One corpus unit: a file id and its parsed tree."""
    fileId: str
    ast: AstNode
    source: str = ""


@dataclass(frozen=True)
class OperatorAlphabet:
    binaryOps: tuple = BINARY_OPS
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "index", {op: i for i, op in enumerate(self.binaryOps)}
        )

    def index_of(self, op):
        return self.index[op]

    def __contains__(self, op):
        return op in self.index

    def __len__(self):
        return len(self.binaryOps)

    def serialize(self):
        return " ".join(self.binaryOps)

    @staticmethod
    def deserialize(text):
        return OperatorAlphabet(tuple(text.split()))


def default_alphabet():
    return OperatorAlphabet(BINARY_OPS)


def walk(node):
    """Pre-order traversal."""
    yield node
    for child in node.children:
        yield from walk(child)


def walk_with_context(node, parentKind="Program", grandKind="Program"):
    """Pre-order traversal yielding (node, parentKind, grandParentKind).

    Missing ancestors report the Program kind.
    """
    yield node, parentKind, grandKind
    for child in node.children:
        yield from walk_with_context(child, node.kind, parentKind)
