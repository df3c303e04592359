"""Training-pair generators for the three bug patterns, plus the encoders
that turn an extracted snippet tuple into a fixed-length real vector.

Each generator walks one file's tree and emits (positive, negative) pairs:
the positive is the snippet as written, the negative is the same snippet
with one seeded defect (arguments swapped, operator replaced, or one
operand replaced). Sites whose negative would equal the positive are
skipped so every emitted pair is genuinely distinguishable.
"""

import random
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InternalError
from .frontend.ast import NODE_KINDS, default_alphabet, walk, walk_with_context
from .naming import NONE, extract_name, literal_type_tag

PATTERNS = ("swapped-args", "wrong-operator", "wrong-operand")

LITERAL_TYPE_TAGS = ("number", "string", "boolean", "null")

T_BITS = 5
K_BITS = 8


@dataclass(frozen=True)
class CallSiteExample:
    base: str
    callee: str
    arg1: str
    arg2: str
    typeArg1: str
    typeArg2: str
    param1: str
    param2: str
    label: str  # "positive" | "negative"
    origin: tuple  # (fileId, line, column)

    def tuple_fields(self):
        return (self.base, self.callee, self.arg1, self.arg2,
                self.typeArg1, self.typeArg2, self.param1, self.param2)


@dataclass(frozen=True)
class BinOpExample:
    left: str
    right: str
    op: str
    typeLeft: str
    typeRight: str
    kindParent: str
    kindGrandParent: str
    label: str
    origin: tuple

    def tuple_fields(self):
        return (self.left, self.right, self.op, self.typeLeft,
                self.typeRight, self.kindParent, self.kindGrandParent)


class EncodingTables:
    """Fixed random binary codes for literal types (5 bits) and node kinds
    (8 bits), plus the operator one-hot. Vectors are drawn once from the
    seed, pairwise distinct and nonzero (the zero vector is reserved for
    NONE), and serialized with any trained model."""

    def __init__(self, seed, alphabet=None, T=None, K=None):
        self.seed = seed
        self.alphabet = alphabet or default_alphabet()
        if T is None or K is None:
            rng = np.random.default_rng(seed)
            T = dict(zip(LITERAL_TYPE_TAGS,
                         _draw_codes(rng, len(LITERAL_TYPE_TAGS), T_BITS)))
            K = dict(zip(NODE_KINDS, _draw_codes(rng, len(NODE_KINDS), K_BITS)))
        self.T = T
        self.K = K

    def t_vector(self, tag):
        if tag == NONE:
            return np.zeros(T_BITS)
        return self.T[tag]

    def k_vector(self, kind):
        if kind == NONE:
            return np.zeros(K_BITS)
        return self.K[kind]

    def op_onehot(self, op):
        vec = np.zeros(len(self.alphabet))
        vec[self.alphabet.index_of(op)] = 1.0
        return vec


def _draw_codes(rng, count, bits):
    if 2 ** bits <= count:
        raise InternalError(f"{bits}-bit code space too small for {count} tags")
    seen = {(0,) * bits}
    out = []
    while len(out) < count:
        row = rng.integers(0, 2, size=bits)
        key = tuple(int(b) for b in row)
        if key not in seen:
            seen.add(key)
            out.append(row.astype(np.float64))
    return out


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _function_params(ast):
    """First-seen declared parameter lists, keyed by function name."""
    params = {}
    for node in walk(ast):
        if node.kind == "FunctionDecl" and node.attrs["name"] not in params:
            params[node.attrs["name"]] = node.attrs["params"]
    return params


def gen_swapped_args(ast, rngSeed=0, fileId="<memory>"):
    """(positive, negative) per call with two extractable arguments.

    The negative swaps (arg1, typeArg1) with (arg2, typeArg2); the seed is
    accepted for interface symmetry but the transformation needs no
    randomness. Calls whose swap would change nothing are skipped.
    """
    del rngSeed
    declared = _function_params(ast)
    pairs = []
    for node in walk(ast):
        if node.kind != "Call" or len(node.children) < 3:
            continue
        callee_expr = node.children[0]
        arg1, arg2 = node.children[1], node.children[2]
        callee = extract_name(callee_expr)
        n1 = extract_name(arg1)
        n2 = extract_name(arg2)
        if callee is None or n1 is None or n2 is None:
            continue
        t1 = literal_type_tag(arg1)
        t2 = literal_type_tag(arg2)
        if (n1, t1) == (n2, t2):
            continue
        base = NONE
        if callee_expr.kind == "Member":
            extracted = extract_name(callee_expr.children[0])
            if extracted is not None:
                base = extracted
        formals = ()
        if callee.startswith("ID:"):
            formals = declared.get(callee[3:], ())
        p1 = "ID:" + formals[0] if len(formals) >= 1 else NONE
        p2 = "ID:" + formals[1] if len(formals) >= 2 else NONE
        origin = (fileId, node.line, node.column)
        pairs.append((
            CallSiteExample(base, callee, n1, n2, t1, t2, p1, p2,
                            "positive", origin),
            CallSiteExample(base, callee, n2, n1, t2, t1, p1, p2,
                            "negative", origin),
        ))
    return pairs


def _binop_sites(ast, fileId):
    """Extractable binary/logical sites plus the file's operand pool."""
    sites = []
    pool = []
    seen = set()
    for node, parent_kind, grand_kind in walk_with_context(ast):
        if node.kind not in ("Binary", "Logical"):
            continue
        left, right = node.children
        nl = extract_name(left)
        nr = extract_name(right)
        tl = literal_type_tag(left)
        tr = literal_type_tag(right)
        for name, tag in ((nl, tl), (nr, tr)):
            if name is not None and (name, tag) not in seen:
                seen.add((name, tag))
                pool.append((name, tag))
        if nl is None or nr is None:
            continue
        origin = (fileId, node.line, node.column)
        sites.append((nl, nr, node.attrs["operator"], tl, tr,
                      parent_kind, grand_kind, origin))
    return sites, pool


def gen_wrong_operator(ast, rngSeed=0, fileId="<memory>"):
    """(positive, negative) per extractable binary site; the negative's
    operator is drawn uniformly from the alternatives to the original."""
    rng = random.Random(rngSeed)
    alphabet = default_alphabet()
    pairs = []
    sites, _ = _binop_sites(ast, fileId)
    for nl, nr, op, tl, tr, pk, gk, origin in sites:
        alternatives = [o for o in alphabet.binaryOps if o != op]
        mutated = rng.choice(alternatives)
        pairs.append((
            BinOpExample(nl, nr, op, tl, tr, pk, gk, "positive", origin),
            BinOpExample(nl, nr, mutated, tl, tr, pk, gk, "negative", origin),
        ))
    return pairs


def gen_wrong_operand(ast, rngSeed=0, fileId="<memory>"):
    """(positive, negative) per extractable binary site; the negative
    replaces one side (left/right with probability one half) with a
    same-file operand different from the original. Files whose operand
    pool has fewer than two distinct entries yield nothing."""
    rng = random.Random(rngSeed)
    sites, pool = _binop_sites(ast, fileId)
    if len(pool) < 2:
        return []
    pairs = []
    for nl, nr, op, tl, tr, pk, gk, origin in sites:
        replace_left = rng.random() < 0.5
        original = (nl, tl) if replace_left else (nr, tr)
        candidates = [entry for entry in pool if entry != original]
        name, tag = rng.choice(candidates)
        if replace_left:
            neg = BinOpExample(name, nr, op, tag, tr, pk, gk,
                               "negative", origin)
        else:
            neg = BinOpExample(nl, name, op, tl, tag, pk, gk,
                               "negative", origin)
        pairs.append((
            BinOpExample(nl, nr, op, tl, tr, pk, gk, "positive", origin),
            neg,
        ))
    return pairs


GENERATORS = {
    "swapped-args": gen_swapped_args,
    "wrong-operator": gen_wrong_operator,
    "wrong-operand": gen_wrong_operand,
}


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

def call_vector_length(e):
    return 6 * e + 2 * T_BITS


def binop_vector_length(e, alphabet):
    return 2 * e + len(alphabet) + 2 * T_BITS + 2 * K_BITS


def input_dim(pattern, e, alphabet):
    if pattern == "swapped-args":
        return call_vector_length(e)
    return binop_vector_length(e, alphabet)


def _embed(name, matrix):
    if name == NONE:
        return np.zeros(matrix.e)
    return matrix.row(name)


def represent_call(example, matrix, tables, expect_e=None):
    """[E(base), E(callee), E(arg1), E(arg2), T(t1), T(t2), E(p1), E(p2)]."""
    if expect_e is not None and matrix.e != expect_e:
        raise DimensionMismatch(
            f"embedding dimension {matrix.e} != model dimension {expect_e}"
        )
    return np.concatenate([
        _embed(example.base, matrix),
        _embed(example.callee, matrix),
        _embed(example.arg1, matrix),
        _embed(example.arg2, matrix),
        tables.t_vector(example.typeArg1),
        tables.t_vector(example.typeArg2),
        _embed(example.param1, matrix),
        _embed(example.param2, matrix),
    ])


def represent_binop(example, matrix, tables, expect_e=None):
    """[E(left), E(right), opOneHot, T(tl), T(tr), K(parent), K(grand)]."""
    if expect_e is not None and matrix.e != expect_e:
        raise DimensionMismatch(
            f"embedding dimension {matrix.e} != model dimension {expect_e}"
        )
    return np.concatenate([
        _embed(example.left, matrix),
        _embed(example.right, matrix),
        tables.op_onehot(example.op),
        tables.t_vector(example.typeLeft),
        tables.t_vector(example.typeRight),
        tables.k_vector(example.kindParent),
        tables.k_vector(example.kindGrandParent),
    ])


def represent(example, matrix, tables, expect_e=None):
    if isinstance(example, CallSiteExample):
        return represent_call(example, matrix, tables, expect_e)
    return represent_binop(example, matrix, tables, expect_e)
