"""External-tree schema: export AstNodes to JSON documents and ingest them.

Schema: every node is an object with a `type` field carrying an ESTree-style
name, an optional `loc` object `{"line": int, "column": int}`, and
kind-specific fields (`callee`, `arguments`, `left`, `right`, `operator`,
`object`, `property`, `computed`, `name`, `value`, `params`, `body`, `test`,
`update`, ...). Unknown node types, and known types whose payload falls
outside the subset (unsupported operators, destructuring patterns, regex
literals), ingest as Opaque nodes: traversal still reaches their children
but name extraction is blocked.
"""

import json

from ..errors import AstSchemaError
from .ast import AstNode, BINARY_OPS, LOGICAL_OPS

KIND_TO_TYPE = {
    "Program": "Program",
    "FunctionDecl": "FunctionDeclaration",
    "FunctionExpr": "FunctionExpression",
    "Block": "BlockStatement",
    "VarDecl": "VariableDeclaration",
    "ExprStmt": "ExpressionStatement",
    "If": "IfStatement",
    "For": "ForStatement",
    "While": "WhileStatement",
    "Return": "ReturnStatement",
    "Assign": "AssignmentExpression",
    "Call": "CallExpression",
    "Member": "MemberExpression",
    "Binary": "BinaryExpression",
    "Logical": "LogicalExpression",
    "Unary": "UnaryExpression",
    "Update": "UpdateExpression",
    "Conditional": "ConditionalExpression",
    "Identifier": "Identifier",
    "Literal": "Literal",
    "This": "ThisExpression",
    "Array": "ArrayExpression",
    "Object": "ObjectExpression",
}

_ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
})
_UNARY_OPS = frozenset({"!", "~", "+", "-", "typeof", "void", "delete"})


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def export_ast(node):
    """Serialize an AstNode to a schema dict (inverse of ingest_ast)."""
    out = {"type": KIND_TO_TYPE.get(node.kind, node.attrs.get("type", node.kind)),
           "loc": {"line": node.line, "column": node.column}}
    k = node.kind
    c = node.children
    a = node.attrs
    if k in ("Program", "Block"):
        out["body"] = [export_ast(s) for s in c]
    elif k in ("FunctionDecl", "FunctionExpr"):
        out["name"] = a["name"]
        out["params"] = list(a["params"])
        out["body"] = export_ast(c[0])
    elif k == "VarDecl":
        out["kind"] = a["declKind"]
        decls = []
        ci = 0
        for name, has in zip(a["names"], a["hasInit"]):
            d = {"type": "VariableDeclarator", "name": name, "init": None}
            if has:
                d["init"] = export_ast(c[ci])
                ci += 1
            decls.append(d)
        out["declarations"] = decls
    elif k == "ExprStmt":
        out["expression"] = export_ast(c[0])
    elif k == "If":
        out["test"] = export_ast(c[0])
        out["consequent"] = export_ast(c[1])
        out["alternate"] = export_ast(c[2]) if a["hasElse"] else None
    elif k == "For":
        ci = 0
        for part, has in (("init", a["hasInit"]), ("test", a["hasTest"]),
                          ("update", a["hasUpdate"])):
            out[part] = export_ast(c[ci]) if has else None
            ci += has
        out["body"] = export_ast(c[ci])
    elif k == "While":
        out["test"] = export_ast(c[0])
        out["body"] = export_ast(c[1])
    elif k == "Return":
        out["argument"] = export_ast(c[0]) if a["hasValue"] else None
    elif k in ("Assign", "Binary", "Logical"):
        out["operator"] = a["operator"]
        out["left"] = export_ast(c[0])
        out["right"] = export_ast(c[1])
    elif k == "Call":
        out["callee"] = export_ast(c[0])
        out["arguments"] = [export_ast(x) for x in c[1:]]
    elif k == "Member":
        out["object"] = export_ast(c[0])
        out["computed"] = a["computed"]
        if a["computed"]:
            out["property"] = export_ast(c[1])
        else:
            out["property"] = {"type": "Identifier", "name": a["property"]}
    elif k == "Unary":
        out["operator"] = a["operator"]
        out["prefix"] = True
        out["argument"] = export_ast(c[0])
    elif k == "Update":
        out["operator"] = a["operator"]
        out["prefix"] = a["prefix"]
        out["argument"] = export_ast(c[0])
    elif k == "Conditional":
        out["test"] = export_ast(c[0])
        out["consequent"] = export_ast(c[1])
        out["alternate"] = export_ast(c[2])
    elif k == "Identifier":
        out["name"] = a["name"]
    elif k == "Literal":
        out["value"] = a["value"]
    elif k == "This":
        pass
    elif k == "Array":
        out["elements"] = [export_ast(x) for x in c]
    elif k == "Object":
        out["properties"] = [
            {"type": "Property", "key": key, "value": export_ast(v)}
            for key, v in zip(a["keys"], c)
        ]
    else:  # Opaque
        out["children"] = [export_ast(x) for x in c]
    return out


def to_document(node):
    """One-line JSON document for manifest files."""
    return json.dumps(export_ast(node), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------

def ingest_ast(document):
    """Build an AstNode from a schema document (JSON text or parsed dict)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise AstSchemaError(f"$: not valid JSON ({exc})") from exc
    return _build(document, "$")


def _fail(path, message):
    raise AstSchemaError(f"{path}: {message}")


def _loc(obj, path):
    loc = obj.get("loc")
    if loc is None:
        return 1, 0
    if not isinstance(loc, dict):
        _fail(path + ".loc", "must be an object")
    line = loc.get("line", 1)
    column = loc.get("column", 0)
    if not isinstance(line, int) or isinstance(line, bool) or line < 1:
        _fail(path + ".loc.line", "must be a positive integer")
    if not isinstance(column, int) or isinstance(column, bool) or column < 0:
        _fail(path + ".loc.column", "must be a non-negative integer")
    return line, column


def _node_field(obj, key, path, optional=False):
    value = obj.get(key)
    if value is None:
        if optional:
            return None
        _fail(path, f"missing required field '{key}'")
    if not isinstance(value, dict):
        _fail(f"{path}.{key}", "must be a node object")
    return _build(value, f"{path}.{key}")


def _node_list(obj, key, path):
    value = obj.get(key)
    if not isinstance(value, list):
        _fail(path, f"field '{key}' must be a list")
    return tuple(
        _build(v, f"{path}.{key}[{i}]") if isinstance(v, dict)
        else _fail(f"{path}.{key}[{i}]", "must be a node object")
        for i, v in enumerate(value)
    )


def _opaque(obj, path):
    line, column = _loc(obj, path)
    children = []
    for key, value in obj.items():
        if key in ("type", "loc"):
            continue
        if isinstance(value, dict) and isinstance(value.get("type"), str):
            children.append(_build(value, f"{path}.{key}"))
        elif isinstance(value, list):
            for i, item in enumerate(value):
                if isinstance(item, dict) and isinstance(item.get("type"), str):
                    children.append(_build(item, f"{path}.{key}[{i}]"))
    return AstNode("Opaque", {"type": obj["type"]}, tuple(children),
                   line, column)


def _name_of(value):
    """Accept a plain string or an embedded Identifier object."""
    if isinstance(value, str):
        return value
    if isinstance(value, dict) and value.get("type") == "Identifier" \
            and isinstance(value.get("name"), str):
        return value["name"]
    return None


def _build(obj, path):
    if not isinstance(obj, dict):
        _fail(path, "node must be an object")
    t = obj.get("type")
    if t is None:
        _fail(path, "missing required field 'type'")
    if not isinstance(t, str):
        _fail(path + ".type", "must be a string")
    line, column = _loc(obj, path)

    if t == "Program":
        return AstNode("Program", {}, _node_list(obj, "body", path),
                       line, column)
    if t == "BlockStatement":
        return AstNode("Block", {}, _node_list(obj, "body", path),
                       line, column)
    if t in ("FunctionDeclaration", "FunctionExpression"):
        name = _name_of(obj.get("name")) or _name_of(obj.get("id"))
        params = obj.get("params", [])
        if not isinstance(params, list):
            _fail(path, "field 'params' must be a list")
        names = []
        for i, p in enumerate(params):
            pn = _name_of(p)
            if pn is None:
                return _opaque(obj, path)  # destructuring parameter
            names.append(pn)
        if t == "FunctionDeclaration" and name is None:
            _fail(path, "function declaration requires a name")
        body = _node_field(obj, "body", path)
        if body.kind != "Block":
            return _opaque(obj, path)
        return AstNode(
            "FunctionDecl" if t == "FunctionDeclaration" else "FunctionExpr",
            {"name": name, "params": tuple(names)}, (body,), line, column,
        )
    if t == "VariableDeclaration":
        decl_kind = obj.get("kind", "var")
        if decl_kind not in ("var", "let", "const"):
            return _opaque(obj, path)
        decls = obj.get("declarations")
        if not isinstance(decls, list) or not decls:
            _fail(path, "field 'declarations' must be a non-empty list")
        names, has_init, inits = [], [], []
        for i, d in enumerate(decls):
            if not isinstance(d, dict):
                _fail(f"{path}.declarations[{i}]", "must be an object")
            dn = _name_of(d.get("name")) or _name_of(d.get("id"))
            if dn is None:
                return _opaque(obj, path)  # destructuring declarator
            names.append(dn)
            init = d.get("init")
            if init is None:
                has_init.append(False)
            else:
                has_init.append(True)
                inits.append(_build(init, f"{path}.declarations[{i}].init"))
        return AstNode(
            "VarDecl",
            {"declKind": decl_kind, "names": tuple(names),
             "hasInit": tuple(has_init)},
            tuple(inits), line, column,
        )
    if t == "ExpressionStatement":
        return AstNode(
            "ExprStmt", {}, (_node_field(obj, "expression", path),),
            line, column,
        )
    if t == "IfStatement":
        test = _node_field(obj, "test", path)
        consequent = _node_field(obj, "consequent", path)
        alternate = _node_field(obj, "alternate", path, optional=True)
        if alternate is None:
            return AstNode("If", {"hasElse": False}, (test, consequent),
                           line, column)
        return AstNode("If", {"hasElse": True},
                       (test, consequent, alternate), line, column)
    if t == "ForStatement":
        children = []
        flags = {}
        for part in ("init", "test", "update"):
            child = _node_field(obj, part, path, optional=True)
            flags["has" + part.capitalize()] = child is not None
            if child is not None:
                children.append(child)
        children.append(_node_field(obj, "body", path))
        return AstNode("For", flags, tuple(children), line, column)
    if t == "WhileStatement":
        return AstNode(
            "While", {},
            (_node_field(obj, "test", path), _node_field(obj, "body", path)),
            line, column,
        )
    if t == "ReturnStatement":
        argument = _node_field(obj, "argument", path, optional=True)
        if argument is None:
            return AstNode("Return", {"hasValue": False}, (), line, column)
        return AstNode("Return", {"hasValue": True}, (argument,),
                       line, column)
    if t == "AssignmentExpression":
        op = obj.get("operator")
        if op not in _ASSIGN_OPS:
            return _opaque(obj, path)
        target = _node_field(obj, "left", path)
        if target.kind not in ("Identifier", "Member"):
            return _opaque(obj, path)
        return AstNode(
            "Assign", {"operator": op},
            (target, _node_field(obj, "right", path)), line, column,
        )
    if t == "CallExpression":
        callee = _node_field(obj, "callee", path)
        args = _node_list(obj, "arguments", path)
        return AstNode("Call", {}, (callee, *args), line, column)
    if t == "MemberExpression":
        base = _node_field(obj, "object", path)
        computed = obj.get("computed", False)
        if not isinstance(computed, bool):
            _fail(path + ".computed", "must be a boolean")
        if computed:
            index = _node_field(obj, "property", path)
            return AstNode("Member", {"computed": True, "property": None},
                           (base, index), line, column)
        prop = _name_of(obj.get("property"))
        if prop is None:
            return _opaque(obj, path)
        return AstNode("Member", {"computed": False, "property": prop},
                       (base,), line, column)
    if t in ("BinaryExpression", "LogicalExpression"):
        op = obj.get("operator")
        if not isinstance(op, str):
            _fail(path, "missing required field 'operator'")
        if op not in BINARY_OPS:
            return _opaque(obj, path)
        kind = "Logical" if op in LOGICAL_OPS else "Binary"
        return AstNode(
            kind, {"operator": op},
            (_node_field(obj, "left", path), _node_field(obj, "right", path)),
            line, column,
        )
    if t == "UnaryExpression":
        op = obj.get("operator")
        if op not in _UNARY_OPS:
            return _opaque(obj, path)
        return AstNode("Unary", {"operator": op},
                       (_node_field(obj, "argument", path),), line, column)
    if t == "UpdateExpression":
        op = obj.get("operator")
        if op not in ("++", "--"):
            return _opaque(obj, path)
        prefix = obj.get("prefix", True)
        if not isinstance(prefix, bool):
            _fail(path + ".prefix", "must be a boolean")
        return AstNode("Update", {"operator": op, "prefix": prefix},
                       (_node_field(obj, "argument", path),), line, column)
    if t == "ConditionalExpression":
        return AstNode(
            "Conditional", {},
            (_node_field(obj, "test", path),
             _node_field(obj, "consequent", path),
             _node_field(obj, "alternate", path)),
            line, column,
        )
    if t == "Identifier":
        name = obj.get("name")
        if not isinstance(name, str) or not name:
            _fail(path, "identifier requires a non-empty 'name'")
        return AstNode("Identifier", {"name": name}, (), line, column)
    if t == "Literal":
        if "value" not in obj:
            _fail(path, "missing required field 'value'")
        value = obj["value"]
        if isinstance(value, bool):
            lit_kind = "boolean"
        elif value is None:
            lit_kind = "null"
        elif isinstance(value, (int, float)):
            lit_kind = "number"
        elif isinstance(value, str):
            lit_kind = "string"
        else:
            return _opaque(obj, path)  # regex and friends
        return AstNode("Literal", {"litKind": lit_kind, "value": value},
                       (), line, column)
    if t == "ThisExpression":
        return AstNode("This", {}, (), line, column)
    if t == "ArrayExpression":
        return AstNode("Array", {}, _node_list(obj, "elements", path),
                       line, column)
    if t == "ObjectExpression":
        props = obj.get("properties")
        if not isinstance(props, list):
            _fail(path, "field 'properties' must be a list")
        keys, values = [], []
        for i, p in enumerate(props):
            if not isinstance(p, dict):
                _fail(f"{path}.properties[{i}]", "must be an object")
            key = p.get("key")
            if isinstance(key, dict):
                key = _name_of(key) if key.get("type") == "Identifier" \
                    else key.get("value")
            if not isinstance(key, str):
                return _opaque(obj, path)
            value = p.get("value")
            if not isinstance(value, dict):
                return _opaque(obj, path)
            keys.append(key)
            values.append(_build(value, f"{path}.properties[{i}].value"))
        return AstNode("Object", {"keys": tuple(keys)}, tuple(values),
                       line, column)
    return _opaque(obj, path)
