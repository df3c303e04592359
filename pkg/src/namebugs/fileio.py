"""Canonical text formats for every pipeline stage.

All files are UTF-8, newline-terminated, and deterministic given their
inputs, so reruns are byte-identical. Reals are written at 9 significant
digits, probabilities at 6 decimals. Checksums (sha256 hex) bind stages:
each file carries the run-config checksum in a `# config=` comment, the
embedding file names the vocabulary it was trained from, and checkpoints
name vocabulary, embedding, and config so scanning refuses mismatched
inputs.
"""

import json
import os

import numpy as np

from .detector import DetectorModel, EvalReport, Warning
from .embeddings import EmbeddingMatrix
from .errors import ChecksumMismatch, InputContractError
from .frontend import OperatorAlphabet, SourceFile, ingest_ast, parse
from .naming import Vocabulary
from .neuralnet import FitConfig, Mlp
from .patterns import (BinOpExample, CallSiteExample, EncodingTables,
                       LITERAL_TYPE_TAGS)
from .frontend.ast import NODE_KINDS
from .synthcorpus import GroundTruthEntry
from .textutil import escape_field, fmt_real, sha256_text, unescape_field

_CONFIG_PREFIX = "# config="


def _write_text(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def _config_comment(configChecksum):
    return _CONFIG_PREFIX + configChecksum


def _split_comments(lines):
    """Returns (configChecksum or '', remaining content lines)."""
    checksum = ""
    content = []
    for line in lines:
        if line.startswith(_CONFIG_PREFIX):
            checksum = line[len(_CONFIG_PREFIX):]
        elif line.startswith("#"):
            continue
        else:
            content.append(line)
    return checksum, content


# ---------------------------------------------------------------------------
# token streams
# ---------------------------------------------------------------------------

def write_streams(path, streams, configChecksum=""):
    """streams: iterable of (fileId, token list); one line per file."""
    lines = [_config_comment(configChecksum)]
    for fileId, tokens in streams:
        rendered = " ".join(escape_field(t) for t in tokens)
        lines.append(f"{escape_field(fileId)}\t{rendered}")
    _write_text(path, "\n".join(lines) + "\n")


def read_streams(path):
    _, content = _split_comments(_read_lines(path))
    streams = []
    for line in content:
        if not line:
            continue
        fileId, _, rest = line.partition("\t")
        tokens = [unescape_field(t) for t in rest.split(" ") if t]
        streams.append((unescape_field(fileId), tokens))
    return streams


# ---------------------------------------------------------------------------
# vocabulary
# ---------------------------------------------------------------------------

def write_vocab(path, vocab, configChecksum=""):
    lines = [_config_comment(configChecksum)]
    lines.extend(vocab.entry_lines())
    _write_text(path, "\n".join(lines) + "\n")


def read_vocab(path):
    _, content = _split_comments(_read_lines(path))
    entries = []
    for line in content:
        if not line:
            continue
        index, token, count = line.split("\t")
        if int(index) != len(entries):
            raise InputContractError(
                f"{path}: vocabulary indices out of order at {index}")
        entries.append((token, int(count)))
    if len(entries) < 2:
        raise InputContractError(f"{path}: missing reserved vocabulary rows")
    return Vocabulary(entries=tuple(entries), cap=len(entries))


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

def embedding_body_lines(matrix):
    return [
        token + "\t" + " ".join(fmt_real(v) for v in row)
        for token, row in zip(matrix.tokens, matrix.vectors)
    ]


def embedding_checksum(matrix):
    """Checksum of the canonical body text; binds checkpoints to the file."""
    return sha256_text("\n".join(embedding_body_lines(matrix)) + "\n")


def write_embedding(path, matrix, configChecksum=""):
    lines = [f"e={matrix.e} vocab={matrix.vocabChecksum}",
             _config_comment(configChecksum)]
    lines.extend(embedding_body_lines(matrix))
    _write_text(path, "\n".join(lines) + "\n")


def read_embedding(path):
    lines = _read_lines(path)
    if not lines or not lines[0].startswith("e="):
        raise InputContractError(f"{path}: missing embedding header")
    header = dict(part.split("=", 1) for part in lines[0].split(" "))
    dim = int(header["e"])
    _, content = _split_comments(lines[1:])
    tokens = []
    rows = []
    for line in content:
        if not line:
            continue
        token, _, rest = line.partition("\t")
        row = np.array([float(v) for v in rest.split(" ")], dtype=np.float64)
        if row.shape[0] != dim:
            raise InputContractError(
                f"{path}: row for {token!r} has {row.shape[0]} values, "
                f"expected {dim}")
        tokens.append(token)
        rows.append(row)
    return EmbeddingMatrix(vectors=np.array(rows, dtype=np.float64),
                           tokens=tuple(tokens),
                           vocabChecksum=header.get("vocab", ""))


# ---------------------------------------------------------------------------
# examples
# ---------------------------------------------------------------------------

def write_examples(path, pattern, examples, vocabChecksum="",
                   configChecksum=""):
    lines = [_config_comment(configChecksum), f"# vocab={vocabChecksum}"]
    for ex in examples:
        fileId, line, column = ex.origin
        fields = [pattern, ex.label, fileId, str(line), str(column)]
        fields.extend(ex.tuple_fields())
        lines.append("\t".join(escape_field(f) for f in fields))
    _write_text(path, "\n".join(lines) + "\n")


def read_examples(path):
    """Returns (pattern, examples, vocabChecksum, configChecksum)."""
    lines = _read_lines(path)
    vocabChecksum = ""
    for line in lines:
        if line.startswith("# vocab="):
            vocabChecksum = line[len("# vocab="):]
    configChecksum, content = _split_comments(lines)
    pattern = None
    examples = []
    for line in content:
        if not line:
            continue
        fields = [unescape_field(f) for f in line.split("\t")]
        pattern = fields[0]
        label = fields[1]
        origin = (fields[2], int(fields[3]), int(fields[4]))
        rest = fields[5:]
        if pattern == "swapped-args":
            if len(rest) != 8:
                raise InputContractError(f"{path}: bad call record: {line!r}")
            examples.append(CallSiteExample(*rest, label=label, origin=origin))
        else:
            if len(rest) != 7:
                raise InputContractError(f"{path}: bad binop record: {line!r}")
            examples.append(BinOpExample(*rest, label=label, origin=origin))
    return pattern, examples, vocabChecksum, configChecksum


# ---------------------------------------------------------------------------
# checkpoints
# ---------------------------------------------------------------------------

def _fmt_row(values):
    return " ".join(fmt_real(v) for v in np.asarray(values).ravel())


def _fit_config_json(fit):
    return json.dumps({
        "epochs": fit.epochs, "batchSize": fit.batchSize,
        "dropoutRate": fit.dropoutRate, "learningRate": fit.learningRate,
        "rmspropDecay": fit.rmspropDecay,
        "rmspropEpsilon": fit.rmspropEpsilon,
        "seed": fit.seed, "hiddenDim": fit.hiddenDim,
    }, sort_keys=True, separators=(",", ":"))


def write_checkpoint(path, model, embeddingCs="", configChecksum=""):
    mlp = model.mlp
    embeddingCs = embeddingCs or model.embeddingChecksum
    lines = [
        "# detector checkpoint",
        f"pattern={model.pattern}",
        f"e={model.embedding.e}",
        f"inputDim={mlp.inputDim}",
        f"hiddenDim={mlp.hiddenDim}",
        f"vocab={model.vocabChecksum}",
        f"embedding={embeddingCs}",
        f"config={configChecksum or model.configChecksum}",
        f"fit={_fit_config_json(model.fitConfig)}",
        f"alphabet={model.tables.alphabet.serialize()}",
        f"tablesSeed={model.tables.seed}",
    ]
    for tag in LITERAL_TYPE_TAGS:
        lines.append(f"T.{tag}=" + " ".join(
            str(int(b)) for b in model.tables.T[tag]))
    for kind in NODE_KINDS:
        lines.append(f"K.{kind}=" + " ".join(
            str(int(b)) for b in model.tables.K[kind]))
    lines.append(f"W1 {mlp.W1.shape[0]} {mlp.W1.shape[1]}")
    lines.extend(_fmt_row(row) for row in mlp.W1)
    lines.append(f"b1 {mlp.b1.shape[0]}")
    lines.append(_fmt_row(mlp.b1))
    lines.append(f"W2 {mlp.W2.shape[0]} {mlp.W2.shape[1]}")
    lines.extend(_fmt_row(row) for row in mlp.W2)
    lines.append("b2 1")
    lines.append(_fmt_row(mlp.b2))
    _write_text(path, "\n".join(lines) + "\n")


def read_checkpoint(path, embedding):
    """Rebuilds a DetectorModel around an already-loaded embedding matrix.

    Verifies the embedding file body matches the checksum recorded at
    train time before any prediction can happen.
    """
    lines = _read_lines(path)
    header = {}
    t_rows = {}
    k_rows = {}
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("W1 "):
            break
        i += 1
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        if key.startswith("T."):
            t_rows[key[2:]] = np.array([float(b) for b in value.split(" ")])
        elif key.startswith("K."):
            k_rows[key[2:]] = np.array([float(b) for b in value.split(" ")])
        else:
            header[key] = value
    required = ("pattern", "e", "inputDim", "hiddenDim", "vocab",
                "embedding", "fit", "alphabet", "tablesSeed")
    missing = [k for k in required if k not in header]
    if missing:
        raise InputContractError(
            f"{path}: checkpoint header missing {', '.join(missing)}")

    def block(tag, expect_rows, expect_cols):
        nonlocal i
        if i >= len(lines) or not lines[i].startswith(tag + " "):
            raise InputContractError(f"{path}: expected {tag} block")
        i += 1
        data = []
        for _ in range(expect_rows):
            data.append([float(v) for v in lines[i].split(" ")])
            i += 1
        out = np.array(data, dtype=np.float64)
        if out.shape != (expect_rows, expect_cols):
            raise InputContractError(
                f"{path}: {tag} block has shape {out.shape}, "
                f"expected {(expect_rows, expect_cols)}")
        return out

    hidden = int(header["hiddenDim"])
    inputDim = int(header["inputDim"])
    w1 = block("W1", hidden, inputDim)
    b1 = block("b1", 1, hidden)[0]
    w2 = block("W2", 1, hidden)
    b2 = block("b2", 1, 1)[0]

    alphabet = OperatorAlphabet.deserialize(header["alphabet"])
    tables = EncodingTables(int(header["tablesSeed"]), alphabet=alphabet)
    for tag, row in t_rows.items():
        if not np.array_equal(tables.T[tag], row):
            raise ChecksumMismatch(
                f"{path}: stored T.{tag} row disagrees with tablesSeed")
    for kind, row in k_rows.items():
        if not np.array_equal(tables.K[kind], row):
            raise ChecksumMismatch(
                f"{path}: stored K.{kind} row disagrees with tablesSeed")

    if embedding.vocabChecksum != header["vocab"]:
        raise ChecksumMismatch(
            f"{path}: embedding was built from vocabulary "
            f"{embedding.vocabChecksum[:12]}.., checkpoint expects "
            f"{header['vocab'][:12]}..")
    actual = embedding_checksum(embedding)
    if header["embedding"] and actual != header["embedding"]:
        raise ChecksumMismatch(
            f"{path}: embedding file checksum {actual[:12]}.. does not match "
            f"checkpoint binding {header['embedding'][:12]}..")

    fit_fields = json.loads(header["fit"])
    fit = FitConfig(**fit_fields)
    mlp = Mlp(W1=w1, b1=b1, W2=w2, b2=b2)
    return DetectorModel(
        pattern=header["pattern"], mlp=mlp, embedding=embedding,
        tables=tables, fitConfig=fit, vocabChecksum=header["vocab"],
        embeddingChecksum=header["embedding"],
        configChecksum=header.get("config", ""),
    )


# ---------------------------------------------------------------------------
# warnings
# ---------------------------------------------------------------------------

def warning_record(w):
    fileId, line, column = w.origin
    fields = [f"{w.probability:.6f}", w.pattern, fileId, str(line),
              str(column), w.snippetSummary]
    if w.suggestedFix is not None:
        fields.append(w.suggestedFix)
    return "\t".join(escape_field(f) for f in fields)


def write_warnings(path, warnings, configChecksum=""):
    lines = [_config_comment(configChecksum)]
    lines.extend(warning_record(w) for w in warnings)
    _write_text(path, "\n".join(lines) + "\n")


def read_warnings(path):
    _, content = _split_comments(_read_lines(path))
    out = []
    for line in content:
        if not line:
            continue
        fields = [unescape_field(f) for f in line.split("\t")]
        out.append(Warning(
            origin=(fields[2], int(fields[3]), int(fields[4])),
            pattern=fields[1], probability=float(fields[0]),
            snippetSummary=fields[5],
            suggestedFix=fields[6] if len(fields) > 6 else None))
    return out


def render_warnings(warnings):
    """Human-readable report; one block per warning, ranked as given."""
    if not warnings:
        return "no warnings above threshold\n"
    out = []
    for rank, w in enumerate(warnings, start=1):
        fileId, line, column = w.origin
        out.append(f"{rank}. p={w.probability:.6f} [{w.pattern}] "
                   f"{fileId}:{line}:{column}")
        out.append(f"   {w.snippetSummary}")
        if w.suggestedFix is not None:
            out.append(f"   suggested fix: {w.suggestedFix}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# evaluation reports
# ---------------------------------------------------------------------------

def write_eval_report(path, report, configChecksum=""):
    doc = {
        "accuracy": report.accuracy,
        "perThreshold": [
            {"t": t, "recall": recall, "fps": fps}
            for t, recall, fps in report.perThreshold
        ],
        "counts": {"C_pos": report.cPos, "C_neg": report.cNeg},
        "config": configChecksum,
    }
    _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_eval_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return EvalReport(
        accuracy=doc["accuracy"],
        perThreshold=tuple((row["t"], row["recall"], row["fps"])
                           for row in doc["perThreshold"]),
        cPos=doc["counts"]["C_pos"],
        cNeg=doc["counts"]["C_neg"],
    )


def render_eval_report(report):
    lines = [f"accuracy {report.accuracy:.6f}",
             f"counts C_pos={report.cPos} C_neg={report.cNeg}"]
    for t, recall, fps in report.perThreshold:
        lines.append(f"t={t:.2f} recall={recall:.6f} fps={fps}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# ground truth and corpora
# ---------------------------------------------------------------------------

def write_ground_truth(path, entries):
    lines = []
    for g in entries:
        fields = (g.fileId, str(g.line), str(g.column), g.pattern,
                  g.violationKind)
        lines.append("\t".join(escape_field(f) for f in fields))
    _write_text(path, "\n".join(lines) + "\n")


def read_ground_truth(path):
    out = []
    for line in _read_lines(path):
        if not line or line.startswith("#"):
            continue
        fields = [unescape_field(f) for f in line.split("\t")]
        out.append(GroundTruthEntry(fields[0], int(fields[1]),
                                    int(fields[2]), fields[3], fields[4]))
    return tuple(out)


def write_corpus_dir(outDir, files):
    for fileId, source in files:
        _write_text(os.path.join(outDir, fileId), source)


def load_corpus(path):
    """Loads a corpus from a directory of source files or a .jsonl manifest
    of externally produced syntax trees.

    Returns (sources, failures): sources is a list of SourceFile sorted by
    fileId, failures a list of (fileId, message) for inputs that did not
    parse or validate. Manifest entries carry no source text, so commands
    that need raw tokens (extract) reject manifests.
    """
    sources = []
    failures = []
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(".js"))
        for name in names:
            full = os.path.join(path, name)
            with open(full, "r", encoding="utf-8") as fh:
                text = fh.read()
            try:
                sources.append(SourceFile(name, parse(text, fileId=name),
                                          source=text))
            except InputContractError as exc:
                failures.append((name, str(exc)))
        return sources, failures
    if path.endswith(".jsonl"):
        with open(path, "r", encoding="utf-8") as fh:
            for n, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                doc = json.loads(line)
                fileId = doc.get("fileId", f"entry{n:05d}")
                try:
                    sources.append(SourceFile(fileId, ingest_ast(doc["ast"]),
                                              source=""))
                except InputContractError as exc:
                    failures.append((fileId, str(exc)))
        sources.sort(key=lambda sf: sf.fileId)
        return sources, failures
    raise InputContractError(
        f"{path}: expected a corpus directory or a .jsonl manifest")
