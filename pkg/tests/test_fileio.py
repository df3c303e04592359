"""Canonical file formats: round trips, checksums, tamper detection."""

import json

import numpy as np
import pytest

from namebugs.detector import DetectorModel, EvalReport, Warning
from namebugs.embeddings import EmbeddingMatrix, random_embedding
from namebugs.errors import ChecksumMismatch, InputContractError
from namebugs.fileio import (
    embedding_checksum,
    load_corpus,
    read_checkpoint,
    read_embedding,
    read_eval_report,
    read_examples,
    read_ground_truth,
    read_streams,
    read_vocab,
    read_warnings,
    render_eval_report,
    render_warnings,
    warning_record,
    write_checkpoint,
    write_corpus_dir,
    write_embedding,
    write_eval_report,
    write_examples,
    write_ground_truth,
    write_streams,
    write_vocab,
    write_warnings,
)
from namebugs.frontend import export_ast, parse
from namebugs.naming import build_vocabulary
from namebugs.neuralnet import FitConfig, init, predict_batch
from namebugs.patterns import (
    BinOpExample,
    CallSiteExample,
    EncodingTables,
    input_dim,
)
from namebugs.synthcorpus import GroundTruthEntry
from namebugs.textutil import escape_field, fmt_real, unescape_field


NASTY = "a b\tc\\d\ne\rf"


def test_field_escaping_round_trip():
    assert unescape_field(escape_field(NASTY)) == NASTY
    escaped = escape_field(NASTY)
    assert " " not in escaped and "\t" not in escaped and "\n" not in escaped


# ---------------------------------------------------------------------------
# streams and vocabulary
# ---------------------------------------------------------------------------

def test_streams_round_trip(tmp_path):
    path = tmp_path / "streams.txt"
    streams = [
        ("a.js", ["var", "ID:x", "=", "LIT:23", ";"]),
        ("dir name.js", ["ID:with space", f"ID:{NASTY}"]),
        ("empty.js", []),
    ]
    write_streams(path, streams, configChecksum="c" * 64)
    assert read_streams(path) == streams
    first = path.read_text().splitlines()[0]
    assert first == "# config=" + "c" * 64


def test_vocab_round_trip(tmp_path):
    path = tmp_path / "vocab.tsv"
    vocab = build_vocabulary(
        [["ID:a", "ID:a", "ID:b", "LIT:1"]], 10)
    write_vocab(path, vocab, configChecksum="x")
    loaded = read_vocab(path)
    assert loaded.entries == vocab.entries
    assert loaded.checksum == vocab.checksum
    assert loaded.index_of("ID:a") == vocab.index_of("ID:a")


def test_vocab_rejects_reordered_rows(tmp_path):
    path = tmp_path / "vocab.tsv"
    vocab = build_vocabulary([["ID:a", "ID:b"]], 10)
    write_vocab(path, vocab)
    lines = path.read_text().splitlines()
    lines[2], lines[3] = lines[3], lines[2]  # swap two indexed rows
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(InputContractError, match="out of order"):
        read_vocab(path)


def test_vocab_requires_reserved_rows(tmp_path):
    path = tmp_path / "vocab.tsv"
    path.write_text("# config=\n0\tUNK\t0\n")
    with pytest.raises(InputContractError, match="reserved"):
        read_vocab(path)


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

def normal_matrix(seed=0, tokens=("UNK", "NONE", "ID:a", "ID:b"), e=6):
    rng = np.random.default_rng(seed)
    vectors = rng.normal(size=(len(tokens), e))
    vectors[1] = 0.0
    return EmbeddingMatrix(vectors=vectors, tokens=tokens,
                           vocabChecksum="v" * 64)


def test_embedding_round_trip(tmp_path):
    path = tmp_path / "embedding.txt"
    matrix = normal_matrix()
    write_embedding(path, matrix, configChecksum="k")
    loaded = read_embedding(path)
    assert loaded.tokens == matrix.tokens
    assert loaded.vocabChecksum == matrix.vocabChecksum
    assert loaded.e == matrix.e
    # values survive at the 9-significant-digit write precision
    assert np.allclose(loaded.vectors, matrix.vectors, rtol=1e-8)
    # rendering a loaded matrix reproduces the body byte for byte
    assert embedding_checksum(loaded) == embedding_checksum(matrix)


def test_embedding_header_and_width_validation(tmp_path):
    path = tmp_path / "embedding.txt"
    path.write_text("ID:a\t1 2\n")
    with pytest.raises(InputContractError, match="header"):
        read_embedding(path)
    path.write_text("e=3 vocab=abc\n# config=\nID:a\t1 2\n")
    with pytest.raises(InputContractError, match="expected 3"):
        read_embedding(path)


# ---------------------------------------------------------------------------
# examples
# ---------------------------------------------------------------------------

def test_call_examples_round_trip(tmp_path):
    path = tmp_path / "examples.tsv"
    examples = [
        CallSiteExample("NONE", "ID:f", "ID:a", "LIT:1", "NONE", "number",
                        "ID:p", "NONE", "positive", ("a.js", 3, 0)),
        CallSiteExample("NONE", "ID:f", "LIT:1", "ID:a", "number", "NONE",
                        "ID:p", "NONE", "negative", ("a.js", 3, 0)),
        CallSiteExample("NONE", f"ID:{NASTY}", "ID:x", "ID:y", "NONE",
                        "NONE", "NONE", "NONE", "positive",
                        ("weird dir/b.js", 9, 4)),
        CallSiteExample("NONE", f"ID:{NASTY}", "ID:y", "ID:x", "NONE",
                        "NONE", "NONE", "NONE", "negative",
                        ("weird dir/b.js", 9, 4)),
    ]
    write_examples(path, "swapped-args", examples,
                   vocabChecksum="v" * 64, configChecksum="c" * 64)
    pattern, loaded, vocab_cs, config_cs = read_examples(path)
    assert pattern == "swapped-args"
    assert loaded == examples
    assert vocab_cs == "v" * 64
    assert config_cs == "c" * 64


def test_binop_examples_round_trip(tmp_path):
    path = tmp_path / "examples.tsv"
    examples = [
        BinOpExample("ID:a", "LIT:2", "<", "NONE", "number",
                     "If", "Program", "positive", ("b.js", 1, 4)),
        BinOpExample("ID:a", "LIT:2", ">=", "NONE", "number",
                     "If", "Program", "negative", ("b.js", 1, 4)),
    ]
    write_examples(path, "wrong-operator", examples)
    pattern, loaded, _, _ = read_examples(path)
    assert pattern == "wrong-operator"
    assert loaded == examples


def test_examples_reject_malformed_records(tmp_path):
    path = tmp_path / "examples.tsv"
    path.write_text("# config=\nswapped-args\tpositive\ta.js\t1\t0\tID:x\n")
    with pytest.raises(InputContractError, match="bad call record"):
        read_examples(path)
    path.write_text("# config=\nwrong-operator\tpositive\ta.js\t1\t0\tID:x\n")
    with pytest.raises(InputContractError, match="bad binop record"):
        read_examples(path)


# ---------------------------------------------------------------------------
# checkpoints
# ---------------------------------------------------------------------------

@pytest.fixture()
def checkpoint_setup(tmp_path):
    vocab = build_vocabulary([["ID:a", "ID:b", "ID:f", "LIT:1"]], 10)
    matrix = random_embedding(vocab, 8, seed=1)
    emb_path = tmp_path / "embedding.txt"
    write_embedding(emb_path, matrix)
    loaded = read_embedding(emb_path)
    tables = EncodingTables(4)
    cfg = FitConfig(epochs=1, batchSize=2, seed=3, hiddenDim=5)
    width = input_dim("wrong-operator", loaded.e, tables.alphabet)
    model = DetectorModel(
        pattern="wrong-operator",
        mlp=init(width, cfg.hiddenDim, seed=cfg.seed),
        embedding=loaded,
        tables=tables,
        fitConfig=cfg,
        vocabChecksum=loaded.vocabChecksum,
    )
    ckpt = tmp_path / "model.ckpt"
    write_checkpoint(ckpt, model, embeddingCs=embedding_checksum(loaded),
                     configChecksum="r" * 64)
    return model, ckpt, loaded, width


def test_checkpoint_round_trip(checkpoint_setup):
    model, ckpt, embedding, width = checkpoint_setup
    restored = read_checkpoint(ckpt, embedding)
    assert restored.pattern == model.pattern
    assert restored.fitConfig == model.fitConfig
    assert restored.vocabChecksum == model.vocabChecksum
    assert restored.configChecksum == "r" * 64
    assert restored.mlp.inputDim == width
    X = np.random.default_rng(0).normal(size=(6, width))
    assert np.allclose(predict_batch(restored.mlp, X),
                       predict_batch(model.mlp, X), atol=1e-7)
    for kind in ("If", "Program"):
        assert np.array_equal(restored.tables.k_vector(kind),
                              model.tables.k_vector(kind))


def test_checkpoint_rejects_foreign_embedding(checkpoint_setup, tmp_path):
    _, ckpt, embedding, _ = checkpoint_setup
    other = EmbeddingMatrix(
        vectors=embedding.vectors + 1.0,
        tokens=embedding.tokens,
        vocabChecksum=embedding.vocabChecksum,
    )
    with pytest.raises(ChecksumMismatch, match="does not match"):
        read_checkpoint(ckpt, other)
    relabeled = EmbeddingMatrix(
        vectors=embedding.vectors,
        tokens=embedding.tokens,
        vocabChecksum="f" * 64,
    )
    with pytest.raises(ChecksumMismatch, match="vocabulary"):
        read_checkpoint(ckpt, relabeled)


def test_checkpoint_rejects_tampered_code_tables(checkpoint_setup):
    model, ckpt, embedding, _ = checkpoint_setup
    lines = ckpt.read_text().splitlines()
    for i, line in enumerate(lines):
        if line.startswith("T.number="):
            bits = line.split("=", 1)[1].split(" ")
            bits[0] = "1" if bits[0] == "0" else "0"
            lines[i] = "T.number=" + " ".join(bits)
            break
    ckpt.write_text("\n".join(lines) + "\n")
    with pytest.raises(ChecksumMismatch, match="disagrees with tablesSeed"):
        read_checkpoint(ckpt, embedding)


def test_checkpoint_requires_header_fields(checkpoint_setup):
    _, ckpt, embedding, _ = checkpoint_setup
    lines = [ln for ln in ckpt.read_text().splitlines()
             if not ln.startswith("fit=")]
    ckpt.write_text("\n".join(lines) + "\n")
    with pytest.raises(InputContractError, match="missing fit"):
        read_checkpoint(ckpt, embedding)


# ---------------------------------------------------------------------------
# warnings and reports
# ---------------------------------------------------------------------------

def sample_warnings():
    return [
        Warning(origin=("a.js", 3, 0), pattern="swapped-args",
                probability=0.987654321, snippetSummary="ID:f(ID:a, ID:b)",
                suggestedFix="ID:f(ID:b, ID:a)"),
        Warning(origin=("b dir/c.js", 1, 4), pattern="wrong-operator",
                probability=0.5, snippetSummary="ID:a < LIT:2",
                suggestedFix=None),
    ]


def test_warning_record_format():
    record = warning_record(sample_warnings()[0])
    fields = record.split("\t")
    assert fields[0] == "0.987654"
    assert fields[1] == "swapped-args"
    assert fields[2:5] == ["a.js", "3", "0"]
    assert unescape_field(fields[5]) == "ID:f(ID:a, ID:b)"
    assert unescape_field(fields[6]) == "ID:f(ID:b, ID:a)"


def test_warnings_round_trip(tmp_path):
    path = tmp_path / "warnings.tsv"
    originals = sample_warnings()
    write_warnings(path, originals, configChecksum="z")
    loaded = read_warnings(path)
    assert len(loaded) == 2
    assert loaded[0].probability == pytest.approx(0.987654)
    assert loaded[0].suggestedFix == "ID:f(ID:b, ID:a)"
    assert loaded[1].suggestedFix is None
    assert loaded[1].origin == ("b dir/c.js", 1, 4)


def test_render_warnings():
    text = render_warnings(sample_warnings())
    assert text.startswith("1. p=0.987654 [swapped-args] a.js:3:0\n")
    assert "   suggested fix: ID:f(ID:b, ID:a)" in text
    assert "2. p=0.500000 [wrong-operator] b dir/c.js:1:4" in text
    assert render_warnings([]) == "no warnings above threshold\n"


def test_eval_report_round_trip(tmp_path):
    path = tmp_path / "eval.json"
    report = EvalReport(accuracy=0.875,
                        perThreshold=((0.5, 0.75, 3), (0.9, 0.25, 0)),
                        cPos=8, cNeg=8)
    write_eval_report(path, report, configChecksum="q" * 64)
    doc = json.loads(path.read_text())
    assert set(doc) == {"accuracy", "perThreshold", "counts", "config"}
    assert doc["counts"] == {"C_pos": 8, "C_neg": 8}
    assert doc["perThreshold"][0] == {"t": 0.5, "recall": 0.75, "fps": 3}
    assert read_eval_report(path) == report
    rendered = render_eval_report(report)
    assert "accuracy 0.875000" in rendered
    assert "t=0.90 recall=0.250000 fps=0" in rendered


# ---------------------------------------------------------------------------
# ground truth and corpora
# ---------------------------------------------------------------------------

def test_ground_truth_round_trip(tmp_path):
    path = tmp_path / "ground_truth.tsv"
    entries = (
        GroundTruthEntry("file0000.js", 14, 0, "swapped-args", "arg-swap"),
        GroundTruthEntry("file0001.js", 20, 9, "wrong-operator", "op:<-><="),
    )
    write_ground_truth(path, entries)
    assert read_ground_truth(path) == entries


def test_load_corpus_from_directory(tmp_path):
    corpus_dir = tmp_path / "corpus"
    write_corpus_dir(corpus_dir, [
        ("b.js", "g(x, y);\n"),
        ("a.js", "f(a, b);\n"),
        ("broken.js", "var = ;\n"),
    ])
    (corpus_dir / "notes.txt").write_text("not source")
    sources, failures = load_corpus(str(corpus_dir))
    assert [sf.fileId for sf in sources] == ["a.js", "b.js"]
    assert sources[0].source == "f(a, b);\n"
    assert [fid for fid, _ in failures] == ["broken.js"]


def test_load_corpus_from_manifest(tmp_path):
    manifest = tmp_path / "corpus.jsonl"
    docs = [
        {"fileId": "z.js", "ast": export_ast(parse("f(a, b);"))},
        {"fileId": "a.js", "ast": export_ast(parse("var x = 1;"))},
        {"fileId": "bad.js", "ast": {"type": "Program"}},
    ]
    manifest.write_text("\n".join(json.dumps(d) for d in docs) + "\n")
    sources, failures = load_corpus(str(manifest))
    assert [sf.fileId for sf in sources] == ["a.js", "z.js"]
    assert all(sf.source == "" for sf in sources)
    assert [fid for fid, _ in failures] == ["bad.js"]


def test_load_corpus_rejects_other_paths(tmp_path):
    stray = tmp_path / "file.txt"
    stray.write_text("hello")
    with pytest.raises(InputContractError, match="corpus directory"):
        load_corpus(str(stray))


def test_fmt_real_is_stable_under_round_trip():
    rng = np.random.default_rng(1)
    for value in rng.normal(size=200):
        rendered = fmt_real(value)
        assert fmt_real(float(rendered)) == rendered
