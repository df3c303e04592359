"""Detector training, scanning, and the counting-rule metrics."""

import numpy as np
import pytest

from namebugs.detector import (
    DetectorModel,
    EvalReport,
    Warning,
    compute_metrics,
    evaluate,
    flatten_pairs,
    generate_examples,
    pairs_from_flat,
    scan,
    train_detector,
)
from namebugs.embeddings import random_embedding
from namebugs.errors import (
    ChecksumMismatch,
    DimensionMismatch,
    InputContractError,
    InsufficientData,
)
from namebugs.frontend import parse, tokenize
from namebugs.frontend.ast import SourceFile, default_alphabet
from namebugs.naming import build_vocabulary, embedding_token_stream
from namebugs.neuralnet import FitConfig, Mlp, init
from namebugs.patterns import EncodingTables, input_dim


# ---------------------------------------------------------------------------
# fixtures: a small mixed corpus and models trained on it
# ---------------------------------------------------------------------------

def file_source(f):
    lines = [f"function update(left{f}, right{f}) {{ return left{f}; }}"]
    for s in range(4):
        lines.append(f"update(a{f}x{s}, b{f}x{s});")
        lines.append(f"var v{f}x{s} = a{f}x{s} < b{f}x{s};")
    return "\n".join(lines)


def build_corpus(n_files, prefix="train"):
    out = []
    for f in range(n_files):
        fid = f"{prefix}{f:03d}.js"
        out.append((fid, parse(file_source(f), fileId=fid)))
    return out


@pytest.fixture(scope="module")
def setup():
    corpus = build_corpus(10)
    streams = [embedding_token_stream(tokenize(file_source(f)))
               for f in range(10)]
    vocab = build_vocabulary(streams, 500)
    embedding = random_embedding(vocab, 16, seed=2)
    tables = EncodingTables(3)
    cfg = FitConfig(epochs=2, batchSize=10, seed=5, hiddenDim=8)
    return corpus, vocab, embedding, tables, cfg


@pytest.fixture(scope="module")
def swap_model(setup):
    corpus, _, embedding, tables, cfg = setup
    return train_detector(corpus, "swapped-args", embedding, tables, cfg)


@pytest.fixture(scope="module")
def binop_model(setup):
    corpus, _, embedding, tables, cfg = setup
    return train_detector(corpus, "wrong-operator", embedding, tables, cfg)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def test_metric_example_counts():
    report = compute_metrics([0.2, 0.7], [0.8, 0.4], [0.5])
    assert report.accuracy == 0.5
    assert report.perThreshold == ((0.5, 0.5, 1),)
    assert (report.cPos, report.cNeg) == (2, 2)


def test_metric_boundaries_are_strict():
    # positive at exactly 0.5 is a miss, negative at exactly 0.5 is a hit
    report = compute_metrics([0.5], [0.5], [0.5])
    assert report.accuracy == 0.5
    # flagging is strictly-above: a score equal to the threshold stays quiet
    assert report.perThreshold == ((0.5, 0.0, 0),)


def test_metric_against_brute_force():
    rng = np.random.default_rng(0)
    thresholds = [0.5, 0.6, 0.7, 0.8, 0.9]
    for _ in range(50):
        pos = list(rng.random(int(rng.integers(1, 30))))
        neg = list(rng.random(int(rng.integers(1, 30))))
        pos += [0.5, 0.7]  # exact boundary values
        neg += [0.5, 0.9]
        report = compute_metrics(pos, neg, thresholds)
        correct = sum(p < 0.5 for p in pos) + sum(p >= 0.5 for p in neg)
        assert report.accuracy == correct / (len(pos) + len(neg))
        for t, recall, fps in report.perThreshold:
            assert recall == sum(p > t for p in neg) / len(neg)
            assert fps == sum(p > t for p in pos)


def test_metric_requires_predictions():
    with pytest.raises(InputContractError):
        compute_metrics([], [], [0.5])
    report = compute_metrics([0.4], [], [0.5])
    assert report.perThreshold == ((0.5, 0.0, 0),)  # no negatives, recall 0


# ---------------------------------------------------------------------------
# pair bookkeeping
# ---------------------------------------------------------------------------

def test_pair_flattening_round_trip(setup):
    corpus, *_ = setup
    pairs = generate_examples(corpus, "swapped-args", 1)
    assert pairs_from_flat(flatten_pairs(pairs)) == pairs


def test_pairs_from_flat_validates(setup):
    corpus, *_ = setup
    pairs = generate_examples(corpus, "swapped-args", 1)
    flat = flatten_pairs(pairs)
    with pytest.raises(InputContractError):
        pairs_from_flat(flat[:3])  # odd length
    with pytest.raises(InputContractError):
        pairs_from_flat([flat[1], flat[0]])  # labels reversed
    with pytest.raises(InputContractError):
        pairs_from_flat([flat[0], flat[3]])  # origins differ


def test_generate_examples_sorted_and_seeded(setup):
    corpus, *_ = setup
    pairs = generate_examples(corpus, "wrong-operator", 9)
    assert pairs == generate_examples(list(reversed(corpus)),
                                      "wrong-operator", 9)
    origins = [pos.origin for pos, _ in pairs]
    assert origins == sorted(origins)
    other = generate_examples(corpus, "wrong-operator", 10)
    assert any(a[1].op != b[1].op for a, b in zip(pairs, other))
    with pytest.raises(InputContractError):
        generate_examples(corpus, "swapped-arguments", 0)


def test_generate_examples_accepts_source_file_records():
    src = "f(a, b);"
    as_tuple = [("x.js", parse(src, fileId="x.js"))]
    as_record = [SourceFile(fileId="x.js", ast=parse(src, fileId="x.js"),
                            source=src)]
    assert generate_examples(as_tuple, "swapped-args", 0) == \
        generate_examples(as_record, "swapped-args", 0)


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

def test_train_insufficient_data(setup):
    _, _, embedding, tables, _ = setup
    corpus = build_corpus(1)
    cfg = FitConfig(epochs=1, batchSize=100, seed=0, hiddenDim=4)
    with pytest.raises(InsufficientData):
        train_detector(corpus, "swapped-args", embedding, tables, cfg)
    empty = [("e.js", parse("var x = 1;", fileId="e.js"))]
    cfg_small = FitConfig(epochs=1, batchSize=1, seed=0, hiddenDim=4)
    with pytest.raises(InsufficientData):
        train_detector(empty, "swapped-args", embedding, tables, cfg_small)


def test_model_rejects_checksum_mismatch(setup, swap_model):
    _, _, embedding, tables, cfg = setup
    with pytest.raises(ChecksumMismatch):
        DetectorModel(
            pattern="swapped-args",
            mlp=swap_model.mlp,
            embedding=embedding,
            tables=tables,
            fitConfig=cfg,
            vocabChecksum="0" * 64,
        )


def test_model_rejects_width_mismatch(setup):
    _, _, embedding, tables, cfg = setup
    with pytest.raises(DimensionMismatch):
        DetectorModel(
            pattern="swapped-args",
            mlp=init(10, 4, seed=0),
            embedding=embedding,
            tables=tables,
            fitConfig=cfg,
            vocabChecksum=embedding.vocabChecksum,
        )


def test_train_is_deterministic(setup):
    corpus, _, embedding, tables, cfg = setup
    a = train_detector(corpus, "wrong-operand", embedding, tables, cfg)
    b = train_detector(corpus, "wrong-operand", embedding, tables, cfg)
    for (_, pa), (_, pb) in zip(a.mlp.parameters(), b.mlp.parameters()):
        assert np.array_equal(pa, pb)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def test_evaluate_reports_counts(setup, swap_model):
    held = build_corpus(5, prefix="held")
    report = evaluate(held, swap_model, [0.5, 0.7], seed=1)
    assert isinstance(report, EvalReport)
    assert report.cPos == report.cNeg == 20  # 4 call sites x 5 files
    assert 0.0 <= report.accuracy <= 1.0
    assert [t for t, _, _ in report.perThreshold] == [0.5, 0.7]


def test_evaluate_validates_thresholds(setup, swap_model):
    held = build_corpus(3, prefix="held")
    with pytest.raises(InputContractError):
        evaluate(held, swap_model, [], seed=0)
    with pytest.raises(InputContractError):
        evaluate(held, swap_model, [1.5], seed=0)


def test_evaluate_insufficient_data(swap_model):
    tiny = build_corpus(1, prefix="tiny")  # 8 examples < 2 x batchSize 10
    with pytest.raises(InsufficientData):
        evaluate(tiny, swap_model, [0.5], seed=0)


# ---------------------------------------------------------------------------
# scanning
# ---------------------------------------------------------------------------

def constant_half_model(setup, pattern):
    """All-zero classifier: every candidate scores exactly 0.5."""
    _, _, embedding, tables, cfg = setup
    width = input_dim(pattern, embedding.e, tables.alphabet)
    mlp = Mlp(W1=np.zeros((4, width)), b1=np.zeros(4),
              W2=np.zeros((1, 4)), b2=np.zeros(1))
    return DetectorModel(
        pattern=pattern, mlp=mlp, embedding=embedding, tables=tables,
        fitConfig=cfg, vocabChecksum=embedding.vocabChecksum,
    )


def test_scan_threshold_is_strict(setup):
    model = constant_half_model(setup, "swapped-args")
    corpus = build_corpus(2, prefix="new")
    assert scan(corpus, model, 0.5) == []  # 0.5 is not above 0.5
    hits = scan(corpus, model, 0.4)
    assert len(hits) == 8
    assert all(w.probability == 0.5 for w in hits)


def test_scan_ties_sort_by_origin(setup):
    model = constant_half_model(setup, "swapped-args")
    corpus = build_corpus(3, prefix="new")
    hits = scan(corpus, model, 0.0)
    assert [w.origin for w in hits] == sorted(w.origin for w in hits)


def test_scan_orders_by_probability(setup, swap_model):
    corpus = build_corpus(6, prefix="new")
    hits = scan(corpus, swap_model, 0.0)
    probs = [w.probability for w in hits]
    assert probs == sorted(probs, reverse=True)
    assert len(hits) == 24  # every candidate clears threshold 0


def test_scan_high_threshold_is_subset(setup, swap_model):
    corpus = build_corpus(6, prefix="new")
    low = {w.origin for w in scan(corpus, swap_model, 0.3)}
    high = {w.origin for w in scan(corpus, swap_model, 0.7)}
    assert high <= low
    assert scan(corpus, swap_model, 1.0) == []


def test_scan_suggested_fix_only_for_call_sites(setup, swap_model,
                                                binop_model):
    corpus = [("n.js", parse("g(alpha, beta);\nvar q = alpha < beta;",
                             fileId="n.js"))]
    call_hits = scan(corpus, swap_model, 0.0)
    assert len(call_hits) == 1
    assert call_hits[0].suggestedFix == "ID:g(ID:beta, ID:alpha)"
    assert "ID:g(ID:alpha, ID:beta)" in call_hits[0].snippetSummary
    binop_hits = scan(corpus, binop_model, 0.0)
    assert len(binop_hits) == 1
    assert binop_hits[0].suggestedFix is None
    assert "ID:alpha < ID:beta" in binop_hits[0].snippetSummary
    assert binop_hits[0].pattern == "wrong-operator"


def test_scan_skips_unextractable_sites(setup, swap_model):
    corpus = [("n.js", parse("f(a);\nf(a + b, c);\nf(a, a);", fileId="n.js"))]
    assert scan(corpus, swap_model, 0.0) == []


def test_scan_is_repeatable(setup, binop_model):
    corpus = build_corpus(4, prefix="new")
    assert scan(corpus, binop_model, 0.2) == scan(corpus, binop_model, 0.2)


def test_scan_validates_threshold(setup, swap_model):
    with pytest.raises(InputContractError):
        scan([], swap_model, 1.2)
    with pytest.raises(InputContractError):
        scan([], swap_model, -0.1)


def test_warning_is_a_value_object():
    w = Warning(origin=("a.js", 1, 0), pattern="swapped-args",
                probability=0.9, snippetSummary="s", suggestedFix=None)
    assert w == Warning(origin=("a.js", 1, 0), pattern="swapped-args",
                        probability=0.9, snippetSummary="s",
                        suggestedFix=None)
