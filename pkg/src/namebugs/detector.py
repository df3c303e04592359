"""End-to-end detector: train a per-pattern classifier over generated
pairs, scan unseen files for ranked warnings, and score predictions over
seeded bugs.
"""

from dataclasses import dataclass, field

import numpy as np

from . import neuralnet
from .errors import ChecksumMismatch, DimensionMismatch, InputContractError, InsufficientData
from .frontend.ast import SourceFile
from .patterns import (
    GENERATORS,
    CallSiteExample,
    input_dim,
    represent,
)
from .textutil import derive_seed


@dataclass(eq=False)
class DetectorModel:
    pattern: str
    mlp: neuralnet.Mlp
    embedding: object  # EmbeddingMatrix
    tables: object     # EncodingTables
    fitConfig: neuralnet.FitConfig
    vocabChecksum: str
    embeddingChecksum: str = ""
    configChecksum: str = ""

    def __post_init__(self):
        if self.embedding.vocabChecksum != self.vocabChecksum:
            raise ChecksumMismatch(
                "embedding was built from a different vocabulary "
                f"({self.embedding.vocabChecksum[:12]} != "
                f"{self.vocabChecksum[:12]})"
            )
        expected = input_dim(self.pattern, self.embedding.e,
                             self.tables.alphabet)
        if self.mlp.inputDim != expected:
            raise DimensionMismatch(
                f"{self.pattern} representation is {expected}-wide but the "
                f"classifier expects {self.mlp.inputDim}"
            )


@dataclass(frozen=True)
class Warning:
    origin: tuple  # (fileId, line, column)
    pattern: str
    probability: float
    snippetSummary: str
    suggestedFix: str = None


@dataclass
class EvalReport:
    accuracy: float
    perThreshold: tuple  # of (t, recall, fps)
    cPos: int
    cNeg: int


def _iter_corpus(corpus):
    """Normalize to (fileId, ast) sorted by fileId."""
    units = []
    for item in corpus:
        if isinstance(item, SourceFile):
            units.append((item.fileId, item.ast))
        else:
            units.append((item[0], item[1]))
    return sorted(units, key=lambda u: u[0])


def generate_examples(corpus, pattern, seed):
    """Run the pattern's generator over every file with derived seeds."""
    if pattern not in GENERATORS:
        raise InputContractError(f"unknown pattern {pattern!r}")
    generator = GENERATORS[pattern]
    pairs = []
    for fileId, ast in _iter_corpus(corpus):
        pairs.extend(
            generator(ast, derive_seed(seed, fileId), fileId=fileId)
        )
    return pairs


def _summarize(example):
    if isinstance(example, CallSiteExample):
        return (
            f"{example.callee}({example.arg1}, {example.arg2})"
            f" base={example.base}"
            f" types=({example.typeArg1},{example.typeArg2})"
            f" params=({example.param1},{example.param2})"
        )
    return (
        f"{example.left} {example.op} {example.right}"
        f" types=({example.typeLeft},{example.typeRight})"
        f" context=({example.kindParent},{example.kindGrandParent})"
    )


def _vectorize(examples, model):
    return np.array(
        [represent(ex, model.embedding, model.tables,
                   expect_e=model.embedding.e) for ex in examples]
    )


def pairs_from_flat(examples):
    """Re-pair a flat positive/negative-interleaved example list."""
    if len(examples) % 2 != 0:
        raise InputContractError("example list has an odd number of records")
    pairs = []
    for i in range(0, len(examples), 2):
        pos, neg = examples[i], examples[i + 1]
        if pos.label != "positive" or neg.label != "negative" \
                or pos.origin != neg.origin:
            raise InputContractError(
                f"records {i} and {i + 1} do not form a positive/negative "
                f"pair for one origin")
        pairs.append((pos, neg))
    return pairs


def flatten_pairs(pairs):
    out = []
    for pos, neg in pairs:
        out.append(pos)
        out.append(neg)
    return out


def train_detector(corpusTrain, pattern, embedding, tables, fitConfig,
                   genSeed=None, configChecksum=""):
    """Fit the pattern's classifier: positives label 0, negatives label 1."""
    if genSeed is None:
        genSeed = fitConfig.seed
    pairs = generate_examples(corpusTrain, pattern, genSeed)
    return train_from_pairs(pairs, pattern, embedding, tables, fitConfig,
                            configChecksum=configChecksum)


def train_from_pairs(pairs, pattern, embedding, tables, fitConfig,
                     configChecksum=""):
    if 2 * len(pairs) < 2 * fitConfig.batchSize:
        raise InsufficientData(
            f"{2 * len(pairs)} examples < {2 * fitConfig.batchSize} required"
        )
    mlp = neuralnet.init(
        input_dim(pattern, embedding.e, tables.alphabet),
        fitConfig.hiddenDim,
        fitConfig.seed,
    )
    model = DetectorModel(
        pattern=pattern,
        mlp=mlp,
        embedding=embedding,
        tables=tables,
        fitConfig=fitConfig,
        vocabChecksum=embedding.vocabChecksum,
        configChecksum=configChecksum,
    )
    data = []
    for pos, neg in pairs:
        data.append((represent(pos, embedding, tables), 0))
        data.append((represent(neg, embedding, tables), 1))
    neuralnet.fit(mlp, data, fitConfig)
    return model


def scan(corpusNew, model, threshold):
    """Warnings for unmodified snippets scoring above the threshold,
    sorted by probability descending with origin as the tie-break."""
    if not 0 <= threshold <= 1:
        raise InputContractError("threshold must be in [0, 1]")
    warnings = []
    for fileId, ast in _iter_corpus(corpusNew):
        pairs = GENERATORS[model.pattern](ast, 0, fileId=fileId)
        candidates = [pos for pos, _ in pairs]
        if not candidates:
            continue
        probs = neuralnet.predict_batch(model.mlp,
                                        _vectorize(candidates, model))
        for example, prob in zip(candidates, probs):
            if prob > threshold:
                fix = None
                if isinstance(example, CallSiteExample):
                    fix = f"{example.callee}({example.arg2}, {example.arg1})"
                warnings.append(Warning(
                    origin=example.origin,
                    pattern=model.pattern,
                    probability=float(prob),
                    snippetSummary=_summarize(example),
                    suggestedFix=fix,
                ))
    warnings.sort(key=lambda w: (-w.probability, w.origin))
    return warnings


def compute_metrics(pos_probs, neg_probs, thresholds):
    """Counting-rule metrics over detector outputs.

    accuracy uses the fixed 0.5 cut: positives count when strictly below,
    negatives when at-or-above. Each threshold t flags predictions
    strictly above t; recall is flagged-negatives over all negatives and
    fps is the flagged-positive count.
    """
    pos = [float(p) for p in pos_probs]
    neg = [float(p) for p in neg_probs]
    if not pos and not neg:
        raise InputContractError("no predictions to score")
    correct = sum(1 for p in pos if p < 0.5) + sum(1 for p in neg if p >= 0.5)
    accuracy = correct / (len(pos) + len(neg))
    per_threshold = []
    for t in thresholds:
        flagged_neg = sum(1 for p in neg if p > t)
        flagged_pos = sum(1 for p in pos if p > t)
        recall = flagged_neg / len(neg) if neg else 0.0
        per_threshold.append((t, recall, flagged_pos))
    return EvalReport(
        accuracy=accuracy,
        perThreshold=tuple(per_threshold),
        cPos=len(pos),
        cNeg=len(neg),
    )


def evaluate(corpusVal, model, thresholds, seed=0):
    """Generate pairs over the corpus, predict both sides, count per the
    metric rules."""
    if not thresholds:
        raise InputContractError("thresholds must be non-empty")
    for t in thresholds:
        if not 0 <= t <= 1:
            raise InputContractError("thresholds must be in [0, 1]")
    pairs = generate_examples(corpusVal, model.pattern, seed)
    if 2 * len(pairs) < 2 * model.fitConfig.batchSize:
        raise InsufficientData(
            f"{2 * len(pairs)} examples < "
            f"{2 * model.fitConfig.batchSize} required"
        )
    pos_probs = neuralnet.predict_batch(
        model.mlp, _vectorize([p for p, _ in pairs], model))
    neg_probs = neuralnet.predict_batch(
        model.mlp, _vectorize([n for _, n in pairs], model))
    return compute_metrics(pos_probs, neg_probs, thresholds)
