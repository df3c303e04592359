"""Run configuration: one JSON file drives every pipeline stage.

The resolved config (file values plus command-line overrides) is rendered
to a canonical JSON form and hashed; every stage output embeds that
checksum and downstream stages refuse inputs produced under a different
one.
"""

import json
import os
from dataclasses import dataclass, field, fields

from .embeddings import CbowConfig
from .errors import InputContractError
from .neuralnet import FitConfig
from .patterns import PATTERNS
from .textutil import sha256_text

DEFAULT_THRESHOLDS = (0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass
class RunConfig:
    trainCorpus: str
    validateCorpus: str = ""
    vocabCap: int = 10000
    cbow: CbowConfig = field(default_factory=CbowConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    tablesSeed: int = 0
    pattern: str = "swapped-args"
    thresholds: tuple = DEFAULT_THRESHOLDS
    outDir: str = "out"

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise InputContractError(
                f"pattern must be one of {', '.join(PATTERNS)}; "
                f"got {self.pattern!r}")
        self.thresholds = tuple(float(t) for t in self.thresholds)
        if not self.thresholds:
            raise InputContractError("thresholds must be non-empty")
        for t in self.thresholds:
            if not 0.0 <= t <= 1.0:
                raise InputContractError("thresholds must be in [0, 1]")
        if self.vocabCap < 3:
            raise InputContractError(
                "vocabCap must be at least 3 (two reserved rows plus one)")


def _dataclass_from(cls, doc, where):
    if not isinstance(doc, dict):
        raise InputContractError(f"{where} must be an object")
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InputContractError(
            f"{where} has unknown fields: {', '.join(unknown)}")
    return cls(**doc)


def load_config(path, overrides=None):
    """Read the JSON config file and fold in CLI overrides.

    Recognized overrides: seed (rewrites cbow.seed, fit.seed and
    tablesSeed), vocabCap, pattern, outDir.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise InputContractError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputContractError(f"{path}: not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise InputContractError(f"{path}: config must be a JSON object")

    allowed = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InputContractError(
            f"{path}: unknown config fields: {', '.join(unknown)}")
    if "trainCorpus" not in doc:
        raise InputContractError(f"{path}: trainCorpus is required")

    overrides = overrides or {}
    for key in ("vocabCap", "pattern", "outDir"):
        if overrides.get(key) is not None:
            doc[key] = overrides[key]
    cbow_doc = dict(doc.get("cbow", {}))
    fit_doc = dict(doc.get("fit", {}))
    if overrides.get("seed") is not None:
        seed = int(overrides["seed"])
        cbow_doc["seed"] = seed
        fit_doc["seed"] = seed
        doc["tablesSeed"] = seed

    doc["cbow"] = _dataclass_from(CbowConfig, cbow_doc, "cbow")
    doc["fit"] = _dataclass_from(FitConfig, fit_doc, "fit")
    return RunConfig(**doc)


def canonical_json(config):
    doc = {
        "trainCorpus": config.trainCorpus,
        "validateCorpus": config.validateCorpus,
        "vocabCap": config.vocabCap,
        "cbow": {
            "window": config.cbow.window, "dim": config.cbow.dim,
            "epochs": config.cbow.epochs,
            "learningRate": config.cbow.learningRate,
            "seed": config.cbow.seed, "objective": config.cbow.objective,
        },
        "fit": {
            "epochs": config.fit.epochs, "batchSize": config.fit.batchSize,
            "dropoutRate": config.fit.dropoutRate,
            "learningRate": config.fit.learningRate,
            "rmspropDecay": config.fit.rmspropDecay,
            "rmspropEpsilon": config.fit.rmspropEpsilon,
            "seed": config.fit.seed, "hiddenDim": config.fit.hiddenDim,
        },
        "tablesSeed": config.tablesSeed,
        "pattern": config.pattern,
        "thresholds": list(config.thresholds),
        # outDir is deliberately absent: where artifacts land does not
        # change what they contain, and the checksum binds content only.
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def config_checksum(config):
    return sha256_text(canonical_json(config) + "\n")


# Stage artifact locations inside outDir; one place owns the names.

def streams_path(config):
    return os.path.join(config.outDir, "streams.txt")


def vocab_path(config):
    return os.path.join(config.outDir, "vocab.txt")


def embedding_path(config, random_baseline=False):
    name = "embedding.random.txt" if random_baseline else "embedding.txt"
    return os.path.join(config.outDir, name)


def examples_path(config, pattern=None):
    return os.path.join(config.outDir,
                        f"examples.{pattern or config.pattern}.txt")


def checkpoint_path(config, pattern=None):
    return os.path.join(config.outDir,
                        f"detector.{pattern or config.pattern}.txt")


def warnings_path(config, pattern=None):
    return os.path.join(config.outDir,
                        f"warnings.{pattern or config.pattern}.txt")


def eval_report_path(config, pattern=None):
    return os.path.join(config.outDir,
                        f"eval.{pattern or config.pattern}.json")


def coverage_path(config):
    return os.path.join(config.outDir, "coverage.txt")
