"""Command-line surface: file-based pipeline stages with stable formats.

Stages write into the config's output directory and verify the config and
vocabulary checksums of everything they read, so artifacts from different
runs cannot be mixed silently.

Exit codes: 0 success, 1 usage error, 2 input-contract violation,
3 internal invariant failure.
"""

import argparse
import json
import os
import sys
import traceback

from . import config as cfgmod
from . import detector, embeddings, fileio, naming, synthcorpus
from .errors import (ChecksumMismatch, InputContractError, InternalError,
                     NamebugsError)
from .frontend import tokenize
from .patterns import PATTERNS, EncodingTables


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sp, *names):
    if "config" in names:
        sp.add_argument("--config", required=True,
                        help="path to the run-config JSON file")
    if "pattern" in names:
        sp.add_argument("--pattern", choices=PATTERNS,
                        help="bug pattern (overrides the config)")
    if "seed" in names:
        sp.add_argument("--seed", type=int,
                        help="override every seed in the config")
    if "vocab-cap" in names:
        sp.add_argument("--vocab-cap", type=int, dest="vocabCap",
                        help="vocabulary size cap (overrides the config)")
    if "out" in names:
        sp.add_argument("--out", help="output directory (overrides config)")


def build_parser():
    parser = _Parser(prog="namebugs",
                     description="Learn name-based bug detectors from a "
                                 "code corpus and scan new code with them.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    sp = sub.add_parser("extract",
                        help="tokenize the training corpus, write token "
                             "streams and the capped vocabulary")
    _add_common(sp, "config", "seed", "vocab-cap", "out")
    sp.set_defaults(handler=cmd_extract)

    sp = sub.add_parser("embed",
                        help="train identifier embeddings from the token "
                             "streams (or draw the random baseline)")
    sp.add_argument("--random", action="store_true",
                    help="write the random-binary baseline instead")
    _add_common(sp, "config", "seed", "out")
    sp.set_defaults(handler=cmd_embed)

    sp = sub.add_parser("gen",
                        help="extract positive examples and seed their "
                             "negative counterparts")
    _add_common(sp, "config", "pattern", "seed", "out")
    sp.set_defaults(handler=cmd_gen)

    sp = sub.add_parser("train",
                        help="fit the per-pattern classifier from the "
                             "examples and embedding files")
    _add_common(sp, "config", "pattern", "seed", "out")
    sp.set_defaults(handler=cmd_train)

    sp = sub.add_parser("scan",
                        help="rank warnings for a corpus with a trained "
                             "detector")
    sp.add_argument("corpus", nargs="?",
                    help="corpus to scan (default: validateCorpus)")
    sp.add_argument("--threshold", type=float, default=0.5,
                    help="report sites scoring strictly above this")
    _add_common(sp, "config", "pattern", "seed", "out")
    sp.set_defaults(handler=cmd_scan)

    sp = sub.add_parser("eval",
                        help="score the detector on seeded bugs and write "
                             "the metrics report")
    sp.add_argument("corpus", nargs="?",
                    help="corpus to evaluate on (default: validateCorpus)")
    _add_common(sp, "config", "pattern", "seed", "out")
    sp.set_defaults(handler=cmd_eval)

    sp = sub.add_parser("similar",
                        help="print the nearest embedding neighbours of a "
                             "token")
    sp.add_argument("token", help="query token, e.g. ID:length or LIT:23")
    sp.add_argument("--k", type=int, default=5, help="neighbours to print")
    sp.add_argument("--random", action="store_true",
                    help="query the random-baseline embedding file")
    _add_common(sp, "config", "out")
    sp.set_defaults(handler=cmd_similar)

    sp = sub.add_parser("vocab-coverage",
                        help="fraction of token occurrences kept at each "
                             "candidate vocabulary cap")
    sp.add_argument("caps", nargs="+", type=int, help="caps to evaluate")
    _add_common(sp, "config", "out")
    sp.set_defaults(handler=cmd_vocab_coverage)

    sp = sub.add_parser("synth",
                        help="generate a synthetic convention corpus with "
                             "a planted-bug ground-truth ledger")
    sp.add_argument("specfile", help="JSON file with the corpus spec")
    sp.add_argument("--out", default="synth-out", help="output directory")
    sp.set_defaults(handler=cmd_synth)

    sp = sub.add_parser("pipeline",
                        help="chain extract, embed, gen, train and eval "
                             "under one config")
    sp.add_argument("corpus", nargs="?",
                    help="evaluation corpus (default: validateCorpus)")
    _add_common(sp, "config", "pattern", "seed", "vocab-cap", "out")
    sp.set_defaults(handler=cmd_pipeline)
    return parser


def _load_config(args):
    overrides = {
        "seed": getattr(args, "seed", None),
        "vocabCap": getattr(args, "vocabCap", None),
        "pattern": getattr(args, "pattern", None),
        "outDir": getattr(args, "out", None),
    }
    config = cfgmod.load_config(args.config, overrides)
    return config, cfgmod.config_checksum(config)


def _require_file(path, hint):
    if not os.path.exists(path):
        raise InputContractError(f"{path} not found; {hint}")
    return path


def _file_config_stamp(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# config="):
                return line[len("# config="):].strip()
    return ""


def _check_config_stamp(path, checksum):
    stamp = _file_config_stamp(path)
    if stamp and stamp != checksum:
        raise ChecksumMismatch(
            f"{path} was produced under config {stamp[:12]}.., current "
            f"config is {checksum[:12]}..")


def _load_sources(path, need_source=False):
    if not path:
        raise InputContractError("no corpus path given")
    if need_source and not os.path.isdir(path):
        raise InputContractError(
            f"{path}: token extraction needs a directory of source files; "
            f"tree manifests carry no source text")
    sources, failures = fileio.load_corpus(path)
    for fileId, message in failures:
        print(f"skipping {fileId}: {message}", file=sys.stderr)
    if not sources and not failures:
        raise InputContractError(f"no input files in {path}")
    if not sources:
        raise InputContractError(
            f"all {len(failures)} input files in {path} failed to parse")
    return sources, failures


def cmd_extract(args):
    config, checksum = _load_config(args)
    sources, failures = _load_sources(config.trainCorpus, need_source=True)
    streams = [
        (sf.fileId, naming.embedding_token_stream(
            tokenize(sf.source, fileId=sf.fileId)))
        for sf in sources
    ]
    vocab = naming.build_vocabulary([s for _, s in streams], config.vocabCap)
    fileio.write_streams(cfgmod.streams_path(config), streams, checksum)
    fileio.write_vocab(cfgmod.vocab_path(config), vocab, checksum)
    print(f"extract: {len(sources)} files ok, {len(failures)} failed")
    print(f"vocabulary: {len(vocab)} rows -> {cfgmod.vocab_path(config)}")
    return 0


def cmd_embed(args):
    config, checksum = _load_config(args)
    vpath = _require_file(cfgmod.vocab_path(config), "run extract first")
    _check_config_stamp(vpath, checksum)
    vocab = fileio.read_vocab(vpath)
    if args.random:
        matrix = embeddings.random_embedding(vocab, config.cbow.dim,
                                             config.cbow.seed)
    else:
        spath = _require_file(cfgmod.streams_path(config),
                              "run extract first")
        _check_config_stamp(spath, checksum)
        streams = fileio.read_streams(spath)
        dataset = embeddings.build_cbow_dataset(
            [tokens for _, tokens in streams], vocab, config.cbow.window)
        matrix = embeddings.train_cbow(dataset, config.cbow, vocab)
        losses = " ".join(f"{v:.6f}" for v in matrix.lossHistory)
        print(f"cbow loss per epoch: {losses}")
    out = cfgmod.embedding_path(config, args.random)
    fileio.write_embedding(out, matrix, checksum)
    print(f"embedding: {len(matrix)} x {matrix.e} -> {out}")
    return 0


def cmd_gen(args):
    config, checksum = _load_config(args)
    vpath = _require_file(cfgmod.vocab_path(config), "run extract first")
    _check_config_stamp(vpath, checksum)
    vocab = fileio.read_vocab(vpath)
    sources, _ = _load_sources(config.trainCorpus)
    pairs = detector.generate_examples(sources, config.pattern,
                                       config.fit.seed)
    flat = detector.flatten_pairs(pairs)
    out = cfgmod.examples_path(config)
    fileio.write_examples(out, config.pattern, flat, vocab.checksum,
                          checksum)
    print(f"examples: {len(pairs)} pairs ({len(flat)} records) -> {out}")
    return 0


def cmd_train(args):
    config, checksum = _load_config(args)
    epath = _require_file(cfgmod.examples_path(config), "run gen first")
    _check_config_stamp(epath, checksum)
    pattern, flat, examples_vocab, _ = fileio.read_examples(epath)
    if pattern != config.pattern:
        raise InputContractError(
            f"{epath} holds {pattern} examples, config selects "
            f"{config.pattern}")
    mpath = _require_file(cfgmod.embedding_path(config), "run embed first")
    _check_config_stamp(mpath, checksum)
    matrix = fileio.read_embedding(mpath)
    if matrix.vocabChecksum != examples_vocab:
        raise ChecksumMismatch(
            f"embedding vocabulary {matrix.vocabChecksum[:12]}.. does not "
            f"match the examples file's {examples_vocab[:12]}..")
    tables = EncodingTables(config.tablesSeed)
    model = detector.train_from_pairs(
        detector.pairs_from_flat(flat), config.pattern, matrix, tables,
        config.fit, configChecksum=checksum)
    out = cfgmod.checkpoint_path(config)
    fileio.write_checkpoint(out, model,
                            embeddingCs=fileio.embedding_checksum(matrix),
                            configChecksum=checksum)
    print(f"detector: {config.pattern} "
          f"({model.mlp.inputDim} -> {model.mlp.hiddenDim} -> 1) -> {out}")
    return 0


def _load_model(config, checksum):
    cpath = _require_file(cfgmod.checkpoint_path(config), "run train first")
    mpath = _require_file(cfgmod.embedding_path(config), "run embed first")
    _check_config_stamp(mpath, checksum)
    matrix = fileio.read_embedding(mpath)
    model = fileio.read_checkpoint(cpath, matrix)
    if model.configChecksum and model.configChecksum != checksum:
        raise ChecksumMismatch(
            f"{cpath} was trained under config "
            f"{model.configChecksum[:12]}.., current config is "
            f"{checksum[:12]}..")
    return model


def cmd_scan(args):
    config, checksum = _load_config(args)
    model = _load_model(config, checksum)
    sources, _ = _load_sources(args.corpus or config.validateCorpus)
    warnings = detector.scan(sources, model, args.threshold)
    out = cfgmod.warnings_path(config)
    fileio.write_warnings(out, warnings, checksum)
    sys.stdout.write(fileio.render_warnings(warnings))
    print(f"{len(warnings)} warnings above t={args.threshold:g} -> {out}")
    return 0


def cmd_eval(args):
    config, checksum = _load_config(args)
    model = _load_model(config, checksum)
    sources, _ = _load_sources(args.corpus or config.validateCorpus)
    report = detector.evaluate(sources, model, config.thresholds, seed=0)
    out = cfgmod.eval_report_path(config)
    fileio.write_eval_report(out, report, checksum)
    sys.stdout.write(fileio.render_eval_report(report))
    print(f"report -> {out}")
    return 0


def cmd_similar(args):
    config, checksum = _load_config(args)
    mpath = _require_file(cfgmod.embedding_path(config, args.random),
                          "run embed first")
    matrix = fileio.read_embedding(mpath)
    for token, similarity in embeddings.nearest(matrix, args.token, args.k):
        print(f"{token}\t{similarity:.6f}")
    return 0


def cmd_vocab_coverage(args):
    config, checksum = _load_config(args)
    spath = _require_file(cfgmod.streams_path(config), "run extract first")
    streams = fileio.read_streams(spath)
    curve = naming.coverage_curve([tokens for _, tokens in streams],
                                  args.caps)
    lines = [f"{cap}\t{fraction:.6f}" for cap, fraction in curve]
    for line in lines:
        print(line)
    with open(cfgmod.coverage_path(config), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def cmd_synth(args):
    with open(args.specfile, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputContractError(
                f"{args.specfile}: not valid JSON: {exc}")
    allowed = {"nameClusters", "callTemplates", "binopTemplates",
               "fileCount", "sitesPerFile", "bugRate", "seed",
               "freshFileRate", "freshMembers"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InputContractError(
            f"{args.specfile}: unknown spec fields: {', '.join(unknown)}")
    spec = synthcorpus.ConventionSpec(**doc)
    corpus = synthcorpus.generate(spec)
    corpus_dir = os.path.join(args.out, "corpus")
    fileio.write_corpus_dir(corpus_dir, corpus.files)
    ledger = os.path.join(args.out, "groundtruth.txt")
    fileio.write_ground_truth(ledger, corpus.groundTruth)
    print(f"synth: {len(corpus.files)} files -> {corpus_dir}")
    print(f"planted bugs: {len(corpus.groundTruth)} -> {ledger}")
    return 0


def cmd_pipeline(args):
    """Convenience chain; each stage behaves exactly as if run alone."""
    args.random = False
    for stage in (cmd_extract, cmd_embed, cmd_gen, cmd_train, cmd_eval):
        code = stage(args)
        if code:
            return code
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args) or 0
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except InputContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NamebugsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
