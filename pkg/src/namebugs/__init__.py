"""namebugs: learn name-based bug detectors from a code corpus.

The pipeline extracts likely-correct snippets (function calls and binary
expressions) from a corpus, seeds likely-incorrect counterparts by small
mutations (swapped arguments, replaced operator, replaced operand), learns
identifier embeddings from token contexts, trains one feedforward binary
classifier per pattern, and ranks warnings on unseen code by predicted
probability.

Heavy numeric loops are compiled with numba when it is available; set
NAMEBUGS_BACKEND=numpy to force the pure-numpy fallback (or =numba to
require the compiled kernels).
"""

from .embeddings import (CbowConfig, EmbeddingMatrix, build_cbow_dataset,
                         cosine, nearest, random_embedding, train_cbow)
from .detector import (DetectorModel, EvalReport, Warning, evaluate,
                       generate_examples, scan, train_detector)
from .frontend import (AstNode, OperatorAlphabet, SourceFile, Token,
                       export_ast, ingest_ast, parse, tokenize)
from .naming import (Vocabulary, build_vocabulary, coverage_curve,
                     embedding_token_stream, extract_name)
from .neuralnet import FitConfig, Mlp, fit, gradient_check, predict
from .patterns import (BinOpExample, CallSiteExample, EncodingTables,
                       represent)
from .synthcorpus import ConventionSpec, generate

__version__ = "0.1.0"

__all__ = [
    "AstNode", "BinOpExample", "CallSiteExample", "CbowConfig",
    "ConventionSpec", "DetectorModel", "EmbeddingMatrix", "EncodingTables",
    "EvalReport", "FitConfig", "Mlp", "OperatorAlphabet", "SourceFile",
    "Token", "Vocabulary", "Warning", "build_cbow_dataset",
    "build_vocabulary", "cosine", "coverage_curve", "embedding_token_stream",
    "evaluate", "export_ast", "extract_name", "fit", "generate",
    "generate_examples", "gradient_check", "ingest_ast", "nearest", "parse",
    "predict", "random_embedding", "represent", "scan", "tokenize",
    "train_cbow", "train_detector",
]
