"""SAT-backed abductive and contrastive explanations for random forests.

The pipeline: load a forest (`model_io`), abstract its feature space into
propositional variables (`abstraction`), compile forest plus instance into CNF
(`encoder`), then extract or enumerate minimal explanations against an
incremental SAT oracle (`oracle`, `explain`). `verify` holds independent
brute-force ground truth used by the test suite and the --verify flag.
"""

from .abstraction import Abstraction, SoftLiteral, build_abstraction, soft_literals
from .encoder import CnfEncoding, EncoderOptions, encode, encode_for_instance
from .explain import (
    ABDUCTIVE,
    CONTRASTIVE,
    Explanation,
    ExplanationError,
    InstanceResult,
    enumerate_explanations,
    explain_dataset,
    explain_instance,
    extract_axp,
    extract_cxp,
    format_report,
)
from .model import (
    Forest,
    FeatureSpec,
    Instance,
    Leaf,
    ModelError,
    Split,
    predict,
    predict_index,
    predict_tree,
    vote_counts,
)
from .model_io import LoadError, load_dataset, load_instances, load_model, dumps_model, save_model
from .oracle import EmbeddedOracle, OracleError, SubprocessOracle, make_oracle

__all__ = [
    "ABDUCTIVE",
    "CONTRASTIVE",
    "Abstraction",
    "CnfEncoding",
    "EmbeddedOracle",
    "EncoderOptions",
    "Explanation",
    "ExplanationError",
    "Forest",
    "FeatureSpec",
    "Instance",
    "InstanceResult",
    "Leaf",
    "LoadError",
    "ModelError",
    "OracleError",
    "SoftLiteral",
    "Split",
    "SubprocessOracle",
    "build_abstraction",
    "dumps_model",
    "encode",
    "encode_for_instance",
    "enumerate_explanations",
    "explain_dataset",
    "explain_instance",
    "extract_axp",
    "extract_cxp",
    "format_report",
    "load_dataset",
    "load_instances",
    "load_model",
    "make_oracle",
    "predict",
    "predict_index",
    "predict_tree",
    "save_model",
    "soft_literals",
    "vote_counts",
]

__version__ = "0.1.0"
