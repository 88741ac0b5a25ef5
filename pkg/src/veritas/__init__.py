"""Portuguese fake-news classification pipeline.

Stop-word removal, stemming or lemmatization, capped TF-IDF vocabularies,
L2 normalization and linear SVM / 3-NN / leaf-limited decision tree
classifiers, plus a harness that runs the full 9 x 3 experiment matrix.
"""

from veritas.errors import ConfigError, DataError, PipelineError, VeritasError
from veritas.labels import Label

__version__ = "0.1.0"

__all__ = ["ConfigError", "DataError", "Label", "PipelineError", "VeritasError", "__version__"]
