"""Cross-lingual SRL toolkit: corpus translation by annotation projection
and a language-conditioned BiLSTM-CRF role labeler."""

from . import alignment, corpus, eval, model, postag, projection

__all__ = ["alignment", "corpus", "eval", "model", "postag", "projection"]
__version__ = "0.1.0"
