"""Learn shallow-transfer rules from small parallel corpora with extended
alignment templates, and apply them with a word-for-word fallback."""

__version__ = "0.1.0"
