"""eua: a workbench for equational algebra over finite enrichment bases."""

__version__ = "0.1.0"
