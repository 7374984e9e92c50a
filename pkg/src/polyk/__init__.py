"""polyk: polytope-complex presentations and their computable K-theoretic shadows."""

__version__ = "0.1.0"
