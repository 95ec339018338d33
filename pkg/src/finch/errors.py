"""Exception hierarchy shared by the engine, the service, and the CLI.

Every error carries a machine-readable ``code`` so the HTTP layer can emit
``{code, message, detail}`` bodies without string matching.
"""

from __future__ import annotations


class FinchError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


class SchemaError(FinchError):
    """Column roles are inconsistent with the table (missing prediction column, bad role string, ...)."""

    code = "schema_error"


class ParseError(FinchError):
    """A cell could not be parsed; ``detail`` carries the offending row/column."""

    code = "parse_error"


class EmptyDataError(FinchError):
    """No usable rows remain after loading."""

    code = "empty_data"


class FeatureNotFoundError(FinchError):
    """A feature name does not exist in the dataset."""

    code = "feature_not_found"


class TargetError(FinchError):
    """Target specification cannot be resolved against the dataset."""

    code = "target_error"


class ChainError(FinchError):
    """Illegal chain mutation (duplicate feature, pop on empty chain, ...)."""

    code = "chain_error"


class CurveError(FinchError):
    """Curves cannot be combined (mismatched x features, bad highlight mode, ...)."""

    code = "curve_error"


class EffectError(FinchError):
    """Effect decomposition is undefined for the given curves."""

    code = "effect_error"


class ViewUnavailableError(FinchError):
    """A view was requested that the loaded data cannot support."""

    code = "view_unavailable"


class DatasetNotFoundError(FinchError):
    """Unknown dataset id."""

    code = "dataset_not_found"


class SessionNotFoundError(FinchError):
    """Unknown session id."""

    code = "session_not_found"
