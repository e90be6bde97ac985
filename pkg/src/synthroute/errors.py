"""Exception hierarchy shared across the package.

Service code maps these onto HTTP status codes; library code raises them
directly.
"""


class SynthRouteError(Exception):
    """Base class for all package errors."""

    code = "internal_error"


# --- SMILES parsing ---------------------------------------------------------


class SmilesParseError(SynthRouteError, ValueError):
    code = "smiles_parse_error"


class EmptyInputError(SmilesParseError):
    code = "empty_input"


class UnmatchedRingError(SmilesParseError):
    code = "unmatched_ring"


class UnbalancedParenError(SmilesParseError):
    code = "unbalanced_paren"


class UnknownAtomSymbolError(SmilesParseError):
    code = "unknown_atom_symbol"


class LengthMismatchError(SynthRouteError, ValueError):
    code = "length_mismatch"


# --- route tree -------------------------------------------------------------


class NodeNotFoundError(SynthRouteError, KeyError):
    code = "node_not_found"


class ParentNotFoundError(NodeNotFoundError):
    code = "parent_not_found"


class ReactantMismatchError(SynthRouteError, ValueError):
    code = "reactant_mismatch"


class CannotRemoveRootError(SynthRouteError, ValueError):
    code = "cannot_remove_root"


class RootHasNoProductError(SynthRouteError, ValueError):
    code = "root_has_no_product"


class ComparisonFullError(SynthRouteError, ValueError):
    code = "comparison_full"


# --- ranking ----------------------------------------------------------------


class EmptyInputListError(SynthRouteError, ValueError):
    code = "empty_input"


class InvalidWeightsError(SynthRouteError, ValueError):
    code = "invalid_weights"


# --- projection / embedding -------------------------------------------------


class EmptyTextError(SynthRouteError, ValueError):
    code = "empty_text"


class TooFewPointsError(SynthRouteError, ValueError):
    code = "too_few_points"


class BadPerplexityError(SynthRouteError, ValueError):
    code = "bad_perplexity"


# --- providers --------------------------------------------------------------


class ProviderUnavailableError(SynthRouteError, RuntimeError):
    code = "provider_unavailable"


class FullTextUnavailableError(SynthRouteError, RuntimeError):
    code = "fulltext_unavailable"


class ExtractionFailedError(SynthRouteError, RuntimeError):
    code = "extraction_failed"


# --- extraction pipeline ----------------------------------------------------


class MalformedAfterRetriesError(SynthRouteError, RuntimeError):
    code = "malformed_after_retries"


class EmptyContextError(SynthRouteError, ValueError):
    code = "empty_context"


class EmptyHistoryError(SynthRouteError, ValueError):
    code = "empty_history"


# --- service ----------------------------------------------------------------


class WorkspaceNotFoundError(SynthRouteError, KeyError):
    code = "workspace_not_found"


class PaperNotFoundError(SynthRouteError, KeyError):
    code = "paper_not_found"


class SearchPendingError(SynthRouteError, RuntimeError):
    code = "search_pending"


class JobNotFoundError(SynthRouteError, KeyError):
    code = "job_not_found"


class JobCanceledError(SynthRouteError, RuntimeError):
    code = "job_canceled"
