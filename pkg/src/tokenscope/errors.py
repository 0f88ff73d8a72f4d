"""Exception hierarchy shared across the engine."""


class TokenscopeError(Exception):
    """Base class for all engine errors."""


class ConfigurationError(TokenscopeError):
    """A backend/client descriptor or config file is invalid or incomplete."""


class BackendUnavailableError(TokenscopeError):
    """Transport to an LLM backend failed after all retries, or a scripted
    backend was exhausted with exhausted_policy=error."""


class BackendTimeoutError(TokenscopeError):
    """An LLM backend call exceeded its deadline."""


class ProtocolError(TokenscopeError):
    """An LLM backend returned a payload that does not match the wire schema."""


class CatalogError(TokenscopeError):
    """A tool catalog document failed validation."""


class JudgeUnavailableError(TokenscopeError):
    """The judge produced no parsable scores and the policy is 'fail'."""


class DatasetError(TokenscopeError):
    """An evaluation dataset failed validation."""


class TokenNotFoundError(TokenscopeError):
    """A token symbol or name could not be resolved by a data source."""


class UpstreamError(TokenscopeError):
    """An external data service failed (network, rate limit, 5xx)."""


class FixtureMissError(UpstreamError):
    """Fixture replay mode had no recorded response for the request."""


class SourceUnavailableError(TokenscopeError):
    """The contract at the given address has no verified source code."""


class AnalyzerUnavailableError(TokenscopeError):
    """The static analyzer executable is not installed or not configured."""


class AnalysisFailedError(TokenscopeError):
    """The static analyzer exited abnormally without usable output."""


class SessionBusyError(TokenscopeError):
    """A message was posted to a session that is already running one."""


class SessionNotFoundError(TokenscopeError):
    """No session exists with the given id."""
