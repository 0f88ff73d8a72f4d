import os

import pytest

from tokenscope.registry import default_catalog

# The suite is hermetic: shipped fixtures, scripted backends, loopback stubs.
# Ambient service configuration must not leak in.
for _var in (
    "FIXTURE_MODE",
    "LLM_API_BASE",
    "LLM_API_KEY",
    "CALLER_MODEL",
    "REASONER_MODEL",
    "JUDGE_MODEL",
    "MARKET_API_BASE",
    "EXPLORER_API_BASE",
    "TOKEN_DIRECTORY_BASE",
    "NEWS_API_BASE",
    "SEARCH_API_BASE",
    "ANALYZER_PATH",
):
    os.environ.pop(_var, None)


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()
