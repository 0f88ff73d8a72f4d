"""Report agents: staged fetch -> structure -> analyze pipelines over the LLM
gateway and the external feed clients."""

from .events import HistoricalEventRecord, he_analyze, he_fetch, he_report
from .news import NewsDigest, NewsItem, cn_analyze, cn_fetch, cn_report
from .project import ProjectReport, pb_critique, pb_gather, pb_report, pb_synthesize
from .shared import load_template, parse_json_payload

__all__ = [
    "HistoricalEventRecord",
    "NewsDigest",
    "NewsItem",
    "ProjectReport",
    "cn_analyze",
    "cn_fetch",
    "cn_report",
    "he_analyze",
    "he_fetch",
    "he_report",
    "load_template",
    "parse_json_payload",
    "pb_critique",
    "pb_gather",
    "pb_report",
    "pb_synthesize",
]
