"""News-archive JSON ingestion: records, filtering, prompts, metadata.

Archive responses carry a response.docs array (one file per month). A
generation prompt is the headline, a separator, and the first three
whitespace-delimited words of the lead paragraph.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime

from .lexical import MetricError
from .tables import MetricTable, percentages

DEFAULT_SEPARATOR = "\n"
PROMPT_LEAD_WORDS = 3

_TZ_NO_COLON = re.compile(r"([+-]\d{2})(\d{2})$")


class ArchiveError(Exception):
    """Malformed archive JSON."""


@dataclass(slots=True)
class ArticleRecord:
    headline: str
    lead_paragraph: str
    section_name: str
    type_of_material: str
    pub_date: str
    url: str

    @property
    def doc_id(self) -> str:
        return self.url or self.headline


@dataclass(slots=True)
class Prompt:
    doc_id: str
    text: str
    short: bool  # lead paragraph had fewer than three words


def _parse_date(value: str) -> datetime | None:
    if not value:
        return None
    normalized = _TZ_NO_COLON.sub(r"\1:\2", value.replace("Z", "+00:00"))
    try:
        return datetime.fromisoformat(normalized)
    except ValueError:
        return None


def parse_archive_json(data: bytes | str) -> list[ArticleRecord]:
    """One ArticleRecord per doc; missing optional fields become ""."""
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ArchiveError(f"malformed JSON: {exc}") from None
    response = payload.get("response")
    if not isinstance(response, dict) or "docs" not in response:
        raise ArchiveError("missing response.docs array")
    docs = response["docs"]
    if not isinstance(docs, list):
        raise ArchiveError("response.docs is not an array")
    records: list[ArticleRecord] = []
    for doc in docs:
        headline = doc.get("headline") or {}
        records.append(
            ArticleRecord(
                headline=headline.get("main", "") if isinstance(headline, dict) else "",
                lead_paragraph=doc.get("lead_paragraph") or "",
                section_name=doc.get("section_name") or "",
                type_of_material=doc.get("type_of_material") or "",
                pub_date=doc.get("pub_date") or "",
                url=doc.get("web_url") or "",
            )
        )
    return records


def filter_articles(
    records: list[ArticleRecord],
    date_from: str | None = None,
    date_to: str | None = None,
) -> list[ArticleRecord]:
    """Drop records whose lead paragraph is empty after trimming, and
    optionally restrict to an inclusive publication-date range."""
    lo = _parse_date(date_from) if date_from else None
    hi = _parse_date(date_to) if date_to else None
    kept: list[ArticleRecord] = []
    for rec in records:
        if not rec.lead_paragraph.strip():
            continue
        if lo is not None or hi is not None:
            pub = _parse_date(rec.pub_date)
            if pub is None:
                continue
            pub = pub.replace(tzinfo=None)
            if lo is not None and pub < lo.replace(tzinfo=None):
                continue
            if hi is not None and pub > hi.replace(tzinfo=None):
                continue
        kept.append(rec)
    return kept


def build_prompt(
    record: ArticleRecord, separator: str = DEFAULT_SEPARATOR
) -> Prompt:
    """Headline + separator + first three words of the lead paragraph."""
    words = record.lead_paragraph.split()
    head = words[:PROMPT_LEAD_WORDS]
    return Prompt(
        doc_id=record.doc_id,
        text=record.headline + separator + " ".join(head),
        short=len(words) < PROMPT_LEAD_WORDS,
    )


def summarize_metadata(
    records: list[ArticleRecord],
) -> tuple[MetricTable, MetricTable]:
    """Percentage tables over section_name and type_of_material."""
    if not records:
        raise MetricError("empty corpus")
    sections: dict[str, int] = {}
    materials: dict[str, int] = {}
    for rec in records:
        sections[rec.section_name] = sections.get(rec.section_name, 0) + 1
        materials[rec.type_of_material] = materials.get(rec.type_of_material, 0) + 1
    return (
        percentages(sections, "section_name"),
        percentages(materials, "type_of_material"),
    )
