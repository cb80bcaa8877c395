"""Archive JSON ingestion, date filtering, prompts, metadata tables."""

from __future__ import annotations

import pytest

from corpusdiff.archive import (
    ArchiveError,
    ArticleRecord,
    build_prompt,
    filter_articles,
    parse_archive_json,
    summarize_metadata,
)
from corpusdiff.lexical import MetricError


def record(**kwargs) -> ArticleRecord:
    defaults = dict(
        headline="Headline",
        lead_paragraph="Some words of lead text",
        section_name="Science",
        type_of_material="News",
        pub_date="2020-01-01T00:00:00+0000",
        url="https://example.com/a",
    )
    defaults.update(kwargs)
    return ArticleRecord(**defaults)


def test_parse_sample_archive(data_dir) -> None:
    records = parse_archive_json((data_dir / "archive.json").read_text())
    assert len(records) == 5
    assert records[0].headline == "Mars Landing"
    assert records[0].doc_id == records[0].url
    assert records[1].lead_paragraph == ""  # key absent -> empty string


def test_parse_rejects_bad_payloads() -> None:
    with pytest.raises(ArchiveError, match="malformed JSON"):
        parse_archive_json("{not json")
    with pytest.raises(ArchiveError, match="missing response.docs"):
        parse_archive_json('{"response": {}}')
    with pytest.raises(ArchiveError, match="not an array"):
        parse_archive_json('{"response": {"docs": 5}}')


def test_filter_drops_empty_leads(data_dir) -> None:
    records = parse_archive_json((data_dir / "archive.json").read_text())
    kept = filter_articles(records)
    # the missing-lead and whitespace-lead articles are gone
    assert [r.headline for r in kept] == [
        "Mars Landing", "Markets Brief", "New Telescope Opens Its Eye",
    ]


def test_filter_date_range_is_inclusive() -> None:
    records = [
        record(pub_date="2020-01-15T10:00:00+0000", url="a"),
        record(pub_date="2020-02-01T00:00:00+0000", url="b"),
        record(pub_date="2020-03-01T00:00:00+0000", url="c"),
    ]
    kept = filter_articles(
        records, date_from="2020-01-15T10:00:00", date_to="2020-02-01T00:00:00"
    )
    assert [r.url for r in kept] == ["a", "b"]


def test_filter_unparseable_date_dropped_only_with_range() -> None:
    records = [record(pub_date="not-a-date")]
    assert filter_articles(records) == records
    assert filter_articles(records, date_from="2020-01-01") == []


def test_prompt_is_headline_plus_three_words() -> None:
    rec = record(
        headline="Mars Landing",
        lead_paragraph="The rover touched down safely",
    )
    prompt = build_prompt(rec)
    assert prompt.text == "Mars Landing\nThe rover touched"
    assert prompt.short is False


def test_prompt_with_exactly_three_words_not_short() -> None:
    prompt = build_prompt(record(lead_paragraph="Exactly three words"))
    assert prompt.text.endswith("Exactly three words")
    assert prompt.short is False


def test_prompt_short_flag() -> None:
    prompt = build_prompt(record(lead_paragraph="Two words"))
    assert prompt.short is True
    assert prompt.text.endswith("Two words")


def test_prompt_custom_separator() -> None:
    prompt = build_prompt(record(headline="H", lead_paragraph="a b c"), separator=" | ")
    assert prompt.text == "H | a b c"


def test_doc_id_falls_back_to_headline() -> None:
    assert record(url="").doc_id == "Headline"


def test_metadata_percentages() -> None:
    records = [
        record(section_name="A"), record(section_name="A"),
        record(section_name="B"), record(section_name="C"),
    ]
    sections, materials = summarize_metadata(records)
    assert dict(sections.rows) == {
        "A": pytest.approx(50.0), "B": pytest.approx(25.0), "C": pytest.approx(25.0),
    }
    assert dict(materials.rows) == {"News": pytest.approx(100.0)}
    with pytest.raises(MetricError):
        summarize_metadata([])
