"""Posts-dump ingestion: streaming XML rows, code-block extraction, filtering.

The dump reader scans for ``<row .../>`` elements with a quote-aware state
machine and parses each row on its own, so one malformed row is skipped with
a counted warning instead of aborting the stream, and memory stays
independent of dump size.
"""

from __future__ import annotations

import codecs
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import EmptySnippetSet, ReproLensError

DEFAULT_BUFFER_SIZE = 65536

# the first four terms are the established issue markers; the rest are a
# configurable extension recorded in every output artifact for provenance
CORE_KEYWORDS = ("error", "issue", "exception", "fix")
DEFAULT_KEYWORDS = CORE_KEYWORDS + ("fail", "crash", "bug", "wrong", "unexpected")


@dataclass(frozen=True)
class QuestionPost:
    id: int
    title: str
    body_html: str
    tags: tuple[str, ...]
    score: int
    answer_count: int
    has_accepted_answer: bool
    created_at: str


@dataclass(frozen=True)
class CodeSnippet:
    question_id: int
    index: int
    text: str
    loc: int

    def __post_init__(self) -> None:
        actual = sum(1 for line in self.text.splitlines() if line.strip())
        if self.loc != actual or self.loc < 1:
            raise ReproLensError(f"snippet loc {self.loc} does not match text ({actual})")


@dataclass
class DumpStats:
    rows_seen: int = 0
    questions: int = 0
    yielded: int = 0
    warnings: int = 0
    warning_messages: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings += 1
        if len(self.warning_messages) < 50:
            self.warning_messages.append(message)


_TAG_RE = re.compile(r"<([^<>]+)>")


def _parse_tags(raw: str) -> tuple[str, ...]:
    found = _TAG_RE.findall(raw)
    if not found and "|" in raw:
        found = [t for t in raw.split("|") if t]
    return tuple(t.lower() for t in found)


def _row_to_post(elem: ET.Element) -> QuestionPost | None:
    """Build a QuestionPost from a row element; None for non-questions."""
    attrs = elem.attrib
    if attrs.get("PostTypeId") != "1":
        return None
    return QuestionPost(
        id=int(attrs["Id"]),
        title=attrs.get("Title", ""),
        body_html=attrs.get("Body", ""),
        tags=_parse_tags(attrs.get("Tags", "")),
        score=int(attrs.get("Score", "0")),
        answer_count=int(attrs.get("AnswerCount", "0")),
        has_accepted_answer="AcceptedAnswerId" in attrs,
        created_at=attrs.get("CreationDate", ""),
    )


def _scan_rows(chunks: Iterable[str]) -> Iterator[str]:
    """Yield complete ``<row ...>`` element texts from a stream of text chunks.

    Quote state is tracked so ``/>`` inside attribute values never terminates
    a row early.
    """
    buf = ""
    for chunk in chunks:
        buf += chunk
        pos = 0
        while True:
            start = buf.find("<row", pos)
            if start < 0:
                # keep a tail in case '<row' straddles the chunk boundary
                buf = buf[max(len(buf) - 8, pos):]
                break
            after = start + 4
            if after < len(buf) and buf[after] not in " \t\r\n/>":
                pos = after  # '<rowdy...' or similar, not a row element
                continue
            end = _row_end(buf, after)
            if end < 0:
                buf = buf[start:]
                break
            yield buf[start:end]
            pos = end
    # any residue is an unterminated fragment; callers count it as malformed
    if buf.lstrip().startswith("<row"):
        yield buf


def _row_end(buf: str, i: int) -> int:
    """Offset one past the end of the row element starting before i, or -1.

    A raw ``<row`` at the start of a following line is illegal inside an
    attribute value, so it doubles as a resync point after a truncated row:
    the fragment up to it is returned (and will fail to parse, counting as
    one malformed row) and scanning resumes at the new element.
    """
    quote = ""
    n = len(buf)
    while i < n:
        c = buf[i]
        if c == "\n":
            j = i + 1
            while j < n and buf[j] in " \t":
                j += 1
            if buf.startswith("<row", j):
                return i
        if quote:
            if c == quote:
                quote = ""
        elif c in "\"'":
            quote = c
        elif c == "/" and buf.startswith("/>", i):
            return i + 2
        elif c == ">":
            # non-self-closing row: scan for the matching close tag
            close = buf.find("</row>", i)
            return -1 if close < 0 else close + 6
        i += 1
    return -1


def _decode_chunks(source: IO[bytes], buffer_size: int) -> Iterator[str]:
    decoder = codecs.getincrementaldecoder("utf-8")(errors="replace")
    while True:
        block = source.read(buffer_size)
        if not block:
            break
        yield decoder.decode(block)
    tail = decoder.decode(b"", final=True)
    if tail:
        yield tail


def parse_posts_dump(
    source: IO[bytes] | str | Path,
    tag_filter: str,
    buffer_size: int = DEFAULT_BUFFER_SIZE,
    stats: DumpStats | None = None,
) -> Iterator[QuestionPost]:
    """Stream question posts carrying tag_filter from a Posts.xml-style dump.

    Accepts a path or a binary file object. Malformed rows are skipped and
    counted on ``stats``; an unreadable source raises.
    """
    if stats is None:
        stats = DumpStats()
    tag = tag_filter.lower()

    def run(fh: IO[bytes]) -> Iterator[QuestionPost]:
        for row_text in _scan_rows(_decode_chunks(fh, buffer_size)):
            stats.rows_seen += 1
            try:
                elem = ET.fromstring(row_text)
            except ET.ParseError as exc:
                stats.warn(f"row {stats.rows_seen}: {exc}")
                continue
            try:
                post = _row_to_post(elem)
            except (KeyError, ValueError) as exc:
                stats.warn(f"row {stats.rows_seen}: bad attributes: {exc!r}")
                continue
            if post is None:
                continue
            stats.questions += 1
            if tag in post.tags:
                stats.yielded += 1
                yield post

    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            yield from run(fh)
    else:
        yield from run(source)


# -- code block extraction ---------------------------------------------------


class _CodeBlockParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.pre_depth = 0
        self.code_depth = 0
        self.blocks: list[str] = []
        self._current: list[str] | None = None

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag == "pre":
            self.pre_depth += 1
        elif tag == "code" and self.pre_depth > 0:
            if self.code_depth == 0:
                self._current = []
            self.code_depth += 1

    def handle_endtag(self, tag: str) -> None:
        if tag == "pre":
            self.pre_depth = max(0, self.pre_depth - 1)
        elif tag == "code" and self.code_depth > 0:
            self.code_depth -= 1
            if self.code_depth == 0 and self._current is not None:
                self.blocks.append("".join(self._current))
                self._current = None

    def handle_data(self, data: str) -> None:
        if self._current is not None and self.pre_depth > 0:
            self._current.append(data)


def extract_code_blocks(body_html: str) -> list[str]:
    """Code-block texts in document order: ``<code>`` nested under ``<pre>``.

    Inline code outside ``<pre>`` is excluded. Leading and trailing newlines
    of each block are trimmed; interior blank lines are preserved.
    """
    parser = _CodeBlockParser()
    try:
        parser.feed(body_html)
        parser.close()
    except Exception:  # noqa: BLE001 - unparseable HTML degrades to no blocks
        return []
    return [b.strip("\n") for b in parser.blocks]


class _TextParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []

    def handle_starttag(self, tag: str, attrs) -> None:
        self.parts.append("\n")  # keep word boundaries across elements

    def handle_endtag(self, tag: str) -> None:
        self.parts.append("\n")

    def handle_data(self, data: str) -> None:
        self.parts.append(data)


def html_to_text(body_html: str) -> str:
    """Entity-decoded text content of an HTML fragment."""
    parser = _TextParser()
    try:
        parser.feed(body_html)
        parser.close()
    except Exception:  # noqa: BLE001
        return body_html
    return "".join(parser.parts).strip()


def snippets_of(post: QuestionPost) -> list[CodeSnippet]:
    """Retained snippets of a post: extracted blocks with at least one
    non-blank line, numbered in document order."""
    out = []
    for text in extract_code_blocks(post.body_html):
        loc = sum(1 for line in text.splitlines() if line.strip())
        if loc >= 1:
            out.append(CodeSnippet(post.id, len(out), text, loc))
    return out


# -- filtering and combining ---------------------------------------------------


def filter_issue_question(
    post: QuestionPost, keywords: Iterable[str] = DEFAULT_KEYWORDS
) -> bool:
    """True iff the question discusses an issue and carries a code block.

    Matching is case-insensitive whole-word over title plus decoded body
    text, so "fix" does not fire on "prefix".
    """
    keywords = tuple(keywords)
    if not keywords:
        raise ReproLensError("keyword list must be non-empty")
    if not snippets_of(post):
        return False
    haystack = (post.title + "\n" + html_to_text(post.body_html)).lower()
    return any(re.search(rf"\b{re.escape(kw)}\b", haystack) for kw in keywords)


def combine_snippets(snippets: list[str]) -> str:
    """Concatenate blocks in document order, one blank line between them.

    The result's non-blank line count is the sum of the members'.
    """
    if not snippets:
        raise EmptySnippetSet("no snippets to combine")
    return "\n\n".join(s.rstrip("\n") for s in snippets)


# -- JSONL output ------------------------------------------------------------------


def question_record(post: QuestionPost) -> dict:
    """The JSON-lines record for one retained question."""
    snippets = snippets_of(post)
    return {
        "id": post.id,
        "title": post.title,
        "tags": list(post.tags),
        "snippets": [s.text for s in snippets],
        "loc": [s.loc for s in snippets],
        "score": post.score,
        "answer_count": post.answer_count,
        "has_accepted_answer": post.has_accepted_answer,
        # extra context field: the decoded question text, needed downstream
        # by the exception-handling assessment
        "question_text": post.title + "\n" + html_to_text(post.body_html),
    }


def write_questions_jsonl(records: Iterable[dict], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
            n += 1
    return n
