import html
import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reprolens.errors import EmptySnippetSet
from reprolens.ingest import (
    DEFAULT_KEYWORDS,
    DumpStats,
    QuestionPost,
    combine_snippets,
    extract_code_blocks,
    filter_issue_question,
    html_to_text,
    parse_posts_dump,
    question_record,
    snippets_of,
)


def row(post_id, post_type="1", tags="<java>", body="<p>x</p>", title="T", **extra):
    attrs = {
        "Id": str(post_id),
        "PostTypeId": post_type,
        "Body": html.escape(body),
        "Title": html.escape(title),
        "Tags": html.escape(tags),
        "Score": "3",
        "AnswerCount": "2",
        "CreationDate": "2023-01-02T03:04:05.000",
    }
    attrs.update(extra)
    inner = " ".join(f'{k}="{v}"' for k, v in attrs.items())
    return f"  <row {inner} />"


def dump_bytes(rows):
    text = '<?xml version="1.0" encoding="utf-8"?>\n<posts>\n' + "\n".join(rows) + "\n</posts>\n"
    return text.encode("utf-8")


def make_post(body_html, title="How to fix", tags=("java",)):
    return QuestionPost(1, title, body_html, tuple(tags), 0, 0, False, "")


class TestParsePostsDump:
    def test_single_question_passes_filter_tag(self):
        stats = DumpStats()
        posts = list(parse_posts_dump(io.BytesIO(dump_bytes([row(1)])), "java", stats=stats))
        assert len(posts) == 1
        assert posts[0].id == 1
        assert posts[0].tags == ("java",)
        assert stats.warnings == 0

    def test_answers_are_dropped(self):
        posts = list(
            parse_posts_dump(io.BytesIO(dump_bytes([row(2, post_type="2")])), "java")
        )
        assert posts == []

    def test_three_questions_one_tagged(self):
        rows = [
            row(1, tags="<python>"),
            row(2, tags="<java><swing>"),
            row(3, tags="<c#>"),
        ]
        stats = DumpStats()
        posts = list(parse_posts_dump(io.BytesIO(dump_bytes(rows)), "java", stats=stats))
        assert [p.id for p in posts] == [2]
        assert stats.warnings == 0
        assert stats.questions == 3

    def test_malformed_row_is_skipped_with_warning(self):
        rows = [row(1), '  <row Id="2" PostTypeId="1" Body="broken >', row(3)]
        stats = DumpStats()
        posts = list(parse_posts_dump(io.BytesIO(dump_bytes(rows)), "java", stats=stats))
        assert [p.id for p in posts] == [1, 3]
        assert stats.warnings == 1

    def test_attribute_metadata_is_decoded(self):
        r = row(7, body="<pre><code>int x;</code></pre>", AcceptedAnswerId="9")
        post = next(parse_posts_dump(io.BytesIO(dump_bytes([r])), "java"))
        assert post.has_accepted_answer
        assert post.score == 3
        assert post.answer_count == 2
        assert "<pre><code>" in post.body_html

    def test_slash_gt_inside_attribute_value(self):
        # '/>' inside a quoted Body must not terminate the row early
        r = row(5, body="a /> b")
        post = next(parse_posts_dump(io.BytesIO(dump_bytes([r])), "java"))
        assert "a /> b" in post.body_html

    def test_buffer_size_invariance(self):
        rows = [row(i, tags="<java>") for i in range(1, 30)]
        rows.insert(4, '  <row Id="99" PostTypeId="1" Tags="<java>" oops >')
        data = dump_bytes(rows)
        outcomes = []
        for buffer_size in (7, 64, 1024, len(data) + 10):
            stats = DumpStats()
            posts = list(
                parse_posts_dump(io.BytesIO(data), "java", buffer_size=buffer_size, stats=stats)
            )
            outcomes.append(([p.id for p in posts], stats.warnings))
        assert all(o == outcomes[0] for o in outcomes)
        assert outcomes[0][1] == 1  # the malformed row warns at every buffer size

    def test_unreadable_source_raises(self):
        with pytest.raises(OSError):
            list(parse_posts_dump("/nonexistent/Posts.xml", "java"))


class TestExtractCodeBlocks:
    def test_single_block(self):
        assert extract_code_blocks("<pre><code>int x;</code></pre>") == ["int x;"]

    def test_inline_code_excluded(self):
        assert extract_code_blocks("use <code>foo()</code> here") == []

    def test_two_blocks_document_order(self):
        body = "<p>a</p><pre><code>first();</code></pre><p>b</p><pre><code>second();</code></pre>"
        assert extract_code_blocks(body) == ["first();", "second();"]

    def test_entities_decoded(self):
        body = "<pre><code>if (a &lt; b &amp;&amp; c &gt; d) { s = &quot;x&quot;; }</code></pre>"
        assert extract_code_blocks(body) == ['if (a < b && c > d) { s = "x"; }']

    def test_numeric_character_reference(self):
        assert extract_code_blocks("<pre><code>a;&#xA;b;</code></pre>") == ["a;\nb;"]

    def test_interior_blank_lines_kept(self):
        body = "<pre><code>\na;\n\nb;\n</code></pre>"
        assert extract_code_blocks(body) == ["a;\n\nb;"]

    def test_garbage_degrades_to_empty(self):
        assert extract_code_blocks("<pre><code>unclosed") in ([], ["unclosed"])
        assert extract_code_blocks("<<<>>>") == []

    @given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=200))
    @settings(max_examples=60, deadline=None)
    def test_extract_encode_extract_idempotent(self, code):
        code = code.strip("\n")
        wrapped = f"<pre><code>{html.escape(code)}</code></pre>"
        first = extract_code_blocks(wrapped)
        if not first:
            return
        rewrapped = f"<pre><code>{html.escape(first[0])}</code></pre>"
        assert extract_code_blocks(rewrapped) == first


class TestFilterIssueQuestion:
    def test_keyword_present(self):
        post = make_post(
            "<p>I get a NullPointerException error</p><pre><code>int x;</code></pre>",
            title="help",
        )
        assert filter_issue_question(post)

    def test_no_keyword(self):
        post = make_post(
            "<p>How to write idiomatic code?</p><pre><code>int x;</code></pre>",
            title="style question",
        )
        assert not filter_issue_question(post)

    def test_keyword_without_code_block_fails(self):
        post = make_post("<p>I found a bug</p>", title="bug")
        assert not filter_issue_question(post)

    def test_whole_word_matching(self):
        post = make_post(
            "<p>prefix and suffix</p><pre><code>int x;</code></pre>", title="words"
        )
        assert not filter_issue_question(post, keywords=("fix",))
        post2 = make_post(
            "<p>please fix this</p><pre><code>int x;</code></pre>", title="words"
        )
        assert filter_issue_question(post2, keywords=("fix",))

    def test_title_is_searched_too(self):
        post = make_post("<pre><code>int x;</code></pre>", title="Strange error here")
        assert filter_issue_question(post)

    @given(
        extra=st.lists(st.text(alphabet="abcdefg", min_size=1, max_size=6), max_size=4)
    )
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_keywords(self, extra):
        post = make_post(
            "<p>the crash happens on start</p><pre><code>int x;</code></pre>"
        )
        base = tuple(DEFAULT_KEYWORDS)
        if filter_issue_question(post, base):
            assert filter_issue_question(post, base + tuple(extra))


class TestCombineSnippets:
    def test_singleton(self):
        assert combine_snippets(["a;"]) == "a;"

    def test_two_blocks(self):
        assert combine_snippets(["a;", "b;"]) == "a;\n\nb;"

    def test_loc_additivity_fixed(self):
        blocks = ["a;\nb;", "c;\nd;\ne;", "f;\ng;\nh;\ni;"]
        combined = combine_snippets(blocks)
        loc = sum(1 for line in combined.splitlines() if line.strip())
        assert loc == 2 + 3 + 4

    def test_empty_list_rejected(self):
        with pytest.raises(EmptySnippetSet):
            combine_snippets([])

    @given(
        st.lists(
            st.lists(
                st.sampled_from(["x;", "y();", "", "  ", "z = 1;"]), min_size=1, max_size=6
            ).map("\n".join),
            min_size=1,
            max_size=5,
        )
    )
    @settings(max_examples=80, deadline=None)
    def test_loc_additivity_property(self, blocks):
        combined = combine_snippets(blocks)
        loc = sum(1 for line in combined.splitlines() if line.strip())
        member = sum(
            sum(1 for line in b.splitlines() if line.strip()) for b in blocks
        )
        assert loc == member


class TestQuestionRecord:
    def test_record_shape(self):
        post = make_post(
            "<p>this error</p><pre><code>a;</code></pre><pre><code>b;\nc;</code></pre>"
        )
        rec = question_record(post)
        assert rec["id"] == 1
        assert rec["snippets"] == ["a;", "b;\nc;"]
        assert rec["loc"] == [1, 2]
        assert set(rec) >= {
            "id", "title", "tags", "snippets", "loc", "score",
            "answer_count", "has_accepted_answer",
        }

    def test_blank_only_blocks_dropped(self):
        post = make_post("<p>error</p><pre><code>  \n\n</code></pre><pre><code>x;</code></pre>")
        snips = snippets_of(post)
        assert [s.text for s in snips] == ["x;"]
        assert snips[0].index == 0

    def test_html_to_text_decodes(self):
        assert html_to_text("<p>a &lt; b</p>") == "a < b"
