"""HTML text, link, and image extraction."""

from histoseek.htmltools import (
    extract_image_refs,
    extract_links,
    extract_text,
    parse_page,
)

BASE = "http://site.test/sports/page.html"


class TestExtractText:
    def test_tags_stripped_whitespace_collapsed(self):
        html = "<p>Cricket   match\n\ttoday</p>"
        assert extract_text(html) == "Cricket match today"

    def test_entities_decoded(self):
        assert extract_text("<p>a&amp;b &lt;c&gt;</p>") == "a&b <c>"

    def test_script_and_style_content_dropped(self):
        html = (
            "<style>.x{color:red}</style>"
            "<script>var cricket = 'cricket';</script>"
            "<p>bat</p>"
        )
        assert extract_text(html) == "bat"

    def test_stray_close_tag_does_not_eat_later_text(self):
        html = "</script><p>visible</p></style>more"
        assert extract_text(html) == "visible more"

    def test_unclosed_tags_tolerated(self):
        assert extract_text("<p>one<div>two") == "one two"

    def test_bytes_input_decoded_as_utf8(self):
        assert extract_text("<p>café</p>".encode()) == "café"

    def test_attribute_values_are_not_text(self):
        html = '<a href="cricket.html" title="cricket">link</a>'
        assert extract_text(html) == "link"


class TestExtractLinks:
    def test_relative_resolved_against_base(self):
        assert extract_links('<a href="scores.html">s</a>', BASE) == [
            "http://site.test/sports/scores.html"
        ]

    def test_root_relative_and_parent_paths(self):
        html = '<a href="/about">a</a><a href="../news/">b</a>'
        assert extract_links(html, BASE) == [
            "http://site.test/about",
            "http://site.test/news/",
        ]

    def test_fragment_stripped(self):
        html = '<a href="page.html#results">x</a>'
        assert extract_links(html, BASE) == ["http://site.test/sports/page.html"]

    def test_fragment_only_href_resolves_to_self(self):
        assert extract_links('<a href="#top">x</a>', BASE) == [BASE]

    def test_mailto_and_javascript_dropped(self):
        html = (
            '<a href="mailto:team@site.test">m</a>'
            '<a href="javascript:void(0)">j</a>'
            '<a href="ftp://site.test/f">f</a>'
        )
        assert extract_links(html, BASE) == []

    def test_absolute_https_kept(self):
        html = '<a href="https://other.test/x">x</a>'
        assert extract_links(html, BASE) == ["https://other.test/x"]

    def test_duplicates_collapse_to_first_seen(self):
        html = (
            '<a href="a.html">1</a>'
            '<a href="b.html">2</a>'
            '<a href="a.html#frag">3</a>'
        )
        assert extract_links(html, BASE) == [
            "http://site.test/sports/a.html",
            "http://site.test/sports/b.html",
        ]

    def test_anchor_without_href_ignored(self):
        assert extract_links("<a name='x'>y</a>", BASE) == []


class TestExtractImageRefs:
    def test_img_src_resolved(self):
        html = '<img src="pics/one.png" alt="one">'
        assert extract_image_refs(html, BASE) == [
            "http://site.test/sports/pics/one.png"
        ]

    def test_self_closing_img_collected(self):
        html = '<img src="a.png"/><img src="b.png" />'
        assert extract_image_refs(html, BASE) == [
            "http://site.test/sports/a.png",
            "http://site.test/sports/b.png",
        ]

    def test_repeated_src_deduplicated(self):
        html = '<img src="logo.png"><p>x</p><img src="logo.png">'
        assert extract_image_refs(html, BASE) == [
            "http://site.test/sports/logo.png"
        ]

    def test_data_uri_dropped(self):
        html = '<img src="data:image/png;base64,AAAA">'
        assert extract_image_refs(html, BASE) == []

    def test_img_without_src_ignored(self):
        assert extract_image_refs('<img alt="decor">', BASE) == []


class TestParsePage:
    def test_single_pass_collects_everything(self):
        html = (
            "<h1>Cricket news</h1>"
            '<a href="next.html">next</a>'
            '<img src="shot.jpg">'
        )
        page = parse_page(html, BASE)
        assert page.text == "Cricket news next"
        assert page.links == ["http://site.test/sports/next.html"]
        assert page.image_refs == ["http://site.test/sports/shot.jpg"]

    def test_empty_document(self):
        page = parse_page("", BASE)
        assert page.text == ""
        assert page.links == []
        assert page.image_refs == []
