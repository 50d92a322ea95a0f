import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frlimits.frcode import (
    FrCodeError,
    dominated,
    make_code,
    max_monomial_length,
    min_r_power,
    normalize,
    parse,
    required_truncation,
)


class TestParse:
    def test_sum(self):
        code = parse("rr+frf")
        assert code.terms == (("rr",), ("frf",))
        assert str(code) == "rr+frf"

    def test_exponents_and_intersection(self):
        code = parse("r^2∩f^3")
        assert code.terms == (("rr", "fff"),)
        assert str(code) == "rr&fff"
        assert parse("r^2 & f^3") == code

    def test_bad_letter_offset(self):
        with pytest.raises(FrCodeError) as exc:
            parse("rq+f")
        assert exc.value.offset == 1

    def test_empty_input(self):
        with pytest.raises(FrCodeError):
            parse("")
        with pytest.raises(FrCodeError):
            parse("   ")

    def test_zero_exponent(self):
        with pytest.raises(FrCodeError):
            parse("r^0")

    def test_dangling_plus(self):
        with pytest.raises(FrCodeError):
            parse("r+")

    def test_whitespace_ignored(self):
        assert parse(" r r + f r f ") == parse("rr+frf")

    def test_canonical_order(self):
        # monomials sort by (length, lex with r < f); terms sorted, deduped
        assert str(parse("frf+rr+rr")) == "rr+frf"
        assert str(parse("f+r")) == "r+f"

    def test_byte_offset_after_unicode(self):
        with pytest.raises(FrCodeError) as exc:
            parse("r∩q")
        # '∩' occupies bytes 1..3, so 'q' sits at byte offset 4
        assert exc.value.offset == 4


class TestDominance:
    @pytest.mark.parametrize(
        "v,w,expected",
        [
            ("rff", "rf", True),  # ff ⊆ f
            ("fr", "ff", True),  # r ⊆ f
            ("rf", "ff", True),
            ("rr", "fr", True),
            ("rr", "rf", True),
            ("rr", "rrr", False),  # longer cannot embed
            ("frf", "rr", False),  # only one r available
            ("rr", "frf", False),
            ("rff", "frf", False),
            ("frf", "rff", False),
            ("rrr", "rr", True),
        ],
    )
    def test_pairs(self, v, w, expected):
        assert dominated(v, w) is expected

    def test_reflexive(self):
        for m in ["r", "f", "rfr", "ffrr"]:
            assert dominated(m, m)


class TestNormalize:
    def test_absorb_longer(self):
        assert str(normalize(parse("rf+rff"))) == "rf"

    def test_absorb_into_ff(self):
        assert str(normalize(parse("fr+rf+ff"))) == "ff"

    def test_incomparable_unchanged(self):
        code = parse("rr+frf+rff")
        assert normalize(code) == code

    def test_idempotent(self):
        for text in ["rf+rff", "fr+rf+ff", "rr+frf+rff", "r&rr+r", "rr+fff"]:
            once = normalize(parse(text))
            assert normalize(once) == once

    def test_intersection_term_absorbed(self):
        # r&rr ⊆ r, so the intersection term is dropped
        assert str(normalize(parse("r&rr+r"))) == "r"


class TestMinRPower:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("fr+rf", 2),
            ("rr+fff", 2),
            ("rrr", 3),
            ("r", 1),
            ("r+ff", 1),
            ("rr+frf", 2),
            ("rrf+frr", 3),
            ("r^2&f^3", 3),
        ],
    )
    def test_values(self, text, expected):
        assert min_r_power(parse(text)) == expected

    def test_required_truncation_plain_sum(self):
        assert required_truncation(parse("rr+fff")) == min_r_power(parse("rr+fff"))

    def test_required_truncation_intersection(self):
        # the intersection term forces depth 3 even though r ⊆ the code
        assert required_truncation(parse("r+rr&fff")) == 3

    def test_max_monomial_length(self):
        assert max_monomial_length(parse("rr+fff")) == 3


_mono = st.text(alphabet="fr", min_size=1, max_size=4)
_term = st.lists(_mono, min_size=1, max_size=2)
_code = st.lists(_term, min_size=1, max_size=3)


@settings(max_examples=200, deadline=None)
@given(_code)
def test_roundtrip_print_parse(terms):
    code = make_code(terms)
    assert parse(str(code)) == code


@settings(max_examples=200, deadline=None)
@given(_code)
def test_normalize_idempotent_property(terms):
    code = make_code(terms)
    once = normalize(code)
    assert normalize(once) == once
