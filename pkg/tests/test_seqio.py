"""FASTA parsing, validation, and writing."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutascan.seqio import (
    DnaSequence,
    DuplicateIdError,
    EmptyInputError,
    FastaFile,
    FastaParseError,
    InvalidSymbolError,
    SequencelessHeaderError,
    parse_fasta,
    write_fasta,
)

from oracles import random_fasta_text


def test_parse_single_record():
    f = parse_fasta(">g1 normal\nACGT")
    assert len(f) == 1
    rec = f.records[0]
    assert rec.id == "g1"
    assert rec.description == "normal"
    assert rec.bases == "ACGT"


def test_parse_wrapped_and_multiple_records():
    f = parse_fasta(">a\nAC\nGT\n>b\nTTTT")
    assert [r.bases for r in f] == ["ACGT", "TTTT"]
    assert [r.id for r in f] == ["a", "b"]


def test_invalid_symbol_reports_record_and_position():
    with pytest.raises(InvalidSymbolError) as exc:
        parse_fasta(">a\nACXT")
    assert exc.value.record_id == "a"
    assert exc.value.position == 3
    assert exc.value.symbol == "X"


def test_invalid_symbol_position_spans_wrapped_lines():
    with pytest.raises(InvalidSymbolError) as exc:
        parse_fasta(">a\nAC\nGX")
    assert exc.value.position == 4


def test_lowercase_is_normalized_and_idempotent():
    upper = parse_fasta(">a\nACGTN")
    lower = parse_fasta(">a\nacgtn")
    assert upper.records[0].bases == lower.records[0].bases == "ACGTN"


def test_crlf_line_endings():
    f = parse_fasta(">a desc\r\nAC\r\nGT\r\n>b\r\nTT\r\n")
    assert [r.bases for r in f] == ["ACGT", "TT"]
    assert f.records[0].description == "desc"


def test_blank_lines_between_records():
    f = parse_fasta(">a\nAC\n\nGT\n\n>b\nTT\n")
    assert [r.bases for r in f] == ["ACGT", "TT"]


def test_duplicate_id_rejected():
    with pytest.raises(DuplicateIdError):
        parse_fasta(">a\nAC\n>a\nGT")


def test_sequenceless_header_rejected():
    with pytest.raises(SequencelessHeaderError):
        parse_fasta(">a\n>b\nACGT")
    with pytest.raises(SequencelessHeaderError):
        parse_fasta(">a\nACGT\n>b\n")


def test_empty_input_rejected():
    with pytest.raises(EmptyInputError):
        parse_fasta("")
    with pytest.raises(EmptyInputError):
        parse_fasta("  \n\n")


def test_data_before_first_header_rejected():
    with pytest.raises(FastaParseError):
        parse_fasta("ACGT\n>a\nACGT")


def test_header_without_id_rejected():
    with pytest.raises(FastaParseError):
        parse_fasta(">\nACGT")


def test_description_whitespace_preserved_after_first_gap():
    f = parse_fasta(">id a  b\nACGT")
    assert f.records[0].description == "a  b"


def test_write_minimal_record():
    f = FastaFile((DnaSequence("g1", "", "ACGT"),))
    assert write_fasta(f, width=60) == ">g1\nACGT\n"


def test_write_wraps_at_width():
    f = FastaFile((DnaSequence("g1", "x", "ACGTA"),))
    assert write_fasta(f, width=2) == ">g1 x\nAC\nGT\nA\n"


def test_write_rejects_bad_width():
    f = FastaFile((DnaSequence("g1", "", "ACGT"),))
    with pytest.raises(ValueError):
        write_fasta(f, width=0)


def test_dna_sequence_validation():
    with pytest.raises(ValueError):
        DnaSequence("", "", "ACGT")
    with pytest.raises(ValueError):
        DnaSequence("a b", "", "ACGT")
    with pytest.raises(ValueError):
        DnaSequence("a", "", "")
    with pytest.raises(ValueError):
        DnaSequence("a", "", "ACGU")


def test_fasta_file_rejects_duplicate_ids():
    rec = DnaSequence("a", "", "ACGT")
    with pytest.raises(ValueError):
        FastaFile((rec, rec))


def test_round_trip_seeded_files():
    rng = random.Random(20240817)
    for _ in range(1000):
        text, truth = random_fasta_text(rng)
        parsed = parse_fasta(text)
        assert [(r.id, r.description, r.bases) for r in parsed] == truth
        width = rng.randint(1, 120)
        again = parse_fasta(write_fasta(parsed, width))
        assert again == parsed


_ID = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789_", min_size=1, max_size=12)
_BASES = st.text(alphabet="ACGTN", min_size=1, max_size=120)


@settings(max_examples=60, deadline=None)
@given(
    records=st.lists(st.tuples(_ID, _BASES), min_size=1, max_size=4, unique_by=lambda t: t[0]),
    width=st.integers(min_value=1, max_value=90),
)
def test_round_trip_property(records, width):
    f = FastaFile(tuple(DnaSequence(i, "", b) for i, b in records))
    assert parse_fasta(write_fasta(f, width)) == f
