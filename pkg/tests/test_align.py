"""Global affine-gap alignment, mutation calling, and mutation application."""

import random
from types import SimpleNamespace

import pytest

from mutascan.align import (
    DEFAULT_CELL_CAP,
    AlignmentResult,
    EmptySequenceError,
    Mutation,
    MutationKind,
    OpKind,
    OverlappingMutationsError,
    PositionOutOfRangeError,
    Scoring,
    SizeCapExceededError,
    apply_mutations,
    call_mutations,
    global_align,
    result_from_alignment,
    score_alignment,
)
from mutascan.seqio import DnaSequence

from oracles import (
    enumerate_global_score,
    global_score_dp,
    random_bases,
    rescore_alignment,
)


def _seq(bases, rec_id="s"):
    return DnaSequence(rec_id, "", bases)


def _align(a, b, scoring=Scoring()):
    return global_align(_seq(a, "a"), _seq(b, "b"), scoring)


def _params(scoring):
    return (scoring.match, scoring.mismatch, scoring.gap_open, scoring.gap_extend)


def test_identical_sequences():
    res = _align("ACGT", "ACGT")
    assert res.score == 8
    assert res.aligned_a == res.aligned_b == "ACGT"
    assert res.identity_percent == 100.0
    assert res.ops == ((OpKind.MATCH, 4),)
    assert call_mutations(res) == []


def test_single_substitution():
    res = _align("ACGT", "AGGT")
    assert res.score == 5
    assert (res.aligned_a, res.aligned_b) == ("ACGT", "AGGT")
    muts = call_mutations(res)
    assert len(muts) == 1
    assert muts[0].kind is MutationKind.SUBSTITUTION
    assert muts[0].position == 2
    assert (muts[0].ref_bases, muts[0].alt_bases) == ("C", "G")


def test_single_deletion():
    res = _align("ACGT", "ACT")
    assert res.score == 0
    assert (res.aligned_a, res.aligned_b) == ("ACGT", "AC-T")
    muts = call_mutations(res)
    assert len(muts) == 1
    assert muts[0].kind is MutationKind.DELETION
    assert muts[0].position == 3
    assert muts[0].ref_bases == "G"
    assert muts[0].alt_bases == ""


def test_insertion_before_first_base_has_position_zero():
    res = _align("A", "AA")
    assert (res.aligned_a, res.aligned_b) == ("-A", "AA")
    muts = call_mutations(res)
    assert len(muts) == 1
    assert muts[0].kind is MutationKind.INSERTION
    assert muts[0].position == 0
    assert muts[0].alt_bases == "A"


def test_n_columns_score_zero_but_still_called():
    res = _align("ANG", "ATG")
    assert res.score == 4
    # the differing column must be called so apply() reproduces the patient
    muts = call_mutations(res)
    assert [(m.ref_bases, m.alt_bases) for m in muts] == [("N", "T")]
    assert apply_mutations(_seq("ANG"), muts).bases == "ATG"
    assert res.identity_percent == pytest.approx(100 * 2 / 3)


def test_adjacent_substitutions_merge_into_one_run():
    res = result_from_alignment("AAGG", "AATT", 2)
    muts = call_mutations(res)
    assert len(muts) == 1
    assert muts[0].position == 3
    assert (muts[0].ref_bases, muts[0].alt_bases) == ("GG", "TT")


def test_insertion_sorts_before_substitution_at_same_position():
    res = result_from_alignment("TA-C", "TTGC", 0)
    muts = call_mutations(res)
    assert [m.kind for m in muts] == [MutationKind.INSERTION, MutationKind.SUBSTITUTION]
    assert [m.position for m in muts] == [2, 2]
    assert apply_mutations(_seq("TAC"), muts).bases == "TTGC"


def test_matches_exponential_enumeration():
    rng = random.Random(7)
    scorings = [
        Scoring(),
        Scoring(match=1, mismatch=-3, gap_open=-5, gap_extend=-2),
        Scoring(match=3, mismatch=-2, gap_open=-4, gap_extend=-3),
    ]
    for _ in range(120):
        a = random_bases(rng, rng.randint(1, 6), "ACGTN")
        b = random_bases(rng, rng.randint(1, 6), "ACGTN")
        scoring = rng.choice(scorings)
        res = _align(a, b, scoring)
        assert res.score == enumerate_global_score(a, b, *_params(scoring))


def test_matches_naive_dp_at_moderate_lengths():
    rng = random.Random(8)
    for _ in range(15):
        a = random_bases(rng, rng.randint(50, 200), "ACGTN")
        b = random_bases(rng, rng.randint(50, 200), "ACGTN")
        res = _align(a, b)
        assert res.score == global_score_dp(a, b, *_params(Scoring()))


def test_alignment_invariants():
    rng = random.Random(9)
    for _ in range(40):
        a = random_bases(rng, rng.randint(1, 60))
        b = random_bases(rng, rng.randint(1, 60))
        res = _align(a, b)
        assert res.aligned_a.replace("-", "") == a
        assert res.aligned_b.replace("-", "") == b
        assert len(res.aligned_a) == len(res.aligned_b)
        # no column may be gapped on both sides
        assert all(
            not (x == "-" and y == "-") for x, y in zip(res.aligned_a, res.aligned_b)
        )
        # stored score equals the score recomputed from the aligned strings
        assert res.score == score_alignment(res.aligned_a, res.aligned_b, Scoring())
        assert res.score == rescore_alignment(
            res.aligned_a, res.aligned_b, *_params(Scoring())
        )
        # ops runs are maximal and sum to the alignment length
        assert sum(n for _, n in res.ops) == len(res.aligned_a)
        assert all(k1 != k2 for (k1, _), (k2, _) in zip(res.ops, res.ops[1:]))


def test_score_is_symmetric():
    rng = random.Random(10)
    for _ in range(30):
        a = random_bases(rng, rng.randint(1, 40))
        b = random_bases(rng, rng.randint(1, 40))
        assert _align(a, b).score == _align(b, a).score


def test_identity_100_iff_equal():
    rng = random.Random(13)
    for _ in range(30):
        a = random_bases(rng, rng.randint(1, 30))
        b = random_bases(rng, rng.randint(1, 30))
        res = _align(a, b)
        assert (res.identity_percent == 100.0) == (a == b)
    assert _align("ACGT", "ACGT").identity_percent == 100.0


def test_alignment_is_deterministic():
    a = "ACGTACGTAGGATCC"
    b = "ACTTACGGTAGGTCC"
    first = _align(a, b)
    for _ in range(3):
        assert _align(a, b) == first


def test_empty_sequence_rejected():
    # DnaSequence itself refuses empty bases, so exercise the aligner's own
    # guard with a minimal stand-in object.
    fake = SimpleNamespace(id="x", bases="")
    with pytest.raises(EmptySequenceError):
        global_align(fake, _seq("ACGT"))
    with pytest.raises(EmptySequenceError):
        global_align(_seq("ACGT"), fake)


def test_size_cap():
    big = SimpleNamespace(id="big", bases="A" * 5001)
    with pytest.raises(SizeCapExceededError):
        global_align(big, big, cell_cap=5000 * 5000)
    assert DEFAULT_CELL_CAP == 25_000_000


def test_scoring_validation():
    with pytest.raises(ValueError):
        Scoring(match=0)
    with pytest.raises(ValueError):
        Scoring(mismatch=1)
    with pytest.raises(ValueError):
        Scoring(gap_open=1)
    with pytest.raises(ValueError):
        Scoring(gap_extend=1)
    Scoring(mismatch=0, gap_extend=0)  # zero penalties are legal, positives are not


def test_score_alignment_rejects_malformed_input():
    with pytest.raises(ValueError):
        score_alignment("AC", "A", Scoring())
    with pytest.raises(ValueError):
        score_alignment("A-C", "A-C", Scoring())


def test_mutation_validation():
    with pytest.raises(ValueError):
        Mutation(1, MutationKind.SUBSTITUTION, "A", "")
    with pytest.raises(ValueError):
        Mutation(1, MutationKind.INSERTION, "A", "C")
    with pytest.raises(ValueError):
        Mutation(1, MutationKind.DELETION, "", "C")
    with pytest.raises(ValueError):
        Mutation(-1, MutationKind.INSERTION, "", "C")


def test_apply_substitution_deletion_insertion():
    ref = _seq("ACGTACGT")
    out = apply_mutations(
        ref,
        [
            Mutation(2, MutationKind.SUBSTITUTION, "C", "T"),
            Mutation(4, MutationKind.INSERTION, "", "GG"),
            Mutation(6, MutationKind.DELETION, "CG", ""),
        ],
    )
    assert out.bases == "ATGTGGAT"
    assert ref.bases == "ACGTACGT"


def test_apply_insertion_at_boundaries():
    ref = _seq("ACGT")
    assert apply_mutations(ref, [Mutation(0, MutationKind.INSERTION, "", "TT")]).bases == "TTACGT"
    assert apply_mutations(ref, [Mutation(4, MutationKind.INSERTION, "", "TT")]).bases == "ACGTTT"


def test_apply_rejects_out_of_range():
    ref = _seq("ACGT")
    with pytest.raises(PositionOutOfRangeError):
        apply_mutations(ref, [Mutation(0, MutationKind.SUBSTITUTION, "A", "C")])
    with pytest.raises(PositionOutOfRangeError):
        apply_mutations(ref, [Mutation(5, MutationKind.INSERTION, "", "C")])
    with pytest.raises(PositionOutOfRangeError):
        apply_mutations(ref, [Mutation(4, MutationKind.DELETION, "TA", "")])


def test_apply_rejects_unsorted_calls():
    ref = _seq("ACGTACGT")
    muts = [
        Mutation(5, MutationKind.SUBSTITUTION, "A", "C"),
        Mutation(2, MutationKind.SUBSTITUTION, "C", "A"),
    ]
    with pytest.raises(OverlappingMutationsError):
        apply_mutations(ref, muts)
    # substitution listed before an insertion at the same position
    muts = [
        Mutation(2, MutationKind.SUBSTITUTION, "C", "A"),
        Mutation(2, MutationKind.INSERTION, "", "T"),
    ]
    with pytest.raises(OverlappingMutationsError):
        apply_mutations(ref, muts)


def test_apply_rejects_overlapping_spans():
    ref = _seq("ACGTACGT")
    muts = [
        Mutation(2, MutationKind.DELETION, "CGT", ""),
        Mutation(4, MutationKind.SUBSTITUTION, "T", "A"),
    ]
    with pytest.raises(OverlappingMutationsError):
        apply_mutations(ref, muts)
    dup = [
        Mutation(3, MutationKind.INSERTION, "", "A"),
        Mutation(3, MutationKind.INSERTION, "", "C"),
    ]
    with pytest.raises(OverlappingMutationsError):
        apply_mutations(ref, dup)


def test_apply_rejects_reference_mismatch():
    ref = _seq("ACGT")
    with pytest.raises(ValueError):
        apply_mutations(ref, [Mutation(2, MutationKind.SUBSTITUTION, "G", "T")])


def test_call_then_apply_round_trip():
    rng = random.Random(14)
    for _ in range(40):
        ref = random_bases(rng, rng.randint(20, 300))
        alt = _mutate(rng, ref)
        res = global_align(_seq(ref, "ref"), _seq(alt, "alt"))
        muts = call_mutations(res)
        rebuilt = apply_mutations(_seq(ref, "ref"), muts)
        assert rebuilt.bases == alt


def _mutate(rng, ref):
    """Apply up to 8 random sparse edits and return the edited string."""
    bases = list(ref)
    n_edits = rng.randint(0, 8)
    positions = sorted(rng.sample(range(len(bases)), min(n_edits, len(bases))), reverse=True)
    for pos in positions:
        choice = rng.random()
        if choice < 0.5:
            bases[pos] = rng.choice("ACGT".replace(bases[pos], ""))
        elif choice < 0.75:
            bases.insert(pos, rng.choice("ACGT"))
        else:
            del bases[pos]
    return "".join(bases) or "A"
