"""Optimal global pairwise alignment (affine gaps) and mutation calling.

Sequence A is always the reference, B the patient sequence. Gap costs are
affine: a gap of length L costs gap_open + L*gap_extend. An N aligned to
anything scores 0, neither match nor mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from .errors import MutascanError
from .seqio import DnaSequence

if TYPE_CHECKING:
    from .protein import ProteinEffect

DEFAULT_CELL_CAP = 25_000_000

_BASE_CODE = {"A": 0, "C": 1, "G": 2, "T": 3, "N": 4}
_NEG = -(1 << 28)

# traceback states, preference order on ties
_M, _IX, _IY = 0, 1, 2


class AlignError(MutascanError):
    pass


class EmptySequenceError(AlignError):
    pass


class SizeCapExceededError(AlignError):
    pass


class OverlappingMutationsError(AlignError):
    pass


class PositionOutOfRangeError(AlignError):
    pass


@dataclass(frozen=True)
class Scoring:
    match: int = 2
    mismatch: int = -1
    gap_open: int = -5
    gap_extend: int = -1

    def __post_init__(self):
        if self.match <= 0:
            raise ValueError("match score must be positive")
        if self.mismatch > 0 or self.gap_open > 0 or self.gap_extend > 0:
            raise ValueError("mismatch and gap scores must be <= 0")

    def substitution_matrix(self) -> np.ndarray:
        """5x5 int32 lookup over base codes; any pairing with N scores 0."""
        sub = np.full((5, 5), self.mismatch, dtype=np.int32)
        np.fill_diagonal(sub, self.match)
        sub[4, :] = 0
        sub[:, 4] = 0
        return sub


class OpKind(Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    INSERT = "insert"  # gap in A: extra bases in B
    DELETE = "delete"  # gap in B: reference bases missing from B


@dataclass(frozen=True)
class AlignmentResult:
    aligned_a: str
    aligned_b: str
    score: int
    ops: tuple[tuple[OpKind, int], ...]
    identity_percent: float

    def __len__(self) -> int:
        return len(self.aligned_a)


class MutationKind(Enum):
    SUBSTITUTION = "substitution"
    INSERTION = "insertion"
    DELETION = "deletion"


_KIND_ORDER = {MutationKind.INSERTION: 0, MutationKind.SUBSTITUTION: 1, MutationKind.DELETION: 2}


@dataclass(frozen=True)
class Mutation:
    """One called variant, positioned 1-based on the reference.

    Substitutions and deletions start at `position`; an insertion sits
    immediately after reference base `position` (0 means before base 1).
    `effect` stays None until the protein module classifies it.
    """

    position: int
    kind: MutationKind
    ref_bases: str
    alt_bases: str
    effect: "ProteinEffect | None" = None

    def __post_init__(self):
        if self.position < 0:
            raise ValueError(f"negative position {self.position}")
        if self.kind is MutationKind.SUBSTITUTION:
            ok = len(self.ref_bases) == len(self.alt_bases) >= 1
        elif self.kind is MutationKind.INSERTION:
            ok = not self.ref_bases and self.alt_bases
        else:
            ok = not self.alt_bases and self.ref_bases
        if not ok:
            raise ValueError(f"inconsistent bases for {self.kind.value}")

    def describe(self) -> str:
        if self.kind is MutationKind.SUBSTITUTION:
            return f"{self.position} {self.ref_bases}>{self.alt_bases}"
        if self.kind is MutationKind.INSERTION:
            return f"{self.position} ins{self.alt_bases}"
        return f"{self.position} del{self.ref_bases}"


def encode_bases(bases: str) -> np.ndarray:
    return np.frombuffer(
        bases.encode("ascii").translate(_CODE_TABLE), dtype=np.uint8
    ).copy()


_CODE_TABLE = bytes.maketrans(b"ACGTN", bytes([0, 1, 2, 3, 4]))


def score_alignment(aligned_a: str, aligned_b: str, scoring: Scoring) -> int:
    """Recompute an alignment's score from its aligned strings."""
    if len(aligned_a) != len(aligned_b):
        raise ValueError("aligned strings must have equal length")
    total = 0
    in_gap_a = in_gap_b = False
    for x, y in zip(aligned_a, aligned_b):
        if x == "-" and y == "-":
            raise ValueError("column gapped on both sides")
        if x == "-":
            total += scoring.gap_extend + (0 if in_gap_a else scoring.gap_open)
            in_gap_a, in_gap_b = True, False
        elif y == "-":
            total += scoring.gap_extend + (0 if in_gap_b else scoring.gap_open)
            in_gap_a, in_gap_b = False, True
        else:
            in_gap_a = in_gap_b = False
            if x == "N" or y == "N":
                pass  # N scores 0 against anything
            elif x == y:
                total += scoring.match
            else:
                total += scoring.mismatch
    return total


def result_from_alignment(aligned_a: str, aligned_b: str, score: int) -> AlignmentResult:
    """Build the ops runs and identity percentage for finished aligned strings."""
    ops: list[tuple[OpKind, int]] = []
    matches = 0
    for x, y in zip(aligned_a, aligned_b):
        if x == "-":
            kind = OpKind.INSERT
        elif y == "-":
            kind = OpKind.DELETE
        elif x == y:
            kind = OpKind.MATCH
            matches += 1
        else:
            kind = OpKind.SUBSTITUTE
        if ops and ops[-1][0] is kind:
            ops[-1] = (kind, ops[-1][1] + 1)
        else:
            ops.append((kind, 1))
    identity = 100.0 * matches / len(aligned_a) if aligned_a else 0.0
    return AlignmentResult(aligned_a, aligned_b, score, tuple(ops), identity)


def _fill_matrices(ca: np.ndarray, cb: np.ndarray, scoring: Scoring):
    """Antidiagonal Needleman-Wunsch-Gotoh fill over three int32 matrices."""
    m, n = len(ca), len(cb)
    oe = scoring.gap_open + scoring.gap_extend
    e = scoring.gap_extend
    sub = scoring.substitution_matrix()

    M = np.full((m + 1, n + 1), _NEG, dtype=np.int32)
    Ix = np.full((m + 1, n + 1), _NEG, dtype=np.int32)
    Iy = np.full((m + 1, n + 1), _NEG, dtype=np.int32)
    M[0, 0] = 0
    Ix[1:, 0] = oe + e * np.arange(m, dtype=np.int32)
    Iy[0, 1:] = oe + e * np.arange(n, dtype=np.int32)

    for k in range(2, m + n + 1):
        lo = max(1, k - n)
        hi = min(m, k - 1)
        if lo > hi:
            continue
        ii = np.arange(lo, hi + 1)
        jj = k - ii
        dm = M[ii - 1, jj - 1]
        np.maximum(dm, Ix[ii - 1, jj - 1], out=dm)
        np.maximum(dm, Iy[ii - 1, jj - 1], out=dm)
        M[ii, jj] = sub[ca[ii - 1], cb[jj - 1]] + dm
        up = M[ii - 1, jj] + oe
        np.maximum(up, Ix[ii - 1, jj] + e, out=up)
        np.maximum(up, Iy[ii - 1, jj] + oe, out=up)
        Ix[ii, jj] = up
        left = M[ii, jj - 1] + oe
        np.maximum(left, Ix[ii, jj - 1] + oe, out=left)
        np.maximum(left, Iy[ii, jj - 1] + e, out=left)
        Iy[ii, jj] = left
    return M, Ix, Iy


def global_align(
    a: DnaSequence,
    b: DnaSequence,
    scoring: Scoring = Scoring(),
    cell_cap: int = DEFAULT_CELL_CAP,
) -> AlignmentResult:
    """Optimal global alignment of reference `a` against patient `b`.

    Traceback ties prefer Match/Substitute over Delete (gap in B) over
    Insert (gap in A), so the output is deterministic.
    """
    m, n = len(a.bases), len(b.bases)
    if m == 0 or n == 0:
        raise EmptySequenceError("cannot align an empty sequence")
    if m * n > cell_cap:
        raise SizeCapExceededError(f"{m} x {n} exceeds the {cell_cap}-cell cap")

    ca = encode_bases(a.bases)
    cb = encode_bases(b.bases)
    M, Ix, Iy = _fill_matrices(ca, cb, scoring)
    oe = scoring.gap_open + scoring.gap_extend
    e = scoring.gap_extend
    sub = scoring.substitution_matrix()

    i, j = m, n
    finals = (int(M[i, j]), int(Ix[i, j]), int(Iy[i, j]))
    score = max(finals)
    state = finals.index(score)  # index order == preference order M, Ix, Iy

    rev_a: list[str] = []
    rev_b: list[str] = []
    while i > 0 or j > 0:
        if state == _M:
            rev_a.append(a.bases[i - 1])
            rev_b.append(b.bases[j - 1])
            target = int(M[i, j]) - int(sub[ca[i - 1], cb[j - 1]])
            i -= 1
            j -= 1
            candidates = (int(M[i, j]), int(Ix[i, j]), int(Iy[i, j]))
        elif state == _IX:
            rev_a.append(a.bases[i - 1])
            rev_b.append("-")
            target = int(Ix[i, j])
            i -= 1
            candidates = (int(M[i, j]) + oe, int(Ix[i, j]) + e, int(Iy[i, j]) + oe)
        else:
            rev_a.append("-")
            rev_b.append(b.bases[j - 1])
            target = int(Iy[i, j])
            j -= 1
            candidates = (int(M[i, j]) + oe, int(Ix[i, j]) + oe, int(Iy[i, j]) + e)
        if i == 0 and j == 0:
            break
        state = candidates.index(target)

    aligned_a = "".join(reversed(rev_a))
    aligned_b = "".join(reversed(rev_b))
    return result_from_alignment(aligned_a, aligned_b, score)


def call_mutations(alignment: AlignmentResult) -> list[Mutation]:
    """Derive the variant list from an alignment, side A as the reference.

    Each maximal run of substituted columns becomes one Substitution; each
    maximal gap run one Insertion or Deletion. The list is sorted by
    reference position, insertions before substitutions before deletions
    when positions tie.
    """
    muts: list[Mutation] = []
    ref_pos = 0  # last consumed reference base, 1-based
    col = 0
    a, b = alignment.aligned_a, alignment.aligned_b
    for kind, length in alignment.ops:
        seg_a = a[col : col + length]
        seg_b = b[col : col + length]
        if kind is OpKind.MATCH:
            ref_pos += length
        elif kind is OpKind.SUBSTITUTE:
            muts.append(
                Mutation(ref_pos + 1, MutationKind.SUBSTITUTION, seg_a, seg_b)
            )
            ref_pos += length
        elif kind is OpKind.DELETE:
            muts.append(Mutation(ref_pos + 1, MutationKind.DELETION, seg_a, ""))
            ref_pos += length
        else:  # INSERT: sits after the last consumed reference base
            muts.append(
                Mutation(ref_pos, MutationKind.INSERTION, "", seg_b)
            )
        col += length
    muts.sort(key=lambda mu: (mu.position, _KIND_ORDER[mu.kind]))
    return muts


def _occupied_span(mut: Mutation) -> tuple[float, float]:
    # insertions live between bases, so they occupy a half-open point
    if mut.kind is MutationKind.INSERTION:
        return (mut.position + 0.5, mut.position + 0.5)
    return (float(mut.position), float(mut.position + len(mut.ref_bases) - 1))


def apply_mutations(ref: DnaSequence, muts: list[Mutation]) -> DnaSequence:
    """Apply a sorted, non-overlapping call set to the reference.

    Edits run right-to-left so earlier coordinates stay valid. Raises
    OverlappingMutationsError or PositionOutOfRangeError on bad input.
    """
    for mut in muts:
        lo = 0 if mut.kind is MutationKind.INSERTION else 1
        hi = len(ref.bases)
        end = mut.position + len(mut.ref_bases) - 1 if mut.ref_bases else mut.position
        if not (lo <= mut.position and end <= hi):
            raise PositionOutOfRangeError(
                f"mutation at {mut.position} outside reference of length {hi}"
            )
    keys = [(m.position, _KIND_ORDER[m.kind]) for m in muts]
    if keys != sorted(keys):
        raise OverlappingMutationsError("mutations must be sorted by position")
    # an insertion at p sits between bases, so it never overlaps a
    # substitution or deletion starting at p; spans are checked after an
    # independent sort because the tie order above is not span order
    spans = sorted(_occupied_span(m) for m in muts)
    for prev, cur in zip(spans, spans[1:]):
        if cur[0] <= prev[1]:
            raise OverlappingMutationsError(
                f"mutations overlap near reference position {int(cur[0])}"
            )

    bases = list(ref.bases)
    for mut in sorted(muts, key=_occupied_span, reverse=True):
        p = mut.position
        if mut.kind is MutationKind.SUBSTITUTION:
            if "".join(bases[p - 1 : p - 1 + len(mut.ref_bases)]) != mut.ref_bases:
                raise ValueError(f"reference bases at {p} do not match {mut.ref_bases!r}")
            bases[p - 1 : p - 1 + len(mut.alt_bases)] = mut.alt_bases
        elif mut.kind is MutationKind.DELETION:
            if "".join(bases[p - 1 : p - 1 + len(mut.ref_bases)]) != mut.ref_bases:
                raise ValueError(f"reference bases at {p} do not match {mut.ref_bases!r}")
            del bases[p - 1 : p - 1 + len(mut.ref_bases)]
        else:
            bases[p:p] = mut.alt_bases
    return DnaSequence(ref.id, ref.description, "".join(bases))
