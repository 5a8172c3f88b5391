"""Local seed-and-extend homology search over k-mer-indexed FASTA databases.

The search pipeline: collect exact k-mer seed matches, group them by
diagonal (query offset minus subject offset), extend each seed without gaps
under an X-drop rule, then run a banded gapped local alignment around each
seeded diagonal. Per-subject alignments merge into one ranked hit carrying
the classic report columns (max score, total score, query cover, E-value,
max identity). Only the forward strand is searched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .align import AlignmentResult, Scoring, result_from_alignment
from .errors import MutascanError
from .seqio import DnaSequence, FastaFile

DEFAULT_K = 11
BAND_RADIUS = 16

_NEG = -(1 << 28)
# predecessor tags for the banded DP traceback
_START, _FROM_M, _FROM_IX, _FROM_IY = 0, 1, 2, 3


class HomologyError(MutascanError):
    pass


class EmptyDatabaseError(HomologyError):
    pass


class QueryTooShortError(HomologyError):
    pass


@dataclass(frozen=True)
class SearchParams:
    k: int = DEFAULT_K
    match_score: int = 1
    mismatch_score: int = -3
    gap_open: int = -5
    gap_extend: int = -2
    x_drop: int = 20
    min_seed_hits_per_diagonal: int = 1
    karlin_lambda: float = 1.374
    karlin_k: float = 0.711
    max_hits: int = 20

    def __post_init__(self):
        if self.k < 4:
            raise ValueError("k must be at least 4")
        if self.match_score <= 0:
            raise ValueError("match score must be positive")
        if self.mismatch_score >= 0 or self.gap_open >= 0 or self.gap_extend >= 0:
            raise ValueError("mismatch and gap scores must be negative")
        if self.x_drop <= 0:
            raise ValueError("x_drop must be positive")

    def scoring(self) -> Scoring:
        return Scoring(
            match=self.match_score,
            mismatch=self.mismatch_score,
            gap_open=self.gap_open,
            gap_extend=self.gap_extend,
        )


@dataclass(frozen=True)
class KmerIndex:
    k: int
    subjects: tuple[DnaSequence, ...]
    postings: dict[str, tuple[tuple[int, int], ...]]

    @property
    def total_length(self) -> int:
        return sum(len(s) for s in self.subjects)

    def subject_summaries(self) -> list[tuple[str, int]]:
        return [(s.id, len(s)) for s in self.subjects]


@dataclass(frozen=True)
class HomologyHit:
    subject_id: str
    max_score: int
    total_score: int
    query_cover: float
    e_value: float
    max_ident: float
    best_alignment: AlignmentResult


@dataclass(frozen=True)
class _LocalAlignment:
    score: int
    q_start: int  # 0-based, inclusive
    q_end: int  # 0-based, exclusive
    s_start: int
    s_end: int
    aligned_q: str
    aligned_s: str


def build_index(db: FastaFile, k: int = DEFAULT_K) -> KmerIndex:
    """Index every N-free length-k window of every subject."""
    if len(db) == 0:
        raise EmptyDatabaseError("database contains no sequences")
    if k < 4:
        raise ValueError("k must be at least 4")
    postings: dict[str, list[tuple[int, int]]] = {}
    for si, subject in enumerate(db):
        bases = subject.bases
        for off in range(len(bases) - k + 1):
            window = bases[off : off + k]
            if "N" in window:
                continue
            postings.setdefault(window, []).append((si, off))
    frozen = {w: tuple(ps) for w, ps in postings.items()}
    return KmerIndex(k, tuple(db.records), frozen)


def _ungapped_extend(
    qb: str, sb: str, q_off: int, s_off: int, k: int, params: SearchParams
) -> tuple[int, int, int]:
    """X-drop extension of an exact seed; returns (q_start, q_end, score).

    Coordinates are 0-based on the query, end exclusive. N against anything
    scores 0. Extension in each direction stops once the running score falls
    more than x_drop below the best seen.
    """
    match, mismatch, x_drop = params.match_score, params.mismatch_score, params.x_drop
    score = k * match  # the seed itself is an exact N-free match

    best = cur = score
    qe = q_off + k
    se = s_off + k
    best_qe = qe
    while qe < len(qb) and se < len(sb):
        x, y = qb[qe], sb[se]
        if x == "N" or y == "N":
            pass
        elif x == y:
            cur += match
        else:
            cur += mismatch
        qe += 1
        se += 1
        if cur > best:
            best = cur
            best_qe = qe
        elif best - cur > x_drop:
            break

    total_best = cur_left = best
    qs = q_off
    ss = s_off
    best_qs = qs
    while qs > 0 and ss > 0:
        x, y = qb[qs - 1], sb[ss - 1]
        if x == "N" or y == "N":
            pass
        elif x == y:
            cur_left += match
        else:
            cur_left += mismatch
        qs -= 1
        ss -= 1
        if cur_left > total_best:
            total_best = cur_left
            best_qs = qs
        elif total_best - cur_left > x_drop:
            break

    return best_qs, best_qe, total_best


def _banded_local_align(
    qb: str, sb: str, diagonal: int, params: SearchParams, radius: int = BAND_RADIUS
) -> _LocalAlignment | None:
    """Best gapped local alignment within a diagonal band of the given radius.

    Smith-Waterman with affine gaps (Gotoh), restricted to DP cells (i, j)
    with |i - j - diagonal| <= radius. Alignments start and end on aligned
    columns; tie-breaks prefer a fresh start, then Match over gap-in-subject
    over gap-in-query, so output is deterministic.
    """
    m, n = len(qb), len(sb)
    width = 2 * radius + 1
    sub = params.scoring().substitution_matrix()
    code = {"A": 0, "C": 1, "G": 2, "T": 3, "N": 4}
    oe = params.gap_open + params.gap_extend
    e = params.gap_extend

    lo_row = max(1, 1 + diagonal - radius)
    hi_row = min(m, n + diagonal + radius)
    if lo_row > hi_row:
        return None

    neg_row = [_NEG] * width
    M = [neg_row[:] for _ in range(hi_row + 1)]
    Ix = [neg_row[:] for _ in range(hi_row + 1)]
    Iy = [neg_row[:] for _ in range(hi_row + 1)]
    ptr_m = [[_START] * width for _ in range(hi_row + 1)]
    ptr_x = [[_START] * width for _ in range(hi_row + 1)]
    ptr_y = [[_START] * width for _ in range(hi_row + 1)]

    best_score, best_i, best_b = 0, -1, -1
    for i in range(lo_row, hi_row + 1):
        j_lo = max(1, i - diagonal - radius)
        j_hi = min(n, i - diagonal + radius)
        if j_lo > j_hi:
            continue
        qc = code[qb[i - 1]]
        row_m, row_x, row_y = M[i], Ix[i], Iy[i]
        prev_m, prev_x, prev_y = M[i - 1], Ix[i - 1], Iy[i - 1]
        pm, px, py = ptr_m[i], ptr_x[i], ptr_y[i]
        for j in range(j_lo, j_hi + 1):
            b = j - (i - diagonal - radius)
            # diagonal predecessor sits at the same band column of row i-1
            dm = prev_m[b] if i > 1 and j > 1 else _NEG
            dx = prev_x[b] if i > 1 and j > 1 else _NEG
            dy = prev_y[b] if i > 1 and j > 1 else _NEG
            best_prev, tag = 0, _START
            if dm > best_prev:
                best_prev, tag = dm, _FROM_M
            if dx > best_prev:
                best_prev, tag = dx, _FROM_IX
            if dy > best_prev:
                best_prev, tag = dy, _FROM_IY
            row_m[b] = best_prev + int(sub[qc][code[sb[j - 1]]])
            pm[b] = tag

            # gap in subject: consumes query base i, predecessor row i-1 col b+1
            um = prev_m[b + 1] + oe if i > 1 and b + 1 < width else _NEG
            ux = prev_x[b + 1] + e if i > 1 and b + 1 < width else _NEG
            uy = prev_y[b + 1] + oe if i > 1 and b + 1 < width else _NEG
            vx, tag = um, _FROM_M
            if ux > vx:
                vx, tag = ux, _FROM_IX
            if uy > vx:
                vx, tag = uy, _FROM_IY
            row_x[b] = vx
            px[b] = tag

            # gap in query: consumes subject base j, predecessor same row col b-1
            lm = row_m[b - 1] + oe if j > 1 and b - 1 >= 0 else _NEG
            lx = row_x[b - 1] + oe if j > 1 and b - 1 >= 0 else _NEG
            ly = row_y[b - 1] + e if j > 1 and b - 1 >= 0 else _NEG
            vy, tag = lm, _FROM_M
            if lx > vy:
                vy, tag = lx, _FROM_IX
            if ly > vy:
                vy, tag = ly, _FROM_IY
            row_y[b] = vy
            py[b] = tag

            if row_m[b] > best_score:
                best_score, best_i, best_b = row_m[b], i, b

    if best_i < 0 or best_score <= 0:
        return None

    # traceback from the best aligned-pair cell
    rev_q: list[str] = []
    rev_s: list[str] = []
    i, b = best_i, best_b
    state = _FROM_M
    while True:
        j = b + (i - diagonal - radius)
        if state == _FROM_M:
            rev_q.append(qb[i - 1])
            rev_s.append(sb[j - 1])
            nxt = ptr_m[i][b]
            i -= 1  # diagonal predecessor keeps the same band column
            if nxt == _START:
                q_start, s_start = i, j - 1
                break
            state = nxt
        elif state == _FROM_IX:
            rev_q.append(qb[i - 1])
            rev_s.append("-")
            nxt = ptr_x[i][b]
            i -= 1
            b += 1
            state = nxt
        else:
            rev_q.append("-")
            rev_s.append(sb[j - 1])
            nxt = ptr_y[i][b]
            b -= 1
            state = nxt

    q_end = best_i
    s_end = best_b + (best_i - diagonal - radius)
    return _LocalAlignment(
        best_score,
        q_start,
        q_end,
        s_start,
        s_end,
        "".join(reversed(rev_q)),
        "".join(reversed(rev_s)),
    )


def _select_non_overlapping(alns: list[_LocalAlignment]) -> list[_LocalAlignment]:
    """Greedy best-first selection of alignments disjoint on query coordinates."""
    unique = sorted(
        set(alns), key=lambda a: (-a.score, a.q_start, a.s_start, a.q_end, a.s_end)
    )
    kept: list[_LocalAlignment] = []
    for a in unique:
        if all(a.q_end <= k.q_start or a.q_start >= k.q_end for k in kept):
            kept.append(a)
    return kept


def e_value(max_score: int, query_len: int, db_len: int, params: SearchParams) -> float:
    """Karlin-Altschul expectation: E = K * m * n * exp(-lambda * S)."""
    return params.karlin_k * query_len * db_len * math.exp(
        -params.karlin_lambda * max_score
    )


def search(
    query: DnaSequence, index: KmerIndex, params: SearchParams = SearchParams()
) -> list[HomologyHit]:
    """Rank database subjects by local similarity to the query.

    Hits sort by max score descending, subject id ascending on ties, and
    the list truncates to params.max_hits. Seeds use the index's k (the
    window size the postings were built with).
    """
    k = index.k
    qb = query.bases
    if len(qb) < k:
        raise QueryTooShortError(f"query length {len(qb)} is below k={k}")

    # (a) seed matches, (b) grouped by subject and diagonal
    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for q_off in range(len(qb) - k + 1):
        window = qb[q_off : q_off + k]
        if "N" in window:
            continue
        for si, s_off in index.postings.get(window, ()):
            groups.setdefault((si, q_off - s_off), []).append((q_off, s_off))

    per_subject: dict[int, list[_LocalAlignment]] = {}
    for (si, diag) in sorted(groups):
        seeds = sorted(groups[(si, diag)])
        if len(seeds) < params.min_seed_hits_per_diagonal:
            continue
        sb = index.subjects[si].bases
        # (c) ungapped X-drop pass; overlapping seeds on a diagonal collapse
        # into one segment via reached-end tracking
        reached = -1
        segments = []
        for q_off, s_off in seeds:
            if q_off < reached:
                continue
            qs, qe, score = _ungapped_extend(qb, sb, q_off, s_off, k, params)
            reached = qe
            segments.append((qs, qe, score))
        if not segments:
            continue
        # (d) gapped banded extension; every segment qualifies (the trigger
        # cutoff equals the seed score, which every segment meets), and on a
        # shared diagonal the band DP is identical, so it runs once
        aln = _banded_local_align(qb, sb, diag, params)
        if aln is not None:
            per_subject.setdefault(si, []).append(aln)

    # (e) merge per-subject alignments into hits
    hits: list[HomologyHit] = []
    db_len = index.total_length
    for si in sorted(per_subject):
        kept = _select_non_overlapping(per_subject[si])
        best = kept[0]
        covered = sum(a.q_end - a.q_start for a in kept)
        best_result = result_from_alignment(best.aligned_q, best.aligned_s, best.score)
        hits.append(
            HomologyHit(
                subject_id=index.subjects[si].id,
                max_score=best.score,
                total_score=sum(a.score for a in kept),
                query_cover=100.0 * covered / len(qb),
                e_value=e_value(best.score, len(qb), db_len, params),
                max_ident=best_result.identity_percent,
                best_alignment=best_result,
            )
        )

    # (f) rank and truncate
    hits.sort(key=lambda h: (-h.max_score, h.subject_id))
    return hits[: params.max_hits]


def hit_to_dict(h: HomologyHit) -> dict:
    """Machine-readable record for one hit; one of these per JSONL line."""
    return {
        "subject_id": h.subject_id,
        "max_score": h.max_score,
        "total_score": h.total_score,
        "query_cover": h.query_cover,
        "e_value": h.e_value,
        "max_ident": h.max_ident,
        "best_alignment": {
            "score": h.best_alignment.score,
            "length": len(h.best_alignment),
            "identity_percent": h.best_alignment.identity_percent,
            "aligned_query": h.best_alignment.aligned_a,
            "aligned_subject": h.best_alignment.aligned_b,
        },
    }


def format_e_value(e: float) -> str:
    if e < 1e-180:
        return "0.0"
    if e < 1e-3:
        return f"{e:.0e}"
    return f"{e:.3g}"


def format_hit_table(hits: list[HomologyHit]) -> str:
    """Render hits as the five-column report table, rank order preserved."""
    lines = ["Description | Max score | Total score | Query cover | E value | Max ident"]
    if not hits:
        lines.append("no hits found")
    for h in hits:
        lines.append(
            f"{h.subject_id} | {h.max_score} | {h.total_score} | "
            f"{round(h.query_cover)}% | {format_e_value(h.e_value)} | "
            f"{round(h.max_ident)}%"
        )
    return "\n".join(lines) + "\n"
