"""FASTA parsing and writing for validated DNA records.

Records carry bases over the alphabet {A,C,G,T,N}; lowercase input is
normalized at parse time and positions are always reported 1-based.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from .errors import MutascanError

ALPHABET = frozenset("ACGTN")

DEFAULT_LINE_WIDTH = 60


class FastaParseError(MutascanError):
    """Input is not valid FASTA per this package's grammar."""


class EmptyInputError(FastaParseError):
    """No header line anywhere in the input."""


class InvalidSymbolError(FastaParseError):
    """A sequence symbol outside {A,C,G,T,N} (after uppercasing)."""

    def __init__(self, record_id: str, position: int, symbol: str):
        self.record_id = record_id
        self.position = position
        self.symbol = symbol
        super().__init__(
            f"invalid symbol {symbol!r} in record {record_id!r} at position {position}"
        )


class DuplicateIdError(FastaParseError):
    """Two records in one file share an id."""


class SequencelessHeaderError(FastaParseError):
    """A header with no sequence lines before the next header or EOF."""


@dataclass(frozen=True)
class DnaSequence:
    """One validated DNA record: id, free-text description, bases.

    Bases are uppercase symbols over {A,C,G,T,N}; positions into them are
    1-based wherever this package reports coordinates.
    """

    id: str
    description: str
    bases: str

    def __post_init__(self):
        if not self.id or any(c.isspace() for c in self.id):
            raise ValueError(f"record id must be a non-empty token, got {self.id!r}")
        if not self.bases:
            raise ValueError(f"record {self.id!r} has no bases")
        bad = set(self.bases) - ALPHABET
        if bad:
            raise ValueError(
                f"record {self.id!r} contains symbols outside ACGTN: {sorted(bad)}"
            )

    def __len__(self) -> int:
        return len(self.bases)


@dataclass(frozen=True)
class FastaFile:
    """Ordered FASTA records with pairwise-distinct ids."""

    records: tuple[DnaSequence, ...]

    def __post_init__(self):
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValueError("record ids must be pairwise distinct")

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def parse_fasta(text: str) -> FastaFile:
    """Parse a FASTA character stream into validated records.

    Grammar: each record is a ``>`` header line (id token, then optional
    description after the first whitespace run) followed by one or more
    sequence lines, wrapped at any width. Blank lines between records are
    permitted, LF and CRLF both accepted, lowercase bases are uppercased.

    Raises EmptyInputError, InvalidSymbolError, DuplicateIdError, or
    SequencelessHeaderError; any other format violation (data before the
    first header, a header with no id) raises the base FastaParseError.
    """
    records: list[DnaSequence] = []
    seen: set[str] = set()
    cur_id: str | None = None
    cur_desc = ""
    cur_parts: list[str] = []
    cur_len = 0

    def flush():
        nonlocal cur_id, cur_desc, cur_parts, cur_len
        if cur_id is None:
            return
        if cur_len == 0:
            raise SequencelessHeaderError(f"header {cur_id!r} has no sequence lines")
        records.append(DnaSequence(cur_id, cur_desc, "".join(cur_parts)))
        cur_id, cur_desc, cur_parts, cur_len = None, "", [], 0

    saw_header = False
    for raw in io.StringIO(text):
        line = raw.rstrip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            saw_header = True
            parts = line[1:].split(None, 1)
            if not parts:
                raise FastaParseError("header line with no id")
            cur_id = parts[0]
            cur_desc = parts[1] if len(parts) > 1 else ""
            if cur_id in seen:
                raise DuplicateIdError(f"duplicate record id {cur_id!r}")
            seen.add(cur_id)
        else:
            if cur_id is None:
                raise FastaParseError("sequence data before the first header")
            upper = line.upper()
            for off, sym in enumerate(upper):
                if sym not in ALPHABET:
                    raise InvalidSymbolError(cur_id, cur_len + off + 1, sym)
            cur_parts.append(upper)
            cur_len += len(upper)
    flush()

    if not saw_header:
        raise EmptyInputError("no FASTA header found")
    return FastaFile(tuple(records))


def write_fasta(file: FastaFile, width: int = DEFAULT_LINE_WIDTH) -> str:
    """Serialize records as FASTA text, sequence wrapped at `width` columns.

    The description is omitted from the header when empty. Output uses LF
    line endings and ends with a newline.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    out: list[str] = []
    for rec in file.records:
        header = f">{rec.id} {rec.description}" if rec.description else f">{rec.id}"
        out.append(header)
        for i in range(0, len(rec.bases), width):
            out.append(rec.bases[i : i + width])
    return "\n".join(out) + "\n"


def read_fasta_path(path) -> FastaFile:
    """Read and parse a FASTA file from disk."""
    with open(path, "r", encoding="ascii") as fh:
        return parse_fasta(fh.read())


def write_fasta_path(file: FastaFile, path, width: int = DEFAULT_LINE_WIDTH) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(write_fasta(file, width))
