"""Bibliographic data model, JSON-lines ingestion, and inverted indexes.

A corpus is a set of publication records, each carrying the four fields the
pipeline works with: a cell (the publication's combination of subject
categories), a title, an author list, and a list of cited reference ids.
Records arrive as JSON lines; :func:`ingest` parses them into immutable
:class:`Publication` objects and builds a :class:`Corpus` with per-field
inverted indexes for fast lookup.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import DuplicatePubId, EmptyCategorySet, FileUnreadable, SchemaError

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")
_DOI_LIKE = re.compile(r"^(?:doi:)?10\.\d{4,9}/\S+$", re.IGNORECASE)


class DocType(Enum):
    """Normalized document type of a publication."""

    ARTICLE = "Article"
    REVIEW = "Review"
    LETTER = "Letter"
    MEETING_ABSTRACT = "MeetingAbstract"
    EDITORIAL_MATERIAL = "EditorialMaterial"
    PROCEEDINGS_PAPER = "ProceedingsPaper"
    OTHER = "Other"

    @classmethod
    def from_label(cls, label: str) -> "DocType":
        """Map a raw label to a member, ignoring case and punctuation.

        Unrecognized labels map to ``OTHER`` rather than failing: document
        type never gates inclusion by default, so an exotic label must not
        reject an otherwise valid record.
        """
        folded = re.sub(r"[^a-z]", "", label.lower())
        return _DOC_TYPE_BY_FOLDED.get(folded, cls.OTHER)


_DOC_TYPE_BY_FOLDED = {
    re.sub(r"[^a-z]", "", member.value.lower()): member for member in DocType
}


@lru_cache(maxsize=65536)
def _fold_surname(surname: str) -> str:
    """Uppercase a surname and strip diacritics (NFKD fold)."""
    decomposed = unicodedata.normalize("NFKD", surname)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.upper().strip()


@dataclass(frozen=True)
class AuthorName:
    """An author identity reduced to folded surname plus first initial.

    Two occurrences are the same author exactly when their keys match;
    no richer disambiguation is attempted.
    """

    surname: str
    first_initial: str

    @classmethod
    def from_raw(cls, surname: str, initials: str) -> "AuthorName":
        """Build from raw record values.

        Initials may carry periods or whitespace ("J.R. " and "JR" agree).
        Raises ``ValueError`` when the surname is empty or no alphabetic
        initial exists.
        """
        folded = _fold_surname(surname)
        if not folded:
            raise ValueError("author surname is empty")
        cleaned = re.sub(r"[^A-Za-z]", "", initials)
        if not cleaned:
            raise ValueError(f"author {surname!r} has no alphabetic initials")
        return cls(surname=folded, first_initial=cleaned[0].upper())

    @classmethod
    def from_key(cls, key: str) -> "AuthorName":
        """Parse a ``"SURNAME F"`` key string (inverse of :attr:`key`).

        Tolerates the common ``"Surname, F"`` form by dropping a trailing
        comma from the surname part.
        """
        surname, _, initial = key.strip().rpartition(" ")
        surname = surname.rstrip(",")
        if not surname or len(initial) != 1:
            raise ValueError(f"not an author key: {key!r}")
        return cls.from_raw(surname, initial)

    @property
    def key(self) -> str:
        return f"{self.surname} {self.first_initial}"


def normalize_author_key(raw: str) -> str:
    """Normalize a user-supplied ``"surname initial"`` string to a key."""
    return AuthorName.from_key(raw).key


@dataclass(frozen=True, order=True)
class CellId:
    """A cell: the full combination of a publication's subject categories.

    Categories are stored sorted and deduplicated, so two publications
    share a cell exactly when their category sets are equal.
    """

    categories: tuple[str, ...]

    def __post_init__(self):
        if not self.categories:
            raise EmptyCategorySet("cell requires at least one subject category")
        canonical = tuple(sorted(set(self.categories)))
        object.__setattr__(self, "categories", canonical)

    @property
    def key(self) -> str:
        # categories never contain "|": enforced at parse time
        return "|".join(self.categories)

    def __str__(self) -> str:
        return self.key


def derive_cell(subject_categories: Iterable[str]) -> CellId:
    """Derive the cell id for a category set (order-insensitive)."""
    return CellId(tuple(subject_categories))


def tokenize_title(title: str, min_len: int = 1) -> frozenset[str]:
    """Tokenize a title into its set of distinct lowercase words.

    Splits on every non-alphanumeric character and drops tokens shorter
    than ``min_len``.  Set semantics: a word either occurs in the title
    or it does not; multiplicity never matters downstream.
    """
    tokens = _TOKEN_SPLIT.split(title.lower())
    return frozenset(t for t in tokens if len(t) >= min_len)


def is_doi_like(reference: str) -> bool:
    """True when a reference string looks like a DOI (``10.NNNN/...``)."""
    return bool(_DOI_LIKE.match(reference.strip()))


@dataclass(frozen=True)
class Publication:
    """One immutable publication record.

    Construction canonicalizes collection fields (categories sorted and
    deduplicated, references deduplicated) and enforces the structural
    invariants every downstream stage relies on.
    """

    pub_id: str
    year: int
    doc_type: DocType
    source_id: str
    subject_categories: tuple[str, ...]
    title: str
    authors: tuple[AuthorName, ...]
    reprint_author: int | None
    references: frozenset[str]

    def __post_init__(self):
        if not self.pub_id:
            raise ValueError("publication id is empty")
        if not isinstance(self.year, int) or isinstance(self.year, bool):
            raise ValueError("year must be an integer")
        if not self.subject_categories:
            raise ValueError("subject category set is empty")
        cats = tuple(sorted(set(self.subject_categories)))
        object.__setattr__(self, "subject_categories", cats)
        object.__setattr__(self, "authors", tuple(self.authors))
        refs = frozenset(self.references)
        if self.pub_id in refs:
            raise ValueError("publication references itself")
        object.__setattr__(self, "references", refs)
        if self.reprint_author is not None:
            if not self.authors:
                raise ValueError("reprint author given but author list empty")
            if not 0 <= self.reprint_author < len(self.authors):
                raise ValueError(
                    f"reprint author index {self.reprint_author} out of range"
                )

    @cached_property
    def cell(self) -> CellId:
        return derive_cell(self.subject_categories)

    @cached_property
    def title_tokens(self) -> frozenset[str]:
        """All tokens of length >= 1; length filters apply at selection."""
        return tokenize_title(self.title, min_len=1)

    @cached_property
    def author_keys(self) -> frozenset[str]:
        """Distinct author keys; a pub counts once per author identity."""
        return frozenset(a.key for a in self.authors)

    @property
    def reprint_author_key(self) -> str | None:
        if self.reprint_author is None:
            return None
        return self.authors[self.reprint_author].key

    @cached_property
    def doi_references(self) -> frozenset[str]:
        return frozenset(r for r in self.references if is_doi_like(r))


@dataclass(frozen=True)
class IngestOptions:
    """Knobs for :func:`ingest`.

    strict
        When true, the first malformed line raises :class:`SchemaError`;
        when false (default) malformed lines are skipped and reported in
        :attr:`Corpus.ingest_report`.
    """

    strict: bool = False


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    reason: str


@dataclass(frozen=True)
class IngestReport:
    """What happened during one ingest pass."""

    total_lines: int
    accepted: int
    rejected: tuple[RejectedLine, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.rejected


def _parse_authors(raw, line_no: int) -> tuple[AuthorName, ...]:
    if not isinstance(raw, list):
        raise SchemaError(line_no, "'authors' must be a list")
    out = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise SchemaError(line_no, f"author {i} is not an object")
        surname = entry.get("surname")
        initials = entry.get("initials")
        if not isinstance(surname, str) or not isinstance(initials, str):
            raise SchemaError(
                line_no, f"author {i} needs string 'surname' and 'initials'"
            )
        try:
            out.append(AuthorName.from_raw(surname, initials))
        except ValueError as exc:
            raise SchemaError(line_no, f"author {i}: {exc}") from exc
    return tuple(out)


def _parse_str_list(raw, line_no: int, key: str) -> list[str]:
    if not isinstance(raw, list) or any(not isinstance(v, str) for v in raw):
        raise SchemaError(line_no, f"'{key}' must be a list of strings")
    return raw


_REQUIRED_KEYS = (
    "id", "year", "doc_type", "source_id",
    "subject_categories", "title", "authors", "reprint_author", "references",
)


def parse_record(obj: dict, line_no: int = 0) -> Publication:
    """Validate one decoded JSON object and build a :class:`Publication`.

    Unknown keys are ignored.  Violations raise :class:`SchemaError`
    carrying ``line_no``.
    """
    if not isinstance(obj, dict):
        raise SchemaError(line_no, "record is not a JSON object")
    missing = [k for k in _REQUIRED_KEYS if k not in obj]
    if missing:
        raise SchemaError(line_no, f"missing keys: {', '.join(missing)}")

    pub_id = obj["id"]
    if not isinstance(pub_id, str) or not pub_id:
        raise SchemaError(line_no, "'id' must be a non-empty string")
    year = obj["year"]
    if not isinstance(year, int) or isinstance(year, bool):
        raise SchemaError(line_no, "'year' must be an integer")
    if not isinstance(obj["doc_type"], str):
        raise SchemaError(line_no, "'doc_type' must be a string")
    if not isinstance(obj["source_id"], str):
        raise SchemaError(line_no, "'source_id' must be a string")
    if not isinstance(obj["title"], str):
        raise SchemaError(line_no, "'title' must be a string")

    categories = _parse_str_list(obj["subject_categories"], line_no,
                                 "subject_categories")
    if not categories or any(not c for c in categories):
        raise SchemaError(line_no, "'subject_categories' must be non-empty strings")
    if any("|" in c for c in categories):
        raise SchemaError(line_no, "subject category contains '|'")

    authors = _parse_authors(obj["authors"], line_no)

    reprint = obj["reprint_author"]
    if reprint is not None and (isinstance(reprint, bool)
                                or not isinstance(reprint, int)):
        raise SchemaError(line_no, "'reprint_author' must be an integer or null")

    references = _parse_str_list(obj["references"], line_no, "references")
    if any(not r for r in references):
        raise SchemaError(line_no, "'references' contains an empty string")

    try:
        return Publication(
            pub_id=pub_id,
            year=year,
            doc_type=DocType.from_label(obj["doc_type"]),
            source_id=obj["source_id"],
            subject_categories=tuple(categories),
            title=obj["title"],
            authors=authors,
            reprint_author=reprint,
            references=frozenset(references),
        )
    except ValueError as exc:
        raise SchemaError(line_no, str(exc)) from exc


@dataclass(frozen=True)
class Corpus:
    """An immutable publication collection with per-field inverted indexes.

    Every index maps a field value to the frozenset of publication ids
    carrying it; ids round-trip, i.e. ``pid in by_cell[corpus.publications
    [pid].cell.key]`` for every publication.
    """

    publications: Mapping[str, Publication]
    by_cell: Mapping[str, frozenset[str]]
    by_title_word: Mapping[str, frozenset[str]]
    by_author_key: Mapping[str, frozenset[str]]
    by_reprint_author_key: Mapping[str, frozenset[str]]
    by_reference: Mapping[str, frozenset[str]]
    by_year: Mapping[int, frozenset[str]]
    ingest_report: IngestReport | None = None

    def __len__(self) -> int:
        return len(self.publications)

    def __contains__(self, pub_id: str) -> bool:
        return pub_id in self.publications

    def __iter__(self) -> Iterator[Publication]:
        return iter(self.publications.values())

    def ids_in_years(self, years: Iterable[int]) -> frozenset[str]:
        """Union of publication ids over the given years."""
        out: set[str] = set()
        for y in years:
            out.update(self.by_year.get(y, ()))
        return frozenset(out)

    @classmethod
    def from_publications(
        cls,
        publications: Iterable[Publication],
        ingest_report: IngestReport | None = None,
    ) -> "Corpus":
        """Index a publication stream.  Raises :class:`DuplicatePubId`."""
        pubs: dict[str, Publication] = {}
        by_cell: dict[str, set[str]] = {}
        by_word: dict[str, set[str]] = {}
        by_author: dict[str, set[str]] = {}
        by_reprint: dict[str, set[str]] = {}
        by_ref: dict[str, set[str]] = {}
        by_year: dict[int, set[str]] = {}
        for pub in publications:
            if pub.pub_id in pubs:
                raise DuplicatePubId(pub.pub_id)
            pid = pub.pub_id
            pubs[pid] = pub
            by_cell.setdefault(pub.cell.key, set()).add(pid)
            for word in pub.title_tokens:
                by_word.setdefault(word, set()).add(pid)
            for key in pub.author_keys:
                by_author.setdefault(key, set()).add(pid)
            if pub.reprint_author_key is not None:
                by_reprint.setdefault(pub.reprint_author_key, set()).add(pid)
            for ref in pub.references:
                by_ref.setdefault(ref, set()).add(pid)
            by_year.setdefault(pub.year, set()).add(pid)
        freeze = lambda d: {k: frozenset(v) for k, v in d.items()}
        return cls(
            publications=pubs,
            by_cell=freeze(by_cell),
            by_title_word=freeze(by_word),
            by_author_key=freeze(by_author),
            by_reprint_author_key=freeze(by_reprint),
            by_reference=freeze(by_ref),
            by_year=freeze(by_year),
            ingest_report=ingest_report,
        )


def _read_lines(path: str | Path) -> list[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    return text.splitlines()


def ingest(path: str | Path, options: IngestOptions | None = None) -> Corpus:
    """Parse a JSON-lines corpus file into an indexed :class:`Corpus`.

    Blank lines are skipped.  Malformed lines (bad JSON or schema
    violations) are skipped and reported via ``corpus.ingest_report``
    unless ``options.strict`` is set, in which case the first violation
    raises :class:`SchemaError`.  Duplicate publication ids always raise
    :class:`DuplicatePubId`, strict or not: a silently dropped duplicate
    could change every downstream count.
    """
    options = options or IngestOptions()
    pubs: list[Publication] = []
    rejected: list[RejectedLine] = []
    total = 0
    seen: set[str] = set()
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        total += 1
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, f"invalid JSON: {exc.msg}") from exc
            pub = parse_record(obj, line_no)
        except SchemaError as exc:
            if options.strict:
                raise
            rejected.append(RejectedLine(exc.line_no, exc.reason))
            continue
        if pub.pub_id in seen:
            raise DuplicatePubId(pub.pub_id)
        seen.add(pub.pub_id)
        pubs.append(pub)
    report = IngestReport(
        total_lines=total, accepted=len(pubs), rejected=tuple(rejected)
    )
    return Corpus.from_publications(pubs, ingest_report=report)
