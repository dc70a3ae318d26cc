"""Key-value selection: per-field frequency-greedy coverage of a seed.

For each of the four fields (cell, title word, author, reference) the
seed's values are ranked by how many seed publications carry them, then
admitted from the top until the selected values cover a threshold share
of the seed.  Ties are whole batches: every value with the current
frequency joins at once, so the outcome never depends on input order.

A publication counts as covered by a field's selection when

* cell: its cell is selected;
* title word: at least ``required_title_words`` of its (length-filtered)
  title words are selected;
* author: any of its in-scope author keys is selected;
* reference: any of its references is selected.
"""

from __future__ import annotations

import csv
import dataclasses
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import groupby
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .corpus import Corpus, Publication
from .errors import EmptySeed, InvalidConfig, Unsatisfiable, UnknownPubId
from .seed import SeedRecord


class FieldKind(Enum):
    """The four publication fields key values are drawn from."""

    CELL = "cell"
    TITLE_WORD = "title_word"
    AUTHOR = "author"
    REFERENCE = "reference"


FIELD_ORDER: tuple[FieldKind, ...] = (
    FieldKind.CELL, FieldKind.TITLE_WORD, FieldKind.AUTHOR, FieldKind.REFERENCE,
)


class AuthorScope(Enum):
    """Which author occurrences of a publication are in scope.

    AUTO resolves per seed: reprint-corresponding authors only when at
    least ``REPRINT_AUTO_MIN_SHARE`` of seed publications carry reprint
    data, all authors otherwise.
    """

    AUTO = "auto"
    ALL_AUTHORS = "all_authors"
    REPRINT_ONLY = "reprint_only"


REPRINT_AUTO_MIN_SHARE = 0.9


@dataclass(frozen=True)
class KeysConfig:
    """All knobs of the key-value selection phase.

    Thresholds are per-field shares of seed publications in (0, 1];
    each field is independently configurable.
    """

    threshold_cell: float = 0.8
    threshold_title: float = 0.8
    threshold_author: float = 0.8
    threshold_reference: float = 0.8
    min_word_len: int = 5
    required_title_words: int = 2
    author_scope: AuthorScope = AuthorScope.AUTO
    doi_only_references: bool = False

    def __post_init__(self):
        for name in ("threshold_cell", "threshold_title",
                     "threshold_author", "threshold_reference"):
            t = getattr(self, name)
            if not isinstance(t, (int, float)) or not 0 < t <= 1:
                raise InvalidConfig(f"{name} must lie in (0, 1], got {t!r}")
        if self.min_word_len < 1:
            raise InvalidConfig("min_word_len must be >= 1")
        if self.required_title_words < 1:
            raise InvalidConfig("required_title_words must be >= 1")

    def threshold_for(self, field: FieldKind) -> float:
        return {
            FieldKind.CELL: self.threshold_cell,
            FieldKind.TITLE_WORD: self.threshold_title,
            FieldKind.AUTHOR: self.threshold_author,
            FieldKind.REFERENCE: self.threshold_reference,
        }[field]

    def resolved_for_seed(self, pubs: Sequence[Publication]) -> "KeysConfig":
        """Pin AUTO author scope for a concrete seed (no-op otherwise)."""
        if self.author_scope is not AuthorScope.AUTO:
            return self
        if not pubs:
            raise EmptySeed("cannot resolve author scope on an empty seed")
        with_reprint = sum(1 for p in pubs if p.reprint_author_key is not None)
        share = with_reprint / len(pubs)
        scope = (AuthorScope.REPRINT_ONLY if share >= REPRINT_AUTO_MIN_SHARE
                 else AuthorScope.ALL_AUTHORS)
        return dataclasses.replace(self, author_scope=scope)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["author_scope"] = self.author_scope.value
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "KeysConfig":
        kwargs = dict(data)
        if "author_scope" in kwargs:
            kwargs["author_scope"] = AuthorScope(kwargs["author_scope"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc


def in_scope_author_keys(pub: Publication, scope: AuthorScope) -> frozenset[str]:
    """The author keys of ``pub`` that the given scope considers."""
    if scope is AuthorScope.ALL_AUTHORS:
        return pub.author_keys
    if scope is AuthorScope.REPRINT_ONLY:
        key = pub.reprint_author_key
        return frozenset((key,)) if key is not None else frozenset()
    raise InvalidConfig("author scope AUTO is unresolved; resolve per seed first")


def extract_field_values(
    pub: Publication, field: FieldKind, config: KeysConfig
) -> frozenset[str]:
    """A publication's value set for one field under a config."""
    if field is FieldKind.CELL:
        return frozenset((pub.cell.key,))
    if field is FieldKind.TITLE_WORD:
        return frozenset(
            t for t in pub.title_tokens if len(t) >= config.min_word_len
        )
    if field is FieldKind.AUTHOR:
        return in_scope_author_keys(pub, config.author_scope)
    return pub.doi_references if config.doi_only_references else pub.references


def homonym_surnames(
    pubs: Iterable[Publication], scope: AuthorScope
) -> frozenset[str]:
    """Surnames appearing with more than one first initial, in scope.

    Such names are ambiguous person identities; they lose key-author
    candidacy (they still match during coverage checks if some selected
    key happens to share the string, which cannot occur since homonym
    keys are never selected).
    """
    initials_by_surname: dict[str, set[str]] = defaultdict(set)
    for pub in pubs:
        for key in in_scope_author_keys(pub, scope):
            surname, _, initial = key.rpartition(" ")
            initials_by_surname[surname].add(initial)
    return frozenset(
        s for s, initials in initials_by_surname.items() if len(initials) > 1
    )


def _seed_publications(corpus: Corpus, seed: SeedRecord) -> list[Publication]:
    pubs = []
    for pid in sorted(seed.all_ids):
        pub = corpus.publications.get(pid)
        if pub is None:
            raise UnknownPubId(pid)
        pubs.append(pub)
    if not pubs:
        raise EmptySeed("seed record is empty")
    return pubs


def field_frequencies(
    corpus: Corpus,
    seed: SeedRecord,
    field: FieldKind,
    config: KeysConfig | None = None,
) -> dict[str, int]:
    """Raw frequency table: value -> number of seed publications carrying it.

    Counts every distinct value including homonym author keys; homonym
    exclusion is a candidacy rule of :func:`select_key_values`, not a
    counting rule.
    """
    config = config or KeysConfig()
    pubs = _seed_publications(corpus, seed)
    config = config.resolved_for_seed(pubs)
    freq: dict[str, int] = defaultdict(int)
    for pub in pubs:
        for value in extract_field_values(pub, field, config):
            freq[value] += 1
    return dict(freq)


@dataclass(frozen=True)
class KeyValueEntry:
    """One selected key value with its rank context.

    ``cumulative_coverage`` is the share of seed publications covered by
    the selection up to and including this value, in admission order.
    """

    value: str
    frequency: int
    cumulative_coverage: float


@dataclass(frozen=True)
class KeyValueSet:
    """The selected key values of one field.

    Entries are ordered by (frequency desc, value asc) with no
    duplicates.  ``exhausted`` marks a selection that ran out of
    candidates below threshold; such sets only travel inside
    :class:`Unsatisfiable`.
    """

    field: FieldKind
    entries: tuple[KeyValueEntry, ...]
    threshold: float
    achieved_coverage: float
    n_unique_values: int
    n_eligible_values: int
    n_excluded_homonyms: int = 0
    descended_to_frequency_one: bool = False
    exhausted: bool = False

    @property
    def values(self) -> tuple[str, ...]:
        return tuple(e.value for e in self.entries)

    @property
    def selected(self) -> frozenset[str]:
        return frozenset(e.value for e in self.entries)

    @property
    def key_share_of_unique(self) -> float:
        """Selected values as a share of all distinct candidate values."""
        if self.n_unique_values == 0:
            return 0.0
        return len(self.entries) / self.n_unique_values

    def __len__(self) -> int:
        return len(self.entries)


def publication_covered(
    pub: Publication,
    field: FieldKind,
    selected: frozenset[str],
    config: KeysConfig,
) -> bool:
    """Does a selection of key values cover this publication's field?"""
    values = extract_field_values(pub, field, config)
    if field is FieldKind.TITLE_WORD:
        return len(values & selected) >= config.required_title_words
    return not values.isdisjoint(selected)


def select_key_values(
    corpus: Corpus,
    seed: SeedRecord,
    field: FieldKind,
    config: KeysConfig | None = None,
) -> KeyValueSet:
    """Select one field's key values by batch-greedy frequency descent.

    Candidate values are ranked by seed frequency; equal-frequency values
    form one batch, admitted whole (value id ascending within the batch).
    Selection stops at the first batch after which the covered share of
    seed publications reaches the field's threshold.  If every candidate
    is admitted and the threshold is still not met, :class:`Unsatisfiable`
    is raised carrying the exhausted partial set.
    """
    config = config or KeysConfig()
    pubs = _seed_publications(corpus, seed)
    config = config.resolved_for_seed(pubs)
    threshold = config.threshold_for(field)
    required = (config.required_title_words
                if field is FieldKind.TITLE_WORD else 1)

    posting: dict[str, list[str]] = defaultdict(list)
    for pub in pubs:
        for value in extract_field_values(pub, field, config):
            posting[value].append(pub.pub_id)
    n_unique = len(posting)

    n_homonyms_excluded = 0
    if field is FieldKind.AUTHOR:
        homonyms = homonym_surnames(pubs, config.author_scope)
        if homonyms:
            before = len(posting)
            posting = {
                k: v for k, v in posting.items()
                if k.rpartition(" ")[0] not in homonyms
            }
            n_homonyms_excluded = before - len(posting)

    # one deterministic ranking; groupby yields the tie batches
    ranked = sorted(posting.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    n = len(pubs)
    hit_counts: dict[str, int] = defaultdict(int)
    covered = 0
    entries: list[KeyValueEntry] = []
    reached = False
    for freq, batch in groupby(ranked, key=lambda kv: len(kv[1])):
        for value, pub_ids in batch:
            for pid in pub_ids:
                hit_counts[pid] += 1
                if hit_counts[pid] == required:
                    covered += 1
            entries.append(KeyValueEntry(value, freq, covered / n))
        if covered / n >= threshold:
            reached = True
            break

    result = KeyValueSet(
        field=field,
        entries=tuple(entries),
        threshold=threshold,
        achieved_coverage=covered / n,
        n_unique_values=n_unique,
        n_eligible_values=len(posting),
        n_excluded_homonyms=n_homonyms_excluded,
        descended_to_frequency_one=bool(entries) and entries[-1].frequency == 1,
        exhausted=not reached,
    )
    if not reached:
        raise Unsatisfiable(field, result)
    return result


@dataclass(frozen=True)
class KeyValueSets:
    """The four per-field selections plus the resolved config they used."""

    cells: KeyValueSet
    title_words: KeyValueSet
    authors: KeyValueSet
    references: KeyValueSet
    config: KeysConfig

    def per_field(self, field: FieldKind) -> KeyValueSet:
        return {
            FieldKind.CELL: self.cells,
            FieldKind.TITLE_WORD: self.title_words,
            FieldKind.AUTHOR: self.authors,
            FieldKind.REFERENCE: self.references,
        }[field]

    def __iter__(self) -> Iterator[KeyValueSet]:
        return iter((self.cells, self.title_words, self.authors,
                     self.references))

    def warnings(self) -> list[str]:
        out = []
        for kvs in self:
            if kvs.descended_to_frequency_one:
                out.append(
                    f"{kvs.field.value}: selection descended to frequency-1 "
                    f"values ({len(kvs)} of {kvs.n_eligible_values} "
                    f"candidates selected)"
                )
        if self.authors.n_excluded_homonyms:
            out.append(
                f"author: {self.authors.n_excluded_homonyms} homonym key(s) "
                f"excluded from candidacy"
            )
        return out


def compute_all_keys(
    corpus: Corpus,
    seed: SeedRecord,
    config: KeysConfig | None = None,
) -> KeyValueSets:
    """Run selection for all four fields under one resolved config.

    The AUTO author scope is resolved once against the seed, and the
    returned bundle records the resolved config so every later coverage
    check uses the same scope.  The first field failing its threshold
    raises :class:`Unsatisfiable` (fields run in the canonical order
    cell, title word, author, reference).
    """
    config = config or KeysConfig()
    pubs = _seed_publications(corpus, seed)
    config = config.resolved_for_seed(pubs)
    picked = {
        field: select_key_values(corpus, seed, field, config)
        for field in FIELD_ORDER
    }
    return KeyValueSets(
        cells=picked[FieldKind.CELL],
        title_words=picked[FieldKind.TITLE_WORD],
        authors=picked[FieldKind.AUTHOR],
        references=picked[FieldKind.REFERENCE],
        config=config,
    )


KEY_CSV_COLUMNS = ("field", "rank", "value", "frequency", "cumulative_coverage")


def write_key_values_csv(keys: KeyValueSets, path: str | Path) -> None:
    """Write all selected key values as CSV (one row per value).

    Rows appear in canonical field order, then selection order; ``rank``
    is 1-based within each field.  Output is byte-deterministic for a
    given selection.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(KEY_CSV_COLUMNS)
        for kvs in keys:
            for rank, entry in enumerate(kvs.entries, start=1):
                writer.writerow([
                    kvs.field.value, rank, entry.value, entry.frequency,
                    repr(entry.cumulative_coverage),
                ])


def read_key_values_csv(
    path: str | Path,
) -> dict[FieldKind, tuple[KeyValueEntry, ...]]:
    """Read back a key-values CSV into per-field entry tuples."""
    out: dict[FieldKind, list[KeyValueEntry]] = {f: [] for f in FIELD_ORDER}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            out[FieldKind(row["field"])].append(KeyValueEntry(
                value=row["value"],
                frequency=int(row["frequency"]),
                cumulative_coverage=float(row["cumulative_coverage"]),
            ))
    return {f: tuple(v) for f, v in out.items()}
