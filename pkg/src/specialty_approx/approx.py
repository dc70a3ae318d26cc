"""Specialty approximation: combine per-field coverage over a year window.

Phase three of the pipeline.  Every corpus publication inside the year
window gets a four-flag coverage profile (one flag per field, true when
the field's key values cover the publication); those covered in at least
``min_fields`` fields form the specialty approximation.

Under per-field coverage ``t`` and independence, the chance a seed-like
publication lands in a >=3-of-4 approximation is
``4 t^3 (1 - t) + t^4`` (three fields exactly, or all four), exposed as
:func:`expected_inclusion_probability`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping

from .corpus import Corpus
from .errors import (EmptyApproximation, EmptyWindow, InvalidConfig,
                     OutOfRange)
from .keys import (FIELD_ORDER, AuthorScope, FieldKind, KeysConfig,
                   KeyValueSets, compute_all_keys, publication_covered)
from .seed import SeedRecord


def expected_inclusion_probability(t):
    """Probability of coverage in >= 3 of 4 fields, per-field share ``t``.

    Pure arithmetic (no floats introduced), so exact ``Fraction`` inputs
    give exact results: t = 4/5 yields 512/625 = 0.8192.  Raises
    :class:`OutOfRange` unless 0 <= t <= 1.
    """
    if t < 0 or t > 1:
        raise OutOfRange(f"per-field share must lie in [0, 1], got {t!r}")
    return 4 * t**3 * (1 - t) + t**4


def expected_inclusion_rate(shares, min_fields: int = 3):
    """P(covered in >= ``min_fields`` fields) for independent field shares.

    Generalizes :func:`expected_inclusion_probability` to per-field
    shares and any member rule; with four equal shares and
    ``min_fields=3`` the two agree.
    """
    shares = tuple(shares)
    if not 1 <= min_fields <= len(shares):
        raise OutOfRange(
            f"min_fields must lie in 1..{len(shares)}, got {min_fields}"
        )
    for s in shares:
        if s < 0 or s > 1:
            raise OutOfRange(f"per-field share must lie in [0, 1], got {s!r}")
    total = 0
    for combo in product((False, True), repeat=len(shares)):
        if sum(combo) < min_fields:
            continue
        term = 1
        for s, hit in zip(shares, combo):
            term = term * (s if hit else (1 - s))
        total = total + term
    return total


@dataclass(frozen=True, order=True)
class YearWindow:
    """An inclusive publication-year window."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise EmptyWindow(f"window start {self.start} > end {self.end}")

    def years(self) -> range:
        return range(self.start, self.end + 1)

    def __contains__(self, year: int) -> bool:
        return self.start <= year <= self.end

    def __str__(self) -> str:
        return f"{self.start}:{self.end}"

    @classmethod
    def parse(cls, text: str) -> "YearWindow":
        """Parse ``"START:END"`` (or a single year meaning START=END)."""
        raw = text.strip()
        try:
            if ":" in raw:
                start_s, end_s = raw.split(":", 1)
                return cls(int(start_s), int(end_s))
            year = int(raw)
            return cls(year, year)
        except ValueError as exc:
            raise InvalidConfig(f"not a year window: {text!r}") from exc


@dataclass(frozen=True)
class CoverageProfile:
    """Which fields' key values cover one publication."""

    pub_id: str
    cell: bool
    title_word: bool
    author: bool
    reference: bool

    @property
    def flags(self) -> tuple[bool, bool, bool, bool]:
        # canonical field order: cell, title_word, author, reference
        return (self.cell, self.title_word, self.author, self.reference)

    @property
    def count(self) -> int:
        return sum(self.flags)

    @property
    def mask(self) -> str:
        """Four-character bitmask in canonical field order, e.g. "1011"."""
        return "".join("1" if f else "0" for f in self.flags)

    def covers(self, field: FieldKind) -> bool:
        return self.flags[FIELD_ORDER.index(field)]


def coverage_profile(pub, keys: KeyValueSets) -> CoverageProfile:
    """Evaluate all four coverage rules for one publication."""
    return CoverageProfile(
        pub_id=pub.pub_id,
        cell=publication_covered(pub, FieldKind.CELL,
                                 keys.cells.selected, keys.config),
        title_word=publication_covered(pub, FieldKind.TITLE_WORD,
                                       keys.title_words.selected, keys.config),
        author=publication_covered(pub, FieldKind.AUTHOR,
                                   keys.authors.selected, keys.config),
        reference=publication_covered(pub, FieldKind.REFERENCE,
                                      keys.references.selected, keys.config),
    )


def all_masks() -> tuple[str, ...]:
    """All 16 flag-combination masks, sorted."""
    return tuple(format(i, "04b") for i in range(16))


@dataclass(frozen=True)
class SpecialtyApproximation:
    """The approximated specialty over one year window.

    ``histogram`` counts every in-window publication by covered-field
    count (bins 0..4 always present); ``subset_sizes`` counts them by
    exact flag combination (all 16 masks present).  ``profiles`` holds
    the members' coverage profiles only.
    """

    member_ids: tuple[str, ...]
    window: YearWindow
    min_fields: int
    n_in_window: int
    histogram: Mapping[int, int]
    subset_sizes: Mapping[str, int]
    profiles: Mapping[str, CoverageProfile]
    key_author_match_counts: Mapping[str, int]

    @cached_property
    def member_set(self) -> frozenset[str]:
        return frozenset(self.member_ids)

    def __len__(self) -> int:
        return len(self.member_ids)

    def __contains__(self, pub_id: str) -> bool:
        return pub_id in self.member_set


def _selected_union(
    index: Mapping[str, frozenset[str]],
    values,
    window_ids: frozenset[str],
) -> set[str]:
    out: set[str] = set()
    for value in values:
        out.update(index.get(value, frozenset()) & window_ids)
    return out


def build_approximation(
    corpus: Corpus,
    keys: KeyValueSets,
    window: YearWindow,
    min_fields: int = 3,
) -> SpecialtyApproximation:
    """Assemble the approximation from key values over a year window.

    Uses the corpus inverted indexes, which is equivalent to evaluating
    :func:`coverage_profile` on every in-window publication but avoids
    touching publications the key values never reach.
    """
    if not 1 <= min_fields <= 4:
        raise OutOfRange(f"min_fields must lie in 1..4, got {min_fields}")
    config = keys.config
    if config.author_scope is AuthorScope.AUTO:
        raise InvalidConfig("approximation needs a resolved author scope")

    window_ids = corpus.ids_in_years(window.years())
    author_index = (corpus.by_reprint_author_key
                    if config.author_scope is AuthorScope.REPRINT_ONLY
                    else corpus.by_author_key)

    covered: dict[FieldKind, set[str]] = {
        FieldKind.CELL: _selected_union(
            corpus.by_cell, keys.cells.values, window_ids),
        FieldKind.AUTHOR: _selected_union(
            author_index, keys.authors.values, window_ids),
        FieldKind.REFERENCE: _selected_union(
            corpus.by_reference, keys.references.values, window_ids),
    }
    word_hits: dict[str, int] = {}
    for word in keys.title_words.values:
        for pid in corpus.by_title_word.get(word, frozenset()) & window_ids:
            word_hits[pid] = word_hits.get(pid, 0) + 1
    covered[FieldKind.TITLE_WORD] = {
        pid for pid, hits in word_hits.items()
        if hits >= config.required_title_words
    }

    histogram = {k: 0 for k in range(5)}
    subset_sizes = {mask: 0 for mask in all_masks()}
    members: list[str] = []
    profiles: dict[str, CoverageProfile] = {}
    for pid in window_ids:
        profile = CoverageProfile(
            pub_id=pid,
            cell=pid in covered[FieldKind.CELL],
            title_word=pid in covered[FieldKind.TITLE_WORD],
            author=pid in covered[FieldKind.AUTHOR],
            reference=pid in covered[FieldKind.REFERENCE],
        )
        histogram[profile.count] += 1
        subset_sizes[profile.mask] += 1
        if profile.count >= min_fields:
            members.append(pid)
            profiles[pid] = profile

    members.sort()
    match_counts = {
        key: len(author_index.get(key, frozenset()) & window_ids)
        for key in keys.authors.values
    }
    return SpecialtyApproximation(
        member_ids=tuple(members),
        window=window,
        min_fields=min_fields,
        n_in_window=len(window_ids),
        histogram=histogram,
        subset_sizes=subset_sizes,
        profiles=profiles,
        key_author_match_counts=match_counts,
    )


def seed_coverage_histogram(
    corpus: Corpus,
    seed: SeedRecord,
    keys: KeyValueSets,
) -> dict[int, float]:
    """Share of seed publications by covered-field count (bins 0..4).

    The fractions sum to 1 (up to float error); bin ``k`` holds the share
    of seed publications whose own key values cover them in exactly ``k``
    fields.
    """
    pubs = [corpus.publications[pid] for pid in sorted(seed.all_ids)]
    if not pubs:
        raise EmptyApproximation("seed record is empty")
    counts = {k: 0 for k in range(5)}
    for pub in pubs:
        counts[coverage_profile(pub, keys).count] += 1
    n = len(pubs)
    return {k: v / n for k, v in counts.items()}


def rederive_key_values(
    corpus: Corpus,
    approximation: SpecialtyApproximation,
    config: KeysConfig | None = None,
) -> KeyValueSets:
    """Re-run key-value selection with the approximation as the seed.

    The members become a fresh (non-extended) seed; large populations
    typically need far smaller key shares per unique value than the
    original seed did.
    """
    if not approximation.member_ids:
        raise EmptyApproximation("approximation has no members")
    new_seed = SeedRecord(
        initial_ids=approximation.member_set,
        extended_ids=frozenset(),
        unresolved_references=frozenset(),
    )
    return compute_all_keys(corpus, new_seed, config or KeysConfig())


APPROX_CSV_COLUMNS = (
    "pub_id", "year", "cell", "title_word", "author", "reference", "count",
)


def write_approximation_csv(
    approximation: SpecialtyApproximation,
    corpus: Corpus,
    path,
) -> None:
    """Write the members as CSV: id, year, four 0/1 flags, flag count.

    Rows are sorted by publication id; output is byte-deterministic.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(APPROX_CSV_COLUMNS)
        for pid in approximation.member_ids:
            profile = approximation.profiles[pid]
            writer.writerow([
                pid,
                corpus.publications[pid].year,
                *(int(f) for f in profile.flags),
                profile.count,
            ])
