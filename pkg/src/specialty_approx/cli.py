"""Command-line interface.

Subcommands mirror the pipeline phases plus the downstream tools:

* ``ingest``     parse and index a corpus, report malformed lines
* ``seed``       resolve and extend a seed record
* ``keys``       seed + per-field key-value selection
* ``approx``     full pipeline: seed -> keys -> approximation -> histogram
* ``reviewers``  prominent-author shortlist from an ``approx`` run
* ``coverage``   coverage of an arbitrary record by an ``approx`` run's keys
* ``generate``   synthesize a corpus with ground-truth labels
* ``evaluate``   precision/recall of an ``approx`` run against ground truth

Every command writes a ``manifest.json`` (arguments, sha256 input
digests, outputs, warnings, wall time) next to its outputs.  Primary
outputs (CSV/JSON artifacts) are byte-deterministic for identical inputs
and flags; the manifest embeds the wall time and is not.

Exit codes: 0 success; 1 pipeline failure on valid input (empty seed,
unsatisfiable threshold, ...); 2 unusable input (unreadable file,
malformed corpus line, duplicate id, bad flag value).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import analytics, approx, corpus as corpus_mod, keys as keys_mod
from . import seed as seed_mod, syngen
from .errors import (CorpusInputError, EmptyRecord, InvalidConfig,
                     SchemaError, SpecialtyApproxError, Unsatisfiable)

_SCOPE_CHOICES = {
    "auto": keys_mod.AuthorScope.AUTO,
    "all": keys_mod.AuthorScope.ALL_AUTHORS,
    "reprint": keys_mod.AuthorScope.REPRINT_ONLY,
}

DEFAULT_CONFLICT_SPAN = 5


# ---------------------------------------------------------------- helpers

def _threshold(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("threshold must lie in (0, 1]")
    return value


def _window(text: str) -> approx.YearWindow:
    try:
        return approx.YearWindow.parse(text)
    except SpecialtyApproxError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _min_fields(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 1 <= value <= 4:
        raise argparse.ArgumentTypeError("min-fields must lie in 1..4")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _atomic(path: Path, write_fn) -> None:
    """Write through a sibling temp file, then rename into place."""
    tmp = path.with_name(path.name + ".tmp")
    write_fn(tmp)
    os.replace(tmp, path)


def _write_json(path: Path, payload) -> None:
    _atomic(path, lambda tmp: tmp.write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    ))


class _Run:
    """Collects manifest material while a command executes."""

    def __init__(self, command: str, arguments: dict):
        self.command = command
        self.arguments = arguments
        self.inputs: dict[str, dict] = {}
        self.outputs: list[str] = []
        self.warnings: list[str] = []
        self.stats: dict = {}
        self._t0 = time.perf_counter()

    def add_input(self, name: str, path: str | Path) -> None:
        path = Path(path)
        self.inputs[name] = {"path": str(path), "sha256": _sha256(path)}

    def emit(self, path: Path, write_fn) -> None:
        _atomic(path, write_fn)
        self.outputs.append(path.name)

    def emit_json(self, path: Path, payload) -> None:
        self.emit(path, lambda tmp: tmp.write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        ))

    def write_manifest(self, out_dir: Path) -> None:
        manifest = {
            "command": self.command,
            "arguments": self.arguments,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
            "stats": self.stats,
            "warnings": self.warnings,
            "wall_time_seconds": round(time.perf_counter() - self._t0, 6),
        }
        _write_json(out_dir / "manifest.json", manifest)


def _read_ids(path: str | Path) -> list[str]:
    """Read newline-delimited publication ids ('#' starts a comment)."""
    out = []
    for line in corpus_mod._read_lines(path):
        text = line.split("#", 1)[0].strip()
        if text:
            out.append(text)
    return out


def _load_corpus(path: str | Path) -> corpus_mod.Corpus:
    """Ingest for pipeline commands: any malformed line is fatal (exit 2)."""
    loaded = corpus_mod.ingest(path)
    report = loaded.ingest_report
    if report is not None and report.rejected:
        shown = ", ".join(
            f"line {r.line_no} ({r.reason})" for r in report.rejected[:10]
        )
        more = len(report.rejected) - 10
        if more > 0:
            shown += f", and {more} more"
        raise SchemaError(
            report.rejected[0].line_no,
            f"{len(report.rejected)} malformed corpus line(s): {shown}",
        )
    return loaded


def _keys_config(args: argparse.Namespace) -> keys_mod.KeysConfig:
    return keys_mod.KeysConfig(
        threshold_cell=args.threshold_cell,
        threshold_title=args.threshold_title,
        threshold_author=args.threshold_author,
        threshold_reference=args.threshold_ref,
        min_word_len=args.min_word_len,
        required_title_words=args.title_words_required,
        author_scope=_SCOPE_CHOICES[args.author_scope],
        doi_only_references=args.doi_only_refs,
    )


def _field_block(kvs: keys_mod.KeyValueSet) -> dict:
    return {
        "threshold": kvs.threshold,
        "achieved_coverage": kvs.achieved_coverage,
        "n_selected": len(kvs),
        "n_unique_values": kvs.n_unique_values,
        "n_eligible_values": kvs.n_eligible_values,
        "n_excluded_homonyms": kvs.n_excluded_homonyms,
        "descended_to_frequency_one": kvs.descended_to_frequency_one,
        "key_share_of_unique": kvs.key_share_of_unique,
    }


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ------------------------------------------------------------- subcommands

def cmd_ingest(args: argparse.Namespace) -> int:
    run = _Run("ingest", {"corpus": args.corpus, "strict": args.strict})
    loaded = corpus_mod.ingest(
        args.corpus, corpus_mod.IngestOptions(strict=args.strict)
    )
    run.add_input("corpus", args.corpus)
    report = loaded.ingest_report
    years = sorted(loaded.by_year)
    payload = {
        "total_lines": report.total_lines,
        "accepted": report.accepted,
        "rejected": [
            {"line_no": r.line_no, "reason": r.reason} for r in report.rejected
        ],
        "n_publications": len(loaded),
        "year_range": [years[0], years[-1]] if years else None,
        "index_sizes": {
            "cells": len(loaded.by_cell),
            "title_words": len(loaded.by_title_word),
            "authors": len(loaded.by_author_key),
            "references": len(loaded.by_reference),
        },
    }
    if args.out:
        out = _out_dir(args)
        run.stats = {"accepted": report.accepted,
                     "rejected": len(report.rejected)}
        run.emit_json(out / "ingest_report.json", payload)
        run.write_manifest(out)
    print(f"accepted {report.accepted} of {report.total_lines} line(s), "
          f"{len(report.rejected)} rejected")
    for r in report.rejected[:20]:
        print(f"  rejected line {r.line_no}: {r.reason}", file=sys.stderr)
    if len(report.rejected) > 20:
        print(f"  ... and {len(report.rejected) - 20} more", file=sys.stderr)
    return 2 if report.rejected else 0


def _build_seed(args, loaded: corpus_mod.Corpus) -> seed_mod.SeedRecord:
    ids = _read_ids(args.ids)
    return seed_mod.build_seed_record(loaded, ids, extend=args.extend)


def cmd_seed(args: argparse.Namespace) -> int:
    run = _Run("seed", {
        "corpus": args.corpus, "ids": args.ids, "extend": args.extend,
    })
    loaded = _load_corpus(args.corpus)
    run.add_input("corpus", args.corpus)
    run.add_input("ids", args.ids)
    record = _build_seed(args, loaded)
    out = _out_dir(args)
    run.emit(out / "seed.csv", lambda p: seed_mod.write_seed_csv(record, p))
    run.stats = {
        "initial": len(record.initial_ids),
        "added_via_reference": len(record.extended_ids),
        "unresolved_references": record.unresolved_reference_count,
    }
    run.write_manifest(out)
    print(f"seed: {len(record.initial_ids)} initial + "
          f"{len(record.extended_ids)} added via references "
          f"({record.unresolved_reference_count} unresolved reference(s))")
    return 0


def _derive_keys(args, loaded, record):
    config = _keys_config(args)
    return keys_mod.compute_all_keys(loaded, record, config)


def _emit_keys_artifacts(run, out, record, keys):
    run.emit(out / "seed.csv", lambda p: seed_mod.write_seed_csv(record, p))
    run.emit(out / "keys.csv",
             lambda p: keys_mod.write_key_values_csv(keys, p))
    for warning in keys.warnings():
        run.warnings.append(warning)


def cmd_keys(args: argparse.Namespace) -> int:
    run = _Run("keys", {
        "corpus": args.corpus, "ids": args.ids, "extend": args.extend,
        "keys_config": _keys_config(args).to_dict(),
    })
    loaded = _load_corpus(args.corpus)
    run.add_input("corpus", args.corpus)
    run.add_input("ids", args.ids)
    record = _build_seed(args, loaded)
    keys = _derive_keys(args, loaded, record)
    out = _out_dir(args)
    _emit_keys_artifacts(run, out, record, keys)
    summary = {
        "config": {"keys": keys.config.to_dict(), "extend": args.extend},
        "seed": {
            "initial": len(record.initial_ids),
            "added_via_reference": len(record.extended_ids),
            "unresolved_references": record.unresolved_reference_count,
        },
        "fields": {
            kvs.field.value: _field_block(kvs) for kvs in keys
        },
    }
    run.emit_json(out / "summary.json", summary)
    run.write_manifest(out)
    for kvs in keys:
        print(f"{kvs.field.value}: {len(kvs)} key value(s), coverage "
              f"{kvs.achieved_coverage:.4f} (threshold {kvs.threshold})")
    for warning in run.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def cmd_approx(args: argparse.Namespace) -> int:
    run = _Run("approx", {
        "corpus": args.corpus, "ids": args.ids, "extend": args.extend,
        "keys_config": _keys_config(args).to_dict(),
        "window": str(args.window), "min_fields": args.min_fields,
    })
    loaded = _load_corpus(args.corpus)
    run.add_input("corpus", args.corpus)
    run.add_input("ids", args.ids)
    record = _build_seed(args, loaded)
    keys = _derive_keys(args, loaded, record)
    histogram = approx.seed_coverage_histogram(loaded, record, keys)
    result = approx.build_approximation(loaded, keys, args.window,
                                        args.min_fields)
    out = _out_dir(args)
    _emit_keys_artifacts(run, out, record, keys)
    run.emit(out / "approximation.csv",
             lambda p: approx.write_approximation_csv(result, loaded, p))
    thresholds = [keys.config.threshold_for(f) for f in keys_mod.FIELD_ORDER]
    summary = {
        "config": {
            "keys": keys.config.to_dict(),
            "extend": args.extend,
            "min_fields": args.min_fields,
            "window": str(args.window),
        },
        "seed": {
            "initial": len(record.initial_ids),
            "added_via_reference": len(record.extended_ids),
            "unresolved_references": record.unresolved_reference_count,
        },
        "fields": {kvs.field.value: _field_block(kvs) for kvs in keys},
        "seed_coverage_histogram": {str(k): v for k, v in histogram.items()},
        "approximation": {
            "window": str(result.window),
            "min_fields": result.min_fields,
            "n_members": len(result),
            "n_in_window": result.n_in_window,
            "histogram": {str(k): v for k, v in result.histogram.items()},
            "subset_sizes": dict(result.subset_sizes),
            "expected_inclusion_rate": approx.expected_inclusion_rate(
                thresholds, args.min_fields
            ),
        },
        "key_author_match_counts": dict(result.key_author_match_counts),
    }
    run.emit_json(out / "summary.json", summary)
    run.stats = {"n_members": len(result), "n_in_window": result.n_in_window}
    run.write_manifest(out)
    print(f"approximation: {len(result)} member(s) of {result.n_in_window} "
          f"in window {result.window} (min_fields={result.min_fields})")
    for warning in run.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _load_run(run_dir: Path, loaded: corpus_mod.Corpus):
    """Rebuild config, key values and approximation from an approx run dir."""
    summary_path = run_dir / "summary.json"
    try:
        summary = json.loads(summary_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidConfig(f"not an approx run dir: {exc}") from exc
    if "approximation" not in summary:
        raise InvalidConfig(
            f"{run_dir} holds no approximation (run the approx command first)"
        )
    config = keys_mod.KeysConfig.from_dict(summary["config"]["keys"])
    entries = keys_mod.read_key_values_csv(run_dir / "keys.csv")
    sets = {}
    for field in keys_mod.FIELD_ORDER:
        block = summary["fields"][field.value]
        sets[field] = keys_mod.KeyValueSet(
            field=field,
            entries=entries[field],
            threshold=block["threshold"],
            achieved_coverage=block["achieved_coverage"],
            n_unique_values=block["n_unique_values"],
            n_eligible_values=block["n_eligible_values"],
            n_excluded_homonyms=block["n_excluded_homonyms"],
            descended_to_frequency_one=block["descended_to_frequency_one"],
        )
    keys = keys_mod.KeyValueSets(
        cells=sets[keys_mod.FieldKind.CELL],
        title_words=sets[keys_mod.FieldKind.TITLE_WORD],
        authors=sets[keys_mod.FieldKind.AUTHOR],
        references=sets[keys_mod.FieldKind.REFERENCE],
        config=config,
    )

    block = summary["approximation"]
    profiles = {}
    members = []
    with open(run_dir / "approximation.csv", encoding="utf-8",
              newline="") as handle:
        for row in csv.DictReader(handle):
            profile = approx.CoverageProfile(
                pub_id=row["pub_id"],
                cell=row["cell"] == "1",
                title_word=row["title_word"] == "1",
                author=row["author"] == "1",
                reference=row["reference"] == "1",
            )
            members.append(row["pub_id"])
            profiles[row["pub_id"]] = profile
    approximation = approx.SpecialtyApproximation(
        member_ids=tuple(members),
        window=approx.YearWindow.parse(block["window"]),
        min_fields=block["min_fields"],
        n_in_window=block["n_in_window"],
        histogram={int(k): v for k, v in block["histogram"].items()},
        subset_sizes=dict(block["subset_sizes"]),
        profiles=profiles,
        key_author_match_counts=dict(summary["key_author_match_counts"]),
    )
    extend = bool(summary["config"].get("extend", True))
    return config, keys, approximation, extend


def _check_corpus_matches_run(run: _Run, run_dir: Path) -> None:
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.exists():
        return
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        recorded = manifest["inputs"]["corpus"]["sha256"]
    except (OSError, json.JSONDecodeError, KeyError):
        return
    if recorded != run.inputs["corpus"]["sha256"]:
        run.warnings.append(
            "corpus digest differs from the one recorded in the run manifest"
        )


def cmd_reviewers(args: argparse.Namespace) -> int:
    run = _Run("reviewers", {
        "corpus": args.corpus, "run": args.run, "focal": args.focal,
        "conflict_window": args.conflict_window, "top": args.top,
        "source": args.source, "scope": args.scope,
    })
    loaded = _load_corpus(args.corpus)
    run.add_input("corpus", args.corpus)
    run_dir = Path(args.run)
    config, keys, approximation, extend = _load_run(run_dir, loaded)
    _check_corpus_matches_run(run, run_dir)

    if ":" in args.conflict_window:
        conflict_window = approx.YearWindow.parse(args.conflict_window)
    else:
        span = int(args.conflict_window)
        if span < 1:
            raise InvalidConfig("conflict window span must be >= 1 year")
        end = approximation.window.end
        conflict_window = approx.YearWindow(end - span + 1, end)

    source = (approximation if args.source == "approximation"
              else keys.authors)
    ranking = analytics.rank_authors(
        source, loaded,
        focal=args.focal,
        conflict_window=conflict_window,
        scope=_SCOPE_CHOICES[args.scope],
    )
    run.warnings.extend(ranking.warnings)

    candidates = []
    for rank, entry in enumerate(ranking.top(args.top), start=1):
        record_ids = loaded.by_author_key.get(entry.author_key, frozenset())
        item = {
            "rank": rank,
            "author_key": entry.author_key,
            "publication_count": entry.publication_count,
            "record_size": len(record_ids),
            "share_in_approximation": None,
            "key_coverage_of_approximation": None,
            "key_derivation_warning": None,
        }
        if record_ids:
            try:
                cand_seed = seed_mod.build_seed_record(
                    loaded, record_ids, extend=extend
                )
                cand_keys = keys_mod.compute_all_keys(loaded, cand_seed, config)
                mutual = analytics.mutual_coverage(
                    entry.author_key, cand_seed, cand_keys,
                    approximation, loaded,
                )
                item["share_in_approximation"] = mutual.share_in_approximation
                item["key_coverage_of_approximation"] = {
                    f.value: v
                    for f, v in mutual.key_coverage_of_approximation.items()
                }
            except Unsatisfiable as exc:
                item["key_derivation_warning"] = str(exc)
                item["share_in_approximation"] = (
                    len(record_ids & approximation.member_set)
                    / len(record_ids)
                )
        candidates.append(item)

    out = _out_dir(args)
    run.emit(out / "rankings.csv",
             lambda p: analytics.write_rankings_csv(ranking, p))
    report = {
        "source": ranking.source.value,
        "focal": args.focal,
        "conflict_window": str(conflict_window),
        "scope": args.scope,
        "n_ranked": len(ranking.entries),
        "excluded": [
            {"author_key": e.author_key, "reason": e.reason.value,
             "publication_count": e.publication_count}
            for e in ranking.excluded
        ],
        "top_candidates": candidates,
        "warnings": list(ranking.warnings),
    }
    run.emit_json(out / "reviewer_report.json", report)
    run.stats = {"n_ranked": len(ranking.entries),
                 "n_excluded": len(ranking.excluded)}
    run.write_manifest(out)
    print(f"ranked {len(ranking.entries)} author(s), "
          f"excluded {len(ranking.excluded)}; top {min(args.top, len(ranking.entries))} "
          f"written to {out / 'rankings.csv'}")
    for warning in run.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def cmd_coverage(args: argparse.Namespace) -> int:
    run = _Run("coverage", {
        "corpus": args.corpus, "run": args.run, "ids": args.ids,
        "min_fields": args.min_fields,
    })
    loaded = _load_corpus(args.corpus)
    run.add_input("corpus", args.corpus)
    run.add_input("ids", args.ids)
    run_dir = Path(args.run)
    config, keys, approximation, _ = _load_run(run_dir, loaded)
    _check_corpus_matches_run(run, run_dir)

    ids = _read_ids(args.ids)
    if not ids:
        raise EmptyRecord(f"no publication ids in {args.ids}")
    min_fields = (args.min_fields if args.min_fields is not None
                  else approximation.min_fields)
    covered = analytics.coverage_of_record_by_keys(
        ids, keys, min_fields, loaded
    )
    mutual = analytics.mutual_coverage(
        Path(args.ids).stem, ids, keys, approximation, loaded
    )
    payload = {
        "record_size": len(set(ids)),
        "min_fields": min_fields,
        "covered_share": covered,
        "share_in_approximation": mutual.share_in_approximation,
        "key_coverage_of_approximation": {
            f.value: v
            for f, v in mutual.key_coverage_of_approximation.items()
        },
    }
    if args.out:
        out = _out_dir(args)
        run.emit_json(out / "coverage.json", payload)
        run.write_manifest(out)
    print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    run = _Run("generate", {"config": args.config})
    config = syngen.GeneratorConfig.load(args.config)
    run.add_input("config", args.config)
    out = _out_dir(args)
    corpus_path = out / "corpus.jsonl"
    truth_path = out / "truth.jsonl"
    records, truth = syngen.build_records(config)

    def write_corpus(tmp: Path) -> None:
        with open(tmp, "w", encoding="utf-8", newline="") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True))
                handle.write("\n")

    run.emit(corpus_path, write_corpus)
    run.emit(truth_path, lambda p: truth.write_jsonl(p))
    per_label = {
        sp.label: sp.n_publications for sp in config.specialties
    }
    run.stats = {"n_publications": len(records), "specialties": per_label}
    run.write_manifest(out)
    print(f"generated {len(records)} publication(s) across "
          f"{len(config.specialties)} specialt(ies) into {out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    run = _Run("evaluate", {
        "corpus": args.corpus, "run": args.run, "truth": args.truth,
        "target": args.target,
    })
    loaded = _load_corpus(args.corpus)
    run.add_input("corpus", args.corpus)
    run.add_input("truth", args.truth)
    run_dir = Path(args.run)
    _, _, approximation, _ = _load_run(run_dir, loaded)
    _check_corpus_matches_run(run, run_dir)
    truth = syngen.GroundTruth.read_jsonl(args.truth)
    precision, recall = syngen.evaluate_recovery(
        approximation, truth, args.target, loaded
    )
    payload = {
        "target": args.target,
        "n_members": len(approximation),
        "precision": precision,
        "recall": recall,
    }
    if args.out:
        out = _out_dir(args)
        run.emit_json(out / "evaluation.json", payload)
        run.write_manifest(out)
    print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


# ------------------------------------------------------------------ parser

def _add_seed_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ids", required=True,
                        help="file of newline-delimited publication ids")
    parser.add_argument("--extend", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="extend the seed one hop via references "
                             "(default: on)")


def _add_keys_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold-cell", type=_threshold, default=0.8,
                        help="cell coverage threshold (default 0.8)")
    parser.add_argument("--threshold-title", type=_threshold, default=0.8,
                        help="title-word coverage threshold (default 0.8)")
    parser.add_argument("--threshold-author", type=_threshold, default=0.8,
                        help="author coverage threshold (default 0.8)")
    parser.add_argument("--threshold-ref", type=_threshold, default=0.8,
                        help="reference coverage threshold (default 0.8)")
    parser.add_argument("--min-word-len", type=_positive_int, default=5,
                        help="minimum title word length (default 5)")
    parser.add_argument("--title-words-required", type=_positive_int,
                        default=2,
                        help="key title words needed for coverage (default 2)")
    parser.add_argument("--author-scope", choices=sorted(_SCOPE_CHOICES),
                        default="auto",
                        help="which authors count (default auto: reprint "
                             "authors when >=90%% of the seed has them)")
    parser.add_argument("--doi-only-refs", action="store_true",
                        help="restrict reference candidates to DOI-like ids")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specialty-approx",
        description="Approximate the scientific specialty of a publication "
                    "record and run downstream analyses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and index a corpus file")
    p.add_argument("corpus", help="JSON-lines corpus file")
    p.add_argument("--strict", action="store_true",
                   help="fail on the first malformed line")
    p.add_argument("--out", help="directory for ingest_report.json")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("seed", help="resolve and extend a seed record")
    p.add_argument("corpus")
    _add_seed_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("keys", help="select per-field key values for a seed")
    p.add_argument("corpus")
    _add_seed_args(p)
    _add_keys_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_keys)

    p = sub.add_parser(
        "approx",
        help="full pipeline: seed, keys, approximation, histograms",
    )
    p.add_argument("corpus")
    _add_seed_args(p)
    _add_keys_args(p)
    p.add_argument("--window", type=_window, required=True,
                   help="publication-year window START:END (or one year)")
    p.add_argument("--min-fields", type=_min_fields, default=3,
                   help="fields that must cover a member (default 3)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser(
        "reviewers",
        help="rank prominent authors of an approx run, with exclusions",
    )
    p.add_argument("corpus")
    p.add_argument("--run", required=True,
                   help="directory written by the approx command")
    p.add_argument("--focal",
                   help="focal author ('Surname I') to exclude along with "
                        "conflicted co-authors")
    p.add_argument("--conflict-window", default=str(DEFAULT_CONFLICT_SPAN),
                   help="conflict span in years ending at the window end, "
                        "or an explicit START:END (default 5)")
    p.add_argument("--top", type=_positive_int, default=10,
                   help="candidates to detail in the report (default 10)")
    p.add_argument("--source", choices=("approximation", "key-authors"),
                   default="approximation",
                   help="rank over approximation members or key authors")
    p.add_argument("--scope", choices=("all", "reprint"), default="all",
                   help="author scope for counting (default all)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_reviewers)

    p = sub.add_parser(
        "coverage",
        help="coverage of an arbitrary record by an approx run's key values",
    )
    p.add_argument("corpus")
    p.add_argument("--run", required=True,
                   help="directory written by the approx command")
    p.add_argument("--ids", required=True,
                   help="file of newline-delimited publication ids")
    p.add_argument("--min-fields", type=_min_fields, default=None,
                   help="coverage rule (default: the run's min_fields)")
    p.add_argument("--out", help="optional output directory")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("generate",
                       help="synthesize a labeled corpus for validation")
    p.add_argument("--config", required=True,
                   help="generator config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser(
        "evaluate",
        help="precision/recall of an approx run against ground truth",
    )
    p.add_argument("corpus")
    p.add_argument("--run", required=True)
    p.add_argument("--truth", required=True,
                   help="ground-truth JSONL written by generate")
    p.add_argument("--target", required=True, help="target specialty label")
    p.add_argument("--out", help="optional output directory")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CorpusInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpecialtyApproxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
