"""`stats` CLI: paired-family tables, survey scoring, event-log summaries."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Sequence, TextIO

from draftcanvas.stats.descriptive import descriptive
from draftcanvas.stats.events import event_log_summary
from draftcanvas.stats.family import FamilyRow, analyze_paired_family
from draftcanvas.stats.paired import PairedMeasures
from draftcanvas.stats.surveys import CSI_FACTORS, CsiFactor, CsiResponse, csi_score


def add_stats_subparsers(parent: argparse._SubParsersAction) -> None:
    table = parent.add_parser("table", help="paired-test report from a measures CSV")
    table.add_argument("--input", required=True, type=Path)
    table.add_argument("--alpha", type=float, default=0.05)
    table.add_argument("--format", choices=("text", "csv"), default="text")
    table.set_defaults(func=cmd_table)

    csi = parent.add_parser("csi", help="creativity-support scores from a CSI CSV")
    csi.add_argument("--input", required=True, type=Path)
    csi.add_argument("--alpha", type=float, default=0.05)
    csi.add_argument("--format", choices=("text", "csv"), default="text")
    csi.set_defaults(func=cmd_csi)

    events = parent.add_parser("events", help="summarize a JSONL interaction log")
    events.add_argument("--input", required=True, type=Path)
    events.set_defaults(func=cmd_events)


def load_measures(path: Path) -> tuple[list[PairedMeasures], tuple[str, str]]:
    """Read a long-format CSV (participant, measure, condition, value).

    Exactly two conditions must be present; pairing is by participant. The
    first-appearing condition becomes side A of every measure.
    """
    conditions: list[str] = []
    measures: list[str] = []
    cells: dict[tuple[str, str, str], float] = {}
    participants: list[str] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"participant", "measure", "condition", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise SystemExit(
                f"{path}: expected CSV columns participant, measure, condition, value"
            )
        for row in reader:
            participant = row["participant"].strip()
            measure = row["measure"].strip()
            condition = row["condition"].strip()
            if condition not in conditions:
                conditions.append(condition)
            if measure not in measures:
                measures.append(measure)
            if participant not in participants:
                participants.append(participant)
            cells[(measure, condition, participant)] = float(row["value"])
    if len(conditions) != 2:
        raise SystemExit(
            f"{path}: expected exactly 2 conditions, found {len(conditions)}"
        )
    cond_a, cond_b = conditions
    paired: list[PairedMeasures] = []
    for measure in measures:
        a, b = [], []
        for participant in participants:
            key_a = (measure, cond_a, participant)
            key_b = (measure, cond_b, participant)
            if key_a not in cells or key_b not in cells:
                raise SystemExit(
                    f"{path}: participant {participant!r} lacks both conditions "
                    f"for measure {measure!r}"
                )
            a.append(cells[key_a])
            b.append(cells[key_b])
        paired.append(PairedMeasures(measure, a, b))
    return paired, (cond_a, cond_b)


def _fmt_p(p: float | None) -> str:
    return "n/a" if p is None else f"{p:.4f}"


def write_table(
    rows: Sequence[FamilyRow],
    conditions: tuple[str, str],
    out: TextIO,
    fmt: str = "text",
) -> None:
    cond_a, cond_b = conditions
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["measure", "n",
             f"mean_{cond_a}", f"sd_{cond_a}", f"mean_{cond_b}", f"sd_{cond_b}",
             "method", "p_raw", "p_adjusted", "note"]
        )
        for row in rows:
            writer.writerow(
                [row.label, row.n,
                 f"{row.a.mean:.4f}", f"{row.a.sd:.4f}",
                 f"{row.b.mean:.4f}", f"{row.b.sd:.4f}",
                 row.method.value if row.method else "n/a",
                 _fmt_p(row.p_raw), _fmt_p(row.p_adjusted), row.note]
            )
        return
    label_width = max([len("Measure")] + [len(r.label) for r in rows])
    header = (
        f"{'Measure':<{label_width}}  "
        f"{cond_a + ' M (SD)':>18}  {cond_b + ' M (SD)':>18}  "
        f"{'method':<22}  {'p (adj)':>8}"
    )
    out.write(header + "\n")
    out.write("-" * len(header) + "\n")
    for row in rows:
        out.write(
            f"{row.label:<{label_width}}  "
            f"{f'{row.a.mean:.2f} ({row.a.sd:.2f})':>18}  "
            f"{f'{row.b.mean:.2f} ({row.b.sd:.2f})':>18}  "
            f"{row.method.value if row.method else 'n/a':<22}  "
            f"{_fmt_p(row.p_adjusted):>8}\n"
        )


def cmd_table(args: argparse.Namespace) -> int:
    measures, conditions = load_measures(args.input)
    rows = analyze_paired_family(measures, alpha=args.alpha)
    write_table(rows, conditions, sys.stdout, args.format)
    return 0


_FACTOR_ALIASES = {f.value.lower(): f for f in CSI_FACTORS}
_FACTOR_ALIASES["results worth effort"] = CsiFactor.RESULTS_WORTH_EFFORT


def load_csi(path: Path) -> tuple[dict[tuple[str, str], CsiResponse], list[str]]:
    """Read a CSI CSV (participant, condition, factor, item1, item2, wins)."""
    raw: dict[tuple[str, str], dict[CsiFactor, tuple[tuple[float, float], int]]] = {}
    conditions: list[str] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"participant", "condition", "factor", "item1", "item2", "wins"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise SystemExit(
                f"{path}: expected CSV columns participant, condition, factor, "
                "item1, item2, wins"
            )
        for row in reader:
            factor_name = row["factor"].strip().lower()
            if factor_name not in _FACTOR_ALIASES:
                raise SystemExit(f"{path}: unknown CSI factor {row['factor']!r}")
            factor = _FACTOR_ALIASES[factor_name]
            condition = row["condition"].strip()
            if condition not in conditions:
                conditions.append(condition)
            key = (row["participant"].strip(), condition)
            raw.setdefault(key, {})[factor] = (
                (float(row["item1"]), float(row["item2"])),
                int(row["wins"]),
            )
    responses = {
        key: CsiResponse(
            item_scores={f: parts[f][0] for f in parts},
            pairwise_wins={f: parts[f][1] for f in parts},
        )
        for key, parts in raw.items()
    }
    return responses, conditions


def cmd_csi(args: argparse.Namespace) -> int:
    responses, conditions = load_csi(args.input)
    participants: list[str] = []
    for participant, _ in responses:
        if participant not in participants:
            participants.append(participant)

    # factor label -> condition -> per-participant values (participant order)
    scores: dict[str, dict[str, list[float]]] = {}
    labels = [f.value for f in CSI_FACTORS] + ["Overall CSI Score"]
    for label in labels:
        scores[label] = {c: [] for c in conditions}
    for condition in conditions:
        for participant in participants:
            key = (participant, condition)
            if key not in responses:
                raise SystemExit(
                    f"{args.input}: participant {participant!r} has no "
                    f"{condition!r} response"
                )
            factor_scores, overall = csi_score(responses[key])
            for factor in CSI_FACTORS:
                scores[factor.value][condition].append(factor_scores[factor])
            scores["Overall CSI Score"][condition].append(overall)

    if len(conditions) == 2:
        measures = [
            PairedMeasures(label, scores[label][conditions[0]],
                           scores[label][conditions[1]])
            for label in labels
        ]
        rows = analyze_paired_family(measures, alpha=args.alpha)
        write_table(rows, (conditions[0], conditions[1]), sys.stdout, args.format)
    else:
        for label in labels:
            for condition in conditions:
                stats = descriptive(scores[label][condition])
                print(
                    f"{label} [{condition}]: M={stats.mean:.2f} "
                    f"SD={stats.sd:.2f} Med={stats.median:.2f}"
                )
    return 0


def cmd_events(args: argparse.Namespace) -> int:
    with args.input.open(encoding="utf-8") as handle:
        summaries = event_log_summary(handle)
    if not summaries:
        print("no events")
        return 0
    for summary in summaries:
        print(f"session={summary.session} condition={summary.condition} "
              f"events={summary.total}")
        for kind in sorted(summary.kinds):
            print(f"  {kind}: {summary.kinds[kind]}")
        for origin in sorted(summary.widgets_created):
            print(f"  WidgetCreated[{origin}]: {summary.widgets_created[origin]}")
        for scope in sorted(summary.suggestions_requested):
            print(
                f"  SuggestionRequested[{scope}]: "
                f"{summary.suggestions_requested[scope]}"
            )
    return 0
