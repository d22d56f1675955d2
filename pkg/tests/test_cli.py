import csv
import json
import random

import pytest

from draftcanvas.cli import build_parser, main
from draftcanvas.stats.cli import load_measures


def write_measures_csv(path, n=18, seed=4, k=3):
    rng = random.Random(seed)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["participant", "measure", "condition", "value"])
        for m in range(k):
            for p in range(n):
                base = rng.gauss(12, 3)
                writer.writerow([f"p{p}", f"measure {m}", "baseline", f"{base:.4f}"])
                writer.writerow(
                    [f"p{p}", f"measure {m}", "workbench", f"{base + rng.gauss(3, 1):.4f}"]
                )
    return path


def write_csi_csv(path, n=18, seed=9):
    rng = random.Random(seed)
    factors = ["Enjoyment", "Exploration", "Expressiveness", "Immersion",
               "ResultsWorthEffort"]
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["participant", "condition", "factor", "item1", "item2", "wins"])
        for p in range(n):
            for condition, low, high in (("baseline", 3, 8), ("workbench", 6, 10)):
                wins = [0] * 5
                for _ in range(10):
                    wins[rng.randrange(5)] += 1
                for factor, win in zip(factors, wins):
                    writer.writerow(
                        [f"p{p}", condition, factor,
                         rng.randint(low, high), rng.randint(low, high), win]
                    )
    return path


class TestStatsTable:
    def test_text_report_shape(self, tmp_path, capsys):
        path = write_measures_csv(tmp_path / "measures.csv")
        assert main(["stats", "table", "--input", str(path), "--alpha", "0.05"]) == 0
        out = capsys.readouterr().out
        assert "Measure" in out and "p (adj)" in out
        assert "measure 0" in out and "measure 2" in out
        assert "baseline M (SD)" in out and "workbench M (SD)" in out

    def test_csv_report_columns(self, tmp_path, capsys):
        path = write_measures_csv(tmp_path / "measures.csv")
        main(["stats", "table", "--input", str(path), "--format", "csv"])
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert len(rows) == 3
        for row in rows:
            assert set(row) >= {"measure", "method", "p_raw", "p_adjusted"}
            assert float(row["p_adjusted"]) >= float(row["p_raw"])

    def test_deterministic_across_runs(self, tmp_path, capsys):
        path = write_measures_csv(tmp_path / "measures.csv")
        main(["stats", "table", "--input", str(path)])
        first = capsys.readouterr().out
        main(["stats", "table", "--input", str(path)])
        second = capsys.readouterr().out
        assert first == second

    def test_missing_condition_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "participant,measure,condition,value\np0,m,only,1.0\n"
        )
        with pytest.raises(SystemExit):
            load_measures(path)

    def test_unbalanced_participant_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "participant,measure,condition,value\n"
            "p0,m,a,1.0\np0,m,b,2.0\np1,m,a,3.0\n"
        )
        with pytest.raises(SystemExit):
            load_measures(path)


class TestStatsCsi:
    def test_table_shaped_output_with_adjusted_p(self, tmp_path, capsys):
        path = write_csi_csv(tmp_path / "csi.csv")
        assert main(["stats", "csi", "--input", str(path)]) == 0
        out = capsys.readouterr().out
        assert "Overall CSI Score" in out
        for factor in ("Enjoyment", "Exploration", "Expressiveness", "Immersion"):
            assert factor in out
        assert "p (adj)" in out

    def test_csv_format(self, tmp_path, capsys):
        path = write_csi_csv(tmp_path / "csi.csv")
        main(["stats", "csi", "--input", str(path), "--format", "csv"])
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        labels = [row["measure"] for row in rows]
        assert labels[-1] == "Overall CSI Score"
        overall = rows[-1]
        assert 0 <= float(overall["mean_baseline"]) <= 100
        assert 0 <= float(overall["mean_workbench"]) <= 100


class TestStatsEvents:
    def test_summary_output(self, tmp_path, capsys):
        log = tmp_path / "events.jsonl"
        records = [
            {"ts": 1.0, "session": "s1", "condition": "DynamicUI",
             "kind": "WidgetCreated", "payload": {"origin": "SystemSuggested"}},
            {"ts": 2.0, "session": "s1", "condition": "DynamicUI",
             "kind": "PromptSubmitted", "payload": {}},
        ]
        log.write_text("".join(json.dumps(r) + "\n" for r in records))
        assert main(["stats", "events", "--input", str(log)]) == 0
        out = capsys.readouterr().out
        assert "session=s1" in out
        assert "WidgetCreated[SystemSuggested]: 1" in out

    def test_empty_log(self, tmp_path, capsys):
        log = tmp_path / "events.jsonl"
        log.write_text("")
        main(["stats", "events", "--input", str(log)])
        assert "no events" in capsys.readouterr().out


class TestParser:
    def test_serve_flags_parse(self):
        parser = build_parser()
        args = parser.parse_args(
            ["serve", "--port", "9000", "--data-dir", "/tmp/x",
             "--mock", "--seed", "7", "--model", "gpt-4o-2024-08-06"]
        )
        assert args.port == 9000 and args.mock and args.seed == 7

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["--version"])
