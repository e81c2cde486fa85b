"""CLI and table-emission checks: parsing, exit codes, byte stability."""

import json
import math
from pathlib import Path

import pytest

from sweepdefense import circular_pincer, cli, report, same_direction, spiral_pincer
from sweepdefense.cli import RunConfig, SpeedMode, build_config, load_config_file, main
from sweepdefense.errors import ConfigError, RootNotFound
from sweepdefense.report import Table
from sweepdefense.scenario import ProtocolKind, ScenarioParams

REF = ScenarioParams(R0=100.0, r=10.0, VT=1.0, n=2, eps=0.1)
CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class TestListParsing:
    def test_comma_ints(self):
        assert cli._parse_int_list("2,4,8", "n") == (2, 4, 8)

    def test_int_range_inclusive(self):
        assert cli._parse_int_list("2:8:2", "n") == (2, 4, 6, 8)
        assert cli._parse_int_list("2:7:2", "n") == (2, 4, 6)

    def test_mixed_tokens(self):
        assert cli._parse_int_list("2,6:10:2", "n") == (2, 6, 8, 10)

    def test_empty_is_empty(self):
        assert cli._parse_int_list("", "n") == ()

    def test_bad_int_token(self):
        with pytest.raises(ConfigError):
            cli._parse_int_list("2,x", "n")

    def test_float_range(self):
        got = cli._parse_float_list("0.1:0.5:0.2", "eps")
        assert got == pytest.approx((0.1, 0.3, 0.5))

    def test_float_range_endpoint_kept(self):
        # accumulated rounding must not drop the last grid point
        got = cli._parse_float_list("5:20:5", "dV")
        assert got == pytest.approx((5.0, 10.0, 15.0, 20.0))

    def test_bad_float_step(self):
        with pytest.raises(ConfigError):
            cli._parse_float_list("1:2:0", "eps")

    def test_protocol_names(self):
        got = cli._parse_protocols("circular-pincer,spiral-same", "protocol")
        assert got == (
            ProtocolKind.CIRCULAR_PINCER,
            ProtocolKind.SPIRAL_SAME_DIRECTION,
        )

    def test_unknown_protocol(self):
        with pytest.raises(ConfigError):
            cli._parse_protocols("helical-pincer", "protocol")


class TestConfigFile:
    def test_values_comments_blanks(self, tmp_path):
        cfg = tmp_path / "a.cfg"
        cfg.write_text("# header\nR0 = 50\n\nn = 2,4  # trailing\n")
        assert load_config_file(str(cfg)) == {"R0": "50", "n": "2,4"}

    def test_missing_equals(self, tmp_path):
        cfg = tmp_path / "a.cfg"
        cfg.write_text("R0 50\n")
        with pytest.raises(ConfigError):
            load_config_file(str(cfg))

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "a.cfg"
        cfg.write_text("speed = 3\n")
        args = cli.build_parser().parse_args(["totals", "--config", str(cfg)])
        with pytest.raises(ConfigError, match="unknown config keys"):
            build_config(args)

    def test_cli_overrides_file(self, tmp_path):
        cfg = tmp_path / "a.cfg"
        cfg.write_text("R0 = 50\nn = 2,4\n")
        args = cli.build_parser().parse_args(
            ["totals", "--config", str(cfg), "--n", "6"]
        )
        built = build_config(args)
        assert built.R0 == 50.0
        assert built.n == (6,)

    def test_defaults_without_config(self):
        args = cli.build_parser().parse_args(["totals"])
        built = build_config(args)
        assert built == RunConfig()
        assert built.speed_mode is SpeedMode.ABSOLUTE


class TestTableModel:
    def test_csv_round_trip(self, tmp_path):
        t = Table(["a", "b", "c", "d"])
        t.append(1, 2.5, "ok", None)
        t.append(-3, 1.0 / 3.0, "spiral-pincer", 0.125)
        path = tmp_path / "t.csv"
        report.write_table(t, path, "csv")
        back = report.read_table(path)
        assert back.columns == t.columns
        assert back.rows[0] == [1, 2.5, "ok", None]
        assert back.rows[1][1] == pytest.approx(1.0 / 3.0, rel=1e-8)

    def test_json_round_trip(self, tmp_path):
        t = Table(["x", "status"])
        t.append(0.1 + 0.2, "ok")
        path = tmp_path / "t.json"
        report.write_table(t, path, "json")
        back = report.read_table(path)
        assert back.columns == ["x", "status"]
        assert back.rows == [[0.3, "ok"]]  # pre-rounded to 9 significant digits

    def test_nine_significant_digits(self):
        t = Table(["x"])
        t.append(math.pi)
        assert report.render_csv(t) == "x\n3.14159265\n"

    def test_non_finite_becomes_blank(self):
        t = Table(["x"])
        t.append(math.inf)
        # csv.writer quotes a lone empty field so the row is not an empty line
        assert report.render_csv(t).splitlines()[1] == '""'
        assert json.loads(report.render_json(t))["rows"] == [[None]]

    def test_row_arity_checked(self):
        t = Table(["a", "b"])
        with pytest.raises(ValueError):
            t.append(1)

    def test_empty_csv_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ConfigError):
            report.read_table(path)

    def test_format_inferred_from_suffix(self, tmp_path):
        t = Table(["a"])
        t.append(1)
        report.write_table(t, tmp_path / "t.json", "json")
        assert report.read_table(tmp_path / "t.json").rows == [[1]]


class TestExitCodes:
    def test_success(self, capsys):
        assert main(["critical-speeds", "--n", "2"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("n,V_LB,")

    def test_bad_flag_is_config_error(self, capsys):
        assert main(["critical-speeds", "--frequency", "3"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_protocol_is_config_error(self, capsys):
        assert main(["totals", "--protocol", "zigzag", "--Vs", "40"]) == 1

    def test_absolute_mode_needs_speeds(self, capsys):
        assert main(["totals"]) == 1
        assert "Vs" in capsys.readouterr().err

    def test_numerical_failure_is_exit_2(self, capsys, monkeypatch):
        def boom(params):
            raise RootNotFound("bracket lost")

        monkeypatch.setattr(spiral_pincer, "critical_speed", boom)
        assert main(["critical-speeds", "--n", "2"]) == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_unwritable_out_is_exit_3(self, capsys):
        rc = main(["critical-speeds", "--n", "2", "--out", "/no/such/dir/t.csv"])
        assert rc == 3
        assert "i/o error" in capsys.readouterr().err

    def test_empty_grid_is_success(self, capsys):
        assert main(["critical-speeds", "--n", ""]) == 0
        out = capsys.readouterr().out
        assert out.splitlines() == [
            "n,V_LB,Vc_circ_pincer,Vc_spiral_pincer,Vc_circ_same,Vc_spiral_same,status"
        ]


class TestSubcommands:
    def test_critical_speeds_values(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(["critical-speeds", "--n", "2", "--out", str(out)]) == 0
        table = report.read_table(out)
        row = dict(zip(table.columns, table.rows[0]))
        assert row["n"] == 2
        assert row["V_LB"] == pytest.approx(5.0 * math.pi, rel=1e-8)
        assert row["Vc_circ_pincer"] == pytest.approx(10.0 * math.pi, rel=1e-8)
        assert row["Vc_spiral_pincer"] == pytest.approx(
            spiral_pincer.critical_speed(REF), rel=1e-8
        )
        assert row["Vc_circ_same"] == pytest.approx(10.0 * math.pi + 1.0, rel=1e-8)
        assert row["status"] == "ok"

    def test_subcritical_becomes_status_row(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(
            ["totals", "--protocol", "circular-pincer", "--Vs", "20", "--out", str(out)]
        ) == 0
        table = report.read_table(out)
        row = dict(zip(table.columns, table.rows[0]))
        assert row["status"] == "SubcriticalSpeed"
        assert row["T_total"] is None

    def test_schedule_rows_match_sweep_count(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(
            ["schedule", "--protocol", "spiral-pincer", "--Vs", "17.2219",
             "--out", str(out)]
        ) == 0
        table = report.read_table(out)
        want = spiral_pincer.sweep_count(REF, 17.2219)
        assert len(table.rows) == want
        first = dict(zip(table.columns, table.rows[0]))
        assert first["index"] == 0
        assert first["R_i"] == 100.0
        assert first["Rtilde_i"] == 110.0

    def test_circular_schedule_has_blank_rtilde(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["schedule", "--protocol", "circular-pincer", "--Vs", "31.9159",
              "--out", str(out)])
        table = report.read_table(out)
        col = table.columns.index("Rtilde_i")
        assert all(row[col] is None for row in table.rows)

    def test_delta_own_speed_resolution(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["max-radius", "--protocol", "circular-pincer", "--speed-mode",
              "delta-own", "--dV", "10", "--out", str(out)])
        table = report.read_table(out)
        row = dict(zip(table.columns, table.rows[0]))
        assert row["Vs"] == pytest.approx(
            circular_pincer.critical_speed(REF) + 10.0, rel=1e-8
        )

    def test_delta_reference_speed_resolution(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["max-radius", "--protocol", "spiral-pincer", "--n", "2,4",
              "--speed-mode", "delta-reference", "--ref-protocol", "circular-same",
              "--ref-n", "2", "--dV", "10", "--out", str(out)])
        table = report.read_table(out)
        base = same_direction.circular_same_critical_speed(REF)
        i_vs = table.columns.index("Vs")
        assert all(r[i_vs] == pytest.approx(base + 10.0, rel=1e-8) for r in table.rows)

    def test_totals_target_radius(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["totals", "--protocol", "circular-pincer", "--Vs", "31.9159",
              "--target-radius", "101", "--out", str(out)])
        table = report.read_table(out)
        row = dict(zip(table.columns, table.rows[0]))
        asym = circular_pincer.max_radius(REF, 31.9159)
        assert row["eps"] == pytest.approx(asym - 101.0, rel=1e-8)
        assert row["R_max"] == pytest.approx(101.0, rel=1e-8)

    def test_totals_target_beyond_asymptote(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["totals", "--protocol", "circular-pincer", "--Vs", "31.9159",
              "--target-radius", "200", "--out", str(out)])
        table = report.read_table(out)
        row = dict(zip(table.columns, table.rows[0]))
        assert row["status"] == "NoExpansion"

    def test_simulate_defense_rows(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(
            ["simulate", "--protocol", "circular-pincer", "--Vs", "31.9159",
             "--mode", "defense", "--bins", "720", "--out", str(out)]
        ) == 0
        table = report.read_table(out)
        assert len(table.rows) == 3  # default defense cycles
        row = dict(zip(table.columns, table.rows[-1]))
        assert row["mode"] == "defense"
        assert row["breaches"] == 0
        assert row["min_margin"] > 0.0
        assert row["index"] == 2


class TestOutputStability:
    def test_byte_identical_reruns(self, tmp_path):
        args = ["schedule", "--config", str(CONFIG_DIR / "schedule-spiral.cfg")]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (
            report.meta_path(a).read_bytes() == report.meta_path(b).read_bytes()
        )

    def test_meta_sidecar_written(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["critical-speeds", "--n", "2,4", "--out", str(out)])
        meta = json.loads(report.meta_path(out).read_text())
        assert meta["subcommand"] == "critical-speeds"
        assert meta["config"]["n"] == [2, 4]
        assert "version" in meta
        assert not any("time" in k.lower() or "date" in k.lower() for k in meta)

    def test_no_sidecar_on_stdout(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        main(["critical-speeds", "--n", "2"])
        capsys.readouterr()
        assert list(tmp_path.iterdir()) == []

    def test_json_format_selected(self, tmp_path):
        out = tmp_path / "t.json"
        main(["critical-speeds", "--n", "2", "--format", "json", "--out", str(out)])
        doc = json.loads(out.read_text())
        assert doc["columns"][0] == "n"
        assert doc["rows"][0][0] == 2
