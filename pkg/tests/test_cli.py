import json

from teamsignals.cli import main

EVENTS_HEADER = "timestamp,sender,recipients\n"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def clean_events_file(tmp_path, rows=100):
    lines = [EVENTS_HEADER.strip()]
    for i in range(rows):
        a, b = f"u{i % 5}", f"u{(i + 1) % 5}"
        lines.append(f"{1000 + i * 600},{a},{b}")
    return write(tmp_path, "events.csv", "\n".join(lines) + "\n")


def alternating_events_file(tmp_path):
    rows = [EVENTS_HEADER.strip()]
    for k in range(8):
        src, dst = ("a", "b") if k % 2 == 0 else ("b", "a")
        rows.append(f"{k * 3600},{src},{dst}")
    return write(tmp_path, "events.csv", "\n".join(rows) + "\n")


class TestValidate:
    def test_clean_file(self, tmp_path, capsys):
        path = clean_events_file(tmp_path)
        assert main(["validate", "--events", str(path)]) == 0
        out = capsys.readouterr().out
        assert "events: 100" in out
        assert "actors: 5" in out
        assert "range:" in out

    def test_bad_timestamp_names_line(self, tmp_path, capsys):
        path = write(tmp_path, "events.csv", EVENTS_HEADER + "100,a,b\nbogus,a,b\n")
        assert main(["validate", "--events", str(path)]) == 2
        assert ":3" in capsys.readouterr().err

    def test_empty_log(self, tmp_path, capsys):
        path = write(tmp_path, "events.csv", EVENTS_HEADER)
        assert main(["validate", "--events", str(path)]) == 2
        assert "empty log" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["validate", "--events", str(tmp_path / "nope.csv")]) == 2


class TestMetrics:
    def test_default_single_team_all(self, tmp_path, capsys):
        events = alternating_events_file(tmp_path)
        out_dir = tmp_path / "out"
        rc = main(
            ["metrics", "--events", str(events), "--window", "1h", "--step", "1h",
             "--out", str(out_dir)]
        )
        assert rc == 0
        lines = (out_dir / "signals.csv").read_text().splitlines()
        assert lines[0] == "team_id,n_actors,n_events,rl,rc,prt_fn,prt_et_seconds,n_closed_frames"
        assert lines[1].startswith("ALL,2,8,0.000000,")

    def test_byte_identical_runs(self, tmp_path):
        events = clean_events_file(tmp_path)
        teams = write(
            tmp_path, "teams.csv",
            "team_id,member\n" + "\n".join(f"g1,u{i}" for i in range(5)) + "\n",
        )
        args = ["metrics", "--events", str(events), "--teams", str(teams),
                "--window", "2h", "--step", "1h"]
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert (out1 / "signals.csv").read_bytes() == (out2 / "signals.csv").read_bytes()

    def test_empty_team_skipped_with_warning(self, tmp_path, capsys):
        events = alternating_events_file(tmp_path)
        teams = write(tmp_path, "teams.csv", "team_id,member\ng1,a\ng1,b\ng2,zz\n")
        rc = main(
            ["metrics", "--events", str(events), "--teams", str(teams),
             "--window", "1h", "--step", "1h", "--out", str(tmp_path / "o")]
        )
        assert rc == 0
        captured = capsys.readouterr()
        assert "g2" in captured.err
        rows = (tmp_path / "o" / "signals.csv").read_text().splitlines()
        assert len(rows) == 2  # header + g1

    def test_all_teams_empty(self, tmp_path, capsys):
        events = alternating_events_file(tmp_path)
        teams = write(tmp_path, "teams.csv", "team_id,member\ng2,zz\n")
        rc = main(
            ["metrics", "--events", str(events), "--teams", str(teams),
             "--window", "1h", "--step", "1h", "--out", str(tmp_path / "o")]
        )
        assert rc == 2


class TestSeries:
    def test_fifteen_actor_header_shape(self, tmp_path):
        # 15 actors in a ring, 12 h window / 1 h step
        rows = [EVENTS_HEADER.strip()]
        for i in range(60):
            rows.append(f"{i * 1800},p{i % 15:02d},p{(i + 1) % 15:02d}")
        events = write(tmp_path, "events.csv", "\n".join(rows) + "\n")
        out_dir = tmp_path / "out"
        rc = main(
            ["series", "--events", str(events), "--metric", "bc",
             "--window", "12h", "--step", "1h", "--out", str(out_dir)]
        )
        assert rc == 0
        header = (out_dir / "series.csv").read_text().splitlines()[0].split(",")
        assert header[0] == "window_end"
        assert len(header) == 1 + 15

    def test_team_without_teams_file(self, tmp_path, capsys):
        events = alternating_events_file(tmp_path)
        rc = main(
            ["series", "--events", str(events), "--team", "g1",
             "--window", "1h", "--step", "1h", "--out", str(tmp_path / "o")]
        )
        assert rc == 2
        assert "--teams" in capsys.readouterr().err

    def test_unknown_team(self, tmp_path):
        events = alternating_events_file(tmp_path)
        teams = write(tmp_path, "teams.csv", "team_id,member\ng1,a\ng1,b\n")
        rc = main(
            ["series", "--events", str(events), "--teams", str(teams), "--team", "nope",
             "--window", "1h", "--step", "1h", "--out", str(tmp_path / "o")]
        )
        assert rc == 2


class TestSurface:
    def test_rows_sorted(self, tmp_path):
        events = clean_events_file(tmp_path)
        out_dir = tmp_path / "out"
        rc = main(
            ["surface", "--events", str(events), "--metric", "ci",
             "--window", "2h", "--step", "1h", "--out", str(out_dir)]
        )
        assert rc == 0
        lines = (out_dir / "surface.csv").read_text().splitlines()
        assert lines[0].startswith("window_end,rank_1")
        for line in lines[1:]:
            values = [float(v) for v in line.split(",")[1:]]
            assert values == sorted(values, reverse=True)


class TestCorrelate:
    def test_requires_depvars(self, tmp_path, capsys):
        events = alternating_events_file(tmp_path)
        rc = main(["correlate", "--events", str(events), "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "depvars" in capsys.readouterr().err

    def test_planted_linear_dependency(self, tmp_path):
        # 4 synthetic teams; depvar is an exact linear function of RL
        scenario = {
            "teams": [
                {"team_id": f"t{i}", "n_actors": 4 + i, "duration": "4d",
                 "mean_event_rate": 12.0,
                 "rotation_period": "1d" if i % 2 == 0 else None,
                 "reply_delay": {"kind": "fixed", "seconds": 60}, "seed": 20 + i}
                for i in range(4)
            ]
        }
        scen_path = write(tmp_path, "scenario.json", json.dumps(scenario))
        synth_dir = tmp_path / "synth"
        assert main(["synth", "--scenario", str(scen_path), "--out", str(synth_dir)]) == 0

        metrics_dir = tmp_path / "metrics"
        base = ["--events", str(synth_dir / "events.csv"), "--teams", str(synth_dir / "teams.csv"),
                "--window", "12h", "--step", "3h"]
        assert main(["metrics", *base, "--out", str(metrics_dir)]) == 0
        rows = (metrics_dir / "signals.csv").read_text().splitlines()[1:]
        rl_by_team = {row.split(",")[0]: float(row.split(",")[3]) for row in rows}
        # rotating teams (t0, t2) out-rotate the static ones (t1, t3)
        assert min(rl_by_team["t0"], rl_by_team["t2"]) > max(rl_by_team["t1"], rl_by_team["t3"])
        depvar_lines = ["team_id,variable_name,value"]
        for row in rows:
            cols = row.split(",")
            depvar_lines.append(f"{cols[0]},creativity,{2.0 * float(cols[3]) + 1.0}")
        depvars = write(tmp_path, "depvars.csv", "\n".join(depvar_lines) + "\n")

        out_dir = tmp_path / "corr"
        assert main(["correlate", *base, "--depvars", str(depvars), "--out", str(out_dir)]) == 0
        lines = (out_dir / "correlations.csv").read_text().splitlines()
        assert lines[0] == "variable_name,signal_name,r,p,n,stars"
        rl_row = next(line for line in lines if ",RL," in line)
        cols = rl_row.split(",")
        assert float(cols[2]) >= 0.9
        assert cols[4] == "4"

    def test_jobs_flag_equivalent(self, tmp_path):
        scenario = {
            "teams": [
                {"team_id": f"t{i}", "n_actors": 4, "duration": "2d",
                 "mean_event_rate": 12.0, "rotation_period": "12h",
                 "reply_delay": {"kind": "fixed", "seconds": 60}, "seed": 30 + i}
                for i in range(3)
            ]
        }
        scen_path = write(tmp_path, "scenario.json", json.dumps(scenario))
        synth_dir = tmp_path / "synth"
        assert main(["synth", "--scenario", str(scen_path), "--out", str(synth_dir)]) == 0
        base = ["metrics", "--events", str(synth_dir / "events.csv"),
                "--teams", str(synth_dir / "teams.csv"), "--window", "6h", "--step", "90m"]
        assert main(base + ["--out", str(tmp_path / "j1"), "--jobs", "1"]) == 0
        assert main(base + ["--out", str(tmp_path / "j2"), "--jobs", "2"]) == 0
        assert (tmp_path / "j1" / "signals.csv").read_bytes() == (
            tmp_path / "j2" / "signals.csv"
        ).read_bytes()


class TestSynthCommand:
    def test_writes_events_and_teams(self, tmp_path):
        scenario = {
            "teams": [
                {"team_id": "alpha", "n_actors": 3, "duration": "1d",
                 "mean_event_rate": 12.0, "rotation_period": None,
                 "reply_delay": {"kind": "fixed", "seconds": 45}, "seed": 3}
            ]
        }
        scen_path = write(tmp_path, "scenario.json", json.dumps(scenario))
        out_dir = tmp_path / "out"
        assert main(["synth", "--scenario", str(scen_path), "--out", str(out_dir)]) == 0
        events = (out_dir / "events.csv").read_text().splitlines()
        teams = (out_dir / "teams.csv").read_text().splitlines()
        assert events[0] == "timestamp,sender,recipients"
        assert teams[0] == "team_id,member"
        assert all(line.startswith("alpha,alpha.") for line in teams[1:])
        # deterministic re-run
        out2 = tmp_path / "out2"
        assert main(["synth", "--scenario", str(scen_path), "--out", str(out2)]) == 0
        assert (out_dir / "events.csv").read_bytes() == (out2 / "events.csv").read_bytes()

    def test_seed_override_changes_log(self, tmp_path):
        scenario = {
            "teams": [
                {"team_id": "alpha", "n_actors": 3, "duration": "1d",
                 "mean_event_rate": 12.0, "rotation_period": "6h",
                 "reply_delay": {"kind": "uniform", "lo": 30, "hi": 90}, "seed": 3}
            ]
        }
        scen_path = write(tmp_path, "scenario.json", json.dumps(scenario))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["synth", "--scenario", str(scen_path), "--out", str(out1)]) == 0
        assert main(["synth", "--scenario", str(scen_path), "--out", str(out2), "--seed", "99"]) == 0
        assert (out1 / "events.csv").read_bytes() != (out2 / "events.csv").read_bytes()


class TestFormatOverride:
    def test_jsonl_with_misleading_extension(self, tmp_path, capsys):
        path = write(
            tmp_path, "events.data",
            '{"timestamp": 100, "sender": "a", "recipients": ["b"]}\n'
            '{"timestamp": 200, "sender": "b", "recipients": ["a"]}\n',
        )
        assert main(["validate", "--events", str(path), "--format", "jsonl"]) == 0
        assert "events: 2" in capsys.readouterr().out

    def test_extension_inference(self, tmp_path, capsys):
        path = write(
            tmp_path, "events.jsonl",
            '{"timestamp": 100, "sender": "a", "recipients": ["b"]}\n',
        )
        assert main(["validate", "--events", str(path)]) == 0
        assert "events: 1" in capsys.readouterr().out
