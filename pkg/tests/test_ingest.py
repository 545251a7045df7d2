import pytest

from teamsignals.ingest import (
    ParseError,
    format_timestamp,
    parse_dependent_variables,
    parse_events,
    parse_teams,
    write_events_csv,
)
from teamsignals.model import InteractionEvent, validate_log


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestParseEventsCsv:
    def test_multi_recipient_expansion(self, tmp_path):
        path = write(
            tmp_path,
            "events.csv",
            "timestamp,sender,recipients\n2010-06-13T12:37:00Z,a@x,b@x;c@x\n",
        )
        events = parse_events(path)
        ts = 1276432620
        assert events == [
            InteractionEvent("a@x", "b@x", ts),
            InteractionEvent("a@x", "c@x", ts),
        ]

    def test_epoch_seconds(self, tmp_path):
        path = write(tmp_path, "events.csv", "timestamp,sender,recipients\n1276432620,a@x,b@x\n")
        assert parse_events(path)[0].timestamp == 1276432620

    def test_empty_recipients_names_line(self, tmp_path):
        path = write(tmp_path, "events.csv", "timestamp,sender,recipients\n100,a@x,;\n")
        with pytest.raises(ParseError, match=":2"):
            parse_events(path)

    def test_bad_timestamp_names_line(self, tmp_path):
        path = write(
            tmp_path,
            "events.csv",
            "timestamp,sender,recipients\n100,a@x,b@x\nnot-a-time,a@x,b@x\n",
        )
        with pytest.raises(ParseError, match=":3"):
            parse_events(path)

    def test_mixed_timestamp_styles_rejected(self, tmp_path):
        # style is locked per file from the first row
        path = write(
            tmp_path,
            "events.csv",
            "timestamp,sender,recipients\n100,a@x,b@x\n2010-06-13T12:37:00Z,a@x,b@x\n",
        )
        with pytest.raises(ParseError, match=":3"):
            parse_events(path)

    def test_timezone_offset(self, tmp_path):
        path = write(
            tmp_path,
            "events.csv",
            "timestamp,sender,recipients\n2010-06-13T08:37:00-04:00,a@x,b@x\n",
        )
        assert parse_events(path)[0].timestamp == 1276432620

    def test_subsecond_truncated(self, tmp_path):
        path = write(
            tmp_path,
            "events.csv",
            "timestamp,sender,recipients\n2010-06-13T12:37:00.987Z,a@x,b@x\n",
        )
        assert parse_events(path)[0].timestamp == 1276432620

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "events.csv", "timestamp,sender,recipients\n100,a@x\n")
        with pytest.raises(ParseError, match=":2"):
            parse_events(path)

    def test_unknown_format(self, tmp_path):
        path = write(tmp_path, "events.csv", "timestamp,sender,recipients\n")
        with pytest.raises(ParseError):
            parse_events(path, fmt="xml")

    def test_crlf_accepted(self, tmp_path):
        path = tmp_path / "events.csv"
        path.write_bytes(b"timestamp,sender,recipients\r\n100,a@x,b@x\r\n")
        assert len(parse_events(path)) == 1


class TestParseEventsJsonl:
    def test_basic(self, tmp_path):
        path = write(
            tmp_path,
            "events.jsonl",
            '{"timestamp": 100, "sender": "A", "recipients": ["b", "c"]}\n',
        )
        events = parse_events(path)
        assert [e.recipient for e in events] == ["b", "c"]
        assert events[0].sender == "a"

    def test_bad_json_names_line(self, tmp_path):
        path = write(tmp_path, "events.jsonl", '{"timestamp": 100,\n')
        with pytest.raises(ParseError, match=":1"):
            parse_events(path)

    def test_empty_recipients(self, tmp_path):
        path = write(tmp_path, "events.jsonl", '{"timestamp": 100, "sender": "a", "recipients": []}\n')
        with pytest.raises(ParseError):
            parse_events(path)


def test_expansion_preserves_record_count(tmp_path):
    rows = ["timestamp,sender,recipients"]
    expected = 0
    for i in range(1, 20):
        k = 1 + i % 4
        expected += k
        rows.append(f"{1000 + i},s{i},{';'.join(f'r{j}' for j in range(k))}")
    path = write(tmp_path, "events.csv", "\n".join(rows) + "\n")
    assert len(parse_events(path)) == expected


def test_round_trip(tmp_path):
    raw = [
        InteractionEvent("a", "b", 1276432620),
        InteractionEvent("b", "a", 1276432680),
        InteractionEvent("a", "c", 1276436220),
    ]
    log = validate_log(raw).log
    path = tmp_path / "out.csv"
    write_events_csv(log, path)
    assert validate_log(parse_events(path)).log == log


def test_format_timestamp():
    assert format_timestamp(1276432620) == "2010-06-13T12:37:00Z"


class TestParseTeams:
    def test_grouping(self, tmp_path):
        path = write(tmp_path, "teams.csv", "team_id,member\nt1,a\nt1,b\nt2,c\n")
        teams = parse_teams(path)
        assert [(t.team_id, set(t.members)) for t in teams] == [
            ("t1", {"a", "b"}),
            ("t2", {"c"}),
        ]

    def test_duplicate_row_warns(self, tmp_path):
        path = write(tmp_path, "teams.csv", "team_id,member\nt1,a\nt1,a\n")
        with pytest.warns(UserWarning, match="duplicate"):
            teams = parse_teams(path)
        assert teams[0].members == frozenset(["a"])

    def test_empty_file(self, tmp_path):
        path = write(tmp_path, "teams.csv", "team_id,member\n")
        with pytest.raises(ParseError):
            parse_teams(path)


class TestParseDependentVariables:
    def test_basic(self, tmp_path):
        path = write(tmp_path, "dv.csv", "team_id,variable_name,value\nt1,creativity,4.2\n")
        table = parse_dependent_variables(path)
        assert table.get("t1", "creativity") == 4.2
        assert table.variable_names() == ["creativity"]

    def test_duplicate_key(self, tmp_path):
        path = write(
            tmp_path,
            "dv.csv",
            "team_id,variable_name,value\nt1,creativity,4.2\nt1,creativity,4.2\n",
        )
        with pytest.raises(ParseError, match="duplicate"):
            parse_dependent_variables(path)

    def test_non_numeric(self, tmp_path):
        path = write(tmp_path, "dv.csv", "team_id,variable_name,value\nt1,creativity,high\n")
        with pytest.raises(ParseError, match=":2"):
            parse_dependent_variables(path)

    def test_non_finite_rejected(self, tmp_path):
        path = write(tmp_path, "dv.csv", "team_id,variable_name,value\nt1,creativity,inf\n")
        with pytest.raises(ParseError, match="non-finite"):
            parse_dependent_variables(path)
