"""Vocabulary, normalization, and the bigram-cosine matcher."""
from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voicebot.commands import (
    Command,
    CommandTable,
    DEFAULT_FUZZY_THRESHOLD,
    DEFAULT_TABLE,
    MatchMethod,
    load_table,
    match_exact,
    match_fuzzy,
    normalize,
    similarity,
)

# Hand-computed bigram-cosine values, frozen before the matcher was written.
GO_FORWARD_SCORE = 0.8528028654224417
LIGHT_ON_OFF_SCORE = 0.7378647873726218
ORACLE_SCORES = {
    "please light on": (Command.LIGHT_ON, 0.75),
    "horn": (Command.HORN_OFF, 0.7071067811865475),
    "lite on": (Command.LIGHT_ON, 0.5892556509887896),
    "backwards": (Command.BACKWARD, 0.8432740427115678),
    "stop now": (Command.STOP, 0.7453559924999299),
    "right turn": (Command.RIGHT, 0.7385489458759964),
    "xylophone": (Command.HORN_OFF, 0.2),
}


class TestNormalize:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("forward", "forward"),
            ("Forward", "forward"),
            ("  FORWARD  ", "forward"),
            ("Horn, please!", "horn please"),
            ("light\t on\n", "light on"),
            ("light   on", "light on"),
            ("St-Op", "stop"),
            ("", ""),
            ("   ", ""),
            ("!!!", ""),
            ("42", "42"),
            ("förward", "frward"),
            ("light ✨ on", "light on"),
        ],
    )
    def test_cases(self, raw, expected):
        assert normalize(raw) == expected

    @given(st.text(max_size=64))
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(once) == once

    @given(st.text(max_size=64))
    def test_output_alphabet(self, text):
        out = normalize(text)
        assert all(c == " " or "a" <= c <= "z" or "0" <= c <= "9" for c in out)
        assert "  " not in out
        assert out == out.strip()


class TestExactMatch:
    @pytest.mark.parametrize("cmd,phrase", list(DEFAULT_TABLE))
    def test_all_phrases_hit(self, cmd, phrase):
        assert match_exact(phrase) is cmd

    @pytest.mark.parametrize("utterance", ["", "onward", "light", "horn", "stop stop"])
    def test_misses(self, utterance):
        assert match_exact(utterance) is None


class TestSimilarity:
    def test_identity_is_exactly_one(self):
        for _, phrase in DEFAULT_TABLE:
            assert similarity(phrase, phrase) == 1.0

    def test_empty_cases(self):
        assert similarity("forward", "") == 0.0
        assert similarity("", "forward") == 0.0
        assert similarity("", "") == 1.0

    def test_disjoint_bigrams(self):
        assert similarity("abc", "xyz") == 0.0

    def test_go_forward_oracle(self):
        assert similarity("go forward", "forward") == GO_FORWARD_SCORE

    def test_repeated_phrase_is_not_identical(self):
        # proportional bigram profiles must stay strictly below 1.0
        s = similarity("stop stop", "stop")
        assert s == math.nextafter(1.0, 0.0)
        assert similarity("ab ab", "ab ab ab") == math.nextafter(1.0, 0.0)

    @given(st.text(max_size=24), st.text(max_size=24))
    @settings(max_examples=300)
    def test_symmetric_and_bounded(self, a, b):
        s = similarity(a, b)
        assert s == similarity(b, a)
        assert 0.0 <= s <= 1.0

    @given(st.text(max_size=24), st.text(max_size=24))
    @settings(max_examples=300)
    def test_one_iff_equal(self, a, b):
        assert (similarity(a, b) == 1.0) == (a == b)


class TestFuzzyMatch:
    def test_exact_hit_dominates(self):
        r = match_fuzzy("forward", DEFAULT_TABLE, 0.75)
        assert (r.command, r.score, r.method) == (Command.FORWARD, 1.0, MatchMethod.EXACT)

    def test_go_forward_at_low_threshold(self):
        r = match_fuzzy("go forward", DEFAULT_TABLE, 0.60)
        assert (r.command, r.score, r.method) == (Command.FORWARD, GO_FORWARD_SCORE, MatchMethod.FUZZY)

    def test_gibberish_rejected(self):
        r = match_fuzzy("xylophone", DEFAULT_TABLE, 0.75)
        assert r.command is None
        assert r.method is MatchMethod.NO_MATCH
        assert r.score == 0.2

    @pytest.mark.parametrize("utterance", list(ORACLE_SCORES))
    def test_oracle_scores(self, utterance):
        best_cmd, score = ORACLE_SCORES[utterance]
        r = match_fuzzy(utterance, DEFAULT_TABLE, DEFAULT_FUZZY_THRESHOLD)
        assert r.score == score
        if score >= DEFAULT_FUZZY_THRESHOLD:
            assert r.command is best_cmd
            assert r.method is MatchMethod.FUZZY
        else:
            assert r.command is None
            assert r.method is MatchMethod.NO_MATCH

    def test_threshold_boundary_is_inclusive(self):
        # "please light on" scores exactly 0.75 against "light on"
        r = match_fuzzy("please light on", DEFAULT_TABLE, 0.75)
        assert r.command is Command.LIGHT_ON
        r = match_fuzzy("please light on", DEFAULT_TABLE, math.nextafter(0.75, 1.0))
        assert r.command is None

    def test_empty_utterance(self):
        r = match_fuzzy("", DEFAULT_TABLE, 0.75)
        assert (r.command, r.score, r.method) == (None, 0.0, MatchMethod.NO_MATCH)

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            match_fuzzy("forward", DEFAULT_TABLE, -0.1)
        with pytest.raises(ValueError):
            match_fuzzy("forward", DEFAULT_TABLE, 1.1)

    def test_ties_break_by_table_order(self):
        # "xy" and "yx" are equidistant from "x"; the earlier entry must win
        table = CommandTable(
            [
                (Command.FORWARD, "xy"),
                (Command.BACKWARD, "yx"),
                (Command.LEFT, "ll"),
                (Command.RIGHT, "rr"),
                (Command.STOP, "ss"),
                (Command.LIGHT_ON, "nn"),
                (Command.LIGHT_OFF, "ff"),
                (Command.HORN_ON, "hh"),
                (Command.HORN_OFF, "qq"),
            ]
        )
        assert similarity("x", "xy") == similarity("x", "yx")
        r = match_fuzzy("x", table, 0.0)
        assert r.command is Command.FORWARD

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz ", max_size=20))
    @settings(max_examples=500)
    def test_threshold_one_equals_exact(self, text):
        canonical = normalize(text)
        fuzzy = match_fuzzy(canonical, DEFAULT_TABLE, 1.0)
        exact = match_exact(canonical)
        assert fuzzy.command is exact
        if exact is not None:
            assert fuzzy.method is MatchMethod.EXACT
            assert fuzzy.score == 1.0


class TestCommandTable:
    def test_default_covers_every_command_once(self):
        assert len(DEFAULT_TABLE) == 9
        assert {cmd for cmd, _ in DEFAULT_TABLE} == set(Command)

    def test_default_order_and_phrases(self):
        assert DEFAULT_TABLE.phrases() == (
            "forward",
            "backward",
            "left",
            "right",
            "stop",
            "light on",
            "light off",
            "horn please",
            "horn stop",
        )

    def test_pairwise_similarity_below_threshold(self):
        pairs = itertools.combinations(DEFAULT_TABLE.phrases(), 2)
        worst = max(similarity(a, b) for a, b in pairs)
        assert worst == LIGHT_ON_OFF_SCORE
        assert worst < DEFAULT_FUZZY_THRESHOLD

    def test_missing_command_rejected(self):
        with pytest.raises(ValueError, match="every command"):
            CommandTable([(Command.FORWARD, "forward")])

    def test_duplicate_command_rejected(self):
        entries = [(cmd, phrase) for cmd, phrase in DEFAULT_TABLE]
        entries[1] = (Command.FORWARD, "also forward")
        with pytest.raises(ValueError, match="every command"):
            CommandTable(entries)

    def test_duplicate_phrase_rejected(self):
        entries = [(cmd, phrase) for cmd, phrase in DEFAULT_TABLE]
        entries[1] = (Command.BACKWARD, "forward")
        with pytest.raises(ValueError, match="unique"):
            CommandTable(entries)

    def test_phrases_normalized_on_build(self):
        entries = [(cmd, phrase) for cmd, phrase in DEFAULT_TABLE]
        entries[0] = (Command.FORWARD, "  ForWard!  ")
        table = CommandTable(entries)
        assert table.phrase_for(Command.FORWARD) == "forward"

    def test_empty_phrase_rejected(self):
        entries = [(cmd, phrase) for cmd, phrase in DEFAULT_TABLE]
        entries[0] = (Command.FORWARD, "!!!")
        with pytest.raises(ValueError, match="non-empty"):
            CommandTable(entries)


class TestLoadTable:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "table.txt"
        lines = ["# custom vocabulary"]
        lines += [
            "forward: advance",
            "backward: reverse",
            "left: turn left",
            "right: turn right",
            "stop: halt",
            "",
            "light_on: lamp on",
            "light_off: lamp off",
            "horn_on: beep",
            "horn_off: quiet",
        ]
        path.write_text("\n".join(lines), encoding="utf-8")
        table = load_table(path)
        assert table.phrase_for(Command.FORWARD) == "advance"
        assert table.lookup("turn left") is Command.LEFT
        assert len(table) == 9

    def test_shipped_example_loads(self):
        from tests.conftest import SCENARIO_DIR

        table = load_table(SCENARIO_DIR / "custom_phrases.txt")
        assert table.phrase_for(Command.HORN_ON) == "beep"

    def test_unknown_kind_reports_line(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("forward: go\nwarp: engage\n", encoding="utf-8")
        with pytest.raises(ValueError, match=r":2: unknown command kind"):
            load_table(path)

    def test_missing_separator_reports_line(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("forward go\n", encoding="utf-8")
        with pytest.raises(ValueError, match=r":1: expected"):
            load_table(path)

    def test_incomplete_table_rejected(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("forward: go\n", encoding="utf-8")
        with pytest.raises(ValueError, match="every command"):
            load_table(path)
