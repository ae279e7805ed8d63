#!/usr/bin/env python3
"""Regenerate shared/match_vectors.json, the cross-implementation consistency
vectors for the command matcher. Both the Python tests and the browser console
tests replay these and must reproduce every field exactly."""
from __future__ import annotations

import json
from pathlib import Path

from voicebot.commands import DEFAULT_FUZZY_THRESHOLD, DEFAULT_TABLE, match_fuzzy, normalize

UTTERANCES = [
    # canonical phrases, straight and dressed up
    "forward",
    "backward",
    "left",
    "right",
    "stop",
    "light on",
    "light off",
    "horn please",
    "horn stop",
    "Forward",
    "  FORWARD  ",
    "Horn, please!",
    "LIGHT ON",
    "light   off",
    "St-Op",
    # near misses and paraphrases
    "go forward",
    "backwards",
    "please light on",
    "lite on",
    "stop now",
    "right turn",
    "horn",
    "move forward please",
    "turn left",
    "lights off",
    "horn off",
    "hornplease",
    # far misses
    "xylophone",
    "open the pod bay doors",
    "zzzzz",
    "42",
    "",
    "   ",
    "!!!",
    # repetition edge: proportional bigram profile must not score 1.0
    "stop stop",
    "forward forward",
    # unicode and noise
    "förward",
    "light ✨ on",
    "h o r n p l e a s e",
]


def main() -> None:
    vectors = []
    for raw in UTTERANCES:
        canonical = normalize(raw)
        result = match_fuzzy(canonical, DEFAULT_TABLE, DEFAULT_FUZZY_THRESHOLD)
        vectors.append(
            {
                "raw": raw,
                "normalized": canonical,
                "command": result.command.value if result.command else None,
                "score": result.score,
                "method": result.method.value,
            }
        )
    payload = {
        "v": 1,
        "threshold": DEFAULT_FUZZY_THRESHOLD,
        "table": [[cmd.value, phrase] for cmd, phrase in DEFAULT_TABLE],
        "vectors": vectors,
    }
    out = Path(__file__).resolve().parent.parent / "shared" / "match_vectors.json"
    out.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {len(vectors)} vectors to {out}")


if __name__ == "__main__":
    main()
