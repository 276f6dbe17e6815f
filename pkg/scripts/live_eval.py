#!/usr/bin/env python3
"""Live interpretation-rate evaluation (not part of CI).

Runs the shipped gold corpus through a real chat-completion endpoint, with and
without target-value sharing, and reports per-category success rates. Requires
the live gateway environment variables:

  TRACEDOC_LLM_BACKEND=live
  TRACEDOC_LLM_ENDPOINT=https://.../v1/chat/completions
  TRACEDOC_LLM_MODEL=...
  TRACEDOC_LLM_API_KEY=...

Usage: python scripts/live_eval.py [--runs N] [--max-retries N]
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from importlib import resources
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tracedoc import jsonio
from tracedoc.agents import Success, SynthesisTask, synthesize
from tracedoc.docmodel import format_tag
from tracedoc.errors import GatewayError
from tracedoc.gateway import ENV_BACKEND, gateway_from_env


def corpus_tasks(share_target: bool):
    corpus = jsonio.loads(resources.files("tracedoc")
                          .joinpath("data/gold_corpus.json").read_text("utf-8"))
    for case in corpus["cases"]:
        expected = case["expected"]
        sentence = f"The reported value here is {expected} for this table."
        at = sentence.index(expected)
        tag = format_tag(expected) if share_target else "[REPLACE]"
        paragraph = sentence[:at] + tag + sentence[at + len(expected):]
        yield case["category"], SynthesisTask(
            datasets={"tableData": corpus["tables"][case["table"]]},
            imports=(), code=case["code"], paragraph=paragraph,
            paragraph_value=sentence, share_target=share_target)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=1)
    parser.add_argument("--max-retries", type=int, default=5)
    args = parser.parse_args()

    import os
    if os.environ.get(ENV_BACKEND) != "live":
        print("set TRACEDOC_LLM_BACKEND=live (plus endpoint/model/key) first",
              file=sys.stderr)
        return 2
    gateway = gateway_from_env()

    for share in (True, False):
        label = "with target sharing" if share else "without target sharing"
        wins: dict[str, list[int]] = defaultdict(list)
        for run in range(args.runs):
            for category, task in corpus_tasks(share):
                try:
                    outcome = synthesize(task, gateway, args.max_retries)
                except GatewayError as err:
                    print(f"transport failure: {err}", file=sys.stderr)
                    return 1
                wins[category].append(int(isinstance(outcome, Success)))
        total = [w for ws in wins.values() for w in ws]
        print(f"\n== {label}: {100 * sum(total) / len(total):.1f}% "
              f"over {len(total)} attempts ==")
        for category in sorted(wins):
            ws = wins[category]
            print(f"  {category:<24} {100 * sum(ws) / len(ws):5.1f}%  (n={len(ws)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
