"""Run the HTTP service in-process, post a decision and fetch its explanations.

Uses a throwaway store directory, so nothing outlives the script.

    python walkthroughs/serve_and_query.py
"""

from __future__ import annotations

import json
import tempfile
import threading
import urllib.request
from pathlib import Path

from explainprov.cli import resolve_bundle
from explainprov.service import AssistantServer, DecisionStore, ExplanationAssistant, load_bundle


def call(url: str, body: bytes | None = None) -> tuple[int, bytes]:
    req = urllib.request.Request(url, data=body, method="POST" if body is not None else "GET")
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


def main() -> None:
    bundles = [load_bundle(resolve_bundle(name)) for name in ("credit-card-mini", "school-allocation-mini")]
    with tempfile.TemporaryDirectory() as tmp:
        assistant = ExplanationAssistant(bundles, DecisionStore(Path(tmp)))
        server = AssistantServer(("127.0.0.1", 0), assistant)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        base = f"{server.url}/apps/credit-card-mini"
        try:
            sample = (bundles[0].path / "samples" / "decision-1.csv").read_bytes()
            for attempt in range(2):
                status, body = call(f"{base}/decisions/42/bindings", sample)
                print(f"POST bindings (attempt {attempt + 1}) -> {status} {body.decode()}")

            status, body = call(f"{base}/explanations")
            print(f"GET explanations -> {status}")
            for entry in json.loads(body)["explanations"]:
                for profile in entry["profiles"]:
                    url = f"{base}/decisions/42/explanations/{entry['id']}?profile={profile}"
                    status, body = call(url)
                    print(f"  {entry['id']} [{profile}] -> {status} {body.decode()}")

            status, body = call(f"{base}/decisions/missing/explanations/score-impact?profile=borrower")
            print(f"unknown decision -> {status} {body.decode()}")
        finally:
            server.shutdown()
            server.server_close()


if __name__ == "__main__":
    main()
