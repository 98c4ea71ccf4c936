"""Break a copy of the credit bundle in a few ways and watch the validator react.

    python walkthroughs/validate_a_bundle.py
"""

from __future__ import annotations

import json
import shutil
import tempfile
from pathlib import Path

from explainprov.cli import resolve_bundle
from explainprov.stats import cmd_stats
from explainprov.validate import cmd_validate


def main() -> None:
    source = resolve_bundle("credit-card-mini")
    print(cmd_stats(source).table())
    print(cmd_validate(source).render())

    with tempfile.TemporaryDirectory() as tmp:
        broken = Path(tmp) / "broken"
        shutil.copytree(source, broken)

        dictionary = broken / "dictionary.json"
        data = json.loads(dictionary.read_text())
        del data["profiles"]["staff"]["scoring-system"]
        dictionary.write_text(json.dumps(data))

        (broken / "queries" / "record-sources.pq").write_text("select * from")

        report = cmd_validate(broken)
        print(report.render())
        print("codes:", ", ".join(sorted(report.codes())))


if __name__ == "__main__":
    main()
