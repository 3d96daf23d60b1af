from __future__ import annotations

from icfo.config.settings import get_settings
from icfo.corpus.runner import run_corpus


def main() -> None:
    settings = get_settings()
    run = run_corpus(settings.corpus_dir, cap=3, max_cells=settings.max_cells)

    print(f"Wrote {len(run.paths)} instances to {settings.corpus_dir}")
    print(run.summary[["instance", "check", "verdict", "expected", "seconds"]].to_string(index=False))

    for m in run.mismatches:
        print("MISMATCH:", m)


if __name__ == "__main__":
    main()
