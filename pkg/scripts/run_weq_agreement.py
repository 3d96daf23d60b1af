from __future__ import annotations

import time

import pandas as pd

from icfo.config.settings import get_settings
from icfo.corpus.random import random_morphisms
from icfo.data.io import write_parquet
from icfo.fibrant.agreement import criteria_agree

COUNT = 100
SEED = 0
OUT = "reports/weq_agreement"


def main() -> None:
    max_cells = get_settings().max_cells
    rows = []

    for sample in random_morphisms(COUNT, seed=SEED, cap=3, two_groupoids=True):
        t0 = time.perf_counter()
        report = criteria_agree(sample.morphism, sample.morphism.cap - 1, max_cells=max_cells)
        rows.append(
            {
                "morphism": sample.name,
                "level": sample.level,
                **report.verdicts(),
                "agree": report.agree,
                "verdict": report.verdict,
                "seconds": time.perf_counter() - t0,
            }
        )

    df = pd.DataFrame(rows)
    write_parquet(df, OUT)

    print(df.groupby(["stalkwise", "covers", "hypercover"]).size().to_string())
    undecided = int((df["verdict"] == "inconclusive").sum())
    print(f"agree: {int(df['agree'].sum())}/{len(df)}  inconclusive: {undecided}  wrote {OUT}")


if __name__ == "__main__":
    main()
