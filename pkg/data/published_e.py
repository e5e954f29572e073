"""Published values of E for N = 100, used by `table1 --check`."""

from typing import Dict, Mapping, Optional, Tuple

import pandas as pd

PUBLISHED_N = 100
PUBLISHED_M = (10, 20, 30, 40, 50)
PUBLISHED_XI = (0.0, 0.1, 0.2, 3.0)

# (m, xi) -> E as printed, four to seven significant figures
PUBLISHED_E: Dict[Tuple[int, float], float] = {
    (10, 0.0): 1440000.0,
    (10, 0.1): 22357.14,
    (10, 0.2): 4914.34,
    (10, 3.0): 0.0142,
    (20, 0.0): 1102500.0,
    (20, 0.1): 19162.98,
    (20, 0.2): 4189.47,
    (20, 3.0): 0.0109,
    (30, 0.0): 640000.0,
    (30, 0.1): 13943.33,
    (30, 0.2): 3013.98,
    (30, 3.0): 0.0063,
    (40, 0.0): 202500.0,
    (40, 0.1): 6965.37,
    (40, 0.2): 1470.5,
    (40, 3.0): 0.002,
    (50, 0.0): 0.0,
    (50, 0.1): 0.0,
    (50, 0.2): 0.0,
    (50, 3.0): 0.0,
}


def published_frame(values: Optional[Mapping[Tuple[int, float], float]] = None) -> pd.DataFrame:
    """E values in the printed layout: one row per m, alternating xi and E columns.

    Defaults to the published values; pass recomputed ones to print them the same way.
    """
    values = PUBLISHED_E if values is None else values
    records = []
    for m in PUBLISHED_M:
        record = {"m": m}
        for k, xi in enumerate(PUBLISHED_XI, start=1):
            record[f"xi{k}"] = xi
            record[f"E{k}"] = values[(m, xi)]
        records.append(record)
    return pd.DataFrame(records)
